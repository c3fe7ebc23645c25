// Copyright 2026 The apecheck Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "apecheck/fault_detector.hpp"

#include <deque>
#include <map>
#include <set>
#include <tuple>

namespace apecheck {
namespace {

enum class Ctx { kBackground, kUiCallback };

struct State {
  Id method;
  Ctx ctx;
  bool guarded;
  auto operator<=>(const State&) const = default;
};

struct Hit {
  StmtSite site;
  bool is_create;
};

// Walks one method body under a context. Calls come back as successor
// states, unguarded UI operations as hits.
class BodyScan {
 public:
  BodyScan(const App& app, const MethodDecl& m, Ctx ctx) : app_(app), m_(m), ctx_(ctx) {}

  void run(bool guarded) { block(m_.body, guarded); }

  std::vector<std::pair<Id, bool>> calls;
  std::vector<Hit> hits;

 private:
  void block(const Block& b, bool guarded) {
    for (const Stmt& s : b) stmt(s, guarded);
  }

  void stmt(const Stmt& s, bool guarded) {
    const ApiConfig& cfg = app_.api_config;
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, CallStmt>) {
            calls.emplace_back(n.target, guarded);
          } else if constexpr (std::is_same_v<T, UiAccessStmt>) {
            if (!guarded && cfg.is_ui_access(n.api)) hits.push_back({{m_.id, s.index}, false});
          } else if constexpr (std::is_same_v<T, UiCreateStmt>) {
            if (!guarded && ctx_ == Ctx::kBackground && cfg.is_ui_create(n.api))
              hits.push_back({{m_.id, s.index}, true});
          } else if constexpr (std::is_same_v<T, FragmentTransactionStmt>) {
            if (!guarded) hits.push_back({{m_.id, s.index}, false});
          } else if constexpr (std::is_same_v<T, PostToUiStmt>) {
            block(n.block, true);
          } else if constexpr (std::is_same_v<T, UiSafeCheckIfStmt>) {
            bool ui = ctx_ == Ctx::kUiCallback;
            bool then_safe = safe_branch_is_then(n);
            block(n.then_block, guarded || (ui && then_safe));
            block(n.else_block, guarded || (ui && !then_safe));
          } else if constexpr (std::is_same_v<T, EnvIfStmt>) {
            block(n.then_block, guarded);
            block(n.else_block, guarded);
          } else if constexpr (std::is_same_v<T, TryCatchStmt>) {
            block(n.body, guarded);
            block(n.handler, guarded);
          }
        },
        s.node);
  }

  const App& app_;
  const MethodDecl& m_;
  Ctx ctx_;
};

// Whether `index` sits in a region of `body` that guards it intra-procedurally.
bool intra_guarded(const Block& body, int index, Ctx ctx, bool guarded, bool* found) {
  for (const Stmt& s : body) {
    if (s.index == index) {
      *found = true;
      return guarded;
    }
    bool result = false;
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, PostToUiStmt>) {
            result = intra_guarded(n.block, index, ctx, true, found);
          } else if constexpr (std::is_same_v<T, UiSafeCheckIfStmt>) {
            bool ui = ctx == Ctx::kUiCallback;
            bool then_safe = safe_branch_is_then(n);
            result = intra_guarded(n.then_block, index, ctx, guarded || (ui && then_safe), found);
            if (!*found)
              result = intra_guarded(n.else_block, index, ctx, guarded || (ui && !then_safe), found);
          } else if constexpr (std::is_same_v<T, EnvIfStmt>) {
            result = intra_guarded(n.then_block, index, ctx, guarded, found);
            if (!*found) result = intra_guarded(n.else_block, index, ctx, guarded, found);
          } else if constexpr (std::is_same_v<T, TryCatchStmt>) {
            result = intra_guarded(n.body, index, ctx, guarded, found);
            if (!*found) result = intra_guarded(n.handler, index, ctx, guarded, found);
          }
        },
        s.node);
    if (*found) return result;
  }
  return false;
}

struct AsyncRoot {
  const AsyncConstructDecl* async;
  Id start_method;
  StmtSite start_site;
};

// Async constructs with a start site reachable from the entry activity, in
// declaration order, each with its first reachable start site.
std::vector<AsyncRoot> reachable_async_starts(const App& app, const CallGraph& cg) {
  std::set<Id> reachable = reachable_from(cg, entry_callbacks(app));
  std::map<Id, StmtSite> first;
  for (const auto& m : app.methods) {
    if (!reachable.count(m.id)) continue;
    for_each_stmt(m.body, [&](const Stmt& s) {
      if (const auto* start = std::get_if<StartAsyncStmt>(&s.node))
        first.emplace(start->async, StmtSite{m.id, s.index});
    });
  }
  std::vector<AsyncRoot> out;
  for (const auto& a : app.asyncs) {
    auto it = first.find(a.id);
    if (it != first.end()) out.push_back({&a, it->second.method, it->second});
  }
  return out;
}

struct Exploration {
  struct Found {
    Hit hit;
    AsyncSlot slot;
    std::vector<Id> witness;
  };
  std::vector<Found> hits;        // discovery order
  std::set<State> states;         // every state visited, all asyncs
};

Exploration explore_async(const App& app, const AsyncConstructDecl& a) {
  Exploration ex;
  std::map<State, std::pair<State, AsyncSlot>> parent;
  std::deque<State> work;
  std::set<State> seen;
  auto root = [&](AsyncSlot slot, Ctx ctx) {
    if (const MethodDecl* m = app.async_callback(a, slot)) {
      State s{m->id, ctx, false};
      if (seen.insert(s).second) {
        work.push_back(s);
        parent.emplace(s, std::make_pair(s, slot));
      }
    }
  };
  root(AsyncSlot::kBackground, Ctx::kBackground);
  if (a.kind == AsyncKind::kTask || a.kind == AsyncKind::kLoader)
    root(AsyncSlot::kPostExecute, Ctx::kUiCallback);

  while (!work.empty()) {
    State s = work.front();
    work.pop_front();
    const MethodDecl* m = app.find_method(s.method);
    if (!m) continue;
    BodyScan scan(app, *m, s.ctx);
    scan.run(s.guarded);
    AsyncSlot slot = parent.at(s).second;
    for (const Hit& h : scan.hits) {
      std::vector<Id> witness;
      for (State cur = s;; cur = parent.at(cur).first) {
        witness.insert(witness.begin(), cur.method);
        if (parent.at(cur).first == cur) break;
      }
      ex.hits.push_back({h, slot, std::move(witness)});
    }
    for (const auto& [target, guarded] : scan.calls) {
      State next{target, s.ctx, guarded};
      if (seen.insert(next).second) {
        parent.emplace(next, std::make_pair(s, slot));
        work.push_back(next);
      }
    }
  }
  ex.states = std::move(seen);
  return ex;
}

}  // namespace

std::string_view to_string(Pattern p) {
  switch (p) {
    case Pattern::kP1: return "P1";
    case Pattern::kP2: return "P2";
    case Pattern::kP3: return "P3";
  }
  return "?";
}

Pattern classify_pattern(const App& app, const RawHit& hit) {
  const Stmt* s = app.stmt_at(hit.site);
  if (!s) throw ApeError("classify_pattern: no statement at " + hit.site.str());
  if (std::holds_alternative<UiCreateStmt>(s->node)) return Pattern::kP2;
  switch (hit.root_slot) {
    case AsyncSlot::kPostExecute: return Pattern::kP3;
    case AsyncSlot::kBackground: return Pattern::kP1;
    case AsyncSlot::kPreExecute: break;
  }
  throw ApeError("classify_pattern: preExecute callbacks run on the ui thread and are not scanned");
}

std::vector<ApeCandidate> detect_apes(const App& app, const CallGraph& cg) {
  std::vector<ApeCandidate> out;
  std::set<StmtSite> reported;
  for (const AsyncRoot& root : reachable_async_starts(app, cg)) {
    Exploration ex = explore_async(app, *root.async);
    for (const auto& f : ex.hits) {
      if (!reported.insert(f.hit.site).second) continue;
      ApeCandidate c;
      c.method_start_thread = root.start_method;
      c.stmt_start_thread = root.start_site;
      c.method_access_ui = f.hit.site.method;
      c.stmt_access_ui = f.hit.site;
      c.async_id = root.async->id;
      c.pattern = classify_pattern(app, {root.async->id, f.slot, f.hit.site});
      c.witness = f.witness;
      out.push_back(std::move(c));
    }
  }
  return out;
}

bool is_guarded(const App& app, const StmtSite& site, const CallGraph& cg) {
  const Stmt* s = app.stmt_at(site);
  if (!s || !(std::holds_alternative<UiAccessStmt>(s->node) ||
              std::holds_alternative<UiCreateStmt>(s->node) ||
              std::holds_alternative<FragmentTransactionStmt>(s->node))) {
    throw ApeError("is_guarded: " + site.str() + " is not a ui operation");
  }
  const MethodDecl* m = app.find_method(site.method);
  auto intra = [&](Ctx ctx, bool guarded) {
    bool found = false;
    return intra_guarded(m->body, site.index, ctx, guarded, &found);
  };
  bool any = false;
  bool all = true;
  for (const AsyncRoot& root : reachable_async_starts(app, cg)) {
    for (const State& st : explore_async(app, *root.async).states) {
      if (st.method != site.method) continue;
      any = true;
      if (!intra(st.ctx, st.guarded)) all = false;
    }
  }
  if (any) return all;
  return intra(Ctx::kUiCallback, false);
}

}  // namespace apecheck
