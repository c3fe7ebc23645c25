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

#include "apecheck/trace_gen.hpp"

#include <algorithm>

namespace apecheck {
namespace {

bool find_conditions(const Block& block, int index, std::vector<EnvCondition>& stack) {
  for (const Stmt& s : block) {
    if (s.index == index) return true;
    bool found = false;
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          auto within = [&](const Block& b, const EnvCondition* cond) {
            if (found) return;
            if (cond) stack.push_back(*cond);
            found = find_conditions(b, index, stack);
            if (cond && !found) stack.pop_back();
          };
          if constexpr (std::is_same_v<T, PostToUiStmt>) {
            within(n.block, nullptr);
          } else if constexpr (std::is_same_v<T, UiSafeCheckIfStmt>) {
            within(n.then_block, nullptr);
            within(n.else_block, nullptr);
          } else if constexpr (std::is_same_v<T, EnvIfStmt>) {
            EnvCondition flipped = n.cond.flipped();
            within(n.then_block, &n.cond);
            within(n.else_block, &flipped);
          } else if constexpr (std::is_same_v<T, TryCatchStmt>) {
            EnvCondition failing = n.exception.flipped();
            within(n.body, &n.exception);
            within(n.handler, &failing);
          }
        },
        s.node);
    if (found) return true;
  }
  return false;
}

}  // namespace

std::string_view to_string(TraceState s) {
  switch (s) {
    case TraceState::kPending: return "pending";
    case TraceState::kTerminated: return "terminated";
    case TraceState::kFailed: return "failed";
  }
  return "?";
}

bool is_entry_callback(const App& app, std::string_view method) {
  const MethodDecl* m = app.find_method(method);
  if (!m || m->owner != app.entry_activity) return false;
  return m->role == MethodRole::kLifecycleCallback || m->role == MethodRole::kEventHandler;
}

std::vector<EnvCondition> enclosing_conditions(const App& app, const StmtSite& site) {
  std::vector<EnvCondition> stack;
  const MethodDecl* m = app.find_method(site.method);
  if (!m) return stack;
  if (!find_conditions(m->body, site.index, stack)) stack.clear();
  return stack;
}

std::vector<CallEdge> get_acyclic_callers(const Trace& t, const CallGraph& cg) {
  std::vector<CallEdge> out;
  for (std::size_t i : cg.incoming(t.ptr_method)) {
    const CallEdge& e = cg.edges[i];
    if (!t.visited.count(e.caller)) out.push_back(e);
  }
  return out;
}

void update_trace(Trace& t, const App& app) {
  if (is_entry_callback(app, t.ptr_method)) t.state = TraceState::kTerminated;
  t.chain.push_back(t.ptr_method);
  t.visited.insert(t.ptr_method);
  for (auto& c : enclosing_conditions(app, t.ptr_stmt)) t.conditions.push_back(std::move(c));
}

std::vector<Trace> generate_traces(const App& app, const CallGraph& cg, const ApeCandidate& cand,
                                   const TraceLimits& limits, TraceStats* stats) {
  TraceStats local;
  Trace init;
  init.ptr_method = cand.method_access_ui;
  init.ptr_stmt = cand.stmt_access_ui;
  update_trace(init, app);
  std::vector<Trace> traces{std::move(init)};
  const std::size_t cap = static_cast<std::size_t>(std::max(limits.max_trace_cnt, 1));
  const std::size_t max_len = static_cast<std::size_t>(std::max(limits.max_trace_len, 1));

  bool pending = true;
  while (pending) {
    pending = false;
    std::vector<Trace> forks;
    const std::size_t n = traces.size();
    for (std::size_t i = 0; i < n; ++i) {
      Trace& t = traces[i];
      if (t.state != TraceState::kPending) continue;
      if (t.chain.size() >= max_len) {
        t.state = TraceState::kFailed;
        continue;
      }
      std::vector<CallEdge> callers = get_acyclic_callers(t, cg);
      if (callers.empty()) {
        t.state = TraceState::kFailed;
        continue;
      }
      for (std::size_t j = 1; j < callers.size(); ++j) {
        if (traces.size() + forks.size() < cap) {
          Trace fork = t;
          fork.ptr_method = callers[j].caller;
          fork.ptr_stmt = callers[j].site;
          update_trace(fork, app);
          forks.push_back(std::move(fork));
          ++local.forks;
        } else {
          ++local.dropped_forks;
        }
      }
      t.ptr_method = callers[0].caller;
      t.ptr_stmt = callers[0].site;
      update_trace(t, app);
    }
    for (auto& f : forks) traces.push_back(std::move(f));
    for (const auto& t : traces)
      if (t.state == TraceState::kPending) pending = true;
  }
  if (stats) *stats = local;
  return traces;
}

std::vector<std::string> handler_projection(const App& app, const Trace& t) {
  std::vector<std::string> out;
  for (auto it = t.chain.rbegin(); it != t.chain.rend(); ++it) {
    const MethodDecl* m = app.find_method(*it);
    if (m && m->role == MethodRole::kEventHandler) out.push_back(m->name);
  }
  return out;
}

}  // namespace apecheck
