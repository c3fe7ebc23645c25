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

#include "apecheck/callgraph.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <tuple>

namespace apecheck {
namespace {

// Where control enters a component: onCreate when declared, otherwise every
// lifecycle callback and handler.
std::vector<Id> component_entry_points(const App& app, const ComponentDecl& c) {
  if (const MethodDecl* on_create = app.lifecycle_callback(c, "onCreate")) return {on_create->id};
  std::vector<Id> out;
  for (const auto& mid : c.methods) {
    const MethodDecl* m = app.find_method(mid);
    if (m && (m->role == MethodRole::kLifecycleCallback || m->role == MethodRole::kEventHandler))
      out.push_back(mid);
  }
  return out;
}

const std::vector<std::size_t>& empty_list() {
  static const std::vector<std::size_t> empty;
  return empty;
}

}  // namespace

std::string_view to_string(EdgeKind kind) {
  switch (kind) {
    case EdgeKind::kExplicit: return "explicit";
    case EdgeKind::kImplicit: return "implicit";
    case EdgeKind::kIcc: return "icc";
  }
  return "?";
}

std::string CallEdge::str() const {
  return caller + " -> " + callee + " [" + std::string(to_string(kind)) + "] @" + site.str();
}

bool CallGraph::has_node(std::string_view id) const { return in_.find(id) != in_.end(); }

const std::vector<std::size_t>& CallGraph::incoming(std::string_view id) const {
  auto it = in_.find(id);
  return it == in_.end() ? empty_list() : it->second;
}

const std::vector<std::size_t>& CallGraph::outgoing(std::string_view id) const {
  auto it = out_.find(id);
  return it == out_.end() ? empty_list() : it->second;
}

CallGraph build_call_graph(const App& app) {
  CallGraph cg;
  std::vector<CallEdge> edges;
  auto add = [&](const Id& caller, const Id& callee, EdgeKind kind, int index) {
    if (!app.find_method(callee)) return;
    edges.push_back({caller, callee, kind, {caller, index}});
  };

  for (const auto& m : app.methods) {
    cg.nodes.push_back(m.id);
    for_each_stmt(m.body, [&](const Stmt& s) {
      if (const auto* call = std::get_if<CallStmt>(&s.node)) {
        add(m.id, call->target, EdgeKind::kExplicit, s.index);
      } else if (const auto* start = std::get_if<StartAsyncStmt>(&s.node)) {
        const AsyncConstructDecl* a = app.find_async(start->async);
        if (!a) return;
        const MethodDecl* first = app.async_callback(*a, AsyncSlot::kPreExecute);
        if (!first) first = app.async_callback(*a, AsyncSlot::kBackground);
        if (first) add(m.id, first->id, EdgeKind::kExplicit, s.index);
      } else if (const auto* sc = std::get_if<StartComponentStmt>(&s.node)) {
        const ComponentDecl* target = app.find_component(sc->target);
        if (!target) return;
        for (const auto& entry : component_entry_points(app, *target))
          add(m.id, entry, EdgeKind::kIcc, s.index);
      }
    });
  }

  for (const auto& a : app.asyncs) {
    const MethodDecl* pre = app.async_callback(a, AsyncSlot::kPreExecute);
    const MethodDecl* bg = app.async_callback(a, AsyncSlot::kBackground);
    const MethodDecl* post = app.async_callback(a, AsyncSlot::kPostExecute);
    if (pre && bg) add(pre->id, bg->id, EdgeKind::kImplicit, pre->stmt_count);
    if (bg && post && a.kind != AsyncKind::kThread)
      add(bg->id, post->id, EdgeKind::kImplicit, bg->stmt_count);
  }

  for (const auto& c : app.components) {
    if (c.kind != ComponentKind::kActivity && c.kind != ComponentKind::kFragment) continue;
    if (const MethodDecl* on_create = app.lifecycle_callback(c, "onCreate")) {
      for (const auto& mid : c.methods) {
        const MethodDecl* m = app.find_method(mid);
        if (!m || m == on_create) continue;
        if (m->role == MethodRole::kLifecycleCallback || m->role == MethodRole::kEventHandler)
          add(on_create->id, mid, EdgeKind::kImplicit, on_create->stmt_count);
      }
    }
    if (c.kind == ComponentKind::kFragment) {
      const ComponentDecl* host = app.find_component(c.host);
      if (!host || host->kind != ComponentKind::kActivity) continue;
      auto fragment_entries = component_entry_points(app, c);
      for (const auto& h : component_entry_points(app, *host)) {
        const MethodDecl* hm = app.find_method(h);
        for (const auto& f : fragment_entries) add(h, f, EdgeKind::kImplicit, hm->stmt_count);
      }
    }
  }

  auto key = [&](const CallEdge& e) {
    return std::make_tuple(app.method_order(e.caller), e.site.index, app.method_order(e.callee),
                           static_cast<int>(e.kind));
  };
  std::stable_sort(edges.begin(), edges.end(),
                   [&](const CallEdge& x, const CallEdge& y) { return key(x) < key(y); });
  for (const auto& e : edges) {
    bool dup = !cg.edges.empty() && cg.edges.back().caller == e.caller &&
               cg.edges.back().callee == e.callee && cg.edges.back().site == e.site;
    if (!dup) cg.edges.push_back(e);
  }
  for (const auto& n : cg.nodes) {
    cg.in_[n];
    cg.out_[n];
  }
  for (std::size_t i = 0; i < cg.edges.size(); ++i) {
    cg.in_[cg.edges[i].callee].push_back(i);
    cg.out_[cg.edges[i].caller].push_back(i);
  }
  return cg;
}

std::vector<CallEdge> callers_of(const CallGraph& cg, std::string_view method) {
  if (!cg.has_node(method)) throw ApeError("callers_of: unknown method " + std::string(method));
  std::vector<CallEdge> out;
  for (std::size_t i : cg.incoming(method)) out.push_back(cg.edges[i]);
  return out;
}

std::vector<CallEdge> callees_of(const CallGraph& cg, std::string_view method) {
  if (!cg.has_node(method)) throw ApeError("callees_of: unknown method " + std::string(method));
  std::vector<CallEdge> out;
  for (std::size_t i : cg.outgoing(method)) out.push_back(cg.edges[i]);
  return out;
}

std::set<Id> reachable_from(const CallGraph& cg, const std::vector<Id>& roots) {
  std::set<Id> seen;
  std::deque<Id> work;
  for (const auto& r : roots)
    if (cg.has_node(r) && seen.insert(r).second) work.push_back(r);
  while (!work.empty()) {
    Id m = std::move(work.front());
    work.pop_front();
    for (std::size_t i : cg.outgoing(m)) {
      const Id& next = cg.edges[i].callee;
      if (seen.insert(next).second) work.push_back(next);
    }
  }
  return seen;
}

std::vector<Id> entry_callbacks(const App& app) {
  std::vector<Id> out;
  const ComponentDecl* entry = app.find_component(app.entry_activity);
  if (!entry) return out;
  for (const auto& mid : entry->methods) {
    const MethodDecl* m = app.find_method(mid);
    if (m && (m->role == MethodRole::kLifecycleCallback || m->role == MethodRole::kEventHandler))
      out.push_back(mid);
  }
  return out;
}

std::string to_adjacency_text(const CallGraph& cg) {
  std::ostringstream os;
  for (const auto& e : cg.edges) os << e.str() << "\n";
  return os.str();
}

}  // namespace apecheck
