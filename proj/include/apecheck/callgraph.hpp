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

// Static call graph over an App. Three edge kinds:
//   explicit  `call` statements, and `start` to the construct's first callback
//   implicit  framework-induced: async callback chaining, lifecycle chaining
//             from onCreate, handler dispatch from onCreate, fragment attach
//   icc       `startactivity` to the target activity's entry callback
// Implicit edges are attributed to the caller's exit site.

#pragma once

#include <set>
#include <string>
#include <vector>

#include "apecheck/app_model.hpp"

namespace apecheck {

enum class EdgeKind { kExplicit, kImplicit, kIcc };

std::string_view to_string(EdgeKind kind);

struct CallEdge {
  Id caller;
  Id callee;
  EdgeKind kind = EdgeKind::kExplicit;
  StmtSite site;

  bool operator==(const CallEdge&) const = default;
  std::string str() const;  // "caller -> callee [kind] @site"
};

class CallGraph {
 public:
  std::vector<Id> nodes;        // method declaration order
  std::vector<CallEdge> edges;  // caller order, then site index, then callee order

  bool has_node(std::string_view id) const;
  // Edge indices by callee / by caller, in edge order.
  const std::vector<std::size_t>& incoming(std::string_view id) const;
  const std::vector<std::size_t>& outgoing(std::string_view id) const;

  bool operator==(const CallGraph& o) const { return nodes == o.nodes && edges == o.edges; }

 private:
  friend CallGraph build_call_graph(const App& app);
  std::map<Id, std::vector<std::size_t>, std::less<>> in_;
  std::map<Id, std::vector<std::size_t>, std::less<>> out_;
};

CallGraph build_call_graph(const App& app);

// All edges into `method`. Throws ApeError for an unknown method.
std::vector<CallEdge> callers_of(const CallGraph& cg, std::string_view method);
std::vector<CallEdge> callees_of(const CallGraph& cg, std::string_view method);

// Methods reachable from `roots` (roots included).
std::set<Id> reachable_from(const CallGraph& cg, const std::vector<Id>& roots);

// Lifecycle callbacks and handlers of the entry activity, declaration order.
std::vector<Id> entry_callbacks(const App& app);

// One line per edge: "caller -> callee [kind] @method:index".
std::string to_adjacency_text(const CallGraph& cg);

}  // namespace apecheck
