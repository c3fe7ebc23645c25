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

// Backward generation of method-call traces from a candidate's faulty
// statement to a callback of the entry activity.
//
// Each pass advances every pending trace by one caller. The first acyclic
// caller continues the trace; the others fork copies of it, as long as the
// number of traces plus the forks made in this pass stays below
// max_trace_cnt. A trace with no acyclic caller fails; a trace that reaches
// max_trace_len methods without terminating fails too.

#pragma once

#include <set>
#include <string>
#include <vector>

#include "apecheck/app_model.hpp"
#include "apecheck/callgraph.hpp"
#include "apecheck/fault_detector.hpp"

namespace apecheck {

enum class TraceState { kPending, kTerminated, kFailed };

std::string_view to_string(TraceState s);

struct Trace {
  TraceState state = TraceState::kPending;
  Id ptr_method;
  StmtSite ptr_stmt;
  std::vector<Id> chain;  // faulty method first, entry side last
  std::vector<EnvCondition> conditions;
  std::set<Id> visited;

  bool operator==(const Trace&) const = default;
};

struct TraceLimits {
  int max_trace_cnt = 10;
  int max_trace_len = 20;
};

struct TraceStats {
  int forks = 0;          // forks actually created
  int dropped_forks = 0;  // forks suppressed by the trace cap
};

std::vector<Trace> generate_traces(const App& app, const CallGraph& cg, const ApeCandidate& cand,
                                   const TraceLimits& limits = {}, TraceStats* stats = nullptr);

// callers_of(ptr_method) minus callers already on the trace.
std::vector<CallEdge> get_acyclic_callers(const Trace& t, const CallGraph& cg);

// Checks termination, appends ptr_method to the chain and records the
// conditions ptr_stmt is control-dependent on inside ptr_method.
void update_trace(Trace& t, const App& app);

// True iff the method is a lifecycle callback or handler of the entry activity.
bool is_entry_callback(const App& app, std::string_view method);

// Environment conditions enclosing the statement at `site` (outermost
// first). Else-branches and catch handlers contribute the flipped condition.
std::vector<EnvCondition> enclosing_conditions(const App& app, const StmtSite& site);

// Short names of the event handlers on the chain, entry side first.
std::vector<std::string> handler_projection(const App& app, const Trace& t);

}  // namespace apecheck
