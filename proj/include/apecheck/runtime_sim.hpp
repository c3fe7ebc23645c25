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

// Executable semantics of the single-GUI-thread model.
//
// One UI thread drains a FIFO queue of work items (async deliveries, posted
// blocks, activity starts); user events are dispatched when the queue is
// empty. Async background callbacks run on their own logical threads. A
// thread runs until it finishes or blocks on a wait probe; a UI item always
// runs to completion. Everything is cooperatively scheduled: at each
// decision point the scheduler picks a runnable thread or the UI step, so a
// run is a pure function of its inputs and the decision sequence.
//
// Each async instance captures the activity instance it was started from
// (its home). Statements raise one of four exceptions:
//
//   thread        statement           condition              exception
//   background    ui-access           always                 CalledFromWrongThread
//                                                            (IllegalStateException
//                                                            for list adapters)
//   background    ui-create           always                 RuntimeException (looper)
//   background    commit              always                 CalledFromWrongThread
//   ui callback   ui-access on home   home destroyed         BadTokenException for
//                                                            dialogs, otherwise
//                                                            IllegalStateException
//   ui callback   commit              home stopped/destroyed IllegalStateException
//
// "ui callback" is the postExecute of a task or loader. Posted blocks,
// handlers and lifecycle callbacks never crash.

#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "apecheck/app_model.hpp"
#include "apecheck/event_synth.hpp"
#include "apecheck/fault_detector.hpp"

namespace apecheck {

enum class ScheduleMode {
  kEager,       // threads run as soon as they can; probes ignored
  kBarrier,     // threads run as soon as they can; wait probes block
  kExhaustive,  // every interleaving (explore_all_schedules)
  kRandom,      // seeded random choice at every decision point
};

std::string_view to_string(ScheduleMode m);
std::optional<ScheduleMode> schedule_mode_from_name(std::string_view name);

struct Schedule {
  ScheduleMode mode = ScheduleMode::kBarrier;
  std::uint64_t seed = 0;

  bool operator==(const Schedule&) const = default;
};

enum class ExceptionKind {
  kCalledFromWrongThread,
  kIllegalState,
  kBadToken,
  kRuntimeExceptionLooper,
};

std::string_view to_string(ExceptionKind k);

enum class SimStatus { kNormal, kCrash, kError };

std::string_view to_string(SimStatus s);

struct CrashReport {
  ExceptionKind exception = ExceptionKind::kIllegalState;
  std::string thread;               // "ui" or "async:<construct>#<n>"
  std::vector<Id> method_chain;     // outermost first, ends in site.method
  int event_index = -1;             // last injected event
  Environment environment;
  StmtSite site;

  bool operator==(const CrashReport&) const = default;
};

// One access to a shared location, for race detection.
struct Access {
  int segment = 0;
  std::string thread;
  Id method;                       // empty for framework accesses
  std::optional<StmtSite> site;    // app code site, if any
  std::string location;            // "gui:<obj>@<activity>#<gen>" or "state:<activity>#<gen>"
  bool write = false;

  bool operator==(const Access&) const = default;
};

// A maximal run of one thread without interleaving: one UI item or one
// background slice. Predecessors are the causal (happens-before) edges.
struct Segment {
  int id = 0;
  std::string thread;
  std::string label;
  std::vector<int> preds;

  bool operator==(const Segment&) const = default;
};

struct AccessLog {
  std::vector<Segment> segments;
  std::vector<Access> accesses;

  bool operator==(const AccessLog&) const = default;
};

struct SimOptions {
  bool record_accesses = false;
  bool record_methods = true;
  bool record_exec_log = true;
  int max_call_depth = 64;
  int max_asyncs = 32;
  std::size_t max_steps = 200000;
};

struct SimResult {
  SimStatus status = SimStatus::kNormal;
  std::optional<CrashReport> crash;
  std::string error;
  std::vector<Id> method_log;
  std::vector<std::string> exec_log;
  AccessLog access_log;
  int events_injected = 0;
  std::int64_t ticks = 0;

  bool operator==(const SimResult&) const = default;
  // Identity of the outcome: status, exception, thread, site, event index.
  std::string outcome_key() const;
};

// Incremental interface to one app run. Copyable: copies are independent
// snapshots (used by the schedule explorer).
class Simulation {
 public:
  Simulation(const App& app, const Environment& env, const SimOptions& options = {},
             bool honor_probes = true);
  ~Simulation();
  Simulation(const Simulation& other);
  Simulation& operator=(const Simulation& other);
  Simulation(Simulation&&) noexcept;
  Simulation& operator=(Simulation&&) noexcept;

  // Decision points.
  std::vector<int> runnable_threads() const;
  bool has_queued_ui() const;
  bool has_blocked_threads() const;
  void step_thread(int thread);
  void step_ui();                 // runs the head of the queue
  void inject(const UiEvent& e);  // dispatches a user event now
  bool release_blocked();         // wakes the oldest blocked thread, if any

  bool stopped() const;  // crashed or errored
  SimStatus status() const;

  // App-level state, for the fuzzer.
  bool foreground() const;
  bool exited() const;
  std::vector<HandlerBinding> visible_bindings() const;

  SimResult result() const;
  std::int64_t ticks() const;

 private:
  struct State;
  std::unique_ptr<State> s_;
};

// Runs `seq` under a non-exhaustive schedule. Exhaustive mode throws
// ApeError; use explore_all_schedules. A widget event waits until its
// widget is visible; it is forced (and fails) only when nothing else can
// run.
SimResult run(const App& app, const EventSequence& seq, const Environment& env,
              const Schedule& sched, const SimOptions& options = {});

struct ExploreResult {
  std::vector<SimResult> outcomes;  // distinct by outcome_key, discovery order
  std::size_t runs = 0;
  bool partial = false;             // bound reached before the tree was exhausted
};

// Depth-first enumeration of every decision sequence. `visit`, when set,
// sees every complete run in order.
ExploreResult explore_all_schedules(const App& app, const EventSequence& seq,
                                    const Environment& env, std::size_t bound = 100000,
                                    const SimOptions& options = {},
                                    const std::function<void(const SimResult&)>& visit = {});

// Adds the wait/signal probe pair that forces the candidate's crash
// ordering. Statements are untouched.
App instrument(const App& app, const ApeCandidate& cand);

}  // namespace apecheck
