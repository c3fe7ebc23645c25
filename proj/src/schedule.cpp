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

// Schedulers on top of Simulation, and probe instrumentation.

#include <random>
#include <set>

#include "apecheck/runtime_sim.hpp"

namespace apecheck {
namespace {

// A scheduling choice at one decision point.
struct Choice {
  enum class Kind { kThread, kUi, kEvent, kRelease } kind;
  int thread = -1;
};

// Whether a widget event can be delivered now. Like a test driver, the
// scheduler holds an event until its widget is on screen.
bool ready(const Simulation& sim, const UiEvent& e) {
  if (e.widget.empty()) return true;
  for (const auto& b : sim.visible_bindings())
    if (b.widget == e.widget) return true;
  return false;
}

// Every choice available now. A user event is only offered once the UI
// queue is drained and its widget is visible; a held event is forced, and
// fails, only when nothing else can move. Release comes before that.
std::vector<Choice> choices(const Simulation& sim, std::size_t next, const EventSequence& seq) {
  std::vector<Choice> out;
  if (sim.stopped()) return out;
  for (int t : sim.runnable_threads()) out.push_back({Choice::Kind::kThread, t});
  bool held = false;
  if (sim.has_queued_ui()) {
    out.push_back({Choice::Kind::kUi, -1});
  } else if (next < seq.events.size()) {
    if (ready(sim, seq.events[next])) out.push_back({Choice::Kind::kEvent, -1});
    else held = true;
  }
  if (out.empty() && sim.has_blocked_threads()) out.push_back({Choice::Kind::kRelease, -1});
  if (out.empty() && held) out.push_back({Choice::Kind::kEvent, -1});
  return out;
}

void apply(Simulation& sim, const Choice& c, const EventSequence& seq, std::size_t& next) {
  switch (c.kind) {
    case Choice::Kind::kThread: sim.step_thread(c.thread); break;
    case Choice::Kind::kUi: sim.step_ui(); break;
    case Choice::Kind::kEvent: sim.inject(seq.events[next++]); break;
    case Choice::Kind::kRelease: sim.release_blocked(); break;
  }
}

SimResult step_limited(const Simulation& sim) {
  SimResult r = sim.result();
  r.status = SimStatus::kError;
  r.error = "step limit exceeded";
  return r;
}

}  // namespace

std::string_view to_string(ScheduleMode m) {
  switch (m) {
    case ScheduleMode::kEager: return "eager";
    case ScheduleMode::kBarrier: return "barrier";
    case ScheduleMode::kExhaustive: return "exhaustive";
    case ScheduleMode::kRandom: return "random";
  }
  return "?";
}

std::optional<ScheduleMode> schedule_mode_from_name(std::string_view name) {
  for (auto m : {ScheduleMode::kEager, ScheduleMode::kBarrier, ScheduleMode::kExhaustive,
                 ScheduleMode::kRandom})
    if (to_string(m) == name) return m;
  return std::nullopt;
}

std::string_view to_string(ExceptionKind k) {
  switch (k) {
    case ExceptionKind::kCalledFromWrongThread: return "CalledFromWrongThread";
    case ExceptionKind::kIllegalState: return "IllegalStateException";
    case ExceptionKind::kBadToken: return "BadTokenException";
    case ExceptionKind::kRuntimeExceptionLooper: return "RuntimeExceptionLooper";
  }
  return "?";
}

std::string_view to_string(SimStatus s) {
  switch (s) {
    case SimStatus::kNormal: return "normal-completion";
    case SimStatus::kCrash: return "crash";
    case SimStatus::kError: return "error";
  }
  return "?";
}

std::string SimResult::outcome_key() const {
  std::string key(to_string(status));
  if (crash) {
    key += "|" + std::string(to_string(crash->exception)) + "|" + crash->thread + "|" +
           crash->site.str() + "|" + std::to_string(crash->event_index);
  } else if (status == SimStatus::kError) {
    key += "|" + error;
  }
  return key;
}

SimResult run(const App& app, const EventSequence& seq, const Environment& env,
              const Schedule& sched, const SimOptions& options) {
  if (sched.mode == ScheduleMode::kExhaustive)
    throw ApeError("exhaustive schedules are enumerated by explore_all_schedules");
  Simulation sim(app, env, options, sched.mode != ScheduleMode::kEager);
  std::mt19937_64 rng(sched.seed);
  std::size_t next = 0;
  for (std::size_t steps = 0;; ++steps) {
    std::vector<Choice> cs = choices(sim, next, seq);
    if (cs.empty()) break;
    if (steps >= options.max_steps) return step_limited(sim);
    std::size_t pick = 0;
    if (sched.mode == ScheduleMode::kRandom && cs.size() > 1)
      pick = std::uniform_int_distribution<std::size_t>(0, cs.size() - 1)(rng);
    apply(sim, cs[pick], seq, next);
  }
  return sim.result();
}

ExploreResult explore_all_schedules(const App& app, const EventSequence& seq,
                                    const Environment& env, std::size_t bound,
                                    const SimOptions& options,
                                    const std::function<void(const SimResult&)>& visit) {
  ExploreResult out;
  std::set<std::string> seen;
  struct Node {
    Simulation sim;
    std::size_t next;
    std::size_t depth;
  };
  std::vector<Node> stack;
  stack.push_back({Simulation(app, env, options, true), 0, 0});
  while (!stack.empty()) {
    Node node = std::move(stack.back());
    stack.pop_back();
    std::vector<Choice> cs = choices(node.sim, node.next, seq);
    if (cs.empty() || node.depth >= options.max_steps) {
      if (out.runs >= bound) {
        out.partial = true;
        break;
      }
      SimResult r = cs.empty() ? node.sim.result() : step_limited(node.sim);
      ++out.runs;
      if (visit) visit(r);
      if (seen.insert(r.outcome_key()).second) out.outcomes.push_back(std::move(r));
      continue;
    }
    // Push in reverse so the first choice is explored first.
    for (std::size_t i = cs.size(); i-- > 1;) {
      Node child{node.sim, node.next, node.depth + 1};
      apply(child.sim, cs[i], seq, child.next);
      stack.push_back(std::move(child));
    }
    apply(node.sim, cs[0], seq, node.next);
    ++node.depth;
    stack.push_back(std::move(node));
  }
  return out;
}

App instrument(const App& app, const ApeCandidate& cand) {
  App out = app;
  const std::string sem = "ape0";
  Id start_host;
  if (const MethodDecl* m = app.find_method(cand.method_start_thread))
    start_host = app.host_activity(m->owner);
  if (start_host.empty()) start_host = app.entry_activity;

  Probe wait;
  wait.kind = ProbeKind::kWait;
  wait.semaphore = sem;
  Probe signal;
  signal.kind = ProbeKind::kSignal;
  signal.semaphore = sem;

  if (cand.pattern == Pattern::kP3) {
    const AsyncConstructDecl* a = app.find_async(cand.async_id);
    const MethodDecl* bg = a ? app.async_callback(*a, AsyncSlot::kBackground) : nullptr;
    if (!bg) throw ApeError("instrument: async " + cand.async_id + " has no background callback");
    wait.site = {bg->id, bg->stmt_count};
    const Stmt* s = app.stmt_at(cand.stmt_access_ui);
    if (s && std::holds_alternative<FragmentTransactionStmt>(s->node)) {
      signal.component = start_host;
      signal.callback = "onStop";
    } else {
      Id owner = start_host;
      if (s) {
        if (const auto* access = std::get_if<UiAccessStmt>(&s->node)) {
          if (const GuiObjectDecl* g = app.find_gui_object(access->target)) {
            Id host = app.host_activity(g->owner);
            if (!host.empty()) owner = host;
          }
        }
      }
      signal.component = owner;
      signal.callback = "onDestroy";
    }
  } else {
    wait.site = cand.stmt_access_ui;
    signal.component = start_host;
    signal.callback = "onResume";
  }
  out.probes.push_back(wait);
  out.probes.push_back(signal);
  out.reindex();
  return out;
}

}  // namespace apecheck
