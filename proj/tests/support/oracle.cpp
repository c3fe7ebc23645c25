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

#include "oracle.hpp"

#include <functional>
#include <map>
#include <random>

namespace apecheck::testing {
namespace {

struct Node {
  Simulation sim;
  int events = 0;
};

std::vector<UiEvent> user_events(const Simulation& sim) {
  if (!sim.foreground()) return {UiEvent::launch()};
  std::vector<UiEvent> out;
  for (const auto& b : sim.visible_bindings()) {
    switch (b.event) {
      case BindingEvent::kClick: out.push_back(UiEvent::click(b.widget)); break;
      case BindingEvent::kItemClick: out.push_back(UiEvent::list_item_click(b.widget, 0)); break;
      case BindingEvent::kInput: out.push_back(UiEvent::input(b.widget, "text")); break;
    }
  }
  for (EventKind k : {EventKind::kRotate, EventKind::kHome, EventKind::kBack})
    out.push_back(UiEvent::of(k));
  return out;
}

void search(const App& app, const Environment& env, const OracleOptions& options,
            OracleResult& result) {
  SimOptions sim_options;
  sim_options.record_methods = false;
  sim_options.record_exec_log = false;
  std::vector<Node> stack;
  stack.push_back({Simulation(app, env, sim_options, false), 0});
  while (!stack.empty()) {
    Node node = std::move(stack.back());
    stack.pop_back();
    std::vector<Node> children;
    if (!node.sim.stopped()) {
      for (int t : node.sim.runnable_threads()) {
        children.push_back(node);
        children.back().sim.step_thread(t);
      }
      if (node.sim.has_queued_ui()) {
        children.push_back(node);
        children.back().sim.step_ui();
      } else if (node.events < options.max_events) {
        for (const UiEvent& e : user_events(node.sim)) {
          children.push_back(node);
          children.back().sim.inject(e);
          ++children.back().events;
        }
      }
    }
    if (children.empty()) {
      if (result.leaves >= options.max_leaves) {
        result.partial = true;
        return;
      }
      ++result.leaves;
      SimResult r = node.sim.result();
      if (r.status != SimStatus::kNormal) ++result.abnormal;
      if (r.crash) result.crash_sites.insert(r.crash->site);
      continue;
    }
    for (auto& c : children) stack.push_back(std::move(c));
  }
}

}  // namespace

std::vector<Environment> relevant_environments(const App& app) {
  // Setting key -> applies the "off" value.
  std::map<std::string, std::function<void(Environment&)>> toggles;
  for (const auto& m : app.methods) {
    for_each_stmt(m.body, [&](const Stmt& s) {
      const EnvCondition* c = nullptr;
      if (const auto* e = std::get_if<EnvIfStmt>(&s.node)) c = &e->cond;
      if (const auto* t = std::get_if<TryCatchStmt>(&s.node)) c = &t->exception;
      if (!c) return;
      switch (c->kind) {
        case EnvKind::kWifiEnabled:
          toggles["wifi"] = [](Environment& e) { e.wifi = false; };
          break;
        case EnvKind::kStorageAvailable:
          toggles["storage"] = [](Environment& e) { e.faults.insert(Fault::kStorageUnavailable); };
          break;
        case EnvKind::kIoAvailable:
          toggles["io"] = [](Environment& e) { e.faults.insert(Fault::kIoFailure); };
          break;
        case EnvKind::kPermissionGranted: {
          std::string p = c->subject;
          toggles["permission:" + p] = [p](Environment& e) { e.permissions[p] = true; };
          break;
        }
        case EnvKind::kInputMatches:
          break;
      }
    });
  }
  std::vector<std::function<void(Environment&)>> list;
  for (auto& [key, fn] : toggles) list.push_back(fn);
  std::vector<Environment> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << list.size()); ++mask) {
    Environment env;
    for (std::size_t i = 0; i < list.size(); ++i)
      if (mask & (std::size_t{1} << i)) list[i](env);
    out.push_back(env);
  }
  return out;
}

OracleResult bounded_exhaustive(const App& app, const OracleOptions& options) {
  OracleResult result;
  for (const Environment& env : relevant_environments(app)) {
    search(app, env, options, result);
    if (result.partial) break;
  }
  return result;
}

SimResult random_walk(const App& app, const Environment& env, std::uint64_t seed, int max_events,
                      const SimOptions& options) {
  std::mt19937_64 rng(seed);
  Simulation sim(app, env, options, false);
  int events = 0;
  while (!sim.stopped()) {
    std::vector<int> threads = sim.runnable_threads();
    bool ui = sim.has_queued_ui();
    bool event = !ui && events < max_events;
    std::size_t n = threads.size() + (ui || event ? 1 : 0);
    if (n == 0) break;
    std::size_t pick = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    if (pick < threads.size()) {
      sim.step_thread(threads[pick]);
    } else if (ui) {
      sim.step_ui();
    } else {
      std::vector<UiEvent> es = user_events(sim);
      if (sim.foreground()) {
        es.push_back(UiEvent::of(EventKind::kScreenToggle));
        es.push_back(UiEvent::of(EventKind::kLongPressHomeThenBack));
      }
      sim.inject(es[std::uniform_int_distribution<std::size_t>(0, es.size() - 1)(rng)]);
      ++events;
    }
  }
  return sim.result();
}

std::set<StmtSite> crash_sites_of(const App& app, const EventSequence& seq, const Environment& env) {
  std::set<StmtSite> out;
  SimOptions options;
  options.record_methods = false;
  options.record_exec_log = false;
  for (const auto& r : explore_all_schedules(app, seq, env, 100000, options).outcomes)
    if (r.crash) out.insert(r.crash->site);
  return out;
}

}  // namespace apecheck::testing
