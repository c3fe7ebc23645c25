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

// Independent crash oracle: bounded exhaustive search over user events,
// schedules and environments, using only the simulator's public interface.
// It shares nothing with the static detector.

#pragma once

#include <cstdint>
#include <set>
#include <vector>

#include "apecheck/runtime_sim.hpp"

namespace apecheck::testing {

struct OracleOptions {
  int max_events = 4;              // launch included
  std::size_t max_leaves = 2000000;
};

struct OracleResult {
  std::set<StmtSite> crash_sites;
  std::size_t leaves = 0;
  std::size_t abnormal = 0;        // leaves that crashed or errored
  bool partial = false;
};

// Every combination of the settings the app's conditions mention (wifi,
// storage, io, permissions); other settings keep their defaults.
std::vector<Environment> relevant_environments(const App& app);

// Explores, for every relevant environment, every event sequence of at most
// max_events events (launch first; widget events only on visible widgets,
// system events only in the foreground) under every interleaving.
OracleResult bounded_exhaustive(const App& app, const OracleOptions& options = {});

// One seeded random run: at each decision point a uniform choice among
// runnable threads, the UI queue and (when the queue is empty) the next
// user event, which is drawn from the events possible in the current state.
SimResult random_walk(const App& app, const Environment& env, std::uint64_t seed, int max_events,
                      const SimOptions& options = {});

// Crash sites of explore_all_schedules over the given sequences.
std::set<StmtSite> crash_sites_of(const App& app, const EventSequence& seq, const Environment& env);

}  // namespace apecheck::testing
