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

// Comparison tools built on the simulator: a Monkey-style random GUI fuzzer
// and a happens-before race detector over access logs.

#pragma once

#include <cstdint>
#include <vector>

#include "apecheck/app_model.hpp"
#include "apecheck/runtime_sim.hpp"

namespace apecheck {

struct FuzzCrash {
  CrashReport report;
  int events_to_first = 0;   // events injected up to and including the trigger
  std::int64_t ticks = 0;    // simulator ticks up to the crash

  bool operator==(const FuzzCrash&) const = default;
};

struct FuzzResult {
  std::vector<FuzzCrash> crashes;  // one per crash site, first occurrence order
  int event_budget = 0;
  std::uint64_t seed = 0;
  int events_used = 0;
  int restarts = 0;
  std::vector<AccessLog> logs;  // one per app incarnation, when recorded

  bool operator==(const FuzzResult&) const = default;
};

struct FuzzOptions {
  bool record_accesses = false;
  // Chance of injecting the next user event while async work is pending.
  // Otherwise one pending step (a background slice or a UI item) runs,
  // chosen uniformly. Low values model tasks that usually finish between
  // two user events.
  double event_probability = 0.1;
};

// Random events over visible bound widgets and system events, with a
// random choice between the next user event and pending async work.
// The app restarts after a crash. Deterministic in (app, budget, seed).
FuzzResult fuzz(const App& app, int event_budget, std::uint64_t seed,
                const FuzzOptions& options = {});

// fuzz for seeds first_seed .. first_seed + n - 1; jobs > 1 runs them on an
// OpenMP team.
std::vector<FuzzResult> fuzz_campaign(const App& app, int event_budget, std::uint64_t first_seed,
                                      int n, int jobs = 1, const FuzzOptions& options = {});

struct RaceReport {
  Access a;  // the earlier access in log order
  Access b;
  bool hb_related = false;

  bool operator==(const RaceReport&) const = default;
};

// Pairs of conflicting accesses to one location not ordered by the
// transitive closure of segment predecessors. One report per app-code
// site, preferring a pair whose other access is a lifecycle (framework)
// access; pairs without any app-code access are skipped. Throws ApeError on
// a malformed log (forward or unknown predecessor, unknown segment).
std::vector<RaceReport> detect_races(const AccessLog& log);

// App-code sites of a report list, sorted and unique.
std::vector<StmtSite> race_sites(const std::vector<RaceReport>& races);

}  // namespace apecheck
