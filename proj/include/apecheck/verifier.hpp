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

// Per-candidate verification: traces, events, environment, instrumentation
// and a barrier replay whose crash must land on the candidate's statement.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "apecheck/app_model.hpp"
#include "apecheck/callgraph.hpp"
#include "apecheck/event_synth.hpp"
#include "apecheck/fault_detector.hpp"
#include "apecheck/runtime_sim.hpp"
#include "apecheck/trace_gen.hpp"

namespace apecheck {

enum class VerifyStatus {
  kConfirmed,
  kNotReproduced,
  kUnmappable,
  kUnsatisfiable,
  kTraceFailed,
};

std::string_view to_string(VerifyStatus s);

struct TestCase {
  EventSequence sequence;
  Environment environment;
  Schedule schedule;

  bool operator==(const TestCase&) const = default;
};

struct VerificationOutcome {
  ApeCandidate candidate;
  VerifyStatus status = VerifyStatus::kTraceFailed;
  std::optional<CrashReport> report;
  std::optional<TestCase> test_case;
  // Crashes at other statements seen while replaying.
  std::vector<CrashReport> collateral;
  int traces_terminated = 0;
  std::string detail;

  bool operator==(const VerificationOutcome&) const = default;
  // At least one terminated trace mapped to an event sequence.
  bool processed() const;
};

VerificationOutcome verify(const App& app, const CallGraph& cg, const ApeCandidate& cand,
                           const TraceLimits& limits = {});

// Replays a confirmed outcome's test case on the instrumented app.
SimResult replay(const App& app, const VerificationOutcome& outcome);

struct VerifySummary {
  std::vector<VerificationOutcome> outcomes;  // candidate order
  int detected = 0;
  int processed = 0;
  int reproduced = 0;
  int fp_suspects = 0;  // processed - reproduced - environment-blocked

  bool operator==(const VerifySummary&) const = default;
};

// jobs > 1 verifies candidates on an OpenMP team; the result is identical
// to the serial run.
VerifySummary verify_all(const App& app, const TraceLimits& limits = {}, int jobs = 1);

}  // namespace apecheck
