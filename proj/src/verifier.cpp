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

#include "apecheck/verifier.hpp"

#include <algorithm>

namespace apecheck {

std::string_view to_string(VerifyStatus s) {
  switch (s) {
    case VerifyStatus::kConfirmed: return "confirmed";
    case VerifyStatus::kNotReproduced: return "not-reproduced";
    case VerifyStatus::kUnmappable: return "unmappable";
    case VerifyStatus::kUnsatisfiable: return "unsatisfiable-environment";
    case VerifyStatus::kTraceFailed: return "trace-failed";
  }
  return "?";
}

bool VerificationOutcome::processed() const {
  return status == VerifyStatus::kConfirmed || status == VerifyStatus::kNotReproduced ||
         status == VerifyStatus::kUnsatisfiable;
}

VerificationOutcome verify(const App& app, const CallGraph& cg, const ApeCandidate& cand,
                           const TraceLimits& limits) {
  VerificationOutcome out;
  out.candidate = cand;
  std::vector<Trace> terminated;
  for (auto& t : generate_traces(app, cg, cand, limits))
    if (t.state == TraceState::kTerminated) terminated.push_back(std::move(t));
  std::stable_sort(terminated.begin(), terminated.end(),
                   [](const Trace& a, const Trace& b) { return a.chain.size() < b.chain.size(); });
  out.traces_terminated = static_cast<int>(terminated.size());
  if (terminated.empty()) {
    out.status = VerifyStatus::kTraceFailed;
    out.detail = "no trace reaches an entry activity callback";
    return out;
  }

  const App instrumented = instrument(app, cand);
  const Schedule barrier{ScheduleMode::kBarrier, 0};
  bool replayed = false;
  bool unsatisfiable = false;
  for (const Trace& t : terminated) {
    SynthResult synth = synthesize_events(t, app, &cand);
    if (!synth.sequence) {
      if (out.detail.empty()) out.detail = synth.detail;
      continue;
    }
    EnvResult env = infer_environment(t, app);
    if (!env.environment) {
      unsatisfiable = true;
      out.detail = env.detail;
      continue;
    }
    replayed = true;
    SimOptions options;
    options.record_exec_log = false;
    SimResult r = run(instrumented, *synth.sequence, *env.environment, barrier, options);
    if (!r.crash) continue;
    if (r.crash->site == cand.stmt_access_ui) {
      out.status = VerifyStatus::kConfirmed;
      out.report = r.crash;
      out.test_case = TestCase{*synth.sequence, *env.environment, barrier};
      out.detail.clear();
      return out;
    }
    if (std::find(out.collateral.begin(), out.collateral.end(), *r.crash) == out.collateral.end())
      out.collateral.push_back(*r.crash);
  }
  if (replayed) {
    out.status = VerifyStatus::kNotReproduced;
    out.detail = "no replay crashed at " + cand.stmt_access_ui.str();
  } else if (unsatisfiable) {
    out.status = VerifyStatus::kUnsatisfiable;
  } else {
    out.status = VerifyStatus::kUnmappable;
  }
  return out;
}

SimResult replay(const App& app, const VerificationOutcome& outcome) {
  if (!outcome.test_case) throw ApeError("replay: outcome has no test case");
  const TestCase& tc = *outcome.test_case;
  SimOptions options;
  options.record_exec_log = false;
  return run(instrument(app, outcome.candidate), tc.sequence, tc.environment, tc.schedule, options);
}

VerifySummary verify_all(const App& app, const TraceLimits& limits, int jobs) {
  const CallGraph cg = build_call_graph(app);
  const std::vector<ApeCandidate> cands = detect_apes(app, cg);
  VerifySummary s;
  s.outcomes.resize(cands.size());
  const long n = static_cast<long>(cands.size());
#pragma omp parallel for schedule(dynamic) num_threads(std::max(jobs, 1)) if (jobs > 1)
  for (long i = 0; i < n; ++i) s.outcomes[i] = verify(app, cg, cands[i], limits);
  s.detected = static_cast<int>(cands.size());
  int blocked = 0;
  for (const auto& o : s.outcomes) {
    if (o.processed()) ++s.processed;
    if (o.status == VerifyStatus::kConfirmed) ++s.reproduced;
    if (o.status == VerifyStatus::kUnsatisfiable) ++blocked;
  }
  s.fp_suspects = s.processed - s.reproduced - blocked;
  return s;
}

}  // namespace apecheck
