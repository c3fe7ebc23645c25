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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails. Tolerances are the constants below.
//
//   acceptance [--update-snapshots]

#include <algorithm>
#include <chrono>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "apecheck/baselines.hpp"
#include "apecheck/callgraph.hpp"
#include "apecheck/cli.hpp"
#include "apecheck/json_io.hpp"
#include "apecheck/verifier.hpp"
#include "fixtures.hpp"
#include "oracle.hpp"
#include "random_app.hpp"

namespace apecheck {
namespace {

namespace fs = std::filesystem;

// Runtime ceilings, seconds.
constexpr double kFixtureSeconds = 1.0;
constexpr double kOracleSeconds = 60.0;
constexpr double kGapSeconds = 120.0;

// Oracle equivalence.
constexpr int kCorpusSize = 100;
constexpr double kMaxFalsePositiveRate = 0.10;
constexpr int kOracleEvents = 4;
constexpr int kConformanceEvents = 6;
constexpr std::size_t kConformanceLeaves = 20000000;
constexpr std::size_t kOracleLeaves = 300000;

// Baseline gap.
constexpr int kGapSeeds = 10;
constexpr int kGapBudget = 10000;
constexpr double kMinSiteRatio = 2.0;
constexpr double kMaxVerifierMedianLength = 5.0;
constexpr double kMinFuzzMedianEvents = 50.0;

// Trace limits.
constexpr std::size_t kFanInTraces = 10;
constexpr std::size_t kMaxChain = 20;

struct Check {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (ok) return;
    if (!pass) detail << "; ";
    pass = false;
    detail << what;
  }
};

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double median(std::vector<double> v) {
  if (v.empty()) return 0;
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2;
}

std::vector<std::string> names(const EventSequence& s) {
  std::vector<std::string> out;
  for (const auto& e : s.events) out.push_back(e.str());
  return out;
}

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : ", ") + s;
  return "[" + out + "]";
}

// 1. ADSdroid reproduction.
void adsdroid(Check& c, std::ostream& info) {
  auto t0 = Clock::now();
  App app = testing::load_fixture("adsdroid");
  CallGraph cg = build_call_graph(app);
  auto cands = detect_apes(app, cg);
  c.require(cands.size() == 2, "expected 2 candidates, got " + std::to_string(cands.size()));
  for (const auto& cand : cands) c.require(cand.pattern == Pattern::kP3, "candidate not P3");
  bool projection = false;
  for (const auto& cand : cands)
    for (const auto& t : generate_traces(app, cg, cand))
      if (t.state == TraceState::kTerminated &&
          handler_projection(app, t) ==
              std::vector<std::string>{"searchByPartName", "onListItemClick"})
        projection = true;
  c.require(projection, "no trace projects to [searchByPartName, onListItemClick]");
  VerifySummary s = verify_all(app);
  for (const auto& o : s.outcomes) {
    c.require(o.status == VerifyStatus::kConfirmed,
              o.candidate.stmt_access_ui.str() + " " + std::string(to_string(o.status)));
    c.require(o.report && o.report->exception == ExceptionKind::kBadToken,
              o.candidate.stmt_access_ui.str() + " not BadTokenException");
  }
  std::vector<std::string> search;
  if (!s.outcomes.empty() && s.outcomes[0].test_case) search = names(s.outcomes[0].test_case->sequence);
  c.require(search == std::vector<std::string>{"launch", "click(search)", "rotate"},
            "search test is " + join(search));
  double dt = since(t0);
  c.require(dt < kFixtureSeconds, "took " + std::to_string(dt) + " s");
  info << "confirmed " << s.reproduced << "/" << s.detected << ", search test " << join(search);
}

// 2. Pattern 1 and 2 reproduction.
void patterns(Check& c, std::ostream& info) {
  {
    auto t0 = Clock::now();
    App app = testing::load_fixture("pedometer");
    VerifySummary s = verify_all(app);
    c.require(s.outcomes.size() == 1, "pedometer: expected 1 candidate");
    if (s.outcomes.size() == 1) {
      const auto& o = s.outcomes[0];
      c.require(o.candidate.pattern == Pattern::kP1, "pedometer: not P1");
      c.require(o.status == VerifyStatus::kConfirmed, "pedometer: not confirmed");
      c.require(o.report && o.report->exception == ExceptionKind::kIllegalState,
                "pedometer: not IllegalStateException");
      const Stmt* st = app.stmt_at(o.candidate.stmt_access_ui);
      const auto* access = st ? std::get_if<UiAccessStmt>(&st->node) : nullptr;
      const GuiObjectDecl* g = access ? app.find_gui_object(access->target) : nullptr;
      c.require(g && g->kind == GuiKind::kListAdapter, "pedometer: target is not a list adapter");
    }
    double dt = since(t0);
    c.require(dt < kFixtureSeconds, "pedometer took " + std::to_string(dt) + " s");
    info << "pedometer " << s.reproduced << "/" << s.detected;
  }
  {
    auto t0 = Clock::now();
    App app = testing::load_fixture("gisapp");
    VerifySummary s = verify_all(app);
    c.require(s.outcomes.size() == 1, "gisapp: expected 1 candidate");
    if (s.outcomes.size() == 1) {
      const auto& o = s.outcomes[0];
      c.require(o.candidate.pattern == Pattern::kP2, "gisapp: not P2");
      c.require(o.status == VerifyStatus::kConfirmed, "gisapp: not confirmed");
      c.require(o.report && o.report->exception == ExceptionKind::kRuntimeExceptionLooper,
                "gisapp: not RuntimeExceptionLooper");
      c.require(o.report && o.report->environment.faults == std::set<Fault>{Fault::kStorageUnavailable},
                "gisapp: environment is not {storage-unavailable}");
    }
    double dt = since(t0);
    c.require(dt < kFixtureSeconds, "gisapp took " + std::to_string(dt) + " s");
    info << ", gisapp " << s.reproduced << "/" << s.detected;
  }
}

// 3. Conformance of rule-compliant fixtures.
void conformance(Check& c, std::ostream& info) {
  auto fixtures = testing::compliant_fixtures();
  c.require(fixtures.size() >= 5, "fewer than 5 compliant fixtures");
  std::size_t leaves = 0, explored = 0, barrier = 0;
  for (const auto& name : fixtures) {
    App app = testing::load_fixture(name);
    CallGraph cg = build_call_graph(app);
    c.require(detect_apes(app, cg).empty(), name + ": detector reports candidates");
    // Every event sequence up to the depth bound, every interleaving.
    testing::OracleResult all = testing::bounded_exhaustive(app, {kConformanceEvents, kConformanceLeaves});
    leaves += all.leaves;
    c.require(!all.partial, name + ": search did not finish");
    c.require(all.abnormal == 0, name + ": " + std::to_string(all.abnormal) + " abnormal runs");
    // Sequences that drive each UI operation of async code, explored
    // exhaustively and replayed under the barrier its probes impose.
    for (const auto& cand : testing::ui_operation_candidates(app, cg)) {
      App instrumented = instrument(app, cand);
      for (const auto& t : generate_traces(app, cg, cand)) {
        if (t.state != TraceState::kTerminated) continue;
        SynthResult seq = synthesize_events(t, app, &cand);
        EnvResult env = infer_environment(t, app);
        if (!seq.sequence || !env.environment) continue;
        ExploreResult ex = explore_all_schedules(app, *seq.sequence, *env.environment);
        explored += ex.runs;
        c.require(!ex.partial, name + ": exploration bound reached");
        for (const auto& r : ex.outcomes)
          c.require(r.status == SimStatus::kNormal, name + ": " + r.outcome_key());
        SimResult b = run(instrumented, *seq.sequence, *env.environment, {ScheduleMode::kBarrier, 0});
        ++barrier;
        c.require(b.status == SimStatus::kNormal,
                  name + ": barrier at " + cand.stmt_access_ui.str() + " gave " + b.outcome_key());
      }
    }
  }
  c.require(barrier > 0, "no instrumented runs");
  info << fixtures.size() << " fixtures, " << leaves << " searched runs, " << explored
       << " explored interleavings, " << barrier << " barrier runs";
}

// 4. Oracle equivalence on random apps.
void oracle(Check& c, std::ostream& info) {
  auto t0 = Clock::now();
  int candidates = 0, missed = 0, false_pos = 0, bad_fp = 0, partial = 0;
  std::size_t leaves = 0;
  for (int seed = 0; seed < kCorpusSize; ++seed) {
    App app = testing::random_app(seed);
    CallGraph cg = build_call_graph(app);
    auto cands = detect_apes(app, cg);
    testing::OracleResult res = testing::bounded_exhaustive(app, {kOracleEvents, kOracleLeaves});
    leaves += res.leaves;
    partial += res.partial;
    VerifySummary s = verify_all(app);
    // Crash sites: the bounded search, plus every interleaving of the
    // verifier's own sequences (which may exceed the search depth).
    std::set<StmtSite> sites = res.crash_sites;
    for (const auto& o : s.outcomes) {
      if (!o.test_case) continue;
      auto more = testing::crash_sites_of(app, o.test_case->sequence, o.test_case->environment);
      sites.insert(more.begin(), more.end());
    }
    std::set<StmtSite> covered;
    for (const auto& cand : cands) covered.insert(cand.stmt_access_ui);
    candidates += static_cast<int>(cands.size());
    for (const auto& site : sites) {
      if (covered.count(site)) continue;
      ++missed;
      c.require(false, "seed " + std::to_string(seed) + " missed " + site.str());
    }
    for (std::size_t i = 0; i < cands.size(); ++i) {
      if (sites.count(cands[i].stmt_access_ui)) continue;
      ++false_pos;
      if (s.outcomes[i].status != VerifyStatus::kNotReproduced) {
        ++bad_fp;
        c.require(false, "seed " + std::to_string(seed) + " false positive " +
                             cands[i].stmt_access_ui.str() + " is " +
                             std::string(to_string(s.outcomes[i].status)));
      }
    }
  }
  double rate = candidates ? static_cast<double>(false_pos) / candidates : 0.0;
  c.require(rate <= kMaxFalsePositiveRate, "false-positive rate " + std::to_string(rate));
  double dt = since(t0);
  c.require(dt < kOracleSeconds, "took " + std::to_string(dt) + " s");
  info << kCorpusSize << " apps, " << candidates << " candidates, missed " << missed
       << ", false positives " << false_pos << " (" << static_cast<int>(rate * 1000) / 10.0
       << "%, all not-reproduced: " << (bad_fp == 0 ? "yes" : "no") << "), " << leaves
       << " searched runs, " << partial << " capped searches";
}

// 5. Baseline gap on the injected-fault fixtures.
void gap(Check& c, std::ostream& info) {
  auto t0 = Clock::now();
  int verifier_sites = 0, fuzz_sites = 0;
  std::vector<double> lengths, firsts;
  for (const auto& name : testing::gap_fixtures()) {
    App app = testing::load_fixture(name);
    std::set<StmtSite> confirmed;
    for (const auto& o : verify_all(app).outcomes) {
      if (o.status != VerifyStatus::kConfirmed) continue;
      confirmed.insert(o.report->site);
      lengths.push_back(static_cast<double>(o.test_case->sequence.events.size()));
    }
    std::set<StmtSite> fuzzed;
    for (const auto& r : fuzz_campaign(app, kGapBudget, 0, kGapSeeds)) {
      for (const auto& crash : r.crashes) {
        fuzzed.insert(crash.report.site);
        firsts.push_back(crash.events_to_first);
      }
    }
    verifier_sites += static_cast<int>(confirmed.size());
    fuzz_sites += static_cast<int>(fuzzed.size());
  }
  double ratio = fuzz_sites ? static_cast<double>(verifier_sites) / fuzz_sites : 1e9;
  c.require(ratio >= kMinSiteRatio, "site ratio " + std::to_string(ratio));
  c.require(median(lengths) <= kMaxVerifierMedianLength,
            "verifier median length " + std::to_string(median(lengths)));
  c.require(firsts.empty() || median(firsts) >= kMinFuzzMedianEvents,
            "fuzz median events-to-first " + std::to_string(median(firsts)));
  double dt = since(t0);
  c.require(dt < kGapSeconds, "took " + std::to_string(dt) + " s");
  info << "verifier " << verifier_sites << " sites, fuzzer " << fuzz_sites << " sites, verifier median length "
       << median(lengths) << ", fuzzer median events-to-first " << median(firsts);
}

// 6. Race detection depends on the logs it is given.
void races(Check& c, std::ostream& info) {
  App app = testing::load_fixture("adsdroid");
  std::set<StmtSite> truth;
  for (const auto& cand : detect_apes(app, build_call_graph(app)))
    if (cand.pattern == Pattern::kP3) truth.insert(cand.stmt_access_ui);
  SimOptions options;
  options.record_accesses = true;
  options.record_exec_log = false;
  VerifySummary s = verify_all(app);
  std::vector<RaceReport> exhaustive;
  std::set<StmtSite> eager_found;
  for (const auto& o : s.outcomes) {
    if (!o.test_case) continue;
    const TestCase& tc = *o.test_case;
    explore_all_schedules(app, tc.sequence, tc.environment, 100000, options, [&](const SimResult& r) {
      for (auto& race : detect_races(r.access_log)) exhaustive.push_back(race);
    });
    SimResult eager = run(app, tc.sequence, tc.environment, {ScheduleMode::kEager, 0}, options);
    for (const auto& site : race_sites(detect_races(eager.access_log))) eager_found.insert(site);
  }
  auto ex = race_sites(exhaustive);
  std::set<StmtSite> ex_found(ex.begin(), ex.end());
  std::set<StmtSite> eager_hits;
  for (const auto& site : eager_found)
    if (truth.count(site)) eager_hits.insert(site);
  c.require(truth.size() == 2, "expected 2 P3 sites");
  c.require(ex_found == truth, "exhaustive logs found " + std::to_string(ex_found.size()) + " sites");
  c.require(eager_hits.empty(), "eager log found " + std::to_string(eager_hits.size()) + " P3 sites");
  info << "exhaustive " << ex_found.size() << "/" << truth.size() << " sites, eager "
       << eager_hits.size() << "/" << truth.size();
}

// 7. Trace limits on fan-in.
void limits(Check& c, std::ostream& info) {
  App app = testing::load_fixture("fanin15");
  CallGraph cg = build_call_graph(app);
  auto cands = detect_apes(app, cg);
  c.require(cands.size() == 1, "expected 1 candidate");
  if (cands.empty()) return;
  auto traces = generate_traces(app, cg, cands[0]);
  std::size_t longest = 0;
  for (const auto& t : traces) longest = std::max(longest, t.chain.size());
  c.require(traces.size() == kFanInTraces, "got " + std::to_string(traces.size()) + " traces");
  c.require(longest <= kMaxChain, "chain of " + std::to_string(longest));
  info << traces.size() << " traces, longest chain " << longest;
}

// 8. CLI determinism with stored snapshots.
struct CliOutput {
  int code = 0;
  std::string text;
};

CliOutput cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str() + err.str()};
}

std::string files_of(const fs::path& dir) {
  std::vector<fs::path> files;
  if (fs::exists(dir))
    for (const auto& e : fs::recursive_directory_iterator(dir))
      if (e.is_regular_file()) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::string out;
  for (const auto& f : files)
    out += "== " + fs::relative(f, dir).string() + "\n" + testing::read_file(f.string());
  return out;
}

void determinism(Check& c, std::ostream& info, bool update) {
  const fs::path snapshots = fs::path(APECHECK_SOURCE_DIR) / "tests" / "snapshots";
  const fs::path scratch = fs::temp_directory_path() / "apecheck_acceptance";
  int commands = 0, compared = 0, written = 0;
  for (const auto& name : testing::all_fixtures()) {
    const std::string app = std::string(APECHECK_FIXTURE_DIR) + "/" + name + ".ape";
    // A test case for simulate: the first verified one, or a plain launch.
    fs::remove_all(scratch);
    fs::create_directories(scratch);
    Json tc = Json{{"environment", Json::object()},
                   {"schedule", {{"mode", "random"}, {"seed", 5}}},
                   {"sequence", {{"events", Json::array({{{"kind", "launch"}}})}}}};
    for (const auto& o : verify_all(testing::load_fixture(name)).outcomes)
      if (o.test_case) {
        tc = *o.test_case;
        break;
      }
    const std::string tc_path = (scratch / "testcase.json").string();
    std::ofstream(tc_path) << dump(tc);
    Json exhaustive = tc;
    exhaustive["schedule"] = {{"mode", "exhaustive"}, {"seed", 0}};
    const std::string ex_path = (scratch / "exhaustive.json").string();
    std::ofstream(ex_path) << dump(exhaustive);

    const std::vector<std::pair<std::string, std::vector<std::string>>> runs = {
        {"analyze", {"analyze", app, "--out", "@"}},
        {"analyze-limits", {"analyze", app, "--max-traces", "2", "--max-len", "4"}},
        {"verify", {"verify", app, "--out", "@"}},
        {"verify-jobs", {"verify", app, "--jobs", "3"}},
        {"fuzz", {"fuzz", app, "--budget", "2000", "--seed", "7", "--runs", "2"}},
        {"races", {"races", app}},
        {"races-eager", {"races", app, "--schedule", "eager"}},
        {"races-fuzz", {"races", app, "--schedule", "fuzz", "--budget", "300", "--seed", "3"}},
        {"simulate", {"simulate", app, tc_path, "--out", "@"}},
        {"simulate-exhaustive", {"simulate", app, ex_path}},
        {"graph", {"graph", app}},
        {"graph-text", {"graph", app, "--text"}},
    };
    for (const auto& [label, args] : runs) {
      std::string outputs[2];
      for (int k = 0; k < 2; ++k) {
        fs::path out_dir = scratch / ("out" + std::to_string(k));
        fs::remove_all(out_dir);
        std::vector<std::string> a = args;
        for (auto& s : a)
          if (s == "@") s = out_dir.string();
        CliOutput r = cli(a);
        outputs[k] = "exit " + std::to_string(r.code) + "\n" + r.text + files_of(out_dir);
      }
      ++commands;
      c.require(outputs[0] == outputs[1], name + " " + label + ": re-run differs");
      const fs::path snap = snapshots / name / (label + ".txt");
      if (update) {
        fs::create_directories(snap.parent_path());
        std::ofstream(snap, std::ios::binary) << outputs[0];
        ++written;
      } else if (fs::exists(snap)) {
        ++compared;
        c.require(testing::read_file(snap.string()) == outputs[0], name + " " + label + ": snapshot differs");
      } else {
        c.require(false, name + " " + label + ": no snapshot");
      }
    }
  }
  fs::remove_all(scratch);
  info << commands << " commands run twice, " << compared << " snapshots matched";
  if (update) info << ", " << written << " snapshots written";
}

}  // namespace
}  // namespace apecheck

int main(int argc, char** argv) {
  using namespace apecheck;
  bool update = argc > 1 && std::strcmp(argv[1], "--update-snapshots") == 0;
  const std::vector<std::pair<std::string, std::function<void(Check&, std::ostream&)>>> criteria = {
      {"adsdroid reproduction", adsdroid},
      {"pattern 1 and 2 reproduction", patterns},
      {"conformance of compliant fixtures", conformance},
      {"oracle equivalence", oracle},
      {"baseline gap", gap},
      {"race detector dependence", races},
      {"trace limits", limits},
      {"cli determinism", [update](Check& c, std::ostream& info) { determinism(c, info, update); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check c;
    std::ostringstream info;
    auto t0 = Clock::now();
    try {
      criteria[i].second(c, info);
    } catch (const std::exception& e) {
      c.require(false, std::string("exception: ") + e.what());
    }
    double dt = since(t0);
    failed += !c.pass;
    std::cout << (c.pass ? "PASS" : "FAIL") << "  " << (i + 1) << ". " << criteria[i].first << " ("
              << info.str() << "; " << static_cast<int>(dt * 1000) / 1000.0 << " s)";
    if (!c.pass) std::cout << ": " << c.detail.str();
    std::cout << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed ? 1 : 0;
}
