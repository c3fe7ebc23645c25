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

#include "apecheck/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "apecheck/json_io.hpp"

namespace apecheck {
namespace {

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitFound = 1;
constexpr int kExitInput = 2;

// Input problems the user can fix; reported on stderr with exit code 2.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
}

struct Common {
  std::string app_path;
  std::string api_config;
  std::string out_dir;
  int max_traces = TraceLimits{}.max_trace_cnt;
  int max_len = TraceLimits{}.max_trace_len;
  int jobs = 1;
  std::uint64_t seed = 0;
  int budget = 10000;

  TraceLimits limits() const { return {max_traces, max_len}; }
};

App load_app(const Common& c) {
  ApiConfig config = default_api_config();
  if (!c.api_config.empty()) {
    std::vector<Diagnostic> diags;
    auto parsed = parse_api_config(read_file(c.api_config), &diags);
    if (!parsed) {
      std::string msg = "invalid api config " + c.api_config;
      for (const auto& d : diags) msg += "\n" + d.str();
      throw InputError(msg);
    }
    config = *parsed;
  }
  ParseResult r = parse_app(read_file(c.app_path), config);
  if (!r.ok()) {
    std::string msg = c.app_path + ": parse failed";
    for (const auto& d : r.diagnostics) msg += "\n" + c.app_path + ":" + d.str();
    throw InputError(msg);
  }
  auto diags = validate_app(*r.app);
  if (!diags.empty()) {
    std::string msg = c.app_path + ": invalid app";
    for (const auto& d : diags) msg += "\n" + c.app_path + ":" + d.str();
    throw InputError(msg);
  }
  return std::move(*r.app);
}

fs::path out_dir(const Common& c) {
  fs::path dir(c.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InputError("cannot create " + c.out_dir);
  return dir;
}

int cmd_analyze(const Common& c, std::ostream& out) {
  App app = load_app(c);
  CallGraph cg = build_call_graph(app);
  std::vector<ApeCandidate> cands = detect_apes(app, cg);
  Json traces = Json::array();
  for (const auto& cand : cands) {
    TraceStats stats;
    std::vector<Trace> ts = generate_traces(app, cg, cand, c.limits(), &stats);
    Json entry{{"site", cand.stmt_access_ui}, {"traces", ts}, {"dropped_forks", stats.dropped_forks}};
    Json handlers = Json::array();
    for (const auto& t : ts) handlers.push_back(handler_projection(app, t));
    entry["handlers"] = handlers;
    traces.push_back(entry);
  }
  Json result{{"app", app.name}, {"candidates", cands}, {"traces", traces}};
  if (!c.out_dir.empty()) {
    fs::path dir = out_dir(c);
    write_file(dir / "candidates.json", dump(Json(cands)));
    write_file(dir / "traces.json", dump(traces));
  }
  out << dump(result);
  return cands.empty() ? kExitOk : kExitFound;
}

int cmd_verify(const Common& c, std::ostream& out) {
  App app = load_app(c);
  VerifySummary s = verify_all(app, c.limits(), c.jobs);
  Json result = s;
  result["app"] = app.name;
  if (!c.out_dir.empty()) {
    fs::path dir = out_dir(c);
    write_file(dir / "summary.json", dump(result));
    for (std::size_t i = 0; i < s.outcomes.size(); ++i) {
      if (!s.outcomes[i].report) continue;
      write_file(dir / ("report-" + std::to_string(i) + ".json"), dump(Json(*s.outcomes[i].report)));
    }
  }
  out << dump(result);
  return kExitOk;
}

int cmd_fuzz(const Common& c, int runs, std::ostream& out) {
  if (c.budget < 0) throw InputError("--budget must be non-negative");
  App app = load_app(c);
  std::vector<FuzzResult> results = fuzz_campaign(app, c.budget, c.seed, std::max(runs, 1), c.jobs);
  out << dump(Json{{"app", app.name}, {"results", results}});
  return kExitOk;
}

int cmd_races(const Common& c, const std::string& mode, std::ostream& out) {
  App app = load_app(c);
  std::vector<AccessLog> logs;
  SimOptions options;
  options.record_accesses = true;
  options.record_exec_log = false;
  if (mode == "fuzz") {
    FuzzOptions fo;
    fo.record_accesses = true;
    logs = fuzz(app, c.budget, c.seed, fo).logs;
  } else {
    // Logs of the verifier's test sequences.
    VerifySummary s = verify_all(app, c.limits(), c.jobs);
    for (const auto& o : s.outcomes) {
      if (!o.test_case) continue;
      const TestCase& tc = *o.test_case;
      if (mode == "eager") {
        logs.push_back(run(app, tc.sequence, tc.environment, {ScheduleMode::kEager, 0}, options)
                           .access_log);
      } else {
        explore_all_schedules(app, tc.sequence, tc.environment, 100000, options,
                              [&](const SimResult& r) { logs.push_back(r.access_log); });
      }
    }
  }
  std::vector<RaceReport> all;
  std::set<StmtSite> seen;
  for (const auto& log : logs) {
    for (auto& r : detect_races(log)) {
      bool fresh = (r.a.site && !seen.count(*r.a.site)) || (r.b.site && !seen.count(*r.b.site));
      if (!fresh) continue;
      if (r.a.site) seen.insert(*r.a.site);
      if (r.b.site) seen.insert(*r.b.site);
      all.push_back(std::move(r));
    }
  }
  out << dump(Json{{"app", app.name},
                   {"logs", logs.size()},
                   {"races", all},
                   {"schedule", mode},
                   {"sites", race_sites(all)}});
  return kExitOk;
}

int cmd_simulate(const Common& c, const std::string& test_path, int instrument_index,
                 std::ostream& out) {
  App app = load_app(c);
  TestCase tc;
  try {
    tc = Json::parse(read_file(test_path)).get<TestCase>();
  } catch (const Json::exception& e) {
    throw InputError(test_path + ": " + e.what());
  } catch (const ApeError& e) {
    throw InputError(test_path + ": " + e.what());
  }
  for (const auto& e : tc.sequence.events)
    if (!e.widget.empty() && !app.find_binding(e.widget))
      throw InputError(test_path + ": unknown widget " + e.widget);
  if (instrument_index >= 0) {
    CallGraph cg = build_call_graph(app);
    std::vector<ApeCandidate> cands = detect_apes(app, cg);
    if (instrument_index >= static_cast<int>(cands.size()))
      throw InputError("--instrument " + std::to_string(instrument_index) + ": only " +
                       std::to_string(cands.size()) + " candidates");
    app = instrument(app, cands[instrument_index]);
  }
  Json result;
  std::vector<std::string> exec_log;
  if (tc.schedule.mode == ScheduleMode::kExhaustive) {
    ExploreResult ex = explore_all_schedules(app, tc.sequence, tc.environment);
    for (auto& r : ex.outcomes) r.exec_log.clear();
    result = Json{{"outcomes", ex.outcomes}, {"partial", ex.partial}, {"runs", ex.runs}};
  } else {
    SimResult r = run(app, tc.sequence, tc.environment, tc.schedule);
    exec_log = r.exec_log;
    result = r;
  }
  if (!c.out_dir.empty()) {
    fs::path dir = out_dir(c);
    write_file(dir / "result.json", dump(result));
    std::string text;
    for (const auto& line : exec_log) text += line + "\n";
    write_file(dir / "exec.log", text);
  }
  out << dump(result);
  return kExitOk;
}

int cmd_graph(const Common& c, bool text, std::ostream& out) {
  App app = load_app(c);
  CallGraph cg = build_call_graph(app);
  if (text) out << to_adjacency_text(cg);
  else out << dump(Json(cg));
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App cli{"Detection and verification of async programming errors in app models", "apecheck"};
  cli.require_subcommand(1);
  Common c;
  int runs = 1;
  int instrument_index = -1;
  bool text = false;
  std::string schedule = "exhaustive";
  std::string test_path;

  auto app_arg = [&](CLI::App* sub) {
    sub->add_option("app", c.app_path, "Path to the .ape model")->required();
    sub->add_option("--api-config", c.api_config, "API list file");
  };
  auto limits = [&](CLI::App* sub) {
    sub->add_option("--max-traces", c.max_traces, "Maximum traces per candidate")
        ->check(CLI::PositiveNumber);
    sub->add_option("--max-len", c.max_len, "Maximum trace length")->check(CLI::PositiveNumber);
  };

  CLI::App* analyze = cli.add_subcommand("analyze", "Detect candidates and generate traces");
  app_arg(analyze);
  limits(analyze);
  analyze->add_option("--out", c.out_dir, "Write candidates.json and traces.json here");

  CLI::App* verify = cli.add_subcommand("verify", "Verify every candidate by replay");
  app_arg(verify);
  limits(verify);
  verify->add_option("--jobs", c.jobs, "Parallel workers")->check(CLI::PositiveNumber);
  verify->add_option("--out", c.out_dir, "Write summary.json and crash reports here");

  CLI::App* fuzz_cmd = cli.add_subcommand("fuzz", "Random GUI testing baseline");
  app_arg(fuzz_cmd);
  fuzz_cmd->add_option("--budget", c.budget, "Event budget per run");
  fuzz_cmd->add_option("--seed", c.seed, "Seed of the first run");
  fuzz_cmd->add_option("--runs", runs, "Number of runs (consecutive seeds)")
      ->check(CLI::PositiveNumber);
  fuzz_cmd->add_option("--jobs", c.jobs, "Parallel workers")->check(CLI::PositiveNumber);

  CLI::App* races = cli.add_subcommand("races", "Happens-before race detection baseline");
  app_arg(races);
  races->add_option("--schedule", schedule, "Logs from: exhaustive, eager or fuzz")
      ->check(CLI::IsMember({"exhaustive", "eager", "fuzz"}));
  races->add_option("--budget", c.budget, "Event budget for fuzz logs");
  races->add_option("--seed", c.seed, "Seed for fuzz logs");

  CLI::App* simulate = cli.add_subcommand("simulate", "Run a test case");
  app_arg(simulate);
  simulate->add_option("testcase", test_path, "Test case JSON")->required();
  simulate->add_option("--instrument", instrument_index, "Instrument for candidate K first");
  simulate->add_option("--out", c.out_dir, "Write result.json and exec.log here");

  CLI::App* graph = cli.add_subcommand("graph", "Print the call graph");
  app_arg(graph);
  graph->add_flag("--text", text, "Adjacency text instead of JSON");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    cli.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << cli.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }

  try {
    if (analyze->parsed()) return cmd_analyze(c, out);
    if (verify->parsed()) return cmd_verify(c, out);
    if (fuzz_cmd->parsed()) return cmd_fuzz(c, runs, out);
    if (races->parsed()) return cmd_races(c, schedule, out);
    if (simulate->parsed()) return cmd_simulate(c, test_path, instrument_index, out);
    if (graph->parsed()) return cmd_graph(c, text, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace apecheck
