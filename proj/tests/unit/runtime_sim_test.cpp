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

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "apecheck/callgraph.hpp"
#include "apecheck/json_io.hpp"
#include "apecheck/runtime_sim.hpp"
#include "fixtures.hpp"
#include "oracle.hpp"
#include "random_app.hpp"

namespace apecheck {
namespace {

EventSequence seq(std::vector<UiEvent> events) { return {std::move(events), {}}; }

EventSequence search_then_rotate() {
  return seq({UiEvent::launch(), UiEvent::click("search"), UiEvent::of(EventKind::kRotate)});
}

TEST(Run, AdsdroidBarrierCrashesWithBadToken) {
  App app = testing::load_fixture("adsdroid");
  auto cands = detect_apes(app, build_call_graph(app));
  SimResult r = run(instrument(app, cands[0]), search_then_rotate(), {}, {ScheduleMode::kBarrier, 0});
  ASSERT_EQ(r.status, SimStatus::kCrash);
  EXPECT_EQ(r.crash->exception, ExceptionKind::kBadToken);
  EXPECT_EQ(r.crash->thread, "ui");
  EXPECT_EQ(r.crash->event_index, 2);
  EXPECT_EQ(r.crash->site, (StmtSite{"SearchByPartName.postExecute", 0}));
  EXPECT_EQ(r.crash->method_chain.back(), "SearchByPartName.postExecute");
}

TEST(Run, AdsdroidEagerCompletes) {
  App app = testing::load_fixture("adsdroid");
  SimResult r = run(app, search_then_rotate(), {}, {ScheduleMode::kEager, 0});
  EXPECT_EQ(r.status, SimStatus::kNormal);
}

TEST(Run, GisappLooperCrashOnAsyncThread) {
  App app = testing::load_fixture("gisapp");
  Environment env;
  env.faults.insert(Fault::kStorageUnavailable);
  SimResult r = run(app, seq({UiEvent::launch(), UiEvent::click("export")}), env,
                    {ScheduleMode::kEager, 0});
  ASSERT_EQ(r.status, SimStatus::kCrash);
  EXPECT_EQ(r.crash->exception, ExceptionKind::kRuntimeExceptionLooper);
  EXPECT_EQ(r.crash->thread.rfind("async:ExportTask", 0), 0u);
  EXPECT_EQ(r.crash->environment, env);
  // With storage available the same run is clean.
  EXPECT_EQ(run(app, seq({UiEvent::launch(), UiEvent::click("export")}), {},
                {ScheduleMode::kEager, 0})
                .status,
            SimStatus::kNormal);
}

TEST(Run, ExhaustiveModeIsRejected) {
  App app = testing::load_fixture("adsdroid");
  EXPECT_THROW(run(app, search_then_rotate(), {}, {ScheduleMode::kExhaustive, 0}), ApeError);
}

TEST(Explore, AdsdroidTwoOutcomes) {
  App app = testing::load_fixture("adsdroid");
  ExploreResult ex = explore_all_schedules(app, search_then_rotate(), {});
  EXPECT_FALSE(ex.partial);
  std::set<std::string> kinds;
  for (const auto& r : ex.outcomes)
    kinds.insert(r.crash ? std::string(to_string(r.crash->exception)) : std::string(to_string(r.status)));
  EXPECT_EQ(kinds, (std::set<std::string>{"normal-completion", "BadTokenException"}));
}

TEST(Explore, NoAsyncsSingleOutcome) {
  App app = *parse_app("app A\nentry Main\nactivity Main\n  gui v view\n  lifecycle onCreate\n"
                       "    access view.setText v\n  end\nend\n")
                 .app;
  ExploreResult ex =
      explore_all_schedules(app, seq({UiEvent::launch(), UiEvent::of(EventKind::kRotate)}), {});
  ASSERT_EQ(ex.outcomes.size(), 1u);
  EXPECT_EQ(ex.outcomes[0].status, SimStatus::kNormal);
  EXPECT_EQ(ex.runs, 1u);
}

TEST(Explore, PedometerCrashesOnEveryInterleaving) {
  App app = testing::load_fixture("pedometer");
  std::size_t crashes = 0;
  ExploreResult ex = explore_all_schedules(app, seq({UiEvent::launch()}), {}, 100000, {},
                                           [&](const SimResult& r) {
                                             if (r.crash &&
                                                 r.crash->exception == ExceptionKind::kIllegalState)
                                               ++crashes;
                                           });
  EXPECT_GT(ex.runs, 0u);
  EXPECT_EQ(crashes, ex.runs);
}

TEST(Explore, BoundMarksPartial) {
  App app = testing::load_fixture("two_async");
  auto events = seq({UiEvent::launch(), UiEvent::click("leftButton"), UiEvent::click("rightButton"),
                     UiEvent::of(EventKind::kRotate)});
  ExploreResult full = explore_all_schedules(app, events, {});
  ASSERT_GT(full.runs, 2u);
  ExploreResult cut = explore_all_schedules(app, events, {}, 2);
  EXPECT_TRUE(cut.partial);
  EXPECT_EQ(cut.runs, 2u);
}

TEST(Instrument, AdsdroidSearchProbes) {
  App app = testing::load_fixture("adsdroid");
  auto cands = detect_apes(app, build_call_graph(app));
  App inst = instrument(app, cands[0]);
  ASSERT_EQ(inst.probes.size(), 2u);
  EXPECT_EQ(inst.probes[0].kind, ProbeKind::kWait);
  EXPECT_EQ(inst.probes[0].site, (StmtSite{"SearchByPartName.background", 0}));
  EXPECT_EQ(inst.probes[1].kind, ProbeKind::kSignal);
  EXPECT_EQ(inst.probes[1].component, "SearchPanel");
  EXPECT_EQ(inst.probes[1].callback, "onDestroy");
  EXPECT_EQ(inst.methods, app.methods);
}

TEST(Instrument, PedometerProbesAtAccessAndResume) {
  App app = testing::load_fixture("pedometer");
  auto cands = detect_apes(app, build_call_graph(app));
  App inst = instrument(app, cands[0]);
  ASSERT_EQ(inst.probes.size(), 2u);
  EXPECT_EQ(inst.probes[0].site, cands[0].stmt_access_ui);
  EXPECT_EQ(inst.probes[1].component, "StepHistory");
  EXPECT_EQ(inst.probes[1].callback, "onResume");
  SimResult r = run(inst, seq({UiEvent::launch()}), {}, {ScheduleMode::kBarrier, 0});
  ASSERT_TRUE(r.crash);
  EXPECT_EQ(r.crash->exception, ExceptionKind::kIllegalState);
}

TEST(Instrument, CompliantAppStillCompletes) {
  App app = testing::load_fixture("adsdroid_guarded");
  CallGraph cg = build_call_graph(app);
  for (const auto& c : testing::ui_operation_candidates(app, cg)) {
    SimResult r = run(instrument(app, c), search_then_rotate(), {}, {ScheduleMode::kBarrier, 0});
    EXPECT_EQ(r.status, SimStatus::kNormal) << c.stmt_access_ui.str() << " " << r.error;
  }
}

TEST(Run, Deterministic) {
  for (const auto& name : testing::all_fixtures()) {
    App app = testing::load_fixture(name);
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      SimOptions o;
      o.record_accesses = true;
      SimResult a = testing::random_walk(app, {}, seed, 5, o);
      SimResult b = testing::random_walk(app, {}, seed, 5, o);
      EXPECT_EQ(a, b) << name;
      EXPECT_EQ(dump(Json(a)), dump(Json(b))) << name;
    }
  }
  App app = testing::load_fixture("adsdroid");
  EXPECT_EQ(run(app, search_then_rotate(), {}, {ScheduleMode::kRandom, 9}),
            run(app, search_then_rotate(), {}, {ScheduleMode::kRandom, 9}));
}

// The postExecute of a task started before a rotation touches the dialog
// of the instance that started it, never the recreated one.
TEST(Run, GenerationCapturedAtStart) {
  App app = testing::load_fixture("adsdroid");
  SimOptions o;
  o.record_accesses = true;
  int seen = 0;
  explore_all_schedules(app, search_then_rotate(), {}, 100000, o, [&](const SimResult& r) {
    for (const auto& a : r.access_log.accesses) {
      if (a.site != StmtSite{"SearchByPartName.postExecute", 0}) continue;
      EXPECT_EQ(a.location, "gui:mSearchDialog@SearchPanel#0");
      ++seen;
    }
  });
  EXPECT_GT(seen, 0);
}

bool is_ui_op(const Stmt& s) {
  return std::holds_alternative<UiAccessStmt>(s.node) ||
         std::holds_alternative<UiCreateStmt>(s.node) ||
         std::holds_alternative<FragmentTransactionStmt>(s.node);
}

// Every crash matches a row of the rule table, and no random run ever
// takes an illegal lifecycle transition (that would throw).
TEST(Run, CrashIffViolationAndLifecycleLegality) {
  int crashes = 0;
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    App app = testing::random_app(seed);
    for (std::uint64_t walk = 0; walk < 20; ++walk) {
      SimResult r;
      ASSERT_NO_THROW(r = testing::random_walk(app, {}, walk, 6)) << seed << " " << walk;
      ASSERT_NE(r.status, SimStatus::kError) << seed << " " << r.error;
      if (!r.crash) continue;
      ++crashes;
      const CrashReport& c = *r.crash;
      const Stmt* s = app.stmt_at(c.site);
      ASSERT_NE(s, nullptr);
      ASSERT_TRUE(is_ui_op(*s)) << c.site.str();
      const auto* access = std::get_if<UiAccessStmt>(&s->node);
      const GuiObjectDecl* g = access ? app.find_gui_object(access->target) : nullptr;
      if (c.thread == "ui") {
        EXPECT_FALSE(std::holds_alternative<UiCreateStmt>(s->node));
        bool in_callback = std::any_of(c.method_chain.begin(), c.method_chain.end(), [&](const Id& m) {
          const MethodDecl* d = app.find_method(m);
          return d->role == MethodRole::kAsyncCallback && d->name == "postExecute";
        });
        EXPECT_TRUE(in_callback) << c.site.str();
        if (access) {
          EXPECT_EQ(c.exception, g && g->kind == GuiKind::kDialog ? ExceptionKind::kBadToken
                                                                  : ExceptionKind::kIllegalState);
        } else {
          EXPECT_EQ(c.exception, ExceptionKind::kIllegalState);
        }
      } else {
        EXPECT_EQ(c.thread.rfind("async:", 0), 0u);
        if (std::holds_alternative<UiCreateStmt>(s->node)) {
          EXPECT_EQ(c.exception, ExceptionKind::kRuntimeExceptionLooper);
        } else if (g && g->kind == GuiKind::kListAdapter) {
          EXPECT_EQ(c.exception, ExceptionKind::kIllegalState);
        } else {
          EXPECT_EQ(c.exception, ExceptionKind::kCalledFromWrongThread);
        }
      }
    }
  }
  EXPECT_GT(crashes, 100);
}

// Every executed method is a call-graph node reachable from the entry.
TEST(Run, ExecutedMethodsAreReachable) {
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    App app = testing::random_app(seed);
    CallGraph cg = build_call_graph(app);
    auto reach = reachable_from(cg, {app.entry_activity + ".onCreate"});
    for (std::uint64_t walk = 0; walk < 10; ++walk)
      for (const auto& m : testing::random_walk(app, {}, walk, 6).method_log)
        EXPECT_TRUE(reach.count(m)) << seed << " " << m;
  }
}

TEST(Simulation, CopiesAreIndependent) {
  App app = testing::load_fixture("adsdroid");
  Simulation a(app, {});
  a.inject(UiEvent::launch());
  Simulation b = a;
  b.inject(UiEvent::click("search"));
  EXPECT_NE(a.result(), b.result());
  Simulation c = a;
  EXPECT_EQ(a.result(), c.result());
}

TEST(Simulation, BackExitsTheApp) {
  App app = testing::load_fixture("compliant");
  Simulation s(app, {});
  s.inject(UiEvent::launch());
  EXPECT_TRUE(s.foreground());
  while (s.has_queued_ui()) s.step_ui();
  s.inject(UiEvent::of(EventKind::kBack));
  EXPECT_FALSE(s.foreground());
}

TEST(ScheduleNames, RoundTrip) {
  for (auto m : {ScheduleMode::kEager, ScheduleMode::kBarrier, ScheduleMode::kExhaustive,
                 ScheduleMode::kRandom})
    EXPECT_EQ(schedule_mode_from_name(to_string(m)), m);
  EXPECT_FALSE(schedule_mode_from_name("later"));
}

}  // namespace
}  // namespace apecheck
