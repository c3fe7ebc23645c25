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

#include "apecheck/json_io.hpp"

namespace apecheck {
namespace {

template <typename T>
std::string str(const T& v) {
  return std::string(to_string(v));
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw ApeError(std::string("missing field '") + key + "'");
  return j.at(key);
}

}  // namespace

void to_json(Json& j, const StmtSite& s) { j = s.str(); }

void to_json(Json& j, const Diagnostic& d) { j = d.str(); }

void to_json(Json& j, const CallEdge& e) {
  j = Json{{"callee", e.callee}, {"caller", e.caller}, {"kind", str(e.kind)}, {"site", e.site}};
}

void to_json(Json& j, const CallGraph& cg) {
  j = Json{{"edges", cg.edges}, {"nodes", cg.nodes}};
}

void to_json(Json& j, const ApeCandidate& c) {
  j = Json{{"async", c.async_id},
           {"method_access_ui", c.method_access_ui},
           {"method_start_thread", c.method_start_thread},
           {"pattern", str(c.pattern)},
           {"stmt_access_ui", c.stmt_access_ui},
           {"stmt_start_thread", c.stmt_start_thread},
           {"witness", c.witness}};
}

void to_json(Json& j, const Trace& t) {
  Json conds = Json::array();
  for (const auto& c : t.conditions) conds.push_back(describe(c));
  j = Json{{"chain", t.chain}, {"conditions", conds}, {"state", str(t.state)}};
}

void to_json(Json& j, const UiEvent& e) {
  j = Json{{"kind", str(e.kind)}};
  switch (e.kind) {
    case EventKind::kClick: j["widget"] = e.widget; break;
    case EventKind::kListItemClick:
      j["widget"] = e.widget;
      j["item"] = e.item;
      break;
    case EventKind::kInput:
      j["widget"] = e.widget;
      j["text"] = e.text;
      break;
    default: break;
  }
}

void to_json(Json& j, const EventSequence& s) {
  j = Json{{"events", s.events}, {"trace_chain", s.trace_chain}};
}

void to_json(Json& j, const Environment& e) {
  Json faults = Json::array();
  for (Fault f : e.faults) faults.push_back(str(f));
  j = Json{{"faults", faults},
           {"inputs", Json(e.inputs)},
           {"permissions", Json(e.permissions)},
           {"wifi", e.wifi}};
}

void to_json(Json& j, const Schedule& s) {
  j = Json{{"mode", str(s.mode)}, {"seed", s.seed}};
}

void to_json(Json& j, const CrashReport& r) {
  j = Json{{"environment", r.environment},
           {"event_index", r.event_index},
           {"exception", str(r.exception)},
           {"method_chain", r.method_chain},
           {"site", r.site},
           {"thread", r.thread}};
}

void to_json(Json& j, const Access& a) {
  j = Json{{"location", a.location},
           {"method", a.method},
           {"segment", a.segment},
           {"site", a.site ? Json(*a.site) : Json(nullptr)},
           {"thread", a.thread},
           {"write", a.write}};
}

void to_json(Json& j, const Segment& s) {
  j = Json{{"id", s.id}, {"label", s.label}, {"preds", s.preds}, {"thread", s.thread}};
}

void to_json(Json& j, const AccessLog& l) {
  j = Json{{"accesses", l.accesses}, {"segments", l.segments}};
}

void to_json(Json& j, const SimResult& r) {
  j = Json{{"events_injected", r.events_injected},
           {"method_log", r.method_log},
           {"status", str(r.status)},
           {"ticks", r.ticks}};
  if (r.crash) j["crash"] = *r.crash;
  if (!r.error.empty()) j["error"] = r.error;
  if (!r.exec_log.empty()) j["exec_log"] = r.exec_log;
  if (!r.access_log.segments.empty()) j["access_log"] = r.access_log;
}

void to_json(Json& j, const TestCase& t) {
  j = Json{{"environment", t.environment}, {"schedule", t.schedule}, {"sequence", t.sequence}};
}

void to_json(Json& j, const VerificationOutcome& o) {
  j = Json{{"candidate", o.candidate},
           {"collateral", o.collateral},
           {"status", str(o.status)},
           {"traces_terminated", o.traces_terminated}};
  if (o.report) j["report"] = *o.report;
  if (o.test_case) j["test_case"] = *o.test_case;
  if (!o.detail.empty()) j["detail"] = o.detail;
}

void to_json(Json& j, const VerifySummary& s) {
  j = Json{{"detected", s.detected},
           {"fp_suspects", s.fp_suspects},
           {"outcomes", s.outcomes},
           {"processed", s.processed},
           {"reproduced", s.reproduced}};
}

void to_json(Json& j, const FuzzCrash& c) {
  j = Json{{"events_to_first", c.events_to_first}, {"report", c.report}, {"ticks", c.ticks}};
}

void to_json(Json& j, const FuzzResult& r) {
  j = Json{{"crashes", r.crashes},
           {"event_budget", r.event_budget},
           {"events_used", r.events_used},
           {"restarts", r.restarts},
           {"seed", r.seed}};
}

void to_json(Json& j, const RaceReport& r) {
  j = Json{{"a", r.a}, {"b", r.b}, {"hb_related", r.hb_related}};
}

void from_json(const Json& j, UiEvent& e) {
  auto kind = event_kind_from_name(field(j, "kind").get<std::string>());
  if (!kind) throw ApeError("unknown event kind " + j.at("kind").dump());
  e = UiEvent::of(*kind);
  if (*kind == EventKind::kClick || *kind == EventKind::kListItemClick || *kind == EventKind::kInput)
    e.widget = field(j, "widget").get<std::string>();
  if (*kind == EventKind::kListItemClick) e.item = j.value("item", 0);
  if (*kind == EventKind::kInput) e.text = j.value("text", std::string());
}

void from_json(const Json& j, EventSequence& s) {
  s = {};
  for (const auto& e : field(j, "events")) s.events.push_back(e.get<UiEvent>());
  if (j.contains("trace_chain")) s.trace_chain = j.at("trace_chain").get<std::vector<Id>>();
}

void from_json(const Json& j, Environment& e) {
  e = {};
  if (!j.is_object()) throw ApeError("environment must be an object");
  if (j.contains("inputs")) e.inputs = j.at("inputs").get<std::map<Id, std::string>>();
  if (j.contains("wifi")) e.wifi = j.at("wifi").get<bool>();
  if (j.contains("permissions"))
    e.permissions = j.at("permissions").get<std::map<std::string, bool>>();
  if (j.contains("faults")) {
    for (const auto& f : j.at("faults")) {
      std::string name = f.get<std::string>();
      if (name == "io-failure") e.faults.insert(Fault::kIoFailure);
      else if (name == "storage-unavailable") e.faults.insert(Fault::kStorageUnavailable);
      else throw ApeError("unknown fault " + name);
    }
  }
}

void from_json(const Json& j, Schedule& s) {
  auto mode = schedule_mode_from_name(field(j, "mode").get<std::string>());
  if (!mode) throw ApeError("unknown schedule mode " + j.at("mode").dump());
  s.mode = *mode;
  s.seed = j.value("seed", std::uint64_t{0});
}

void from_json(const Json& j, TestCase& t) {
  t.sequence = field(j, "sequence").get<EventSequence>();
  t.environment = j.contains("environment") ? j.at("environment").get<Environment>() : Environment{};
  t.schedule = j.contains("schedule") ? j.at("schedule").get<Schedule>() : Schedule{};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace apecheck
