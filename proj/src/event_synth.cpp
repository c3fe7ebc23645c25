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

#include "apecheck/event_synth.hpp"

#include <algorithm>

namespace apecheck {
namespace {

constexpr const char* kDefaultInput = "text";

std::string canonical_value(const InputConstraint& c) {
  switch (c.kind) {
    case ConstraintKind::kFormat:
      if (c.value == "email") return "a@b.co";
      if (c.value == "phone") return "5551234";
      return "1";
    case ConstraintKind::kEquals:
    case ConstraintKind::kContains:
      return c.value;
    case ConstraintKind::kNone:
      break;
  }
  return kDefaultInput;
}

struct EventName {
  EventKind kind;
  std::string_view name;
};

constexpr EventName kEventNames[] = {
    {EventKind::kLaunch, "launch"},
    {EventKind::kClick, "click"},
    {EventKind::kListItemClick, "listItemClick"},
    {EventKind::kInput, "input"},
    {EventKind::kRotate, "rotate"},
    {EventKind::kHome, "home"},
    {EventKind::kLongPressHomeThenBack, "longPressHomeThenBack"},
    {EventKind::kScreenToggle, "screenToggle"},
    {EventKind::kBack, "back"},
};

}  // namespace

std::string_view to_string(EventKind kind) {
  for (const auto& e : kEventNames)
    if (e.kind == kind) return e.name;
  return "?";
}

std::optional<EventKind> event_kind_from_name(std::string_view name) {
  for (const auto& e : kEventNames)
    if (e.name == name) return e.kind;
  return std::nullopt;
}

std::string UiEvent::str() const {
  std::string out(to_string(kind));
  switch (kind) {
    case EventKind::kClick: return out + "(" + widget + ")";
    case EventKind::kListItemClick: return out + "(" + widget + "," + std::to_string(item) + ")";
    case EventKind::kInput: return out + "(" + widget + "," + text + ")";
    default: return out;
  }
}

std::string_view to_string(Fault f) {
  return f == Fault::kIoFailure ? "io-failure" : "storage-unavailable";
}

std::string_view to_string(SynthError e) {
  switch (e) {
    case SynthError::kNone: return "none";
    case SynthError::kUnmappable: return "unmappable";
    case SynthError::kUnsatisfiable: return "unsatisfiable-environment";
    case SynthError::kNotTerminated: return "not-terminated";
  }
  return "?";
}

bool evaluate(const EnvCondition& cond, const Environment& env,
              const std::map<Id, std::string>* texts) {
  bool value = false;
  switch (cond.kind) {
    case EnvKind::kWifiEnabled:
      value = env.wifi;
      break;
    case EnvKind::kPermissionGranted: {
      auto it = env.permissions.find(cond.subject);
      value = it != env.permissions.end() && it->second;
      break;
    }
    case EnvKind::kInputMatches: {
      std::string text;
      if (texts && texts->count(cond.subject)) {
        text = texts->at(cond.subject);
      } else if (env.inputs.count(cond.subject)) {
        text = env.inputs.at(cond.subject);
      }
      value = input_satisfies(cond.constraint, text);
      break;
    }
    case EnvKind::kIoAvailable:
      value = !env.faults.count(Fault::kIoFailure);
      break;
    case EnvKind::kStorageAvailable:
      value = !env.faults.count(Fault::kStorageUnavailable);
      break;
  }
  return value != cond.negated;
}

std::optional<std::string> solve_input(const std::vector<EnvCondition>& conditions) {
  std::vector<std::string> candidates;
  for (const auto& c : conditions)
    if (!c.negated) candidates.push_back(canonical_value(c.constraint));
  for (const char* v : {"", "#", kDefaultInput, "a@b.co", "5551234", "1"}) candidates.emplace_back(v);
  for (const auto& v : candidates) {
    bool ok = std::all_of(conditions.begin(), conditions.end(), [&](const EnvCondition& c) {
      return input_satisfies(c.constraint, v) != c.negated;
    });
    if (ok) return v;
  }
  return std::nullopt;
}

EnvResult infer_environment(const Trace& t, const App& app) {
  (void)app;
  EnvResult result;
  Environment env;
  std::map<std::string, bool> required;  // setting key -> value
  std::map<Id, std::vector<EnvCondition>> inputs;
  auto require = [&](const std::string& key, bool value) {
    auto [it, inserted] = required.emplace(key, value);
    if (!inserted && it->second != value) {
      result.detail = "conditions require " + key + " both on and off";
      return false;
    }
    return true;
  };
  for (const auto& c : t.conditions) {
    bool holds = !c.negated;
    bool ok = true;
    switch (c.kind) {
      case EnvKind::kWifiEnabled: ok = require("wifi", holds); break;
      case EnvKind::kPermissionGranted: ok = require("permission:" + c.subject, holds); break;
      case EnvKind::kIoAvailable: ok = require("io", holds); break;
      case EnvKind::kStorageAvailable: ok = require("storage", holds); break;
      case EnvKind::kInputMatches: inputs[c.subject].push_back(c); break;
    }
    if (!ok) return result;
  }
  for (const auto& [key, value] : required) {
    if (key == "wifi") env.wifi = value;
    else if (key == "io" && !value) env.faults.insert(Fault::kIoFailure);
    else if (key == "storage" && !value) env.faults.insert(Fault::kStorageUnavailable);
    else if (key.rfind("permission:", 0) == 0) env.permissions[key.substr(11)] = value;
  }
  for (const auto& [widget, conds] : inputs) {
    auto value = solve_input(conds);
    if (!value) {
      result.detail = "no text satisfies the constraints on " + widget;
      return result;
    }
    env.inputs[widget] = *value;
  }
  result.environment = std::move(env);
  return result;
}

SynthResult synthesize_events(const Trace& t, const App& app, const ApeCandidate* cand) {
  SynthResult result;
  if (t.state != TraceState::kTerminated) {
    result.error = SynthError::kNotTerminated;
    result.detail = "trace is not terminated";
    return result;
  }
  EnvResult env = infer_environment(t, app);
  EventSequence seq;
  seq.trace_chain = t.chain;
  seq.events.push_back(UiEvent::launch());
  bool backgrounded = false;
  auto emit = [&](UiEvent e) {
    bool needs_foreground = e.kind != EventKind::kLaunch && e.kind != EventKind::kHome &&
                            e.kind != EventKind::kLongPressHomeThenBack;
    if (backgrounded && needs_foreground) {
      seq.events.push_back(UiEvent::launch());
      backgrounded = false;
    }
    if (e.kind == EventKind::kHome) backgrounded = true;
    if (e.kind == EventKind::kLongPressHomeThenBack || e.kind == EventKind::kLaunch)
      backgrounded = false;
    seq.events.push_back(std::move(e));
  };
  for (auto it = t.chain.rbegin(); it != t.chain.rend(); ++it) {
    const MethodDecl* m = app.find_method(*it);
    if (!m) continue;
    if (m->role == MethodRole::kEventHandler) {
      const HandlerBinding* b = app.binding_for_method(m->id);
      if (!b) {
        result.error = SynthError::kUnmappable;
        result.detail = "handler " + m->id + " has no widget binding";
        return result;
      }
      switch (b->event) {
        case BindingEvent::kClick: emit(UiEvent::click(b->widget)); break;
        case BindingEvent::kItemClick: emit(UiEvent::list_item_click(b->widget, 0)); break;
        case BindingEvent::kInput: {
          std::string text = kDefaultInput;
          if (env.environment && env.environment->inputs.count(b->widget))
            text = env.environment->inputs.at(b->widget);
          emit(UiEvent::input(b->widget, text));
          break;
        }
      }
    } else if (m->role == MethodRole::kLifecycleCallback) {
      if (m->name == "onDestroy") emit(UiEvent::of(EventKind::kRotate));
      else if (m->name == "onRestart") emit(UiEvent::of(EventKind::kLongPressHomeThenBack));
      else if (m->name == "onStop") emit(UiEvent::of(EventKind::kHome));
      else if (m->name == "onPause") emit(UiEvent::of(EventKind::kScreenToggle));
    }
  }
  if (cand && cand->pattern == Pattern::kP3) {
    const Stmt* s = app.stmt_at(cand->stmt_access_ui);
    bool commit = s && std::holds_alternative<FragmentTransactionStmt>(s->node);
    emit(UiEvent::of(commit ? EventKind::kHome : EventKind::kRotate));
  }
  result.sequence = std::move(seq);
  return result;
}

}  // namespace apecheck
