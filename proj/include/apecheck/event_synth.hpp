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

// Turns a terminated trace into a user event sequence and the environment
// it needs (inputs, settings, injected faults).

#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "apecheck/app_model.hpp"
#include "apecheck/fault_detector.hpp"
#include "apecheck/trace_gen.hpp"

namespace apecheck {

enum class EventKind {
  kLaunch,
  kClick,
  kListItemClick,
  kInput,
  kRotate,
  kHome,
  kLongPressHomeThenBack,
  kScreenToggle,
  kBack,
};

std::string_view to_string(EventKind kind);
std::optional<EventKind> event_kind_from_name(std::string_view name);

struct UiEvent {
  EventKind kind = EventKind::kLaunch;
  Id widget;         // click, listItemClick, input
  int item = 0;      // listItemClick
  std::string text;  // input

  static UiEvent launch() { return {EventKind::kLaunch, {}, 0, {}}; }
  static UiEvent click(Id w) { return {EventKind::kClick, std::move(w), 0, {}}; }
  static UiEvent list_item_click(Id w, int i) { return {EventKind::kListItemClick, std::move(w), i, {}}; }
  static UiEvent input(Id w, std::string t) { return {EventKind::kInput, std::move(w), 0, std::move(t)}; }
  static UiEvent of(EventKind k) { return {k, {}, 0, {}}; }

  bool operator==(const UiEvent&) const = default;
  // "launch", "click(w)", "listItemClick(w,0)", "input(w,text)", "rotate", ...
  std::string str() const;
};

struct EventSequence {
  std::vector<UiEvent> events;
  std::vector<Id> trace_chain;  // chain of the source trace

  bool operator==(const EventSequence&) const = default;
};

enum class Fault { kIoFailure, kStorageUnavailable };

std::string_view to_string(Fault f);

struct Environment {
  std::map<Id, std::string> inputs;
  bool wifi = true;
  std::map<std::string, bool> permissions;  // absent means not granted
  std::set<Fault> faults;

  bool operator==(const Environment&) const = default;
};

// Value of `cond` in `env`. Input conditions read `texts` (current widget
// contents), falling back to env.inputs, then to "".
bool evaluate(const EnvCondition& cond, const Environment& env,
              const std::map<Id, std::string>* texts = nullptr);

enum class SynthError { kNone, kUnmappable, kUnsatisfiable, kNotTerminated };

std::string_view to_string(SynthError e);

struct SynthResult {
  std::optional<EventSequence> sequence;
  SynthError error = SynthError::kNone;
  std::string detail;
};

struct EnvResult {
  std::optional<Environment> environment;
  std::string detail;  // why the conditions cannot be met
};

// `cand` selects the trailing lifecycle event of P3 candidates (rotate, or
// home for fragment transactions); may be null.
SynthResult synthesize_events(const Trace& t, const App& app, const ApeCandidate* cand);

EnvResult infer_environment(const Trace& t, const App& app);

// Text satisfying every (possibly negated) constraint, if one exists.
std::optional<std::string> solve_input(const std::vector<EnvCondition>& conditions);

}  // namespace apecheck
