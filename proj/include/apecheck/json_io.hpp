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

// JSON forms of the pipeline's results. Objects are nlohmann::json, whose
// keys are kept sorted, so dumps are byte-stable.

#pragma once

#include <json.hpp>
#include <string>

#include "apecheck/baselines.hpp"
#include "apecheck/callgraph.hpp"
#include "apecheck/event_synth.hpp"
#include "apecheck/fault_detector.hpp"
#include "apecheck/runtime_sim.hpp"
#include "apecheck/trace_gen.hpp"
#include "apecheck/verifier.hpp"

namespace apecheck {

using Json = nlohmann::json;

void to_json(Json& j, const StmtSite& s);
void to_json(Json& j, const Diagnostic& d);
void to_json(Json& j, const CallEdge& e);
void to_json(Json& j, const CallGraph& cg);
void to_json(Json& j, const ApeCandidate& c);
void to_json(Json& j, const Trace& t);
void to_json(Json& j, const UiEvent& e);
void to_json(Json& j, const EventSequence& s);
void to_json(Json& j, const Environment& e);
void to_json(Json& j, const Schedule& s);
void to_json(Json& j, const CrashReport& r);
void to_json(Json& j, const Access& a);
void to_json(Json& j, const Segment& s);
void to_json(Json& j, const AccessLog& l);
void to_json(Json& j, const SimResult& r);
void to_json(Json& j, const TestCase& t);
void to_json(Json& j, const VerificationOutcome& o);
void to_json(Json& j, const VerifySummary& s);
void to_json(Json& j, const FuzzCrash& c);
void to_json(Json& j, const FuzzResult& r);
void to_json(Json& j, const RaceReport& r);

// Readers for the inputs of `simulate`. They throw ApeError on bad input.
void from_json(const Json& j, UiEvent& e);
void from_json(const Json& j, EventSequence& s);
void from_json(const Json& j, Environment& e);
void from_json(const Json& j, Schedule& s);
void from_json(const Json& j, TestCase& t);

// Two-space indented dump with a trailing newline.
std::string dump(const Json& j);

}  // namespace apecheck
