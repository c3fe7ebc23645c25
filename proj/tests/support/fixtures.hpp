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


// Fixture loading and fixture-derived test inputs.

#pragma once

#include <string>
#include <vector>

#include "apecheck/callgraph.hpp"
#include "apecheck/fault_detector.hpp"

namespace apecheck::testing {

std::string read_file(const std::string& path);

// Parses fixtures/<name>.ape; throws ApeError with the diagnostics on failure.
App load_fixture(const std::string& name);

// Every fixture name (without extension), sorted.
std::vector<std::string> all_fixtures();

// Fixtures that follow all three async rules.
std::vector<std::string> compliant_fixtures();

// The ten injected-fault fixtures gap01 .. gap10.
std::vector<std::string> gap_fixtures();

// One pseudo-candidate per UI operation (ui-access, ui-create, commit) in
// a method reachable from any async callback, guarded or not, paired with
// every start site of that construct. Used to place barrier probes on
// compliant apps, where the detector reports nothing.
std::vector<ApeCandidate> ui_operation_candidates(const App& app, const CallGraph& cg);

}  // namespace apecheck::testing
