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

// The `apecheck` command line, callable in-process.
//
//   apecheck analyze  APP [--api-config F] [--max-traces N] [--max-len N] [--out DIR]
//   apecheck verify   APP [--api-config F] [--max-traces N] [--max-len N] [--jobs N] [--out DIR]
//   apecheck fuzz     APP [--budget N] [--seed S] [--runs N] [--jobs N]
//   apecheck races    APP [--schedule exhaustive|eager|fuzz] [--budget N] [--seed S]
//   apecheck simulate APP TESTCASE.json [--instrument K] [--out DIR]
//   apecheck graph    APP [--text]
//
// Exit codes: analyze returns 1 when it finds candidates; every command
// returns 2 on unreadable or invalid input and 0 otherwise.

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace apecheck {

// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace apecheck
