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

// Static detection of async programming errors. Starting from every async
// construct whose start site is reachable from the entry activity, a
// breadth-first walk over (method, context, guarded) states follows `call`
// edges out of the construct's background and postExecute callbacks and
// reports unguarded UI operations:
//
//   context       guarded by                 reported statements
//   background    post blocks                ui-access, ui-create, commit
//   ui callback   post blocks, safe branch   ui-access, commit
//
// Patterns: P1 ui-access/commit in background, P2 ui-create in background,
// P3 ui-access/commit in a postExecute callback.

#pragma once

#include <string>
#include <vector>

#include "apecheck/app_model.hpp"
#include "apecheck/callgraph.hpp"

namespace apecheck {

enum class Pattern { kP1, kP2, kP3 };

std::string_view to_string(Pattern p);

struct ApeCandidate {
  Id method_start_thread;
  StmtSite stmt_start_thread;
  Id method_access_ui;
  StmtSite stmt_access_ui;
  Pattern pattern = Pattern::kP1;
  Id async_id;
  // Methods from the async callback down to method_access_ui.
  std::vector<Id> witness;

  bool operator==(const ApeCandidate&) const = default;
};

// A raw hit before classification.
struct RawHit {
  Id async_id;
  AsyncSlot root_slot = AsyncSlot::kBackground;
  StmtSite site;
};

std::vector<ApeCandidate> detect_apes(const App& app, const CallGraph& cg);

// Throws ApeError when the site is not a UiAccess/UiCreate/FragmentTransaction
// statement.
bool is_guarded(const App& app, const StmtSite& site, const CallGraph& cg);

// Throws ApeError for a preExecute root (never scanned).
Pattern classify_pattern(const App& app, const RawHit& hit);

}  // namespace apecheck
