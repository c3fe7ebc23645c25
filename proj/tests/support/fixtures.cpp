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


#include "fixtures.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace apecheck::testing {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ApeError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

App load_fixture(const std::string& name) {
  ParseResult r = parse_app(read_file(std::string(APECHECK_FIXTURE_DIR) + "/" + name + ".ape"));
  if (!r.ok()) {
    std::string msg = name + ":";
    for (const auto& d : r.diagnostics) msg += " " + d.str();
    throw ApeError(msg);
  }
  return std::move(*r.app);
}

std::vector<std::string> all_fixtures() {
  std::vector<std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(APECHECK_FIXTURE_DIR))
    if (e.path().extension() == ".ape") out.push_back(e.path().stem().string());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> compliant_fixtures() {
  return {"adsdroid_guarded", "adsdroid_posted",    "compliant",         "fragment_safe",
          "gisapp_posted",    "pedometer_guarded", "pedometer_posted"};
}

std::vector<std::string> gap_fixtures() {
  std::vector<std::string> out;
  for (int i = 1; i <= 10; ++i) out.push_back((i < 10 ? "gap0" : "gap") + std::to_string(i));
  return out;
}

std::vector<ApeCandidate> ui_operation_candidates(const App& app, const CallGraph& cg) {
  std::vector<ApeCandidate> out;
  for (const auto& m : app.methods) {
    for_each_stmt(m.body, [&](const Stmt& s) {
      const auto* start = std::get_if<StartAsyncStmt>(&s.node);
      if (!start) return;
      const AsyncConstructDecl* a = app.find_async(start->async);
      if (!a) return;
      for (AsyncSlot slot : {AsyncSlot::kBackground, AsyncSlot::kPostExecute}) {
        const MethodDecl* root = app.async_callback(*a, slot);
        if (!root) continue;
        // `call` statements only: operations of nested constructs belong to
        // their own start sites.
        std::set<Id> seen{root->id};
        std::vector<Id> work{root->id};
        while (!work.empty()) {
          Id cur = work.back();
          work.pop_back();
          for (const auto& e : callees_of(cg, cur)) {
            const Stmt* call = app.stmt_at(e.site);
            if (!call || !std::holds_alternative<CallStmt>(call->node)) continue;
            if (seen.insert(e.callee).second) work.push_back(e.callee);
          }
        }
        for (const Id& id : seen) {
          const MethodDecl* target = app.find_method(id);
          for_each_stmt(target->body, [&](const Stmt& op) {
            bool create = std::holds_alternative<UiCreateStmt>(op.node);
            bool ui = create || std::holds_alternative<UiAccessStmt>(op.node) ||
                      std::holds_alternative<FragmentTransactionStmt>(op.node);
            if (!ui) return;
            ApeCandidate c;
            c.method_start_thread = m.id;
            c.stmt_start_thread = {m.id, s.index};
            c.method_access_ui = id;
            c.stmt_access_ui = {id, op.index};
            c.async_id = a->id;
            c.pattern = slot == AsyncSlot::kPostExecute ? Pattern::kP3
                        : create                        ? Pattern::kP2
                                                        : Pattern::kP1;
            c.witness = {root->id};
            if (id != root->id) c.witness.push_back(id);
            out.push_back(std::move(c));
          });
        }
      }
    });
  }
  return out;
}

}  // namespace apecheck::testing
