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

#include <sstream>

#include "apecheck/app_model.hpp"

namespace apecheck {
namespace {

class Printer {
 public:
  explicit Printer(const App& app) : app_(app) {}

  std::string run() {
    if (!app_.name.empty()) line(0) << "app " << app_.name << "\n";
    if (!app_.entry_activity.empty()) line(0) << "entry " << app_.entry_activity << "\n";
    for (const auto& c : app_.components) component(c);
    for (const auto& a : app_.asyncs) async(a);
    if (!app_.bindings.empty()) os_ << "\n";
    for (const auto& b : app_.bindings) {
      os_ << "bind " << b.widget << " " << b.method << " " << to_string(b.event) << " "
          << (b.source == BindingSource::kCode ? "code" : "layout") << "\n";
    }
    if (!app_.probes.empty()) os_ << "\n";
    for (const auto& p : app_.probes) probe(p);
    return os_.str();
  }

 private:
  std::ostream& line(int depth) {
    for (int i = 0; i < depth; ++i) os_ << "  ";
    return os_;
  }

  void component(const ComponentDecl& c) {
    os_ << "\n" << to_string(c.kind) << " " << c.id;
    if (c.kind == ComponentKind::kFragment && !c.host.empty()) os_ << " host " << c.host;
    os_ << "\n";
    for (const auto& g : c.gui_objects) line(1) << "gui " << g.id << " " << to_string(g.kind) << "\n";
    for (const auto& mid : c.methods) method(mid);
    os_ << "end\n";
  }

  void async(const AsyncConstructDecl& a) {
    os_ << "\nasync " << a.id << " " << to_string(a.kind) << "\n";
    for (const auto& mid : a.methods) method(mid);
    os_ << "end\n";
  }

  void method(const Id& id) {
    const MethodDecl* m = app_.find_method(id);
    if (!m) throw ApeError("print_app: unknown method " + id);
    const char* kw = m->role == MethodRole::kLifecycleCallback ? "lifecycle"
                     : m->role == MethodRole::kEventHandler    ? "handler"
                     : m->role == MethodRole::kAsyncCallback   ? "callback"
                                                               : "method";
    line(1) << kw << " " << m->name << "\n";
    block(m->body, 2);
    line(1) << "end\n";
  }

  void block(const Block& b, int depth) {
    for (const Stmt& s : b) stmt(s, depth);
  }

  void stmt(const Stmt& s, int depth) {
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, CallStmt>) {
            line(depth) << "call " << n.target << "\n";
          } else if constexpr (std::is_same_v<T, StartAsyncStmt>) {
            line(depth) << "start " << n.async << "\n";
          } else if constexpr (std::is_same_v<T, UiAccessStmt>) {
            line(depth) << "access " << n.api << " " << n.target << "\n";
          } else if constexpr (std::is_same_v<T, UiCreateStmt>) {
            line(depth) << "create " << n.api;
            if (!n.target.empty()) os_ << " " << n.target;
            os_ << "\n";
          } else if constexpr (std::is_same_v<T, PostToUiStmt>) {
            line(depth) << "post " << n.api << "\n";
            block(n.block, depth + 1);
            line(depth) << "end\n";
          } else if constexpr (std::is_same_v<T, UiSafeCheckIfStmt>) {
            line(depth) << "safeif " << (n.negated ? "not " : "") << n.check << "\n";
            branches(n.then_block, n.else_block, depth);
          } else if constexpr (std::is_same_v<T, EnvIfStmt>) {
            line(depth) << "envif " << describe(n.cond) << "\n";
            branches(n.then_block, n.else_block, depth);
          } else if constexpr (std::is_same_v<T, TryCatchStmt>) {
            line(depth) << "try\n";
            block(n.body, depth + 1);
            line(depth) << "catch " << describe(n.exception) << "\n";
            block(n.handler, depth + 1);
            line(depth) << "end\n";
          } else if constexpr (std::is_same_v<T, StartComponentStmt>) {
            line(depth) << "startactivity " << n.target << "\n";
          } else if constexpr (std::is_same_v<T, FragmentTransactionStmt>) {
            line(depth) << "commit " << n.target << "\n";
          } else if constexpr (std::is_same_v<T, ReadInputStmt>) {
            line(depth) << "read " << n.widget << "\n";
          } else {
            line(depth) << "return\n";
          }
        },
        s.node);
  }

  void branches(const Block& then_block, const Block& else_block, int depth) {
    block(then_block, depth + 1);
    if (!else_block.empty()) {
      line(depth) << "else\n";
      block(else_block, depth + 1);
    }
    line(depth) << "end\n";
  }

  void probe(const Probe& p) {
    if (p.kind == ProbeKind::kWait) {
      const MethodDecl* m = app_.find_method(p.site.method);
      os_ << "probe wait " << p.semaphore << " " << p.site.method << " ";
      if (m && p.site.index == m->stmt_count) os_ << "exit";
      else os_ << p.site.index;
      os_ << "\n";
    } else {
      os_ << "probe signal " << p.semaphore << " " << p.component << " " << p.callback << "\n";
    }
  }

  const App& app_;
  std::ostringstream os_;
};

}  // namespace

std::string print_app(const App& app) { return Printer(app).run(); }

}  // namespace apecheck
