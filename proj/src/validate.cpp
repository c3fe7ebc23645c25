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

#include <map>
#include <set>

#include "apecheck/app_model.hpp"

namespace apecheck {
namespace {

class Validator {
 public:
  explicit Validator(const App& app) : app_(app) {}

  std::vector<Diagnostic> run() {
    check_identities();
    check_entry();
    check_components();
    check_asyncs();
    check_methods();
    check_bindings();
    check_probes();
    check_api_config();
    return std::move(diags_);
  }

 private:
  void report(SourceLoc loc, std::string code, std::string message) {
    diags_.push_back({loc, std::move(code), std::move(message)});
  }

  bool is_kind(const Id& id, ComponentKind kind) const {
    const ComponentDecl* c = app_.find_component(id);
    return c && c->kind == kind;
  }

  void check_identities() {
    std::set<Id> top;
    for (const auto& c : app_.components)
      if (!top.insert(c.id).second)
        report(c.loc, "duplicate-identifier", "'" + c.id + "' is declared more than once");
    for (const auto& a : app_.asyncs)
      if (!top.insert(a.id).second)
        report(a.loc, "duplicate-identifier", "'" + a.id + "' is declared more than once");
    std::set<Id> methods;
    for (const auto& m : app_.methods)
      if (!methods.insert(m.id).second)
        report(m.loc, "duplicate-identifier", "method '" + m.id + "' is declared more than once");
    std::set<Id> gui;
    for (const auto& c : app_.components)
      for (const auto& g : c.gui_objects)
        if (!gui.insert(g.id).second)
          report(c.loc, "duplicate-identifier", "gui object '" + g.id + "' is declared twice");
  }

  void check_entry() {
    if (!is_kind(app_.entry_activity, ComponentKind::kActivity)) {
      if (!app_.entry_activity.empty() && !app_.find_component(app_.entry_activity)) {
        report({}, "unresolved-identifier",
               "entry activity '" + app_.entry_activity + "' is not declared");
      } else {
        report({}, "entry-activity", "entry must name a declared activity");
      }
    }
  }

  void check_components() {
    for (const auto& c : app_.components) {
      if (c.kind == ComponentKind::kFragment) {
        if (c.host.empty()) {
          report(c.loc, "fragment-host", "fragment '" + c.id + "' declares no host activity");
        } else if (!app_.find_component(c.host)) {
          report(c.loc, "unresolved-identifier", "host activity '" + c.host + "' is not declared");
        } else if (!is_kind(c.host, ComponentKind::kActivity)) {
          report(c.loc, "fragment-host", "host of fragment '" + c.id + "' is not an activity");
        }
      } else if (!c.host.empty()) {
        report(c.loc, "fragment-host", "only fragments declare a host");
      }
      for (const auto& g : c.gui_objects)
        if (g.owner != c.id)
          report(c.loc, "gui-owner", "gui object '" + g.id + "' is owned by '" + g.owner +
                                         "' but declared in '" + c.id + "'");
      std::set<std::string> seen;
      for (const auto& mid : c.methods) {
        const MethodDecl* m = app_.find_method(mid);
        if (!m) {
          report(c.loc, "method-owner", "component lists unknown method '" + mid + "'");
          continue;
        }
        if (m->role == MethodRole::kAsyncCallback)
          report(m->loc, "method-owner", "'" + m->id + "' is an async callback inside a component");
        if (m->role == MethodRole::kLifecycleCallback) {
          if (!is_lifecycle_name(m->name))
            report(m->loc, "lifecycle-name", "'" + m->name + "' is not a lifecycle callback name");
          else if (!seen.insert(m->name).second)
            report(m->loc, "lifecycle-name", "'" + m->name + "' is declared twice in " + c.id);
        }
      }
    }
  }

  void check_asyncs() {
    for (const auto& a : app_.asyncs) {
      std::map<std::string, int> slots;
      for (const auto& mid : a.methods) {
        const MethodDecl* m = app_.find_method(mid);
        if (!m) {
          report(a.loc, "method-owner", "async lists unknown method '" + mid + "'");
          continue;
        }
        if (m->role == MethodRole::kAsyncCallback) {
          if (!slot_from_name(m->name))
            report(m->loc, "async-slots", "'" + m->name + "' is not an async callback slot");
          else
            ++slots[m->name];
        } else if (m->role != MethodRole::kPlain) {
          report(m->loc, "method-owner", "'" + m->id + "' cannot be declared inside an async");
        }
      }
      for (const auto& [name, n] : slots)
        if (n > 1) report(a.loc, "async-slots", "slot " + name + " is defined " + std::to_string(n) + " times");
      if (!slots.count("background"))
        report(a.loc, "async-slots", "async '" + a.id + "' defines no background slot");
      if (a.kind == AsyncKind::kThread) {
        for (const auto& [name, n] : slots)
          if (name != "background")
            report(a.loc, "async-slots", "thread '" + a.id + "' may define only background, not " + name);
      }
      if (a.lifecycle_aware != (a.kind == AsyncKind::kLoader))
        report(a.loc, "lifecycle-aware", "lifecycle awareness must be set exactly for loaders");
    }
  }

  void check_methods() {
    std::map<Id, int> listed;
    for (const auto& c : app_.components)
      for (const auto& mid : c.methods) ++listed[mid];
    for (const auto& a : app_.asyncs)
      for (const auto& mid : a.methods) ++listed[mid];
    for (const auto& m : app_.methods) {
      bool owner_known = app_.find_component(m.owner) || app_.find_async(m.owner);
      if (!owner_known) {
        report(m.loc, "method-owner", "owner '" + m.owner + "' of '" + m.id + "' is not declared");
      } else if (m.id != m.owner + "." + m.name || listed[m.id] != 1) {
        report(m.loc, "method-owner", "'" + m.id + "' must be listed once by its owner as " +
                                          m.owner + "." + m.name);
      }
      check_indices(m);
      check_body(m);
    }
  }

  void check_indices(const MethodDecl& m) {
    int expected = 0;
    bool dense = true;
    for_each_stmt(m.body, [&](const Stmt& s) {
      if (s.index != expected) dense = false;
      ++expected;
    });
    if (!dense || expected != m.stmt_count)
      report(m.loc, "stmt-index", "statement indices of '" + m.id + "' are not dense from 0");
  }

  void check_body(const MethodDecl& m) {
    const ApiConfig& cfg = app_.api_config;
    for_each_stmt(m.body, [&](const Stmt& s) {
      auto unresolved = [&](std::string_view what, const Id& id) {
        report(s.loc, "unresolved-identifier",
               std::string(what) + " '" + id + "' in " + m.id + " is not declared");
      };
      std::visit(
          [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, CallStmt>) {
              if (!app_.find_method(n.target)) unresolved("method", n.target);
            } else if constexpr (std::is_same_v<T, StartAsyncStmt>) {
              if (!app_.find_async(n.async)) unresolved("async construct", n.async);
              else if (n.async == m.owner)
                report(s.loc, "self-respawn", "'" + m.id + "' starts its own async construct");
            } else if constexpr (std::is_same_v<T, UiAccessStmt> || std::is_same_v<T, UiCreateStmt>) {
              if (!n.target.empty() && !app_.find_gui_object(n.target))
                unresolved("gui object", n.target);
            } else if constexpr (std::is_same_v<T, PostToUiStmt>) {
              if (!cfg.is_post_looper(n.api))
                report(s.loc, "unknown-api", "'" + n.api + "' is not a post-looper API");
            } else if constexpr (std::is_same_v<T, UiSafeCheckIfStmt>) {
              if (!cfg.is_ui_safe(n.check))
                report(s.loc, "unknown-api", "'" + n.check + "' is not a ui-safe API");
            } else if constexpr (std::is_same_v<T, StartComponentStmt>) {
              if (!is_kind(n.target, ComponentKind::kActivity)) unresolved("activity", n.target);
            } else if constexpr (std::is_same_v<T, FragmentTransactionStmt>) {
              if (!is_kind(n.target, ComponentKind::kFragment)) unresolved("fragment", n.target);
            }
          },
          s.node);
    });
  }

  void check_bindings() {
    std::set<Id> widgets;
    for (const auto& b : app_.bindings) {
      if (!widgets.insert(b.widget).second)
        report(b.loc, "duplicate-widget", "widget '" + b.widget + "' is bound more than once");
      const MethodDecl* m = app_.find_method(b.method);
      if (!m) {
        report(b.loc, "unresolved-identifier", "handler method '" + b.method + "' is not declared");
      } else if (m->role != MethodRole::kEventHandler) {
        report(b.loc, "binding-role", "'" + b.method + "' is bound to a widget but is not a handler");
      }
    }
  }

  void check_probes() {
    for (const auto& p : app_.probes) {
      if (p.kind == ProbeKind::kWait) {
        const MethodDecl* m = app_.find_method(p.site.method);
        if (!m) report({}, "unresolved-identifier", "probe method '" + p.site.method + "' is not declared");
        else if (p.site.index < 0 || p.site.index > m->stmt_count)
          report(m->loc, "stmt-index", "probe site " + p.site.str() + " is out of range");
      } else {
        if (!app_.find_component(p.component))
          report({}, "unresolved-identifier", "probe component '" + p.component + "' is not declared");
        if (!is_lifecycle_name(p.callback))
          report({}, "lifecycle-name", "probe callback '" + p.callback + "' is not a lifecycle name");
      }
    }
  }

  void check_api_config() {
    const ApiConfig& c = app_.api_config;
    const std::vector<std::string>* lists[] = {&c.ui_access, &c.ui_safe, &c.ui_create, &c.post_looper};
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = i + 1; j < 4; ++j)
        for (const auto& api : *lists[i])
          for (const auto& other : *lists[j])
            if (api == other) report({}, "api-config-disjoint", "'" + api + "' appears in two API lists");
  }

  const App& app_;
  std::vector<Diagnostic> diags_;
};

}  // namespace

std::vector<Diagnostic> validate_app(const App& app) { return Validator(app).run(); }

}  // namespace apecheck
