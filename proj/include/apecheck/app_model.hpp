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

// The app model: a miniature description of a single-GUI-thread application
// (activities, fragments, async constructs, handler bindings) together with
// the `.ape` text format used to write it down.
//
// An App is a plain value. Once built by parse_app (or by a generator that
// calls App::reindex) it is never mutated by the analyses, so one App can be
// shared by concurrent analyses and simulations.

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace apecheck {

using Id = std::string;

// Raised on contract violations of the public API (unknown ids and the like).
class ApeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SourceLoc {
  int line = 0;
  int column = 0;
};

enum class ComponentKind { kActivity, kFragment, kService, kReceiver };
enum class GuiKind { kDialog, kToast, kListAdapter, kView };
enum class MethodRole { kLifecycleCallback, kEventHandler, kAsyncCallback, kPlain };
enum class AsyncKind { kTask, kThread, kLoader, kIntentService };
enum class AsyncSlot { kPreExecute, kBackground, kPostExecute };

enum class EnvKind {
  kWifiEnabled,
  kPermissionGranted,
  kInputMatches,
  kIoAvailable,
  kStorageAvailable,
};

enum class ConstraintKind { kNone, kFormat, kEquals, kContains };

// Constraint on a text input. For kFormat the value is one of
// "email", "phone", "number"; for kContains it is a single character.
struct InputConstraint {
  ConstraintKind kind = ConstraintKind::kNone;
  std::string value;

  bool operator==(const InputConstraint&) const = default;
};

struct EnvCondition {
  EnvKind kind = EnvKind::kWifiEnabled;
  // Permission name for kPermissionGranted, widget id for kInputMatches.
  std::string subject;
  InputConstraint constraint;
  bool negated = false;

  bool operator==(const EnvCondition&) const = default;
  EnvCondition flipped() const {
    EnvCondition c = *this;
    c.negated = !c.negated;
    return c;
  }
};

bool input_satisfies(const InputConstraint& constraint, std::string_view text);

// ---------------------------------------------------------------------------
// Statements

struct Stmt;
using Block = std::vector<Stmt>;

struct CallStmt {
  Id target;
  bool operator==(const CallStmt&) const = default;
};
struct StartAsyncStmt {
  Id async;
  bool operator==(const StartAsyncStmt&) const = default;
};
struct UiAccessStmt {
  std::string api;
  Id target;
  bool operator==(const UiAccessStmt&) const = default;
};
// `target` is optional; when set, the created object (a dialog or toast) is
// attached to its owner's window.
struct UiCreateStmt {
  std::string api;
  Id target;
  bool operator==(const UiCreateStmt&) const = default;
};
struct PostToUiStmt {
  std::string api;
  Block block;
  bool operator==(const PostToUiStmt&) const;
};
// `if ([not] check()) then else`. Whether the then-branch is the one taken
// while the UI is still usable depends on the check's polarity (see
// safe_branch_is_then).
struct UiSafeCheckIfStmt {
  std::string check;
  bool negated = false;
  Block then_block;
  Block else_block;
  bool operator==(const UiSafeCheckIfStmt&) const;
};
struct EnvIfStmt {
  EnvCondition cond;
  Block then_block;
  Block else_block;
  bool operator==(const EnvIfStmt&) const;
};
// The handler runs instead of the body when `exception` evaluates false in
// the run's environment (e.g. io-available under an injected io failure).
struct TryCatchStmt {
  Block body;
  EnvCondition exception;
  Block handler;
  bool operator==(const TryCatchStmt&) const;
};
struct StartComponentStmt {
  Id target;
  bool operator==(const StartComponentStmt&) const = default;
};
struct FragmentTransactionStmt {
  Id target;
  bool operator==(const FragmentTransactionStmt&) const = default;
};
struct ReadInputStmt {
  Id widget;
  bool operator==(const ReadInputStmt&) const = default;
};
struct ReturnStmt {
  bool operator==(const ReturnStmt&) const = default;
};

using StmtNode = std::variant<CallStmt, StartAsyncStmt, UiAccessStmt, UiCreateStmt,
                              PostToUiStmt, UiSafeCheckIfStmt, EnvIfStmt, TryCatchStmt,
                              StartComponentStmt, FragmentTransactionStmt, ReadInputStmt,
                              ReturnStmt>;

struct Stmt {
  StmtNode node;
  // Pre-order position inside the enclosing method body, nested blocks
  // included. Dense from 0.
  int index = 0;
  SourceLoc loc;

  // Source locations are not part of structural identity.
  bool operator==(const Stmt& other) const {
    return index == other.index && node == other.node;
  }
};

// A (method, statement index) pair. An index equal to the method's
// statement count denotes the method exit.
struct StmtSite {
  Id method;
  int index = 0;

  auto operator<=>(const StmtSite&) const = default;
  std::string str() const { return method + ":" + std::to_string(index); }
  static std::optional<StmtSite> parse(std::string_view text);
};

// ---------------------------------------------------------------------------
// Declarations

struct MethodDecl {
  Id id;      // qualified, "<owner>.<name>"
  Id owner;   // component or async construct id
  std::string name;
  MethodRole role = MethodRole::kPlain;
  Block body;
  int stmt_count = 0;
  SourceLoc loc;

  bool operator==(const MethodDecl& o) const {
    return id == o.id && owner == o.owner && name == o.name && role == o.role &&
           body == o.body && stmt_count == o.stmt_count;
  }
};

struct GuiObjectDecl {
  Id id;
  GuiKind kind = GuiKind::kView;
  Id owner;
  bool operator==(const GuiObjectDecl&) const = default;
};

struct ComponentDecl {
  Id id;
  ComponentKind kind = ComponentKind::kActivity;
  Id host;                    // fragments only
  std::vector<Id> methods;    // declaration order
  std::vector<GuiObjectDecl> gui_objects;
  SourceLoc loc;

  bool operator==(const ComponentDecl& o) const {
    return id == o.id && kind == o.kind && host == o.host && methods == o.methods &&
           gui_objects == o.gui_objects;
  }
};

struct AsyncConstructDecl {
  Id id;
  AsyncKind kind = AsyncKind::kTask;
  bool lifecycle_aware = false;
  std::vector<Id> methods;    // callbacks and helpers, declaration order
  SourceLoc loc;

  bool operator==(const AsyncConstructDecl& o) const {
    return id == o.id && kind == o.kind && lifecycle_aware == o.lifecycle_aware &&
           methods == o.methods;
  }
};

enum class BindingEvent { kClick, kItemClick, kInput };
enum class BindingSource { kCode, kLayout };

struct HandlerBinding {
  Id widget;
  Id method;
  BindingEvent event = BindingEvent::kClick;
  BindingSource source = BindingSource::kCode;
  SourceLoc loc;

  bool operator==(const HandlerBinding& o) const {
    return widget == o.widget && method == o.method && event == o.event && source == o.source;
  }
};

struct ApiConfig {
  std::vector<std::string> ui_access;
  std::vector<std::string> ui_safe;
  std::vector<std::string> ui_create;
  std::vector<std::string> post_looper;

  bool operator==(const ApiConfig&) const = default;

  bool is_ui_access(std::string_view api) const;
  bool is_ui_safe(std::string_view api) const;
  bool is_ui_create(std::string_view api) const;
  bool is_post_looper(std::string_view api) const;
};

// Scheduling probes inserted by instrumentation. They live beside the code
// rather than in it, so statement indices are stable across instrumentation.
enum class ProbeKind { kWait, kSignal };

struct Probe {
  ProbeKind kind = ProbeKind::kWait;
  std::string semaphore;
  // kWait: blocks before statement `site` (site.index == stmt_count: before
  // the method returns).
  StmtSite site;
  // kSignal: released at the beginning of `callback` on any instance of
  // `component`.
  Id component;
  std::string callback;

  bool operator==(const Probe&) const = default;
};

class App {
 public:
  std::string name;
  std::vector<ComponentDecl> components;
  std::vector<AsyncConstructDecl> asyncs;
  std::vector<MethodDecl> methods;            // declaration order, all owners
  std::vector<HandlerBinding> bindings;
  Id entry_activity;
  ApiConfig api_config;
  std::vector<Probe> probes;

  // Rebuilds the lookup tables. Must be called after the vectors above are
  // edited.
  void reindex();

  const MethodDecl* find_method(std::string_view id) const;
  const ComponentDecl* find_component(std::string_view id) const;
  const AsyncConstructDecl* find_async(std::string_view id) const;
  const GuiObjectDecl* find_gui_object(std::string_view id) const;
  const HandlerBinding* find_binding(std::string_view widget) const;
  // First binding (in declaration order) whose handler is `method`.
  const HandlerBinding* binding_for_method(std::string_view method) const;
  // Position of the method in declaration order; -1 when unknown.
  int method_order(std::string_view id) const;

  // Callback of the async construct for the slot, or nullptr.
  const MethodDecl* async_callback(const AsyncConstructDecl& async, AsyncSlot slot) const;
  // Lifecycle callback of the component with the given name, or nullptr.
  const MethodDecl* lifecycle_callback(const ComponentDecl& component,
                                       std::string_view name) const;
  // Activity that hosts a component: the component itself for activities,
  // the host for fragments, empty otherwise.
  Id host_activity(std::string_view component) const;
  // The statement at a site (nested statements included), or nullptr.
  const Stmt* stmt_at(const StmtSite& site) const;

  bool operator==(const App& o) const {
    return name == o.name && components == o.components && asyncs == o.asyncs &&
           methods == o.methods && bindings == o.bindings && entry_activity == o.entry_activity &&
           api_config == o.api_config && probes == o.probes;
  }

 private:
  std::map<std::string, std::size_t, std::less<>> method_pos_;
  std::map<std::string, std::size_t, std::less<>> component_pos_;
  std::map<std::string, std::size_t, std::less<>> async_pos_;
  std::map<std::string, std::pair<std::size_t, std::size_t>, std::less<>> gui_pos_;
  std::map<std::string, std::size_t, std::less<>> binding_pos_;
};

// ---------------------------------------------------------------------------
// Names

inline constexpr std::string_view kLifecycleNames[] = {
    "onCreate", "onStart", "onResume", "onPause", "onStop", "onDestroy", "onRestart"};

bool is_lifecycle_name(std::string_view name);
// Ui-safe checks answer either "is the UI gone?" (isFinishing, isDestroyed,
// isRemoving, isDetached: the default) or "is the UI usable?" (isAdded,
// isResumed, isVisible, isAlive). Decided by the method name after the last
// '.'.
bool check_reports_usable(std::string_view api);
// True iff the then-branch of the check is taken while the UI is usable.
bool safe_branch_is_then(const UiSafeCheckIfStmt& stmt);
std::string_view to_string(ComponentKind kind);
std::string_view to_string(GuiKind kind);
std::string_view to_string(MethodRole role);
std::string_view to_string(AsyncKind kind);
std::string_view to_string(AsyncSlot slot);
std::string_view to_string(EnvKind kind);
std::string_view to_string(BindingEvent event);
std::optional<AsyncSlot> slot_from_name(std::string_view name);
std::string describe(const EnvCondition& cond);

// ---------------------------------------------------------------------------
// Diagnostics and parsing

struct Diagnostic {
  SourceLoc loc;
  std::string code;     // e.g. "syntax", "unresolved-identifier"
  std::string message;

  std::string str() const;
};

struct ParseResult {
  std::optional<App> app;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return app.has_value(); }
};

// The default API lists shipped with the tool (also in data/default_api_config.txt).
const ApiConfig& default_api_config();

// Parses the `[ui-access]` / `[ui-safe]` / `[ui-create]` / `[post-looper]`
// section format.
std::optional<ApiConfig> parse_api_config(std::string_view text,
                                          std::vector<Diagnostic>* diagnostics);
std::string print_api_config(const ApiConfig& config);

// Parses `.ape` source. Never throws on malformed input; failures come back
// as diagnostics with line/column positions.
ParseResult parse_app(std::string_view source, const ApiConfig& config = default_api_config());

// Structural checks over a (possibly hand-built) App. Empty iff well-formed.
std::vector<Diagnostic> validate_app(const App& app);

// Canonical `.ape` text. parse_app(print_app(a)) == a.
std::string print_app(const App& app);

// Visits every statement of a block in pre-order.
template <typename Fn>
void for_each_stmt(const Block& block, Fn&& fn);

namespace detail {
template <typename Fn>
void visit_children(const Stmt& stmt, Fn& fn) {
  std::visit(
      [&](const auto& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, PostToUiStmt>) {
          for_each_stmt(node.block, fn);
        } else if constexpr (std::is_same_v<T, UiSafeCheckIfStmt> ||
                             std::is_same_v<T, EnvIfStmt>) {
          for_each_stmt(node.then_block, fn);
          for_each_stmt(node.else_block, fn);
        } else if constexpr (std::is_same_v<T, TryCatchStmt>) {
          for_each_stmt(node.body, fn);
          for_each_stmt(node.handler, fn);
        }
      },
      stmt.node);
}
}  // namespace detail

template <typename Fn>
void for_each_stmt(const Block& block, Fn&& fn) {
  for (const Stmt& s : block) {
    fn(s);
    detail::visit_children(s, fn);
  }
}

}  // namespace apecheck
