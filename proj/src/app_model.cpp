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

#include "apecheck/app_model.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

namespace apecheck {

bool PostToUiStmt::operator==(const PostToUiStmt& o) const {
  return api == o.api && block == o.block;
}
bool UiSafeCheckIfStmt::operator==(const UiSafeCheckIfStmt& o) const {
  return check == o.check && negated == o.negated && then_block == o.then_block &&
         else_block == o.else_block;
}
bool EnvIfStmt::operator==(const EnvIfStmt& o) const {
  return cond == o.cond && then_block == o.then_block && else_block == o.else_block;
}
bool TryCatchStmt::operator==(const TryCatchStmt& o) const {
  return body == o.body && exception == o.exception && handler == o.handler;
}

std::optional<StmtSite> StmtSite::parse(std::string_view text) {
  auto colon = text.rfind(':');
  if (colon == std::string_view::npos || colon == 0) return std::nullopt;
  int index = 0;
  auto digits = text.substr(colon + 1);
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), index);
  if (ec != std::errc() || ptr != digits.data() + digits.size() || index < 0) return std::nullopt;
  return StmtSite{Id(text.substr(0, colon)), index};
}

namespace {

bool all_digits(std::string_view s, std::size_t min_len, std::size_t max_len) {
  if (s.size() < min_len || s.size() > max_len) return false;
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

bool contains_api(const std::vector<std::string>& list, std::string_view api) {
  return std::find(list.begin(), list.end(), api) != list.end();
}

}  // namespace

bool input_satisfies(const InputConstraint& constraint, std::string_view text) {
  switch (constraint.kind) {
    case ConstraintKind::kNone:
      return true;
    case ConstraintKind::kEquals:
      return text == constraint.value;
    case ConstraintKind::kContains:
      return !constraint.value.empty() && text.find(constraint.value) != std::string_view::npos;
    case ConstraintKind::kFormat:
      if (constraint.value == "number") {
        auto digits = text.substr(!text.empty() && text[0] == '-' ? 1 : 0);
        return all_digits(digits, 1, 18);
      }
      if (constraint.value == "phone") return all_digits(text, 7, 15);
      if (constraint.value == "email") {
        auto at = text.find('@');
        if (at == std::string_view::npos || at == 0) return false;
        if (text.find('@', at + 1) != std::string_view::npos) return false;
        auto domain = text.substr(at + 1);
        auto dot = domain.find('.');
        if (dot == std::string_view::npos || dot == 0 || dot + 1 >= domain.size()) return false;
        return std::none_of(text.begin(), text.end(),
                            [](unsigned char c) { return std::isspace(c); });
      }
      return false;
  }
  return false;
}

bool ApiConfig::is_ui_access(std::string_view api) const { return contains_api(ui_access, api); }
bool ApiConfig::is_ui_safe(std::string_view api) const { return contains_api(ui_safe, api); }
bool ApiConfig::is_ui_create(std::string_view api) const { return contains_api(ui_create, api); }
bool ApiConfig::is_post_looper(std::string_view api) const {
  return contains_api(post_looper, api);
}

// ---------------------------------------------------------------------------

void App::reindex() {
  method_pos_.clear();
  component_pos_.clear();
  async_pos_.clear();
  gui_pos_.clear();
  binding_pos_.clear();
  for (std::size_t i = 0; i < methods.size(); ++i) method_pos_.emplace(methods[i].id, i);
  for (std::size_t i = 0; i < components.size(); ++i) {
    component_pos_.emplace(components[i].id, i);
    for (std::size_t j = 0; j < components[i].gui_objects.size(); ++j)
      gui_pos_.emplace(components[i].gui_objects[j].id, std::make_pair(i, j));
  }
  for (std::size_t i = 0; i < asyncs.size(); ++i) async_pos_.emplace(asyncs[i].id, i);
  for (std::size_t i = 0; i < bindings.size(); ++i) binding_pos_.emplace(bindings[i].widget, i);
}

const MethodDecl* App::find_method(std::string_view id) const {
  auto it = method_pos_.find(id);
  return it == method_pos_.end() ? nullptr : &methods[it->second];
}

const ComponentDecl* App::find_component(std::string_view id) const {
  auto it = component_pos_.find(id);
  return it == component_pos_.end() ? nullptr : &components[it->second];
}

const AsyncConstructDecl* App::find_async(std::string_view id) const {
  auto it = async_pos_.find(id);
  return it == async_pos_.end() ? nullptr : &asyncs[it->second];
}

const GuiObjectDecl* App::find_gui_object(std::string_view id) const {
  auto it = gui_pos_.find(id);
  if (it == gui_pos_.end()) return nullptr;
  return &components[it->second.first].gui_objects[it->second.second];
}

const HandlerBinding* App::find_binding(std::string_view widget) const {
  auto it = binding_pos_.find(widget);
  return it == binding_pos_.end() ? nullptr : &bindings[it->second];
}

const HandlerBinding* App::binding_for_method(std::string_view method) const {
  for (const auto& b : bindings)
    if (b.method == method) return &b;
  return nullptr;
}

int App::method_order(std::string_view id) const {
  auto it = method_pos_.find(id);
  return it == method_pos_.end() ? -1 : static_cast<int>(it->second);
}

const MethodDecl* App::async_callback(const AsyncConstructDecl& async, AsyncSlot slot) const {
  for (const auto& mid : async.methods) {
    const MethodDecl* m = find_method(mid);
    if (m && m->role == MethodRole::kAsyncCallback && m->name == to_string(slot)) return m;
  }
  return nullptr;
}

const MethodDecl* App::lifecycle_callback(const ComponentDecl& component,
                                          std::string_view name) const {
  for (const auto& mid : component.methods) {
    const MethodDecl* m = find_method(mid);
    if (m && m->role == MethodRole::kLifecycleCallback && m->name == name) return m;
  }
  return nullptr;
}

Id App::host_activity(std::string_view component) const {
  const ComponentDecl* c = find_component(component);
  if (!c) return {};
  if (c->kind == ComponentKind::kActivity) return c->id;
  if (c->kind == ComponentKind::kFragment) {
    const ComponentDecl* h = find_component(c->host);
    if (h && h->kind == ComponentKind::kActivity) return h->id;
  }
  return {};
}

const Stmt* App::stmt_at(const StmtSite& site) const {
  const MethodDecl* m = find_method(site.method);
  if (!m) return nullptr;
  const Stmt* found = nullptr;
  for_each_stmt(m->body, [&](const Stmt& s) {
    if (s.index == site.index) found = &s;
  });
  return found;
}

// ---------------------------------------------------------------------------

bool is_lifecycle_name(std::string_view name) {
  return std::find(std::begin(kLifecycleNames), std::end(kLifecycleNames), name) !=
         std::end(kLifecycleNames);
}

bool check_reports_usable(std::string_view api) {
  auto dot = api.rfind('.');
  std::string_view name = dot == std::string_view::npos ? api : api.substr(dot + 1);
  for (std::string_view prefix : {"isAdded", "isResumed", "isVisible", "isAlive"})
    if (name.substr(0, prefix.size()) == prefix) return true;
  return false;
}

bool safe_branch_is_then(const UiSafeCheckIfStmt& stmt) {
  return check_reports_usable(stmt.check) != stmt.negated;
}

std::string_view to_string(ComponentKind kind) {
  switch (kind) {
    case ComponentKind::kActivity: return "activity";
    case ComponentKind::kFragment: return "fragment";
    case ComponentKind::kService: return "service";
    case ComponentKind::kReceiver: return "receiver";
  }
  return "?";
}

std::string_view to_string(GuiKind kind) {
  switch (kind) {
    case GuiKind::kDialog: return "dialog";
    case GuiKind::kToast: return "toast";
    case GuiKind::kListAdapter: return "list-adapter";
    case GuiKind::kView: return "view";
  }
  return "?";
}

std::string_view to_string(MethodRole role) {
  switch (role) {
    case MethodRole::kLifecycleCallback: return "lifecycle-callback";
    case MethodRole::kEventHandler: return "event-handler";
    case MethodRole::kAsyncCallback: return "async-callback";
    case MethodRole::kPlain: return "plain";
  }
  return "?";
}

std::string_view to_string(AsyncKind kind) {
  switch (kind) {
    case AsyncKind::kTask: return "task";
    case AsyncKind::kThread: return "thread";
    case AsyncKind::kLoader: return "loader";
    case AsyncKind::kIntentService: return "intent-service";
  }
  return "?";
}

std::string_view to_string(AsyncSlot slot) {
  switch (slot) {
    case AsyncSlot::kPreExecute: return "preExecute";
    case AsyncSlot::kBackground: return "background";
    case AsyncSlot::kPostExecute: return "postExecute";
  }
  return "?";
}

std::string_view to_string(EnvKind kind) {
  switch (kind) {
    case EnvKind::kWifiEnabled: return "wifi-enabled";
    case EnvKind::kPermissionGranted: return "permission-granted";
    case EnvKind::kInputMatches: return "input-matches";
    case EnvKind::kIoAvailable: return "io-available";
    case EnvKind::kStorageAvailable: return "storage-available";
  }
  return "?";
}

std::string_view to_string(BindingEvent event) {
  switch (event) {
    case BindingEvent::kClick: return "click";
    case BindingEvent::kItemClick: return "item";
    case BindingEvent::kInput: return "input";
  }
  return "?";
}

std::optional<AsyncSlot> slot_from_name(std::string_view name) {
  for (AsyncSlot s : {AsyncSlot::kPreExecute, AsyncSlot::kBackground, AsyncSlot::kPostExecute})
    if (to_string(s) == name) return s;
  return std::nullopt;
}

std::string describe(const EnvCondition& cond) {
  std::string out = cond.negated ? "not " : "";
  out += to_string(cond.kind);
  if (cond.kind == EnvKind::kPermissionGranted || cond.kind == EnvKind::kInputMatches) {
    out += " " + cond.subject;
  }
  if (cond.kind == EnvKind::kInputMatches) {
    switch (cond.constraint.kind) {
      case ConstraintKind::kFormat: out += " format " + cond.constraint.value; break;
      case ConstraintKind::kEquals: out += " equals " + cond.constraint.value; break;
      case ConstraintKind::kContains: out += " contains " + cond.constraint.value; break;
      case ConstraintKind::kNone: break;
    }
  }
  return out;
}

std::string Diagnostic::str() const {
  std::ostringstream os;
  os << loc.line << ":" << loc.column << ": " << code << ": " << message;
  return os.str();
}

// ---------------------------------------------------------------------------

const ApiConfig& default_api_config() {
  static const ApiConfig config{
      {"dialog.dismiss", "adapter.notifyDataSetChanged", "view.setText", "fragment.commit"},
      {"activity.isFinishing", "fragment.isAdded"},
      {"toast.show", "dialog.create"},
      {"post", "runOnUiThread"},
  };
  return config;
}

std::optional<ApiConfig> parse_api_config(std::string_view text,
                                          std::vector<Diagnostic>* diagnostics) {
  ApiConfig config;
  std::vector<std::string>* section = nullptr;
  bool ok = true;
  auto report = [&](int line, std::string code, std::string message) {
    ok = false;
    if (diagnostics) diagnostics->push_back({{line, 1}, std::move(code), std::move(message)});
  };
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    auto first = raw.find_first_not_of(" \t\r");
    if (first == std::string::npos || raw[first] == '#') continue;
    auto last = raw.find_last_not_of(" \t\r");
    std::string line = raw.substr(first, last - first + 1);
    if (line.front() == '[') {
      if (line == "[ui-access]") section = &config.ui_access;
      else if (line == "[ui-safe]") section = &config.ui_safe;
      else if (line == "[ui-create]") section = &config.ui_create;
      else if (line == "[post-looper]") section = &config.post_looper;
      else report(line_no, "syntax", "unknown section " + line);
      continue;
    }
    if (!section) {
      report(line_no, "syntax", "entry outside of a section: " + line);
      continue;
    }
    if (line.find_first_of(" \t") != std::string::npos) {
      report(line_no, "syntax", "API names cannot contain whitespace: " + line);
      continue;
    }
    section->push_back(line);
  }
  const std::vector<std::string>* lists[] = {&config.ui_access, &config.ui_safe,
                                             &config.ui_create, &config.post_looper};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j)
      for (const auto& api : *lists[i])
        if (contains_api(*lists[j], api)) report(0, "api-config-disjoint", api + " listed twice");
  if (!ok) return std::nullopt;
  return config;
}

std::string print_api_config(const ApiConfig& config) {
  std::ostringstream os;
  auto section = [&](std::string_view name, const std::vector<std::string>& list) {
    os << "[" << name << "]\n";
    for (const auto& api : list) os << api << "\n";
  };
  section("ui-access", config.ui_access);
  section("ui-safe", config.ui_safe);
  section("ui-create", config.ui_create);
  section("post-looper", config.post_looper);
  return os.str();
}

}  // namespace apecheck
