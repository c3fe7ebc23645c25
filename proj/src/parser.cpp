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

// Recursive-descent parser for the line-oriented `.ape` format. Every line
// holds one declaration or statement introduced by a keyword; blocks close
// with `end`. Indentation is ignored and `#` starts a comment token.

#include <set>
#include <sstream>

#include "apecheck/app_model.hpp"

namespace apecheck {
namespace {

struct Token {
  std::string text;
  int column = 1;
};

struct Line {
  int number = 0;
  std::vector<Token> tokens;
  SourceLoc loc() const { return {number, tokens.empty() ? 1 : tokens.front().column}; }
};

std::vector<Line> tokenize(std::string_view source) {
  std::vector<Line> lines;
  int number = 0;
  std::size_t start = 0;
  while (start <= source.size()) {
    std::size_t end = source.find('\n', start);
    if (end == std::string_view::npos) end = source.size();
    std::string_view raw = source.substr(start, end - start);
    ++number;
    Line line{number, {}};
    std::size_t i = 0;
    while (i < raw.size()) {
      while (i < raw.size() && (raw[i] == ' ' || raw[i] == '\t' || raw[i] == '\r')) ++i;
      if (i >= raw.size()) break;
      if (raw[i] == '#') break;
      std::size_t j = i;
      while (j < raw.size() && raw[j] != ' ' && raw[j] != '\t' && raw[j] != '\r') ++j;
      line.tokens.push_back({std::string(raw.substr(i, j - i)), static_cast<int>(i) + 1});
      i = j;
    }
    if (!line.tokens.empty()) lines.push_back(std::move(line));
    if (end == source.size()) break;
    start = end + 1;
  }
  return lines;
}

class Parser {
 public:
  Parser(std::string_view source, const ApiConfig& config) : lines_(tokenize(source)) {
    app_.api_config = config;
  }

  ParseResult run() {
    while (pos_ < lines_.size()) parse_top();
    finish();
    ParseResult result;
    result.diagnostics = std::move(diags_);
    if (result.diagnostics.empty()) result.app = std::move(app_);
    return result;
  }

 private:
  void error(SourceLoc loc, std::string code, std::string message) {
    diags_.push_back({loc, std::move(code), std::move(message)});
  }
  void error_at(const Line& line, std::size_t token, std::string code, std::string message) {
    SourceLoc loc{line.number, token < line.tokens.size() ? line.tokens[token].column : 1};
    error(loc, std::move(code), std::move(message));
  }

  bool expect_arity(const Line& line, std::size_t min, std::size_t max) {
    std::size_t n = line.tokens.size();
    if (n < min || n > max) {
      error(line.loc(), "syntax",
            "'" + line.tokens.front().text + "' takes " + std::to_string(min - 1) +
                (max != min ? "-" + std::to_string(max - 1) : "") + " operand(s)");
      return false;
    }
    return true;
  }

  void declare_top_id(const Id& id, SourceLoc loc) {
    if (!top_ids_.insert(id).second)
      error(loc, "duplicate-identifier", "'" + id + "' is declared more than once");
  }

  // -- top level -----------------------------------------------------------

  void parse_top() {
    const Line& line = lines_[pos_++];
    const std::string& kw = line.tokens.front().text;
    if (kw == "app") {
      if (expect_arity(line, 2, 2)) app_.name = line.tokens[1].text;
    } else if (kw == "entry") {
      if (expect_arity(line, 2, 2)) {
        app_.entry_activity = line.tokens[1].text;
        entry_loc_ = {line.number, line.tokens[1].column};
      }
    } else if (kw == "activity" || kw == "service" || kw == "receiver" || kw == "fragment") {
      parse_component(line);
    } else if (kw == "async") {
      parse_async(line);
    } else if (kw == "bind") {
      parse_bind(line);
    } else if (kw == "probe") {
      parse_probe(line);
    } else {
      error(line.loc(), "syntax", "unexpected '" + kw + "' at top level");
    }
  }

  void parse_component(const Line& head) {
    ComponentDecl c;
    c.loc = head.loc();
    const std::string& kw = head.tokens[0].text;
    c.kind = kw == "activity"   ? ComponentKind::kActivity
             : kw == "service"  ? ComponentKind::kService
             : kw == "receiver" ? ComponentKind::kReceiver
                                : ComponentKind::kFragment;
    bool ok = true;
    if (c.kind == ComponentKind::kFragment) {
      if (head.tokens.size() == 4 && head.tokens[2].text == "host") {
        c.host = head.tokens[3].text;
        host_refs_.push_back({c.host, {head.number, head.tokens[3].column}});
      } else if (head.tokens.size() != 2) {
        error(head.loc(), "syntax", "expected 'fragment <id> [host <activity>]'");
        ok = false;
      }
    } else {
      ok = expect_arity(head, 2, 2);
    }
    c.id = head.tokens.size() > 1 ? head.tokens[1].text : std::string("?");
    if (ok) declare_top_id(c.id, head.loc());

    while (true) {
      if (pos_ >= lines_.size()) {
        error(head.loc(), "syntax", "missing 'end' for " + kw + " " + c.id);
        break;
      }
      const Line& line = lines_[pos_++];
      const std::string& k = line.tokens.front().text;
      if (k == "end") {
        expect_arity(line, 1, 1);
        break;
      }
      if (k == "gui") {
        if (!expect_arity(line, 3, 3)) continue;
        GuiObjectDecl g{line.tokens[1].text, GuiKind::kView, c.id};
        const std::string& gk = line.tokens[2].text;
        if (gk == "dialog") g.kind = GuiKind::kDialog;
        else if (gk == "toast") g.kind = GuiKind::kToast;
        else if (gk == "list-adapter") g.kind = GuiKind::kListAdapter;
        else if (gk == "view") g.kind = GuiKind::kView;
        else {
          error_at(line, 2, "syntax", "unknown gui object kind '" + gk + "'");
          continue;
        }
        if (!gui_ids_.insert(g.id).second)
          error(line.loc(), "duplicate-identifier", "gui object '" + g.id + "' is declared twice");
        c.gui_objects.push_back(std::move(g));
      } else if (k == "lifecycle" || k == "handler" || k == "method") {
        if (!expect_arity(line, 2, 2)) {
          skip_block();
          continue;
        }
        MethodRole role = k == "lifecycle" ? MethodRole::kLifecycleCallback
                          : k == "handler" ? MethodRole::kEventHandler
                                           : MethodRole::kPlain;
        if (role == MethodRole::kLifecycleCallback && !is_lifecycle_name(line.tokens[1].text)) {
          error_at(line, 1, "illegal-lifecycle-callback",
                   "'" + line.tokens[1].text + "' is not a lifecycle callback name");
        }
        MethodDecl m = parse_method(line, c.id, role);
        c.methods.push_back(m.id);
        component_methods_.push_back(std::move(m));
      } else {
        error(line.loc(), "syntax", "unexpected '" + k + "' inside " + kw + " " + c.id);
      }
    }
    app_.components.push_back(std::move(c));
  }

  void parse_async(const Line& head) {
    AsyncConstructDecl a;
    a.loc = head.loc();
    bool ok = expect_arity(head, 3, 3);
    a.id = head.tokens.size() > 1 ? head.tokens[1].text : std::string("?");
    if (ok) {
      const std::string& k = head.tokens[2].text;
      if (k == "task") a.kind = AsyncKind::kTask;
      else if (k == "thread") a.kind = AsyncKind::kThread;
      else if (k == "loader") a.kind = AsyncKind::kLoader;
      else if (k == "intent-service") a.kind = AsyncKind::kIntentService;
      else error_at(head, 2, "syntax", "unknown async kind '" + k + "'");
      declare_top_id(a.id, head.loc());
    }
    a.lifecycle_aware = a.kind == AsyncKind::kLoader;
    while (true) {
      if (pos_ >= lines_.size()) {
        error(head.loc(), "syntax", "missing 'end' for async " + a.id);
        break;
      }
      const Line& line = lines_[pos_++];
      const std::string& k = line.tokens.front().text;
      if (k == "end") {
        expect_arity(line, 1, 1);
        break;
      }
      if (k == "callback" || k == "method") {
        if (!expect_arity(line, 2, 2)) {
          skip_block();
          continue;
        }
        MethodRole role = k == "callback" ? MethodRole::kAsyncCallback : MethodRole::kPlain;
        if (role == MethodRole::kAsyncCallback && !slot_from_name(line.tokens[1].text)) {
          error_at(line, 1, "syntax",
                   "'" + line.tokens[1].text +
                       "' is not an async callback slot (preExecute, background, postExecute)");
        }
        MethodDecl m = parse_method(line, a.id, role);
        a.methods.push_back(m.id);
        async_methods_.push_back(std::move(m));
      } else {
        error(line.loc(), "syntax", "unexpected '" + k + "' inside async " + a.id);
      }
    }
    app_.asyncs.push_back(std::move(a));
  }

  void parse_bind(const Line& line) {
    if (!expect_arity(line, 3, 5)) return;
    HandlerBinding b;
    b.widget = line.tokens[1].text;
    b.method = line.tokens[2].text;
    b.loc = line.loc();
    for (std::size_t i = 3; i < line.tokens.size(); ++i) {
      const std::string& t = line.tokens[i].text;
      if (t == "click") b.event = BindingEvent::kClick;
      else if (t == "item") b.event = BindingEvent::kItemClick;
      else if (t == "input") b.event = BindingEvent::kInput;
      else if (t == "code") b.source = BindingSource::kCode;
      else if (t == "layout") b.source = BindingSource::kLayout;
      else error_at(line, i, "syntax", "unknown binding attribute '" + t + "'");
    }
    if (!widget_ids_.insert(b.widget).second)
      error(line.loc(), "duplicate-identifier", "widget '" + b.widget + "' is bound twice");
    binding_refs_.push_back({b.method, {line.number, line.tokens[2].column}});
    app_.bindings.push_back(std::move(b));
  }

  void parse_probe(const Line& line) {
    if (!expect_arity(line, 5, 5)) return;
    Probe p;
    p.semaphore = line.tokens[2].text;
    if (line.tokens[1].text == "wait") {
      p.kind = ProbeKind::kWait;
      p.site.method = line.tokens[3].text;
      const std::string& where = line.tokens[4].text;
      if (where == "exit") {
        p.site.index = -1;  // fixed up once the method is known
      } else {
        auto site = StmtSite::parse("x:" + where);
        if (!site) {
          error_at(line, 4, "syntax", "expected a statement index or 'exit'");
          return;
        }
        p.site.index = site->index;
      }
      probe_method_refs_.push_back({p.site.method, {line.number, line.tokens[3].column}});
    } else if (line.tokens[1].text == "signal") {
      p.kind = ProbeKind::kSignal;
      p.component = line.tokens[3].text;
      p.callback = line.tokens[4].text;
      if (!is_lifecycle_name(p.callback))
        error_at(line, 4, "illegal-lifecycle-callback", "'" + p.callback + "' is not a lifecycle callback");
      probe_component_refs_.push_back({p.component, {line.number, line.tokens[3].column}});
    } else {
      error_at(line, 1, "syntax", "expected 'wait' or 'signal'");
      return;
    }
    app_.probes.push_back(std::move(p));
  }

  void skip_block() {
    int depth = 1;
    while (pos_ < lines_.size() && depth > 0) {
      const std::string& k = lines_[pos_++].tokens.front().text;
      if (k == "end") --depth;
      else if (k == "post" || k == "safeif" || k == "envif" || k == "try" || k == "lifecycle" ||
               k == "handler" || k == "method" || k == "callback")
        ++depth;
    }
  }

  // -- methods and statements ------------------------------------------------

  MethodDecl parse_method(const Line& head, const Id& owner, MethodRole role) {
    MethodDecl m;
    m.owner = owner;
    m.name = head.tokens[1].text;
    m.id = owner + "." + m.name;
    m.role = role;
    m.loc = head.loc();
    if (!method_ids_.insert(m.id).second)
      error(head.loc(), "duplicate-identifier", "method '" + m.id + "' is declared twice");
    current_owner_ = owner;
    std::string terminator;
    m.body = parse_block(&terminator);
    if (terminator != "end") {
      if (terminator.empty())
        error(head.loc(), "syntax", "missing 'end' for method " + m.id);
      else
        error(head.loc(), "syntax", "unexpected '" + terminator + "' in method " + m.id);
    }
    int next = 0;
    number(m.body, next);
    m.stmt_count = next;
    return m;
  }

  static void number(Block& block, int& next) {
    for (Stmt& s : block) {
      s.index = next++;
      std::visit(
          [&](auto& node) {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, PostToUiStmt>) {
              number(node.block, next);
            } else if constexpr (std::is_same_v<T, UiSafeCheckIfStmt> ||
                                 std::is_same_v<T, EnvIfStmt>) {
              number(node.then_block, next);
              number(node.else_block, next);
            } else if constexpr (std::is_same_v<T, TryCatchStmt>) {
              number(node.body, next);
              number(node.handler, next);
            }
          },
          s.node);
    }
  }

  // Parses statements until 'end', 'else' or 'catch' (returned through
  // `terminator`, consumed) or end of input (terminator left empty).
  Block parse_block(std::string* terminator) {
    Block block;
    terminator->clear();
    while (pos_ < lines_.size()) {
      const Line& line = lines_[pos_++];
      const std::string& k = line.tokens.front().text;
      if (k == "end" || k == "else" || k == "catch") {
        *terminator = k;
        terminator_line_ = &line;
        return block;
      }
      if (auto stmt = parse_stmt(line)) block.push_back(std::move(*stmt));
    }
    return block;
  }

  std::optional<EnvCondition> parse_condition(const Line& line, std::size_t at) {
    const auto& t = line.tokens;
    EnvCondition c;
    if (at < t.size() && t[at].text == "not") {
      c.negated = true;
      ++at;
    }
    if (at >= t.size()) {
      error(line.loc(), "syntax", "missing condition");
      return std::nullopt;
    }
    const std::string& k = t[at].text;
    std::size_t rest = t.size() - at - 1;
    auto bad = [&](std::string what) {
      error_at(line, at, "syntax", std::move(what));
      return std::nullopt;
    };
    if (k == "wifi-enabled" || k == "io-available" || k == "storage-available") {
      if (rest != 0) return bad("'" + k + "' takes no operands");
      c.kind = k == "wifi-enabled"   ? EnvKind::kWifiEnabled
               : k == "io-available" ? EnvKind::kIoAvailable
                                     : EnvKind::kStorageAvailable;
      return c;
    }
    if (k == "permission-granted") {
      if (rest != 1) return bad("expected 'permission-granted <name>'");
      c.kind = EnvKind::kPermissionGranted;
      c.subject = t[at + 1].text;
      return c;
    }
    if (k == "input-matches") {
      if (rest != 3) return bad("expected 'input-matches <widget> format|equals|contains <value>'");
      c.kind = EnvKind::kInputMatches;
      c.subject = t[at + 1].text;
      const std::string& ck = t[at + 2].text;
      c.constraint.value = t[at + 3].text;
      if (ck == "format") {
        c.constraint.kind = ConstraintKind::kFormat;
        const auto& v = c.constraint.value;
        if (v != "email" && v != "phone" && v != "number")
          return bad("input format must be email, phone or number");
      } else if (ck == "equals") {
        c.constraint.kind = ConstraintKind::kEquals;
      } else if (ck == "contains") {
        c.constraint.kind = ConstraintKind::kContains;
        if (c.constraint.value.size() != 1) return bad("'contains' takes a single character");
      } else {
        return bad("unknown input constraint '" + ck + "'");
      }
      return c;
    }
    return bad("unknown condition '" + k + "'");
  }

  std::optional<Stmt> parse_stmt(const Line& line) {
    const auto& t = line.tokens;
    const std::string& k = t.front().text;
    Stmt s;
    s.loc = line.loc();
    auto ref = [&](std::vector<Ref>& refs, std::size_t i) {
      refs.push_back({t[i].text, {line.number, t[i].column}});
    };
    if (k == "call") {
      if (!expect_arity(line, 2, 2)) return std::nullopt;
      Id target = t[1].text;
      if (target.find('.') == std::string::npos) target = current_owner_ + "." + target;
      call_refs_.push_back({target, {line.number, t[1].column}});
      s.node = CallStmt{target};
    } else if (k == "start") {
      if (!expect_arity(line, 2, 2)) return std::nullopt;
      ref(async_refs_, 1);
      s.node = StartAsyncStmt{t[1].text};
    } else if (k == "access") {
      if (!expect_arity(line, 3, 3)) return std::nullopt;
      ref(gui_refs_, 2);
      s.node = UiAccessStmt{t[1].text, t[2].text};
    } else if (k == "create") {
      if (!expect_arity(line, 2, 3)) return std::nullopt;
      Id target = t.size() == 3 ? t[2].text : Id();
      if (!target.empty()) ref(gui_refs_, 2);
      s.node = UiCreateStmt{t[1].text, target};
    } else if (k == "post") {
      if (!expect_arity(line, 2, 2)) return std::nullopt;
      PostToUiStmt post{t[1].text, {}};
      std::string term;
      post.block = parse_block(&term);
      if (!close_block(line, term, "end")) return std::nullopt;
      s.node = std::move(post);
    } else if (k == "safeif") {
      UiSafeCheckIfStmt check;
      std::size_t at = 1;
      if (t.size() > 1 && t[1].text == "not") {
        check.negated = true;
        at = 2;
      }
      if (t.size() != at + 1) {
        error(line.loc(), "syntax", "expected 'safeif [not] <api>'");
        skip_block();
        return std::nullopt;
      }
      check.check = t[at].text;
      std::string term;
      check.then_block = parse_block(&term);
      if (term == "else") check.else_block = parse_block(&term);
      if (!close_block(line, term, "end")) return std::nullopt;
      s.node = std::move(check);
    } else if (k == "envif") {
      auto cond = parse_condition(line, 1);
      EnvIfStmt env;
      std::string term;
      env.then_block = parse_block(&term);
      if (term == "else") env.else_block = parse_block(&term);
      if (!close_block(line, term, "end") || !cond) return std::nullopt;
      env.cond = *cond;
      s.node = std::move(env);
    } else if (k == "try") {
      if (!expect_arity(line, 1, 1)) return std::nullopt;
      TryCatchStmt tc;
      std::string term;
      tc.body = parse_block(&term);
      if (term != "catch") {
        close_block(line, term, "catch");
        return std::nullopt;
      }
      auto cond = parse_condition(*terminator_line_, 1);
      tc.handler = parse_block(&term);
      if (!close_block(line, term, "end") || !cond) return std::nullopt;
      tc.exception = *cond;
      s.node = std::move(tc);
    } else if (k == "startactivity") {
      if (!expect_arity(line, 2, 2)) return std::nullopt;
      ref(activity_refs_, 1);
      s.node = StartComponentStmt{t[1].text};
    } else if (k == "commit") {
      if (!expect_arity(line, 2, 2)) return std::nullopt;
      ref(fragment_refs_, 1);
      s.node = FragmentTransactionStmt{t[1].text};
    } else if (k == "read") {
      if (!expect_arity(line, 2, 2)) return std::nullopt;
      s.node = ReadInputStmt{t[1].text};
    } else if (k == "return") {
      if (!expect_arity(line, 1, 1)) return std::nullopt;
      s.node = ReturnStmt{};
    } else {
      error(line.loc(), "syntax", "unknown statement '" + k + "'");
      return std::nullopt;
    }
    return s;
  }

  bool close_block(const Line& opener, const std::string& got, const std::string& want) {
    if (got == want) return true;
    if (got.empty()) {
      error(opener.loc(), "syntax", "missing '" + want + "' for '" + opener.tokens[0].text + "'");
    } else {
      error(terminator_line_->loc(), "syntax",
            "unexpected '" + got + "' (expected '" + want + "')");
    }
    return false;
  }

  // -- resolution --------------------------------------------------------------

  struct Ref {
    Id id;
    SourceLoc loc;
  };

  void finish() {
    app_.methods.clear();
    for (auto& m : component_methods_) app_.methods.push_back(std::move(m));
    for (auto& m : async_methods_) app_.methods.push_back(std::move(m));
    for (auto& p : app_.probes) {
      if (p.kind == ProbeKind::kWait && p.site.index < 0) {
        for (const auto& m : app_.methods)
          if (m.id == p.site.method) p.site.index = m.stmt_count;
      }
    }
    app_.reindex();

    auto unresolved = [&](const Ref& r, std::string_view what) {
      error(r.loc, "unresolved-identifier", std::string(what) + " '" + r.id + "' is not declared");
    };
    auto component_is = [&](const Id& id, ComponentKind kind) {
      const ComponentDecl* c = app_.find_component(id);
      return c && c->kind == kind;
    };
    // A missing entry or a host of the wrong kind is left to validate_app.
    if (!app_.entry_activity.empty() && !app_.find_component(app_.entry_activity))
      unresolved({app_.entry_activity, entry_loc_}, "entry activity");
    for (const auto& r : host_refs_)
      if (!app_.find_component(r.id)) unresolved(r, "host activity");
    for (const auto& r : call_refs_)
      if (!app_.find_method(r.id)) unresolved(r, "method");
    for (const auto& r : binding_refs_)
      if (!app_.find_method(r.id)) unresolved(r, "handler method");
    for (const auto& r : probe_method_refs_)
      if (!app_.find_method(r.id)) unresolved(r, "method");
    for (const auto& r : probe_component_refs_)
      if (!app_.find_component(r.id)) unresolved(r, "component");
    for (const auto& r : async_refs_)
      if (!app_.find_async(r.id)) unresolved(r, "async construct");
    for (const auto& r : gui_refs_)
      if (!app_.find_gui_object(r.id)) unresolved(r, "gui object");
    for (const auto& r : activity_refs_)
      if (!component_is(r.id, ComponentKind::kActivity)) unresolved(r, "activity");
    for (const auto& r : fragment_refs_)
      if (!component_is(r.id, ComponentKind::kFragment)) unresolved(r, "fragment");
  }

  std::vector<Line> lines_;
  std::size_t pos_ = 0;
  const Line* terminator_line_ = nullptr;
  std::vector<Diagnostic> diags_;
  App app_;
  Id current_owner_;
  SourceLoc entry_loc_;
  std::vector<MethodDecl> component_methods_;
  std::vector<MethodDecl> async_methods_;
  std::set<Id> top_ids_, gui_ids_, method_ids_, widget_ids_;
  std::vector<Ref> host_refs_, call_refs_, binding_refs_, probe_method_refs_,
      probe_component_refs_, async_refs_, gui_refs_, activity_refs_, fragment_refs_;
};

}  // namespace

ParseResult parse_app(std::string_view source, const ApiConfig& config) {
  return Parser(source, config).run();
}

}  // namespace apecheck
