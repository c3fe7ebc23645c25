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

#include "apecheck/runtime_sim.hpp"

#include <deque>
#include <map>
#include <stdexcept>

namespace apecheck {
namespace {

enum class Life { kNone, kCreated, kStarted, kResumed, kPaused, kStopped, kDestroyed };
enum class Ctx { kUiPlain, kUiCallback, kBackground };
enum class AppStatus { kNotStarted, kForeground, kBackground, kExited };
enum class RunOutcome { kDone, kBlocked, kStopped };

struct Frame {
  const MethodDecl* method = nullptr;
  const Block* block = nullptr;
  std::size_t pos = 0;
  bool root = false;      // method body (exit runs the exit probe and pops)
  bool entered = false;
  int spawn = -1;         // >= 0: spawn marker for that async instance
  Ctx ctx = Ctx::kUiPlain;
  int home = -1;
};

struct Instance {
  Id activity;
  int generation = 0;
  Life life = Life::kNone;
  std::map<Id, bool> attached;
};

struct AsyncInst {
  enum class St { kUnspawned, kRunnable, kBlocked, kDone };
  int id = 0;
  const AsyncConstructDecl* decl = nullptr;
  int home = -1;
  St st = St::kUnspawned;
  std::vector<Frame> frames;
  std::string sem;
  bool released = false;
  long block_order = 0;
  int slices = 0;
  int last_segment = -1;
  std::vector<int> pending_preds;  // start edge, wake-up edge
};

struct UiItem {
  enum class Kind { kDelivery, kPost, kStart, kPreExecute };
  Kind kind = Kind::kPost;
  int async = -1;
  const MethodDecl* method = nullptr;
  const Block* block = nullptr;
  int home = -1;
  Id target;
  int pred = -1;
};

bool is_dismiss(std::string_view api) {
  constexpr std::string_view suffix = "dismiss";
  return api.size() >= suffix.size() && api.substr(api.size() - suffix.size()) == suffix;
}

}  // namespace

struct Simulation::State {
  const App* app = nullptr;
  Environment env;
  SimOptions opt;
  bool honor_probes = true;

  std::vector<Instance> instances;
  std::vector<int> stack;  // activity stack, top last
  std::map<Id, int> next_gen;
  AppStatus app_status = AppStatus::kNotStarted;
  std::deque<UiItem> queue;
  std::vector<AsyncInst> asyncs;
  std::map<std::string, int> sem_count;
  long block_counter = 0;
  std::map<Id, std::string> texts;

  SimStatus status = SimStatus::kNormal;
  std::optional<CrashReport> crash;
  std::string error;
  std::vector<Id> method_log;
  std::vector<std::string> exec_log;
  AccessLog log;
  int events_injected = 0;
  std::int64_t ticks = 0;
  int segment_counter = 0;
  int cur_segment = -1;
  int last_event_segment = -1;
  std::string first_method;

  // Probe tables are immutable after construction and shared by copies.
  struct Probes {
    std::map<StmtSite, std::string> waits;
    std::multimap<std::pair<Id, std::string>, std::string> signals;
  };
  std::shared_ptr<const Probes> probes;

  // -- helpers ---------------------------------------------------------------

  bool stopped() const { return status != SimStatus::kNormal; }

  void fail(std::string message) {
    if (stopped()) return;
    status = SimStatus::kError;
    error = std::move(message);
  }

  std::string thread_name(int async) const {
    if (async < 0) return "ui";
    return "async:" + asyncs[async].decl->id + "#" + std::to_string(async);
  }

  std::string instance_name(int inst) const {
    return instances[inst].activity + "#" + std::to_string(instances[inst].generation);
  }

  void begin_segment(const std::string& thread, const std::string& label, std::vector<int> preds) {
    cur_segment = segment_counter++;
    first_method.clear();
    if (!opt.record_accesses) return;
    std::vector<int> clean;
    for (int p : preds)
      if (p >= 0) clean.push_back(p);
    log.segments.push_back({cur_segment, thread, label, std::move(clean)});
  }

  void record(const std::string& location, bool write, int async, const Id& method,
              std::optional<StmtSite> site) {
    if (!opt.record_accesses) return;
    log.accesses.push_back({cur_segment, thread_name(async), method, std::move(site), location, write});
  }

  void log_line(const std::string& thread, const std::string& event) {
    if (!opt.record_exec_log) return;
    exec_log.push_back("[" + std::to_string(ticks) + "] thread=" + thread + " event=" + event +
                       " method=" + (first_method.empty() ? "-" : first_method));
  }

  int top() const { return stack.empty() ? -1 : stack.back(); }

  // Latest live instance of an activity, or -1.
  int current_instance(const Id& activity) const {
    for (int i = static_cast<int>(instances.size()) - 1; i >= 0; --i)
      if (instances[i].activity == activity && instances[i].life != Life::kDestroyed) return i;
    return -1;
  }

  bool usable(int home) const {
    if (home < 0) return false;
    Life l = instances[home].life;
    return l != Life::kStopped && l != Life::kDestroyed && l != Life::kNone;
  }

  // -- probes ----------------------------------------------------------------

  void signal(const Id& component, const std::string& callback) {
    if (!honor_probes) return;
    auto range = probes->signals.equal_range({component, callback});
    for (auto it = range.first; it != range.second; ++it) {
      const std::string& sem = it->second;
      ++sem_count[sem];
      while (sem_count[sem] > 0) {
        int best = -1;
        for (std::size_t i = 0; i < asyncs.size(); ++i) {
          const AsyncInst& a = asyncs[i];
          if (a.st == AsyncInst::St::kBlocked && a.sem == sem &&
              (best < 0 || a.block_order < asyncs[best].block_order))
            best = static_cast<int>(i);
        }
        if (best < 0) break;
        --sem_count[sem];
        wake(best, cur_segment);
      }
    }
  }

  void wake(int async, int pred) {
    AsyncInst& a = asyncs[async];
    a.st = AsyncInst::St::kRunnable;
    a.released = true;
    a.sem.clear();
    a.pending_preds.push_back(pred);
  }

  // True when the thread may pass; false when it must block.
  bool try_wait(int async, const std::string& sem) {
    AsyncInst& a = asyncs[async];
    if (a.released) {
      a.released = false;
      return true;
    }
    auto& count = sem_count[sem];
    if (count > 0) {
      --count;
      return true;
    }
    a.st = AsyncInst::St::kBlocked;
    a.sem = sem;
    a.block_order = ++block_counter;
    return false;
  }

  const std::string* wait_at(const MethodDecl* m, int index, Ctx ctx) const {
    if (!honor_probes || ctx != Ctx::kBackground) return nullptr;
    auto it = probes->waits.find(StmtSite{m->id, index});
    return it == probes->waits.end() ? nullptr : &it->second;
  }

  // -- crashes ---------------------------------------------------------------

  void raise(ExceptionKind kind, const std::vector<Frame>& frames, int async, const StmtSite& site) {
    CrashReport r;
    r.exception = kind;
    r.thread = thread_name(async);
    for (const Frame& f : frames)
      if (f.root && f.method) r.method_chain.push_back(f.method->id);
    if (r.method_chain.empty() || r.method_chain.back() != site.method)
      r.method_chain.push_back(site.method);
    r.event_index = events_injected - 1;
    r.environment = env;
    r.site = site;
    crash = std::move(r);
    status = SimStatus::kCrash;
  }

  // -- interpreter -----------------------------------------------------------

  Frame method_frame(const MethodDecl* m, Ctx ctx, int home) const {
    Frame f;
    f.method = m;
    f.block = &m->body;
    f.root = true;
    f.ctx = ctx;
    f.home = home;
    return f;
  }

  int depth(const std::vector<Frame>& frames) const {
    int d = 0;
    for (const Frame& f : frames)
      if (f.root) ++d;
    return d;
  }

  RunOutcome exec(std::vector<Frame>& frames, int async) {
    while (!frames.empty()) {
      if (stopped()) return RunOutcome::kStopped;
      Frame& f = frames.back();
      if (f.spawn >= 0) {
        int inst = f.spawn;
        frames.pop_back();
        spawn(inst);
        continue;
      }
      if (f.root && !f.entered) {
        f.entered = true;
        if (first_method.empty()) first_method = f.method->id;
        if (opt.record_methods) method_log.push_back(f.method->id);
      }
      if (f.pos >= f.block->size()) {
        if (!f.root) {
          frames.pop_back();
          continue;
        }
        if (const std::string* sem = wait_at(f.method, f.method->stmt_count, f.ctx)) {
          if (!try_wait(async, *sem)) return RunOutcome::kBlocked;
        }
        frames.pop_back();
        continue;
      }
      const Stmt& s = (*f.block)[f.pos];
      if (const std::string* sem = wait_at(f.method, s.index, f.ctx)) {
        if (!try_wait(async, *sem)) return RunOutcome::kBlocked;
      }
      ++f.pos;
      execute(s, frames, async);
    }
    return stopped() ? RunOutcome::kStopped : RunOutcome::kDone;
  }

  void push_block(std::vector<Frame>& frames, const Block& block) {
    Frame f = frames.back();
    f.block = &block;
    f.pos = 0;
    f.root = false;
    f.entered = true;
    frames.push_back(f);
  }

  int resolve_target(const Id& gui, Ctx ctx, int home, bool* stale_home) const {
    *stale_home = false;
    const GuiObjectDecl* g = app->find_gui_object(gui);
    if (!g) return -1;
    Id owner = app->host_activity(g->owner);
    if (ctx == Ctx::kUiCallback && home >= 0 && instances[home].activity == owner) {
      *stale_home = true;
      return home;
    }
    return current_instance(owner);
  }

  std::string gui_location(const Id& gui, int inst) const {
    return "gui:" + gui + "@" + instance_name(inst);
  }

  void execute(const Stmt& s, std::vector<Frame>& frames, int async) {
    const Frame cur = frames.back();
    const ApiConfig& cfg = app->api_config;
    const StmtSite site{cur.method->id, s.index};
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, CallStmt>) {
            const MethodDecl* target = app->find_method(n.target);
            if (!target) return fail("unknown method " + n.target);
            if (depth(frames) >= opt.max_call_depth) return fail("call depth limit exceeded");
            frames.push_back(method_frame(target, cur.ctx, cur.home));
          } else if constexpr (std::is_same_v<T, StartAsyncStmt>) {
            start_async(n.async, frames, async);
          } else if constexpr (std::is_same_v<T, UiAccessStmt>) {
            if (!cfg.is_ui_access(n.api)) return;
            const GuiObjectDecl* g = app->find_gui_object(n.target);
            bool stale_home = false;
            int inst = resolve_target(n.target, cur.ctx, cur.home, &stale_home);
            if (cur.ctx == Ctx::kBackground) {
              if (inst >= 0) record(gui_location(n.target, inst), true, async, cur.method->id, site);
              bool adapter = g && g->kind == GuiKind::kListAdapter;
              return raise(adapter ? ExceptionKind::kIllegalState : ExceptionKind::kCalledFromWrongThread,
                           frames, async, site);
            }
            if (inst < 0) return;
            record(gui_location(n.target, inst), true, async, cur.method->id, site);
            if (stale_home && instances[inst].life == Life::kDestroyed) {
              bool dialog = g && g->kind == GuiKind::kDialog;
              return raise(dialog ? ExceptionKind::kBadToken : ExceptionKind::kIllegalState, frames,
                           async, site);
            }
            if (is_dismiss(n.api) && instances[inst].life != Life::kDestroyed)
              instances[inst].attached[n.target] = false;
          } else if constexpr (std::is_same_v<T, UiCreateStmt>) {
            if (!cfg.is_ui_create(n.api)) return;
            if (cur.ctx == Ctx::kBackground)
              return raise(ExceptionKind::kRuntimeExceptionLooper, frames, async, site);
            if (n.target.empty()) return;
            bool stale_home = false;
            int inst = resolve_target(n.target, cur.ctx, cur.home, &stale_home);
            if (inst < 0 || instances[inst].life == Life::kDestroyed) return;
            record(gui_location(n.target, inst), true, async, cur.method->id, site);
            instances[inst].attached[n.target] = true;
          } else if constexpr (std::is_same_v<T, PostToUiStmt>) {
            UiItem item;
            item.kind = UiItem::Kind::kPost;
            item.method = cur.method;
            item.block = &n.block;
            item.home = cur.home;
            item.pred = cur_segment;
            queue.push_back(item);
          } else if constexpr (std::is_same_v<T, UiSafeCheckIfStmt>) {
            bool take_then = usable(cur.home) == safe_branch_is_then(n);
            push_block(frames, take_then ? n.then_block : n.else_block);
          } else if constexpr (std::is_same_v<T, EnvIfStmt>) {
            push_block(frames, evaluate(n.cond, env, &texts) ? n.then_block : n.else_block);
          } else if constexpr (std::is_same_v<T, TryCatchStmt>) {
            push_block(frames, evaluate(n.exception, env, &texts) ? n.body : n.handler);
          } else if constexpr (std::is_same_v<T, StartComponentStmt>) {
            UiItem item;
            item.kind = UiItem::Kind::kStart;
            item.target = n.target;
            item.pred = cur_segment;
            queue.push_back(item);
          } else if constexpr (std::is_same_v<T, FragmentTransactionStmt>) {
            if (cur.ctx == Ctx::kBackground)
              return raise(ExceptionKind::kCalledFromWrongThread, frames, async, site);
            if (cur.ctx == Ctx::kUiCallback && cur.home >= 0) {
              record("state:" + instance_name(cur.home), false, async, cur.method->id, site);
              if (!usable(cur.home)) return raise(ExceptionKind::kIllegalState, frames, async, site);
            }
          } else if constexpr (std::is_same_v<T, ReturnStmt>) {
            while (!frames.empty() && !frames.back().root) frames.pop_back();
            if (!frames.empty()) frames.back().pos = frames.back().block->size();
          }
        },
        s.node);
  }

  void start_async(const Id& id, std::vector<Frame>& frames, int async) {
    const AsyncConstructDecl* decl = app->find_async(id);
    if (!decl) return fail("unknown async construct " + id);
    if (static_cast<int>(asyncs.size()) >= opt.max_asyncs) return fail("async instance limit exceeded");
    const Frame cur = frames.back();
    AsyncInst inst;
    inst.id = static_cast<int>(asyncs.size());
    inst.decl = decl;
    inst.home = cur.home;
    asyncs.push_back(inst);
    (void)async;
    const MethodDecl* pre = app->async_callback(*decl, AsyncSlot::kPreExecute);
    if (!pre) {
      spawn(inst.id);
      return;
    }
    if (cur.ctx == Ctx::kBackground) {
      UiItem item;
      item.kind = UiItem::Kind::kPreExecute;
      item.async = inst.id;
      item.home = cur.home;
      item.pred = cur_segment;
      queue.push_back(item);
      return;
    }
    Frame marker;
    marker.spawn = inst.id;
    frames.push_back(marker);
    frames.push_back(method_frame(pre, Ctx::kUiPlain, cur.home));
  }

  void spawn(int id) {
    AsyncInst& a = asyncs[id];
    const MethodDecl* bg = app->async_callback(*a.decl, AsyncSlot::kBackground);
    if (!bg) {
      a.st = AsyncInst::St::kDone;
      return;
    }
    a.st = AsyncInst::St::kRunnable;
    a.frames = {method_frame(bg, Ctx::kBackground, a.home)};
    a.pending_preds.push_back(cur_segment);
  }

  void complete(int id) {
    AsyncInst& a = asyncs[id];
    a.st = AsyncInst::St::kDone;
    if (a.decl->kind == AsyncKind::kThread) return;
    const MethodDecl* post = app->async_callback(*a.decl, AsyncSlot::kPostExecute);
    if (!post) return;
    UiItem item;
    item.kind = UiItem::Kind::kDelivery;
    item.async = id;
    item.method = post;
    item.home = a.home;
    item.pred = cur_segment;
    queue.push_back(item);
  }

  bool run_ui(const MethodDecl* m, Ctx ctx, int home) {
    std::vector<Frame> frames{method_frame(m, ctx, home)};
    exec(frames, -1);
    return !stopped();
  }

  // -- lifecycle -------------------------------------------------------------

  void transition(int inst, const std::string& callback) {
    Instance& i = instances[inst];
    Life from = i.life;
    Life to = from;
    bool ok = false;
    if (callback == "onCreate") ok = from == Life::kNone, to = Life::kCreated;
    else if (callback == "onStart") ok = from == Life::kCreated || from == Life::kStopped, to = Life::kStarted;
    else if (callback == "onResume") ok = from == Life::kStarted || from == Life::kPaused, to = Life::kResumed;
    else if (callback == "onPause") ok = from == Life::kResumed, to = Life::kPaused;
    else if (callback == "onStop") ok = from == Life::kPaused, to = Life::kStopped;
    else if (callback == "onRestart") ok = from == Life::kStopped, to = Life::kStopped;
    else if (callback == "onDestroy") ok = from == Life::kStopped, to = Life::kDestroyed;
    if (!ok)
      throw std::logic_error("illegal lifecycle transition " + callback + " on " + instance_name(inst));
    i.life = to;
  }

  void lifecycle(int inst, const std::string& callback) {
    if (stopped()) return;
    transition(inst, callback);
    const Id activity = instances[inst].activity;
    if (callback == "onDestroy") {
      for (auto& [gui, attached] : instances[inst].attached) {
        if (!attached) continue;
        record(gui_location(gui, inst), true, -1, {}, std::nullopt);
        attached = false;
      }
    } else if (callback == "onStop") {
      record("state:" + instance_name(inst), true, -1, {}, std::nullopt);
    }
    signal(activity, callback);
    if (const ComponentDecl* c = app->find_component(activity)) {
      if (const MethodDecl* m = app->lifecycle_callback(*c, callback))
        if (!run_ui(m, Ctx::kUiPlain, inst)) return;
    }
    for (const auto& frag : app->components) {
      if (frag.kind != ComponentKind::kFragment || frag.host != activity) continue;
      signal(frag.id, callback);
      if (const MethodDecl* m = app->lifecycle_callback(frag, callback))
        if (!run_ui(m, Ctx::kUiPlain, inst)) return;
    }
  }

  void steps(int inst, std::initializer_list<const char*> names) {
    for (const char* n : names) lifecycle(inst, n);
  }

  int create_instance(const Id& activity) {
    Instance i;
    i.activity = activity;
    i.generation = next_gen[activity]++;
    auto add_objects = [&](const ComponentDecl& c) {
      for (const auto& g : c.gui_objects)
        i.attached[g.id] = g.kind == GuiKind::kView || g.kind == GuiKind::kListAdapter;
    };
    if (const ComponentDecl* c = app->find_component(activity)) add_objects(*c);
    for (const auto& frag : app->components)
      if (frag.kind == ComponentKind::kFragment && frag.host == activity) add_objects(frag);
    instances.push_back(std::move(i));
    return static_cast<int>(instances.size()) - 1;
  }

  void start_activity(const Id& target) {
    if (app_status != AppStatus::kForeground) return;
    const ComponentDecl* c = app->find_component(target);
    if (!c || c->kind != ComponentKind::kActivity) return fail("cannot start " + target);
    int a = top();
    steps(a, {"onPause"});
    int b = create_instance(target);
    stack.push_back(b);
    steps(b, {"onCreate", "onStart", "onResume"});
    steps(a, {"onStop"});
  }

  // -- events ----------------------------------------------------------------

  bool widget_visible(const HandlerBinding& b) const {
    if (app_status != AppStatus::kForeground || stack.empty()) return false;
    const MethodDecl* m = app->find_method(b.method);
    if (!m) return false;
    return app->host_activity(m->owner) == instances[top()].activity;
  }

  void dispatch(const UiEvent& e) {
    if (app_status == AppStatus::kExited && e.kind != EventKind::kLaunch)
      return fail("event " + e.str() + " after the app exited");
    if (app_status == AppStatus::kNotStarted && e.kind != EventKind::kLaunch)
      return fail("event " + e.str() + " before launch");
    bool fg = app_status == AppStatus::kForeground;
    switch (e.kind) {
      case EventKind::kLaunch:
        if (app_status == AppStatus::kNotStarted || app_status == AppStatus::kExited) {
          const ComponentDecl* entry = app->find_component(app->entry_activity);
          if (!entry) return fail("no entry activity");
          app_status = AppStatus::kForeground;
          int inst = create_instance(entry->id);
          stack.push_back(inst);
          steps(inst, {"onCreate", "onStart", "onResume"});
        } else if (app_status == AppStatus::kBackground) {
          app_status = AppStatus::kForeground;
          steps(top(), {"onRestart", "onStart", "onResume"});
        }
        return;
      case EventKind::kClick:
      case EventKind::kListItemClick:
      case EventKind::kInput: {
        const HandlerBinding* b = app->find_binding(e.widget);
        if (!b) return fail("unresolvable widget " + e.widget);
        if (!widget_visible(*b)) return fail("widget " + e.widget + " is not visible");
        if (e.kind == EventKind::kInput) texts[e.widget] = e.text;
        const MethodDecl* m = app->find_method(b->method);
        run_ui(m, Ctx::kUiPlain, top());
        return;
      }
      case EventKind::kRotate: {
        if (!fg) return fail("rotate while the app is in the background");
        int old = top();
        steps(old, {"onPause", "onStop", "onDestroy"});
        if (stopped()) return;
        int fresh = create_instance(instances[old].activity);
        stack.back() = fresh;
        steps(fresh, {"onCreate", "onStart", "onResume"});
        return;
      }
      case EventKind::kHome:
        if (!fg) return;
        steps(top(), {"onPause", "onStop"});
        app_status = AppStatus::kBackground;
        return;
      case EventKind::kLongPressHomeThenBack:
        if (fg) {
          steps(top(), {"onPause", "onStop", "onRestart", "onStart", "onResume"});
        } else {
          app_status = AppStatus::kForeground;
          steps(top(), {"onRestart", "onStart", "onResume"});
        }
        return;
      case EventKind::kScreenToggle:
        if (!fg) return;
        steps(top(), {"onPause", "onResume"});
        return;
      case EventKind::kBack: {
        if (!fg) return fail("back while the app is in the background");
        int old = top();
        steps(old, {"onPause"});
        stack.pop_back();
        if (!stack.empty()) {
          steps(top(), {"onRestart", "onStart", "onResume"});
        } else {
          app_status = AppStatus::kExited;
        }
        steps(old, {"onStop", "onDestroy"});
        return;
      }
    }
  }
};

// ---------------------------------------------------------------------------

Simulation::Simulation(const App& app, const Environment& env, const SimOptions& options,
                       bool honor_probes)
    : s_(std::make_unique<State>()) {
  s_->app = &app;
  s_->env = env;
  s_->opt = options;
  s_->honor_probes = honor_probes;
  s_->texts = env.inputs;
  auto probes = std::make_shared<State::Probes>();
  for (const auto& p : app.probes) {
    if (p.kind == ProbeKind::kWait) probes->waits.emplace(p.site, p.semaphore);
    else probes->signals.emplace(std::make_pair(p.component, p.callback), p.semaphore);
  }
  s_->probes = std::move(probes);
}

Simulation::~Simulation() = default;
Simulation::Simulation(const Simulation& other) : s_(std::make_unique<State>(*other.s_)) {}
Simulation& Simulation::operator=(const Simulation& other) {
  if (this != &other) s_ = std::make_unique<State>(*other.s_);
  return *this;
}
Simulation::Simulation(Simulation&&) noexcept = default;
Simulation& Simulation::operator=(Simulation&&) noexcept = default;

std::vector<int> Simulation::runnable_threads() const {
  std::vector<int> out;
  for (const auto& a : s_->asyncs)
    if (a.st == AsyncInst::St::kRunnable) out.push_back(a.id);
  return out;
}

bool Simulation::has_queued_ui() const { return !s_->queue.empty(); }

bool Simulation::has_blocked_threads() const {
  for (const auto& a : s_->asyncs)
    if (a.st == AsyncInst::St::kBlocked) return true;
  return false;
}

void Simulation::step_thread(int thread) {
  State& s = *s_;
  if (s.stopped()) return;
  if (thread < 0 || thread >= static_cast<int>(s.asyncs.size()) ||
      s.asyncs[thread].st != AsyncInst::St::kRunnable)
    throw ApeError("step_thread: thread " + std::to_string(thread) + " is not runnable");
  ++s.ticks;
  AsyncInst& a = s.asyncs[thread];
  std::vector<int> preds = std::move(a.pending_preds);
  a.pending_preds.clear();
  preds.push_back(a.last_segment);
  std::string name = s.thread_name(thread);
  s.begin_segment(name, "slice " + std::to_string(a.slices++), std::move(preds));
  std::vector<Frame> frames = std::move(a.frames);
  RunOutcome r = s.exec(frames, thread);
  s.asyncs[thread].frames = std::move(frames);
  s.asyncs[thread].last_segment = s.cur_segment;
  if (r == RunOutcome::kDone) s.complete(thread);
  s.log_line(name, "-");
}

void Simulation::step_ui() {
  State& s = *s_;
  if (s.stopped() || s.queue.empty()) return;
  ++s.ticks;
  UiItem item = s.queue.front();
  s.queue.pop_front();
  std::string label;
  switch (item.kind) {
    case UiItem::Kind::kDelivery: label = "deliver(" + s.thread_name(item.async) + ")"; break;
    case UiItem::Kind::kPost: label = "post"; break;
    case UiItem::Kind::kStart: label = "start(" + item.target + ")"; break;
    case UiItem::Kind::kPreExecute: label = "preExecute(" + s.thread_name(item.async) + ")"; break;
  }
  s.begin_segment("ui", label, {item.pred});
  switch (item.kind) {
    case UiItem::Kind::kDelivery: {
      const AsyncInst& a = s.asyncs[item.async];
      if (a.decl->kind == AsyncKind::kLoader && !s.usable(item.home)) break;
      if (a.decl->kind == AsyncKind::kIntentService) {
        int cur = item.home >= 0 ? s.current_instance(s.instances[item.home].activity) : -1;
        s.run_ui(item.method, Ctx::kUiPlain, cur >= 0 ? cur : item.home);
      } else {
        s.run_ui(item.method, Ctx::kUiCallback, item.home);
      }
      break;
    }
    case UiItem::Kind::kPost: {
      int cur = item.home >= 0 ? s.current_instance(s.instances[item.home].activity) : -1;
      Frame f;
      f.method = item.method;
      f.block = item.block;
      f.entered = true;
      f.ctx = Ctx::kUiPlain;
      f.home = cur >= 0 ? cur : item.home;
      std::vector<Frame> frames{f};
      s.exec(frames, -1);
      break;
    }
    case UiItem::Kind::kStart:
      s.start_activity(item.target);
      break;
    case UiItem::Kind::kPreExecute: {
      const AsyncInst& a = s.asyncs[item.async];
      const MethodDecl* pre = s.app->async_callback(*a.decl, AsyncSlot::kPreExecute);
      Frame marker;
      marker.spawn = item.async;
      std::vector<Frame> frames{marker, s.method_frame(pre, Ctx::kUiPlain, item.home)};
      s.exec(frames, -1);
      break;
    }
  }
  s.log_line("ui", label);
}

void Simulation::inject(const UiEvent& e) {
  State& s = *s_;
  if (s.stopped()) return;
  ++s.ticks;
  ++s.events_injected;
  s.begin_segment("ui", e.str(), {s.last_event_segment});
  s.last_event_segment = s.cur_segment;
  s.dispatch(e);
  s.log_line("ui", e.str());
}

bool Simulation::release_blocked() {
  State& s = *s_;
  int best = -1;
  for (std::size_t i = 0; i < s.asyncs.size(); ++i) {
    const AsyncInst& a = s.asyncs[i];
    if (a.st == AsyncInst::St::kBlocked && (best < 0 || a.block_order < s.asyncs[best].block_order))
      best = static_cast<int>(i);
  }
  if (best < 0) return false;
  s.wake(best, -1);
  return true;
}

bool Simulation::stopped() const { return s_->stopped(); }
SimStatus Simulation::status() const { return s_->status; }
bool Simulation::foreground() const { return s_->app_status == AppStatus::kForeground; }
bool Simulation::exited() const {
  return s_->app_status == AppStatus::kExited || s_->app_status == AppStatus::kNotStarted;
}

std::vector<HandlerBinding> Simulation::visible_bindings() const {
  std::vector<HandlerBinding> out;
  for (const auto& b : s_->app->bindings)
    if (s_->widget_visible(b)) out.push_back(b);
  return out;
}

std::int64_t Simulation::ticks() const { return s_->ticks; }

SimResult Simulation::result() const {
  const State& s = *s_;
  SimResult r;
  r.status = s.status;
  r.crash = s.crash;
  r.error = s.error;
  r.method_log = s.method_log;
  r.exec_log = s.exec_log;
  r.access_log = s.log;
  r.events_injected = s.events_injected;
  r.ticks = s.ticks;
  return r;
}

}  // namespace apecheck
