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

#include "apecheck/baselines.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <tuple>

namespace apecheck {
namespace {

constexpr const char* kTexts[] = {"", "text", "a@b.co", "5551234", "1", "#"};
constexpr EventKind kSystemEvents[] = {EventKind::kRotate, EventKind::kHome, EventKind::kBack,
                                       EventKind::kScreenToggle};

UiEvent random_event(const Simulation& sim, std::mt19937_64& rng) {
  if (!sim.foreground()) return UiEvent::launch();
  std::vector<HandlerBinding> widgets = sim.visible_bindings();
  std::size_t n = widgets.size() + std::size(kSystemEvents);
  std::size_t k = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  if (k >= widgets.size()) return UiEvent::of(kSystemEvents[k - widgets.size()]);
  const HandlerBinding& b = widgets[k];
  switch (b.event) {
    case BindingEvent::kClick: return UiEvent::click(b.widget);
    case BindingEvent::kItemClick: return UiEvent::list_item_click(b.widget, 0);
    case BindingEvent::kInput: {
      std::size_t t = std::uniform_int_distribution<std::size_t>(0, std::size(kTexts) - 1)(rng);
      return UiEvent::input(b.widget, kTexts[t]);
    }
  }
  return UiEvent::launch();
}

}  // namespace

FuzzResult fuzz(const App& app, int event_budget, std::uint64_t seed, const FuzzOptions& options) {
  FuzzResult out;
  out.event_budget = event_budget;
  out.seed = seed;
  std::mt19937_64 rng(seed);
  SimOptions sim_options;
  sim_options.record_accesses = options.record_accesses;
  sim_options.record_methods = false;
  sim_options.record_exec_log = false;
  const Environment env;
  std::set<StmtSite> seen;
  std::int64_t ticks_before = 0;

  auto fresh = [&] { return Simulation(app, env, sim_options, false); };
  Simulation sim = fresh();
  auto retire = [&] {
    SimResult r = sim.result();
    ticks_before += r.ticks;
    if (options.record_accesses) out.logs.push_back(std::move(r.access_log));
  };

  std::size_t idle_steps = 0;
  while (true) {
    if (sim.stopped()) {
      if (sim.status() == SimStatus::kCrash) {
        SimResult r = sim.result();
        if (seen.insert(r.crash->site).second)
          out.crashes.push_back({*r.crash, out.events_used, ticks_before + r.ticks});
      }
      retire();
      ++out.restarts;
      sim = fresh();
      idle_steps = 0;
    }
    std::vector<int> threads = sim.runnable_threads();
    bool ui = sim.has_queued_ui();
    std::size_t pending = threads.size() + (ui ? 1 : 0);
    bool can_inject = out.events_used < event_budget;
    if (pending == 0 && !can_inject) {
      if (sim.release_blocked()) continue;
      break;
    }
    if (++idle_steps > sim_options.max_steps) break;
    bool inject = pending == 0 || (can_inject && std::bernoulli_distribution(options.event_probability)(rng));
    if (!inject) {
      std::size_t k = std::uniform_int_distribution<std::size_t>(0, pending - 1)(rng);
      if (k < threads.size()) sim.step_thread(threads[k]);
      else sim.step_ui();
    } else {
      ++out.events_used;
      idle_steps = 0;
      sim.inject(random_event(sim, rng));
      // Errors (e.g. back on the last activity followed by a system event)
      // end the incarnation without counting as a crash.
    }
  }
  if (sim.stopped() && sim.status() == SimStatus::kCrash) {
    SimResult r = sim.result();
    if (seen.insert(r.crash->site).second)
      out.crashes.push_back({*r.crash, out.events_used, ticks_before + r.ticks});
  }
  retire();
  return out;
}

std::vector<FuzzResult> fuzz_campaign(const App& app, int event_budget, std::uint64_t first_seed,
                                      int n, int jobs, const FuzzOptions& options) {
  std::vector<FuzzResult> out(static_cast<std::size_t>(std::max(n, 0)));
#pragma omp parallel for schedule(dynamic) num_threads(std::max(jobs, 1)) if (jobs > 1)
  for (int i = 0; i < n; ++i) out[i] = fuzz(app, event_budget, first_seed + i, options);
  return out;
}

std::vector<RaceReport> detect_races(const AccessLog& log) {
  const std::size_t n = log.segments.size();
  std::map<int, std::size_t> pos;
  for (std::size_t i = 0; i < n; ++i) {
    if (!pos.emplace(log.segments[i].id, i).second)
      throw ApeError("malformed log: duplicate segment " + std::to_string(log.segments[i].id));
  }
  // reach[i] holds every segment that happens before segment i, i included.
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    reach[i][i] = true;
    for (int p : log.segments[i].preds) {
      auto it = pos.find(p);
      if (it == pos.end() || it->second >= i)
        throw ApeError("malformed log: bad predecessor " + std::to_string(p) + " of segment " +
                       std::to_string(log.segments[i].id));
      const auto& pr = reach[it->second];
      for (std::size_t j = 0; j <= it->second; ++j)
        if (pr[j]) reach[i][j] = true;
    }
  }
  std::map<std::string, std::vector<std::size_t>> by_location;
  for (std::size_t i = 0; i < log.accesses.size(); ++i) {
    if (!pos.count(log.accesses[i].segment))
      throw ApeError("malformed log: access in unknown segment " +
                     std::to_string(log.accesses[i].segment));
    by_location[log.accesses[i].location].push_back(i);
  }
  std::vector<RaceReport> out;
  std::set<StmtSite> reported;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (const auto& [loc, idx] : by_location) {
    for (std::size_t x = 0; x < idx.size(); ++x) {
      for (std::size_t y = x + 1; y < idx.size(); ++y) {
        const Access& a = log.accesses[idx[x]];
        const Access& b = log.accesses[idx[y]];
        if (!a.write && !b.write) continue;
        std::size_t sa = pos[a.segment], sb = pos[b.segment];
        if (sa == sb || reach[sa][sb] || reach[sb][sa]) continue;
        if (!a.site && !b.site) continue;
        pairs.emplace_back(idx[x], idx[y]);
      }
    }
  }
  // Pairs with a framework (lifecycle) access first, so that a site racing
  // with a destroy or stop is reported through that pair.
  auto app_only = [&](const std::pair<std::size_t, std::size_t>& p) {
    return log.accesses[p.first].site && log.accesses[p.second].site;
  };
  std::sort(pairs.begin(), pairs.end(), [&](const auto& x, const auto& y) {
    return std::make_tuple(app_only(x), x) < std::make_tuple(app_only(y), y);
  });
  for (const auto& [i, j] : pairs) {
    const Access& a = log.accesses[i];
    const Access& b = log.accesses[j];
    bool fresh = (a.site && !reported.count(*a.site)) || (b.site && !reported.count(*b.site));
    if (!fresh) continue;
    if (a.site) reported.insert(*a.site);
    if (b.site) reported.insert(*b.site);
    out.push_back({a, b, false});
  }
  return out;
}

std::vector<StmtSite> race_sites(const std::vector<RaceReport>& races) {
  std::set<StmtSite> sites;
  for (const auto& r : races) {
    if (r.a.site) sites.insert(*r.a.site);
    if (r.b.site) sites.insert(*r.b.site);
  }
  return {sites.begin(), sites.end()};
}

}  // namespace apecheck
