#pragma once

#include <cstdint>
#include <deque>
#include <queue>
#include <string>
#include <vector>

#include "locsched/cache_sim.hpp"
#include "locsched/layout.hpp"
#include "locsched/scheduler.hpp"

// Deterministic execution of a workload under a policy: one private cache per
// core, dependence-respecting start times, quantum preemption for RRS.

namespace locsched {

struct Workload {
  std::vector<ArrayDecl> arrays;
  std::vector<std::string> task_names;
  std::vector<Process> processes;  // global-id order
  std::vector<Edge> edges;
};

struct SimConfig {
  std::uint32_t cores = 8;
  CacheGeometry geometry{8192, 2, 32};
  std::uint32_t hit_latency = 2;
  std::uint32_t miss_latency = 75;
  std::uint64_t quantum_cycles = 50000;
  double clock_mhz = 200.0;  // report conversion only
  std::uint64_t seed = 0;
  TrimRule trim_rule = TrimRule::RemoveMax;
};

struct ProcessStats {
  std::uint64_t start = 0;
  std::uint64_t finish = 0;
  std::uint64_t hits = 0;
  std::uint64_t misses = 0;
  std::uint32_t core = 0;        // static policies: the only core; RRS: last core
  std::uint32_t preemptions = 0;
};

struct CoreStats {
  std::uint64_t hits = 0;
  std::uint64_t misses = 0;
  std::uint64_t busy_cycles = 0;
  std::uint64_t idle_cycles = 0;
};

struct LayoutSummaryEntry {
  std::string array;
  std::uint64_t base = 0;
  std::uint64_t size = 0;
  bool relayouted = false;
  std::uint64_t b = 0;
};

struct SliceRecord {
  std::uint32_t core = 0;
  std::uint32_t process = 0;
  std::uint64_t start = 0;
  std::uint64_t end = 0;
};

struct Report {
  std::string policy;
  std::uint64_t makespan = 0;
  std::vector<CoreStats> cores;
  std::vector<ProcessStats> processes;
  std::vector<LayoutSummaryEntry> layout;   // LSM only
  std::vector<SliceRecord> slices;          // RRS only

  std::uint64_t total_hits() const {
    std::uint64_t n = 0;
    for (const auto& c : cores) n += c.hits;
    return n;
  }
  std::uint64_t total_misses() const {
    std::uint64_t n = 0;
    for (const auto& c : cores) n += c.misses;
    return n;
  }
  double wall_clock_ms(double clock_mhz) const {
    return static_cast<double>(makespan) / (clock_mhz * 1000.0);
  }
};

namespace detail {

inline std::vector<std::vector<TraceEvent>> all_traces(const Workload& w,
                                                       const AddressMap& layout) {
  std::vector<std::vector<TraceEvent>> t;
  t.reserve(w.processes.size());
  for (const auto& p : w.processes) t.push_back(generate_trace(p, layout));
  return t;
}

inline void finalize_core_idle(Report& r) {
  for (auto& c : r.cores) c.idle_cycles = r.makespan - c.busy_cycles;
}

}  // namespace detail

// Executes a static per-core schedule. Cache evolution on a core depends only
// on that core's queue order; start times respect both the core's previous
// finish and all dependence predecessors.
inline Report run_static(const Workload& w, const ExtendedProcessGraph& g,
                         const StaticSchedule& sched, const AddressMap& layout,
                         const SimConfig& cfg, const std::string& name) {
  Report r;
  r.policy = name;
  r.cores.assign(cfg.cores, {});
  r.processes.assign(w.processes.size(), {});
  const auto traces = detail::all_traces(w, layout);

  std::vector<CacheState> caches(cfg.cores,
                                 CacheState(cfg.geometry, cfg.hit_latency, cfg.miss_latency));
  std::vector<std::uint64_t> core_free(cfg.cores, 0);
  std::vector<std::size_t> cursor(cfg.cores, 0);
  std::vector<bool> finished(w.processes.size(), false);
  std::size_t left = 0;
  for (const auto& q : sched.queues)
    for (auto p : q)
      if (p != kIdleSlot) ++left;

  while (left > 0) {
    bool progress = false;
    for (std::uint32_t c = 0; c < cfg.cores; ++c) {
      while (cursor[c] < sched.queues[c].size()) {
        std::uint32_t p = sched.queues[c][cursor[c]];
        if (p == kIdleSlot) {  // idle round: costs nothing beyond waiting
          ++cursor[c];
          continue;
        }
        bool ready = true;
        std::uint64_t dep_time = 0;
        for (auto pred : g.preds[p]) {
          if (!finished[pred]) {
            ready = false;
            break;
          }
          dep_time = std::max(dep_time, r.processes[pred].finish);
        }
        if (!ready) break;
        SimTotals t = simulate(traces[p], caches[c]);
        std::uint64_t start = std::max(core_free[c], dep_time);
        r.processes[p] = {start, start + t.cycles, t.hits, t.misses, c, 0};
        core_free[c] = start + t.cycles;
        r.cores[c].hits += t.hits;
        r.cores[c].misses += t.misses;
        r.cores[c].busy_cycles += t.cycles;
        finished[p] = true;
        --left;
        ++cursor[c];
        progress = true;
      }
    }
    if (!progress)
      throw std::runtime_error("static schedule deadlock (internal error)");
  }
  for (auto f : core_free) r.makespan = std::max(r.makespan, f);
  detail::finalize_core_idle(r);
  return r;
}

// RRS: one global FIFO, quantum slices, resume-from-position on whichever
// core dequeues next. Slices commit in time order; the longest-idle core
// (ties by index) takes the head.
inline Report run_round_robin(const Workload& w, const ExtendedProcessGraph& g,
                              const AddressMap& layout, const SimConfig& cfg) {
  Report r;
  r.policy = "rrs";
  r.cores.assign(cfg.cores, {});
  r.processes.assign(w.processes.size(), {});
  const auto traces = detail::all_traces(w, layout);
  const std::uint32_t n = g.size();

  std::vector<CacheState> caches(cfg.cores,
                                 CacheState(cfg.geometry, cfg.hit_latency, cfg.miss_latency));
  std::vector<std::size_t> pos(n, 0);         // trace resume position
  std::vector<bool> started(n, false);
  std::vector<std::uint32_t> preds_left(n);
  for (std::uint32_t v = 0; v < n; ++v)
    preds_left[v] = static_cast<std::uint32_t>(g.preds[v].size());

  struct QueueEntry {
    std::uint32_t process;
    std::uint64_t enqueued_at;
  };
  std::deque<QueueEntry> ready;
  for (std::uint32_t v = 0; v < n; ++v)
    if (preds_left[v] == 0) ready.push_back({v, 0});

  // Cores ordered by (free time, index): the earliest-free core dispatches
  // first, which is also the longest-idle one when the head arrives later.
  std::vector<std::uint64_t> core_free(cfg.cores, 0);
  std::size_t done = 0;
  while (done < n) {
    if (ready.empty())
      throw std::runtime_error("round-robin ready queue empty with work pending (internal error)");
    std::uint32_t c = 0;
    for (std::uint32_t i = 1; i < cfg.cores; ++i)
      if (core_free[i] < core_free[c]) c = i;
    QueueEntry e = ready.front();
    ready.pop_front();
    std::uint64_t start = std::max(core_free[c], e.enqueued_at);

    // Run one quantum; expiry is checked between accesses, so a slice may
    // overshoot by at most one miss latency.
    std::uint64_t slice_cycles = 0;
    SimTotals t;
    const auto& trace = traces[e.process];
    while (pos[e.process] < trace.size() && slice_cycles < cfg.quantum_cycles) {
      AccessOutcome o = caches[c].access(trace[pos[e.process]].addr);
      (o.hit ? t.hits : t.misses) += 1;
      slice_cycles += o.cycles;
      ++pos[e.process];
    }
    t.cycles = slice_cycles;
    std::uint64_t end = start + slice_cycles;
    if (!started[e.process]) {
      r.processes[e.process].start = start;
      started[e.process] = true;
    }
    r.processes[e.process].hits += t.hits;
    r.processes[e.process].misses += t.misses;
    r.processes[e.process].core = c;
    r.cores[c].hits += t.hits;
    r.cores[c].misses += t.misses;
    r.cores[c].busy_cycles += slice_cycles;
    r.slices.push_back({c, e.process, start, end});
    core_free[c] = end;

    if (pos[e.process] == trace.size()) {
      r.processes[e.process].finish = end;
      ++done;
      for (auto s : g.succs[e.process])
        if (--preds_left[s] == 0) ready.push_back({s, end});
    } else {
      r.processes[e.process].preemptions += 1;
      ready.push_back({e.process, end});
    }
  }
  for (auto f : core_free) r.makespan = std::max(r.makespan, f);
  detail::finalize_core_idle(r);
  return r;
}

struct LsmLayoutResult {
  StaticSchedule schedule;
  LayoutPlan plan;
  AddressMap layout;
  ConflictMatrix conflicts;
  std::uint64_t threshold = 0;
};

// Layout phase of LSM: LS schedule, conflict matrix under the
// successive-on-same-core relation, greedy selection at the average-conflict
// threshold, then the allocation pass.
inline LsmLayoutResult lsm_layout(const Workload& w, const ExtendedProcessGraph& g,
                                  const SharingMatrix& m, const SimConfig& cfg,
                                  LsDecisionLog* log = nullptr) {
  LsmLayoutResult res;
  res.schedule = ls_schedule(g, m, cfg.cores, cfg.trim_rule, log);
  AddressMap base = base_layout(w.arrays, cfg.geometry);
  const auto ds = enumerate_all_data_sets(w.processes, w.arrays);
  res.conflicts = compute_conflict_matrix(w.processes, ds, base, cfg.geometry,
                                          schedule_relation(res.schedule));
  res.threshold = (res.conflicts.n >= 2) ? default_threshold(res.conflicts) : 0;
  res.plan = (res.conflicts.n >= 2)
                 ? relayout_select(res.conflicts, all_array_pairs(), res.threshold, cfg.geometry)
                 : LayoutPlan{res.conflicts.ids,
                              std::vector<LayoutPlan::Entry>(res.conflicts.ids.size())};
  res.layout = apply_plan(res.plan, w.arrays, cfg.geometry);
  return res;
}

inline std::vector<LayoutSummaryEntry> layout_summary(const AddressMap& layout) {
  std::vector<LayoutSummaryEntry> out;
  for (const auto& a : layout.arrays()) {
    const Region& reg = layout.region(a.id);
    out.push_back({a.name, reg.base, reg.size, reg.relayouted, reg.b});
  }
  return out;
}

inline Report run(const Workload& w, PolicyKind kind, const SimConfig& cfg) {
  ExtendedProcessGraph g = build_epg(w.processes, w.edges);
  switch (kind) {
    case PolicyKind::Random: {
      StaticSchedule s = rs_schedule(g, cfg.cores, cfg.seed);
      return run_static(w, g, s, base_layout(w.arrays, cfg.geometry), cfg, "rs");
    }
    case PolicyKind::RoundRobin:
      return run_round_robin(w, g, base_layout(w.arrays, cfg.geometry), cfg);
    case PolicyKind::Locality: {
      SharingMatrix m = build_sharing_matrix(w.processes, w.arrays);
      StaticSchedule s = ls_schedule(g, m, cfg.cores, cfg.trim_rule);
      return run_static(w, g, s, base_layout(w.arrays, cfg.geometry), cfg, "ls");
    }
    case PolicyKind::LocalityMapping: {
      SharingMatrix m = build_sharing_matrix(w.processes, w.arrays);
      LsmLayoutResult lr = lsm_layout(w, g, m, cfg);
      Report r = run_static(w, g, lr.schedule, lr.layout, cfg, "lsm");
      r.layout = layout_summary(lr.layout);
      return r;
    }
  }
  throw std::logic_error("unknown policy");
}

inline std::vector<Report> compare(const Workload& w, std::span<const PolicyKind> kinds,
                                   const SimConfig& cfg) {
  std::vector<Report> out;
  out.reserve(kinds.size());
  for (auto k : kinds) out.push_back(run(w, k, cfg));
  return out;
}

}  // namespace locsched
