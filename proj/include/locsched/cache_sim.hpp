#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "locsched/layout.hpp"
#include "locsched/process_graph.hpp"

// Trace generation from a process over a finished address map, and exact
// set-associative LRU simulation with the two-latency timing model.

namespace locsched {

struct TraceEvent {
  std::uint64_t addr = 0;
  bool write = false;
};

// Events in lexicographic iteration order; within a point, refs in textual
// order; a read-write ref emits the read first.
inline std::vector<TraceEvent> generate_trace(const Process& p, const AddressMap& layout) {
  std::vector<TraceEvent> trace;
  trace.reserve(static_cast<std::size_t>(p.space.point_count()) * p.refs.size());
  const auto& arrays = layout.arrays();
  std::vector<std::int64_t> idx;
  p.space.for_each_point([&](std::span<const std::int64_t> pt) {
    for (const auto& r : p.refs) {
      const ArrayDecl& arr = array_by_id(arrays, r.array);
      idx.resize(arr.dims.size());
      for (std::size_t d = 0; d < arr.dims.size(); ++d) idx[d] = eval_affine(r.index[d], pt);
      std::uint64_t addr = layout.element_addr(r.array, linearize(arr, idx));
      switch (r.mode) {
        case AccessMode::Read: trace.push_back({addr, false}); break;
        case AccessMode::Write: trace.push_back({addr, true}); break;
        case AccessMode::ReadWrite:
          trace.push_back({addr, false});
          trace.push_back({addr, true});
          break;
      }
    }
  });
  return trace;
}

struct AccessOutcome {
  bool hit = false;
  std::uint32_t cycles = 0;
};

// LRU, write-allocate; writes cost the same as reads, dirty evictions are
// free. Miss cost is the full off-chip latency, not added on top of a hit.
class CacheState {
 public:
  CacheState(const CacheGeometry& g, std::uint32_t hit_latency = 2,
             std::uint32_t miss_latency = 75)
      : geom_(g), hit_latency_(hit_latency), miss_latency_(miss_latency) {
    g.validate();
    sets_.assign(g.num_sets(), {});
  }

  AccessOutcome access(std::uint64_t addr) {
    std::uint64_t tag = addr / geom_.line_size;
    auto& ways = sets_[tag % geom_.num_sets()];
    for (std::size_t i = 0; i < ways.size(); ++i) {
      if (ways[i] == tag) {
        // Move to MRU position.
        for (std::size_t j = i; j > 0; --j) ways[j] = ways[j - 1];
        ways[0] = tag;
        return {true, hit_latency_};
      }
    }
    if (ways.size() == geom_.associativity) ways.pop_back();  // evict LRU
    ways.insert(ways.begin(), tag);
    return {false, miss_latency_};
  }

  const CacheGeometry& geometry() const { return geom_; }
  std::uint32_t hit_latency() const { return hit_latency_; }
  std::uint32_t miss_latency() const { return miss_latency_; }

  // MRU-first tag list of one set; test/inspection use.
  const std::vector<std::uint64_t>& set_contents(std::uint64_t s) const { return sets_[s]; }

 private:
  CacheGeometry geom_;
  std::uint32_t hit_latency_;
  std::uint32_t miss_latency_;
  std::vector<std::vector<std::uint64_t>> sets_;  // MRU first
};

struct SimTotals {
  std::uint64_t hits = 0;
  std::uint64_t misses = 0;
  std::uint64_t cycles = 0;
};

// Folds access over the trace; the state stays usable for continuation
// (quantum slicing).
inline SimTotals simulate(std::span<const TraceEvent> trace, CacheState& state) {
  SimTotals t;
  for (const auto& e : trace) {
    AccessOutcome o = state.access(e.addr);
    (o.hit ? t.hits : t.misses) += 1;
    t.cycles += o.cycles;
  }
  return t;
}

}  // namespace locsched
