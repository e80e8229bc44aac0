#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "locsched/access_model.hpp"

// Processes, the extended process graph with intra- and inter-task
// dependences, and the process-by-process sharing matrix.

namespace locsched {

struct ProcessId {
  std::uint32_t task = 0;
  std::uint32_t index = 0;   // within the task
  std::uint32_t global = 0;  // dense, unique across the workload
};

struct Process {
  ProcessId id;
  IterationSpace space;
  std::vector<AccessDescriptor> refs;
};

struct Edge {
  std::uint32_t from = 0;
  std::uint32_t to = 0;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct ExtendedProcessGraph {
  std::vector<Process> processes;          // indexed by global id
  std::vector<Edge> edges;                 // sorted, unique
  std::vector<std::vector<std::uint32_t>> preds;
  std::vector<std::vector<std::uint32_t>> succs;

  std::uint32_t size() const { return static_cast<std::uint32_t>(processes.size()); }
};

namespace detail {

// DFS cycle extraction, only invoked once a cycle is known to exist.
inline std::string find_cycle(const ExtendedProcessGraph& g) {
  const std::uint32_t n = g.size();
  std::vector<int> state(n, 0);  // 0 unvisited, 1 on stack, 2 done
  std::vector<std::uint32_t> stack;
  std::string cycle;
  std::function<bool(std::uint32_t)> dfs = [&](std::uint32_t v) {
    state[v] = 1;
    stack.push_back(v);
    for (auto w : g.succs[v]) {
      if (state[w] == 1) {
        auto it = std::find(stack.begin(), stack.end(), w);
        for (; it != stack.end(); ++it) cycle += "P" + std::to_string(*it) + " -> ";
        cycle += "P" + std::to_string(w);
        return true;
      }
      if (state[w] == 0 && dfs(w)) return true;
    }
    stack.pop_back();
    state[v] = 2;
    return false;
  };
  for (std::uint32_t v = 0; v < n; ++v)
    if (state[v] == 0 && dfs(v)) return cycle;
  return cycle;
}

}  // namespace detail

inline ExtendedProcessGraph build_epg(std::vector<Process> processes, std::vector<Edge> edges) {
  ExtendedProcessGraph g;
  g.processes = std::move(processes);
  const std::uint32_t n = g.size();
  for (std::uint32_t i = 0; i < n; ++i) {
    if (g.processes[i].id.global != i)
      throw std::invalid_argument("process global ids must be dense 0..n-1");
    if (g.processes[i].refs.empty())
      throw std::invalid_argument("process P" + std::to_string(i) + " has no references");
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  for (const auto& e : edges) {
    if (e.from >= n || e.to >= n)
      throw std::invalid_argument("dependence edge (" + std::to_string(e.from) + "," +
                                  std::to_string(e.to) + ") references a missing process");
    if (e.from == e.to)
      throw std::invalid_argument("self-dependence on P" + std::to_string(e.from));
  }
  g.edges = std::move(edges);
  g.preds.assign(n, {});
  g.succs.assign(n, {});
  for (const auto& e : g.edges) {
    g.succs[e.from].push_back(e.to);
    g.preds[e.to].push_back(e.from);
  }
  // Kahn pass for acyclicity.
  std::vector<std::uint32_t> indeg(n);
  for (std::uint32_t v = 0; v < n; ++v) indeg[v] = static_cast<std::uint32_t>(g.preds[v].size());
  std::vector<std::uint32_t> ready;
  for (std::uint32_t v = 0; v < n; ++v)
    if (indeg[v] == 0) ready.push_back(v);
  std::uint32_t seen = 0;
  while (!ready.empty()) {
    std::uint32_t v = ready.back();
    ready.pop_back();
    ++seen;
    for (auto w : g.succs[v])
      if (--indeg[w] == 0) ready.push_back(w);
  }
  if (seen != n)
    throw std::invalid_argument("dependence cycle: " + detail::find_cycle(g));
  return g;
}

// Processes not yet done whose every predecessor is done.
inline std::vector<std::uint32_t> independent_set(const ExtendedProcessGraph& g,
                                                  const std::vector<bool>& done) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t v = 0; v < g.size(); ++v) {
    if (done[v]) continue;
    bool ok = true;
    for (auto p : g.preds[v])
      if (!done[p]) {
        ok = false;
        break;
      }
    if (ok) out.push_back(v);
  }
  return out;
}

struct SharingMatrix {
  std::uint32_t n = 0;
  std::vector<std::uint64_t> cells;  // n*n, symmetric, zero diagonal

  std::uint64_t at(std::uint32_t p, std::uint32_t q) const { return cells[std::size_t(p) * n + q]; }
  std::uint64_t& at(std::uint32_t p, std::uint32_t q) { return cells[std::size_t(p) * n + q]; }
};

inline std::vector<DataSet> enumerate_all_data_sets(std::span<const Process> processes,
                                                    std::span<const ArrayDecl> arrays) {
  std::vector<DataSet> ds;
  ds.reserve(processes.size());
  for (const auto& p : processes) ds.push_back(enumerate_data_set(p.refs, p.space, arrays));
  return ds;
}

inline SharingMatrix build_sharing_matrix(std::span<const Process> processes,
                                          std::span<const ArrayDecl> arrays) {
  SharingMatrix m;
  m.n = static_cast<std::uint32_t>(processes.size());
  m.cells.assign(std::size_t(m.n) * m.n, 0);
  const auto ds = enumerate_all_data_sets(processes, arrays);
  for (std::uint32_t p = 0; p < m.n; ++p)
    for (std::uint32_t q = p + 1; q < m.n; ++q) {
      std::uint64_t s = sharing_size(ds[p], ds[q]);
      m.at(p, q) = s;
      m.at(q, p) = s;
    }
  return m;
}

}  // namespace locsched
