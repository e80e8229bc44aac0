#pragma once

#include <algorithm>
#include <set>
#include <string>

#include "locsched/workload.hpp"

// Shared fixtures and independent oracles for the test suites. Oracles here
// are deliberately naive re-implementations; they must not call into the
// code paths they check.

namespace testutil {

using namespace locsched;

inline std::string workload_path(const std::string& name) {
  return std::string(LOCSCHED_WORKLOAD_DIR) + "/" + name + ".workload";
}

inline Workload load_workload(const std::string& name) {
  return parse_workload(workload_path(name));
}

// Brute-force data-set oracle: explicit nested loops and a std::set, no reuse
// of the enumeration path under test.
inline std::set<std::pair<ArrayId, std::uint64_t>> oracle_data_set(
    const Process& p, std::span<const ArrayDecl> arrays) {
  std::set<std::pair<ArrayId, std::uint64_t>> out;
  const auto& b = p.space.bounds;
  std::int64_t l0 = b[0].lower, u0 = b[0].upper;
  std::int64_t l1 = b.size() > 1 ? b[1].lower : 0, u1 = b.size() > 1 ? b[1].upper : 1;
  std::int64_t l2 = b.size() > 2 ? b[2].lower : 0, u2 = b.size() > 2 ? b[2].upper : 1;
  for (std::int64_t i0 = l0; i0 < u0; ++i0)
    for (std::int64_t i1 = l1; i1 < u1; ++i1)
      for (std::int64_t i2 = l2; i2 < u2; ++i2) {
        std::vector<std::int64_t> pt{i0};
        if (b.size() > 1) pt.push_back(i1);
        if (b.size() > 2) pt.push_back(i2);
        for (const auto& r : p.refs) {
          const ArrayDecl& arr = array_by_id(arrays, r.array);
          std::uint64_t lin = 0;
          for (std::size_t d = 0; d < arr.dims.size(); ++d) {
            std::int64_t v = r.index[d].constant;
            for (std::size_t k = 0; k < pt.size(); ++k) v += r.index[d].coeffs[k] * pt[k];
            lin = lin * static_cast<std::uint64_t>(arr.dims[d]) + static_cast<std::uint64_t>(v);
          }
          out.insert({r.array, lin});
        }
      }
  return out;
}

// Distinct line tags in a trace.
inline std::uint64_t oracle_distinct_lines(std::span<const TraceEvent> trace,
                                           std::uint64_t line_size) {
  std::set<std::uint64_t> lines;
  for (const auto& e : trace) lines.insert(e.addr / line_size);
  return lines.size();
}

// Reference LRU: per-set timestamp scan, structurally different from the
// MRU-list implementation under test.
class ReferenceLru {
 public:
  ReferenceLru(const CacheGeometry& g) : geom_(g), tags_(g.num_sets()), stamps_(g.num_sets()) {}

  bool access(std::uint64_t addr) {
    std::uint64_t tag = addr / geom_.line_size;
    std::uint64_t s = (addr / geom_.line_size) % geom_.num_sets();
    auto& tg = tags_[s];
    auto& st = stamps_[s];
    ++clock_;
    for (std::size_t i = 0; i < tg.size(); ++i)
      if (tg[i] == tag) {
        st[i] = clock_;
        return true;
      }
    if (tg.size() < geom_.associativity) {
      tg.push_back(tag);
      st.push_back(clock_);
    } else {
      std::size_t victim = 0;
      for (std::size_t i = 1; i < st.size(); ++i)
        if (st[i] < st[victim]) victim = i;
      tg[victim] = tag;
      st[victim] = clock_;
    }
    return false;
  }

  // Tags of one set, most recently used first.
  std::vector<std::uint64_t> tags_by_recency(std::uint64_t s) const {
    std::vector<std::size_t> order(tags_[s].size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return stamps_[s][a] > stamps_[s][b]; });
    std::vector<std::uint64_t> out;
    for (auto i : order) out.push_back(tags_[s][i]);
    return out;
  }

 private:
  CacheGeometry geom_;
  std::vector<std::vector<std::uint64_t>> tags_;
  std::vector<std::vector<std::uint64_t>> stamps_;
  std::uint64_t clock_ = 0;
};

// Simple workload builders for unit tests.
inline ArrayDecl make_array(ArrayId id, std::string name, std::vector<std::int64_t> dims,
                            std::int64_t esz = 4) {
  ArrayDecl a;
  a.id = id;
  a.name = std::move(name);
  a.dims = std::move(dims);
  a.element_size = esz;
  return a;
}

inline AccessDescriptor ref1d(ArrayId arr, std::vector<std::int64_t> coeffs, std::int64_t c,
                              AccessMode mode = AccessMode::Read) {
  return {arr, {AffineExpr{std::move(coeffs), c}}, mode};
}

}  // namespace testutil
