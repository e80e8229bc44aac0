#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <unordered_map>
#include <vector>

#include "locsched/process_graph.hpp"
#include "locsched/scheduler.hpp"

// Element-to-address mapping, the array-by-array conflict matrix, the greedy
// re-layout selection, and the half-cache-page interleaving remap with a
// collision-free allocation pass.

namespace locsched {

struct CacheGeometry {
  std::uint64_t cache_size = 8192;   // bytes
  std::uint64_t associativity = 2;   // ways
  std::uint64_t line_size = 32;      // bytes, power of two

  // C, the cache page: the address period after which set indices repeat.
  std::uint64_t cache_page() const { return cache_size / associativity; }
  std::uint64_t num_sets() const { return cache_size / (associativity * line_size); }

  void validate() const {
    if (associativity < 1 || line_size < 1 || cache_size < 1)
      throw std::invalid_argument("cache geometry fields must be positive");
    if ((line_size & (line_size - 1)) != 0)
      throw std::invalid_argument("line size must be a power of two");
    if (cache_size % (associativity * line_size) != 0)
      throw std::invalid_argument("cache size must be divisible by associativity * line size");
    std::uint64_t c = cache_page();
    if (c % line_size != 0 || c % 2 != 0 || (c / 2) % line_size != 0)
      throw std::invalid_argument("cache page must be an even multiple of the line size");
  }
};

inline std::uint64_t set_index(std::uint64_t addr, const CacheGeometry& g) {
  return (addr / g.line_size) % g.num_sets();
}

// addr' = 2*addr - addr mod (C/2) + b: splits the region into half-page
// chunks and spreads them one page apart, shifted by b.
inline std::uint64_t remap_addr(std::uint64_t rel_addr, std::uint64_t b, std::uint64_t c) {
  if (b != 0 && b != c / 2)
    throw std::logic_error("remap offset b must be 0 or C/2");
  return 2 * rel_addr - rel_addr % (c / 2) + b;
}

struct Region {
  std::uint64_t base = 0;
  std::uint64_t size = 0;       // bytes reserved
  bool relayouted = false;
  std::uint64_t b = 0;          // 0 or C/2, meaningful only if relayouted
};

// Final element -> byte address function for one workload.
class AddressMap {
 public:
  AddressMap() = default;
  AddressMap(std::vector<ArrayDecl> arrays, std::vector<Region> regions, std::uint64_t cache_page)
      : arrays_(std::move(arrays)), regions_(std::move(regions)), cache_page_(cache_page) {
    for (const auto& a : arrays_) index_[a.id] = &a - arrays_.data();
  }

  std::uint64_t element_addr(ArrayId array, std::uint64_t linear_index) const {
    std::size_t i = slot(array);
    std::uint64_t off = linear_index * static_cast<std::uint64_t>(arrays_[i].element_size);
    const Region& r = regions_[i];
    if (off >= static_cast<std::uint64_t>(arrays_[i].byte_size()))
      throw std::out_of_range("element index outside array '" + arrays_[i].name + "'");
    return r.relayouted ? r.base + remap_addr(off, r.b, cache_page_) : r.base + off;
  }

  std::uint64_t element_addr(ArrayId array, std::span<const std::int64_t> indices) const {
    return element_addr(array, linearize(arrays_[slot(array)], indices));
  }

  const Region& region(ArrayId array) const { return regions_[slot(array)]; }
  const std::vector<ArrayDecl>& arrays() const { return arrays_; }
  std::uint64_t cache_page() const { return cache_page_; }

 private:
  std::size_t slot(ArrayId id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw std::out_of_range("unknown array id " + std::to_string(id));
    return it->second;
  }

  std::vector<ArrayDecl> arrays_;
  std::vector<Region> regions_;
  std::unordered_map<ArrayId, std::size_t> index_;
  std::uint64_t cache_page_ = 0;
};

namespace detail {
inline std::uint64_t pad_to(std::uint64_t v, std::uint64_t align) {
  return (v + align - 1) / align * align;
}
}  // namespace detail

// Row-major allocation with fresh disjoint regions, each padded to a multiple
// of C/2. Explicit bases from the workload file are honored after validation.
inline AddressMap base_layout(std::vector<ArrayDecl> arrays, const CacheGeometry& g) {
  g.validate();
  const std::uint64_t half = g.cache_page() / 2;
  std::vector<Region> regions(arrays.size());
  std::uint64_t cursor = 0;
  for (std::size_t i = 0; i < arrays.size(); ++i) {
    std::uint64_t size = detail::pad_to(static_cast<std::uint64_t>(arrays[i].byte_size()), half);
    if (arrays[i].base) {
      if (*arrays[i].base % half != 0)
        throw std::invalid_argument("array '" + arrays[i].name +
                                    "': explicit base must be a multiple of C/2");
      regions[i] = {*arrays[i].base, size, false, 0};
    } else {
      regions[i] = {cursor, size, false, 0};
    }
    cursor = std::max(cursor, regions[i].base + size);
  }
  for (std::size_t i = 0; i < regions.size(); ++i)
    for (std::size_t j = i + 1; j < regions.size(); ++j) {
      bool overlap = regions[i].base < regions[j].base + regions[j].size &&
                     regions[j].base < regions[i].base + regions[i].size;
      if (overlap)
        throw std::invalid_argument("array regions '" + arrays[i].name + "' and '" +
                                    arrays[j].name + "' overlap");
    }
  return AddressMap(std::move(arrays), std::move(regions), g.cache_page());
}

struct ConflictMatrix {
  std::uint32_t n = 0;                // array count
  std::vector<ArrayId> ids;           // row/column order
  std::vector<std::uint64_t> cells;   // n*n, symmetric, zero diagonal

  std::uint64_t at(std::uint32_t x, std::uint32_t y) const { return cells[std::size_t(x) * n + y]; }
  std::uint64_t& at(std::uint32_t x, std::uint32_t y) { return cells[std::size_t(x) * n + y]; }
};

// True when processes p and q run back to back on some core, or p == q.
using ProcessRelation = std::function<bool(std::uint32_t, std::uint32_t)>;

inline ProcessRelation all_pairs_relation() {
  return [](std::uint32_t, std::uint32_t) { return true; };
}

// Same process, or successive (adjacent non-idle entries) on the same core.
inline ProcessRelation schedule_relation(const StaticSchedule& s) {
  auto related = std::make_shared<std::vector<std::pair<std::uint32_t, std::uint32_t>>>();
  for (const auto& q : s.queues) {
    std::uint32_t prev = kIdleSlot;
    for (auto p : q) {
      if (p == kIdleSlot) continue;
      if (prev != kIdleSlot) related->emplace_back(std::min(prev, p), std::max(prev, p));
      prev = p;
    }
  }
  std::sort(related->begin(), related->end());
  return [related](std::uint32_t a, std::uint32_t b) {
    if (a == b) return true;
    return std::binary_search(related->begin(), related->end(),
                              std::make_pair(std::min(a, b), std::max(a, b)));
  };
}

// cells[x][y] = sum over cache sets s of n_x(s) * n_y(s), where n_x(s) counts
// distinct accessed elements of array x mapping to set s, the element
// universe being restricted to processes that stand in the relation with a
// process touching the other array.
inline ConflictMatrix compute_conflict_matrix(std::span<const Process> processes,
                                              std::span<const DataSet> data_sets,
                                              const AddressMap& layout, const CacheGeometry& g,
                                              const ProcessRelation& related) {
  g.validate();
  const auto& arrays = layout.arrays();
  ConflictMatrix m;
  m.n = static_cast<std::uint32_t>(arrays.size());
  for (const auto& a : arrays) m.ids.push_back(a.id);
  m.cells.assign(std::size_t(m.n) * m.n, 0);

  const std::uint32_t np = static_cast<std::uint32_t>(processes.size());
  // Per process, per array: the accessed elements of that array.
  auto touches = [&](std::uint32_t p, ArrayId a) {
    for (const auto& e : data_sets[p].elements)
      if (e.array == a) return true;
    return false;
  };

  const std::uint64_t sets = g.num_sets();
  for (std::uint32_t xi = 0; xi < m.n; ++xi) {
    for (std::uint32_t yi = xi + 1; yi < m.n; ++yi) {
      ArrayId x = m.ids[xi], y = m.ids[yi];
      // Element universes: union over related ordered pairs (p, q) with p
      // touching x and q touching y (and symmetrically).
      std::vector<Element> ux, uy;
      for (std::uint32_t p = 0; p < np; ++p) {
        for (std::uint32_t q = 0; q < np; ++q) {
          if (!related(p, q)) continue;
          if (touches(p, x) && touches(q, y)) {
            for (const auto& e : data_sets[p].elements)
              if (e.array == x) ux.push_back(e);
            for (const auto& e : data_sets[q].elements)
              if (e.array == y) uy.push_back(e);
          }
        }
      }
      auto uniq = [](std::vector<Element>& v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
      };
      uniq(ux);
      uniq(uy);
      std::vector<std::uint64_t> hx(sets, 0), hy(sets, 0);
      for (const auto& e : ux) ++hx[set_index(layout.element_addr(x, e.index), g)];
      for (const auto& e : uy) ++hy[set_index(layout.element_addr(y, e.index), g)];
      std::uint64_t cell = 0;
      for (std::uint64_t s = 0; s < sets; ++s) cell += hx[s] * hy[s];
      m.at(xi, yi) = cell;
      m.at(yi, xi) = cell;
    }
  }
  return m;
}

// Mean over all unordered distinct array pairs, zeros included, floored.
inline std::uint64_t default_threshold(const ConflictMatrix& m) {
  if (m.n < 2) throw std::logic_error("threshold needs at least two arrays");
  std::uint64_t sum = 0, pairs = 0;
  for (std::uint32_t x = 0; x < m.n; ++x)
    for (std::uint32_t y = x + 1; y < m.n; ++y) {
      sum += m.at(x, y);
      ++pairs;
    }
  return sum / pairs;
}

struct LayoutPlan {
  struct Entry {
    bool relayouted = false;
    std::uint64_t b = 0;
  };
  std::vector<ArrayId> ids;
  std::vector<Entry> entries;  // parallel to ids

  const Entry& entry(ArrayId id) const {
    for (std::size_t i = 0; i < ids.size(); ++i)
      if (ids[i] == id) return entries[i];
    throw std::out_of_range("array id not in plan");
  }
};

// Array-pair counterpart of the process relation: true when some related
// process pair touches both arrays. Unrelated pairs have zero conflict cells
// under compute_conflict_matrix, so passing all-true here is also sound.
using ArrayPairRelation = std::function<bool(ArrayId, ArrayId)>;

inline ArrayPairRelation all_array_pairs() {
  return [](ArrayId, ArrayId) { return true; };
}

// Greedy selection: repeatedly take the largest remaining cell among pairs
// where at least one side is not yet re-layouted; stop at or below the
// threshold; assign opposite b values so the pair's set ranges separate. A
// pair whose both sides are already re-layouted is skipped, its cell zeroed.
inline LayoutPlan relayout_select(ConflictMatrix m, const ArrayPairRelation& related,
                                  std::uint64_t threshold, const CacheGeometry& g) {
  g.validate();
  const std::uint64_t half = g.cache_page() / 2;
  LayoutPlan plan;
  plan.ids = m.ids;
  plan.entries.assign(m.ids.size(), {});
  for (;;) {
    std::uint64_t best = 0;
    std::uint32_t bx = 0, by = 0;
    bool found = false;
    for (std::uint32_t x = 0; x < m.n; ++x)
      for (std::uint32_t y = x + 1; y < m.n; ++y) {
        if (plan.entries[x].relayouted && plan.entries[y].relayouted) continue;
        if (!found || m.at(x, y) > best) {
          best = m.at(x, y);
          bx = x;
          by = y;
          found = true;
        }
      }
    if (!found || best <= threshold) break;
    m.at(bx, by) = 0;
    m.at(by, bx) = 0;
    if (!related(m.ids[bx], m.ids[by])) continue;
    auto& ex = plan.entries[bx];
    auto& ey = plan.entries[by];
    if (ex.relayouted && !ey.relayouted) {
      ey = {true, ex.b == 0 ? half : 0};
    } else if (ey.relayouted && !ex.relayouted) {
      ex = {true, ey.b == 0 ? half : 0};
    } else if (!ex.relayouted && !ey.relayouted) {
      // Lower array id takes b = 0.
      if (m.ids[bx] <= m.ids[by]) {
        ex = {true, 0};
        ey = {true, half};
      } else {
        ex = {true, half};
        ey = {true, 0};
      }
    }
  }
  return plan;
}

// Allocation pass: fresh regions in id order; re-layouted arrays get twice
// the padded size with a C-aligned base so opposite-b images stay in
// opposite page halves.
inline AddressMap apply_plan(const LayoutPlan& plan, std::vector<ArrayDecl> arrays,
                             const CacheGeometry& g) {
  g.validate();
  const std::uint64_t c = g.cache_page();
  const std::uint64_t half = c / 2;
  std::vector<Region> regions(arrays.size());
  std::uint64_t cursor = 0;
  for (std::size_t i = 0; i < arrays.size(); ++i) {
    const auto& e = plan.entry(arrays[i].id);
    std::uint64_t padded = detail::pad_to(static_cast<std::uint64_t>(arrays[i].byte_size()), half);
    if (e.relayouted) {
      cursor = detail::pad_to(cursor, c);
      regions[i] = {cursor, 2 * padded, true, e.b};
      cursor += 2 * padded;
    } else {
      regions[i] = {cursor, padded, false, 0};
      cursor += padded;
    }
  }
  return AddressMap(std::move(arrays), std::move(regions), c);
}

}  // namespace locsched
