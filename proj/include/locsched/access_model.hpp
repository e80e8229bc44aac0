#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

// Affine array accesses over rectangular iteration spaces, per-process data
// sets, and pairwise sharing counts. Everything here is exact enumeration at
// desk scale; these routines double as the ground truth for the rest of the
// toolkit.

namespace locsched {

using ArrayId = std::uint32_t;

struct ArrayDecl {
  ArrayId id = 0;
  std::string name;
  std::vector<std::int64_t> dims;     // extents in elements, row-major
  std::int64_t element_size = 4;      // bytes
  std::optional<std::uint64_t> base;  // optional explicit placement (workload file)

  std::int64_t element_count() const {
    std::int64_t n = 1;
    for (auto d : dims) n *= d;
    return n;
  }
  std::int64_t byte_size() const { return element_count() * element_size; }
};

inline void validate_array(const ArrayDecl& a) {
  if (a.dims.empty())
    throw std::invalid_argument("array '" + a.name + "': dims must be non-empty");
  for (auto d : a.dims)
    if (d < 1)
      throw std::invalid_argument("array '" + a.name + "': every extent must be >= 1");
  if (a.element_size < 1)
    throw std::invalid_argument("array '" + a.name + "': element_size must be >= 1");
}

// One linear expression over the loop variables of the enclosing nest.
struct AffineExpr {
  std::vector<std::int64_t> coeffs;  // one coefficient per loop variable
  std::int64_t constant = 0;
};

inline std::int64_t eval_affine(const AffineExpr& e, std::span<const std::int64_t> point) {
  if (e.coeffs.size() != point.size())
    throw std::invalid_argument("affine expression arity " + std::to_string(e.coeffs.size()) +
                                " does not match iteration point arity " +
                                std::to_string(point.size()));
  std::int64_t v = e.constant;
  for (std::size_t i = 0; i < point.size(); ++i) v += e.coeffs[i] * point[i];
  return v;
}

struct LoopBound {
  std::int64_t lower = 0;  // inclusive
  std::int64_t upper = 0;  // exclusive
};

// Rectangular nest, step 1, depth 1..3.
struct IterationSpace {
  std::vector<LoopBound> bounds;

  std::size_t depth() const { return bounds.size(); }

  std::int64_t point_count() const {
    std::int64_t n = 1;
    for (const auto& b : bounds) n *= (b.upper - b.lower);
    return n;
  }

  void validate() const {
    if (bounds.empty() || bounds.size() > 3)
      throw std::invalid_argument("iteration space depth must be 1..3, got " +
                                  std::to_string(bounds.size()));
    for (std::size_t d = 0; d < bounds.size(); ++d)
      if (bounds[d].lower >= bounds[d].upper)
        throw std::invalid_argument("iteration space dim " + std::to_string(d) +
                                    ": lower bound must be < upper bound");
  }

  // Visits every point in lexicographic order (outer loop slowest).
  template <typename Fn>
  void for_each_point(Fn&& fn) const {
    std::vector<std::int64_t> p(bounds.size());
    for (std::size_t d = 0; d < bounds.size(); ++d) p[d] = bounds[d].lower;
    for (;;) {
      fn(std::span<const std::int64_t>(p));
      std::size_t d = bounds.size();
      while (d > 0) {
        --d;
        if (++p[d] < bounds[d].upper) break;
        p[d] = bounds[d].lower;
        if (d == 0) return;
      }
    }
  }
};

enum class AccessMode { Read, Write, ReadWrite };

struct AccessDescriptor {
  ArrayId array = 0;
  std::vector<AffineExpr> index;  // one expression per array dimension
  AccessMode mode = AccessMode::Read;
};

inline const ArrayDecl& array_by_id(std::span<const ArrayDecl> arrays, ArrayId id) {
  for (const auto& a : arrays)
    if (a.id == id) return a;
  throw std::out_of_range("unknown array id " + std::to_string(id));
}

// Eager bounds validation: for an affine expression over a box, the extrema
// are attained at corners, so checking the two extreme corners per dimension
// is exact.
inline void validate_ref(const AccessDescriptor& ref, const IterationSpace& space,
                         std::span<const ArrayDecl> arrays, const std::string& where = "") {
  const ArrayDecl& arr = array_by_id(arrays, ref.array);
  if (ref.index.size() != arr.dims.size())
    throw std::invalid_argument(where + "ref to '" + arr.name + "': " +
                                std::to_string(ref.index.size()) + " subscripts for a " +
                                std::to_string(arr.dims.size()) + "-dimensional array");
  for (std::size_t d = 0; d < ref.index.size(); ++d) {
    const AffineExpr& e = ref.index[d];
    if (e.coeffs.size() != space.depth())
      throw std::invalid_argument(where + "ref to '" + arr.name + "' dim " + std::to_string(d) +
                                  ": coefficient count does not match nest depth");
    std::vector<std::int64_t> lo_pt(space.depth()), hi_pt(space.depth());
    for (std::size_t i = 0; i < space.depth(); ++i) {
      if (e.coeffs[i] >= 0) {
        lo_pt[i] = space.bounds[i].lower;
        hi_pt[i] = space.bounds[i].upper - 1;
      } else {
        lo_pt[i] = space.bounds[i].upper - 1;
        hi_pt[i] = space.bounds[i].lower;
      }
    }
    std::int64_t lo = eval_affine(e, lo_pt), hi = eval_affine(e, hi_pt);
    if (lo < 0 || hi >= arr.dims[d]) {
      auto pt_str = [](const std::vector<std::int64_t>& p) {
        std::string s = "(";
        for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + std::to_string(p[i]);
        return s + ")";
      };
      throw std::out_of_range(where + "ref to '" + arr.name + "' dim " + std::to_string(d) +
                              ": index " + std::to_string(lo < 0 ? lo : hi) + " at point " +
                              pt_str(lo < 0 ? lo_pt : hi_pt) + " outside extent [0," +
                              std::to_string(arr.dims[d]) + ")");
    }
  }
}

inline std::uint64_t linearize(const ArrayDecl& arr, std::span<const std::int64_t> indices) {
  std::int64_t idx = 0;
  for (std::size_t d = 0; d < arr.dims.size(); ++d) idx = idx * arr.dims[d] + indices[d];
  return static_cast<std::uint64_t>(idx);
}

struct Element {
  ArrayId array = 0;
  std::uint64_t index = 0;  // row-major linearized
  friend auto operator<=>(const Element&, const Element&) = default;
};

// Finite set of distinct (array, element) pairs; kept sorted.
struct DataSet {
  std::vector<Element> elements;
  std::size_t size() const { return elements.size(); }
  bool contains(Element e) const {
    return std::binary_search(elements.begin(), elements.end(), e);
  }
};

inline DataSet enumerate_data_set(std::span<const AccessDescriptor> refs,
                                  const IterationSpace& space,
                                  std::span<const ArrayDecl> arrays) {
  space.validate();
  for (const auto& r : refs) validate_ref(r, space, arrays);
  DataSet ds;
  std::vector<std::int64_t> idx;
  space.for_each_point([&](std::span<const std::int64_t> pt) {
    for (const auto& r : refs) {
      const ArrayDecl& arr = array_by_id(arrays, r.array);
      idx.resize(arr.dims.size());
      for (std::size_t d = 0; d < arr.dims.size(); ++d) idx[d] = eval_affine(r.index[d], pt);
      ds.elements.push_back({r.array, linearize(arr, idx)});
    }
  });
  std::sort(ds.elements.begin(), ds.elements.end());
  ds.elements.erase(std::unique(ds.elements.begin(), ds.elements.end()), ds.elements.end());
  return ds;
}

// |a ∩ b| in distinct elements.
inline std::uint64_t sharing_size(const DataSet& a, const DataSet& b) {
  std::uint64_t n = 0;
  auto ia = a.elements.begin(), ib = b.elements.begin();
  while (ia != a.elements.end() && ib != b.elements.end()) {
    if (*ia < *ib)
      ++ia;
    else if (*ib < *ia)
      ++ib;
    else {
      ++n;
      ++ia;
      ++ib;
    }
  }
  return n;
}

}  // namespace locsched
