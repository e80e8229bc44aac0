#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "test_util.hpp"

using namespace locsched;
using testutil::load_workload;

TEST_CASE("eval_affine basics") {
  CHECK(eval_affine({{1000, 1}, 0}, std::vector<std::int64_t>{2, 5}) == 2005);
  CHECK(eval_affine({{0, 0}, 5}, std::vector<std::int64_t>{3, 7}) == 5);
  CHECK(eval_affine({{1}, 0}, std::vector<std::int64_t>{42}) == 42);
  CHECK_THROWS_AS(eval_affine({{1, 2}, 0}, std::vector<std::int64_t>{1}), std::invalid_argument);
}

TEST_CASE("iteration space validation and point order") {
  IterationSpace s{{{0, 2}, {0, 3}}};
  s.validate();
  std::vector<std::vector<std::int64_t>> pts;
  s.for_each_point([&](std::span<const std::int64_t> p) {
    pts.emplace_back(p.begin(), p.end());
  });
  REQUIRE(pts.size() == 6);
  CHECK(pts.front() == std::vector<std::int64_t>{0, 0});
  CHECK(pts[1] == std::vector<std::int64_t>{0, 1});  // inner loop fastest
  CHECK(pts.back() == std::vector<std::int64_t>{1, 2});

  IterationSpace empty{{{3, 3}}};
  CHECK_THROWS(empty.validate());
  IterationSpace deep{{{0, 1}, {0, 1}, {0, 1}, {0, 1}}};
  CHECK_THROWS(deep.validate());
}

TEST_CASE("data set of the first shipped process") {
  Workload w = load_workload("prog1");
  const Process& p0 = w.processes[0];
  DataSet ds = enumerate_data_set(p0.refs, p0.space, w.arrays);
  CHECK(ds.size() == 3001);  // 3000 elements of A plus one accumulator slot

  auto oracle = testutil::oracle_data_set(p0, w.arrays);
  REQUIRE(oracle.size() == ds.size());
  std::size_t i = 0;
  for (const auto& [a, idx] : oracle) {
    CHECK(ds.elements[i].array == a);
    CHECK(ds.elements[i].index == idx);
    ++i;
  }
}

TEST_CASE("degenerate data sets") {
  std::vector<ArrayDecl> arrays{testutil::make_array(0, "A", {4, 4})};
  IterationSpace s{{{0, 3}}};
  CHECK(enumerate_data_set({}, s, arrays).size() == 0);

  AccessDescriptor constant{0, {AffineExpr{{0}, 0}, AffineExpr{{0}, 0}}, AccessMode::Read};
  DataSet ds = enumerate_data_set(std::vector{constant}, s, arrays);
  REQUIRE(ds.size() == 1);
  CHECK(ds.elements[0] == Element{0, 0});
}

TEST_CASE("out-of-bounds refs are rejected eagerly with a location") {
  std::vector<ArrayDecl> arrays{testutil::make_array(0, "A", {10})};
  IterationSpace s{{{0, 11}}};
  AccessDescriptor bad = testutil::ref1d(0, {1}, 0);
  CHECK_THROWS_WITH_AS(enumerate_data_set(std::vector{bad}, s, arrays),
                       doctest::Contains("'A'"), std::out_of_range);
  // Negative side too.
  IterationSpace s2{{{0, 5}}};
  AccessDescriptor neg = testutil::ref1d(0, {1}, -1);
  CHECK_THROWS_AS(enumerate_data_set(std::vector{neg}, s2, arrays), std::out_of_range);
}

TEST_CASE("sharing counts of the shipped example") {
  Workload w = load_workload("prog1");
  auto ds = enumerate_all_data_sets(w.processes, w.arrays);
  CHECK(sharing_size(ds[0], ds[1]) == 2000);
  CHECK(sharing_size(ds[0], ds[2]) == 1000);
  CHECK(sharing_size(ds[0], ds[3]) == 0);
  CHECK(sharing_size(ds[0], ds[0]) == ds[0].size());
}

TEST_CASE("sharing_size properties on random data sets") {
  std::mt19937_64 rng(7);
  for (int iter = 0; iter < 50; ++iter) {
    auto random_ds = [&] {
      DataSet d;
      std::size_t n = rng() % 40;
      for (std::size_t i = 0; i < n; ++i)
        d.elements.push_back({static_cast<ArrayId>(rng() % 3), rng() % 50});
      std::sort(d.elements.begin(), d.elements.end());
      d.elements.erase(std::unique(d.elements.begin(), d.elements.end()), d.elements.end());
      return d;
    };
    DataSet a = random_ds(), b = random_ds();
    std::uint64_t ab = sharing_size(a, b);
    CHECK(ab == sharing_size(b, a));
    CHECK(ab <= std::min(a.size(), b.size()));
    // Against a set-intersection oracle.
    std::uint64_t n = 0;
    for (const auto& e : a.elements) n += b.contains(e) ? 1 : 0;
    CHECK(ab == n);
  }
}

TEST_CASE("enumeration agrees with the nested-loop oracle on random workloads") {
  std::mt19937_64 rng(11);
  for (int iter = 0; iter < 20; ++iter) {
    std::vector<ArrayDecl> arrays{testutil::make_array(0, "X", {60, 8}),
                                  testutil::make_array(1, "Y", {200})};
    Process p;
    p.id = {0, 0, 0};
    std::int64_t d0 = 1 + static_cast<std::int64_t>(rng() % 8);
    std::int64_t d1 = 1 + static_cast<std::int64_t>(rng() % 12);
    p.space.bounds = {{0, d0}, {0, d1}};
    p.refs.push_back({0,
                      {AffineExpr{{1, static_cast<std::int64_t>(rng() % 4)}, 0},
                       AffineExpr{{0, 0}, static_cast<std::int64_t>(rng() % 8)}},
                      AccessMode::Read});
    p.refs.push_back({1, {AffineExpr{{3, 1}, static_cast<std::int64_t>(rng() % 10)}},
                      AccessMode::ReadWrite});
    DataSet ds = enumerate_data_set(p.refs, p.space, arrays);
    auto oracle = testutil::oracle_data_set(p, arrays);
    REQUIRE(ds.size() == oracle.size());
    std::size_t i = 0;
    for (const auto& [a, idx] : oracle) {
      CHECK(ds.elements[i] == Element{a, idx});
      ++i;
    }
  }
}
