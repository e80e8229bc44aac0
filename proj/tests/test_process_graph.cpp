#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "test_util.hpp"

using namespace locsched;
using testutil::load_workload;

namespace {

Process trivial_process(std::uint32_t task, std::uint32_t index, std::uint32_t global) {
  Process p;
  p.id = {task, index, global};
  p.space.bounds = {{0, 1}};
  p.refs.push_back(testutil::ref1d(0, {1}, 0));
  return p;
}

std::vector<ArrayDecl> one_array() {
  return {testutil::make_array(0, "X", {16})};
}

}  // namespace

TEST_CASE("epg construction") {
  Workload w = load_workload("prog1");
  ExtendedProcessGraph g = build_epg(w.processes, w.edges);
  CHECK(g.size() == 8);
  CHECK(g.edges.empty());

  ExtendedProcessGraph single = build_epg({trivial_process(0, 0, 0)}, {});
  CHECK(single.size() == 1);

  std::vector<Process> two{trivial_process(0, 0, 0), trivial_process(0, 1, 1)};
  CHECK_THROWS_WITH_AS(build_epg(two, {{0, 1}, {1, 0}}), doctest::Contains("cycle"),
                       std::invalid_argument);
  CHECK_THROWS_AS(build_epg(two, {{0, 2}}), std::invalid_argument);  // dangling endpoint
  CHECK_THROWS_AS(build_epg(two, {{0, 0}}), std::invalid_argument);  // self edge
}

TEST_CASE("independent_set") {
  Workload w = load_workload("prog1");
  ExtendedProcessGraph g = build_epg(w.processes, w.edges);
  std::vector<bool> none(8, false);
  CHECK(independent_set(g, none).size() == 8);
  std::vector<bool> all(8, true);
  CHECK(independent_set(g, all).empty());

  std::vector<Process> two{trivial_process(0, 0, 0), trivial_process(0, 1, 1)};
  ExtendedProcessGraph chain = build_epg(two, {{0, 1}});
  CHECK(independent_set(chain, {false, false}) == std::vector<std::uint32_t>{0});
  CHECK(independent_set(chain, {true, false}) == std::vector<std::uint32_t>{1});
}

TEST_CASE("sharing matrix reproduces the banded pattern") {
  Workload w = load_workload("prog1");
  SharingMatrix m = build_sharing_matrix(w.processes, w.arrays);
  REQUIRE(m.n == 8);
  for (std::uint32_t p = 0; p < 8; ++p)
    for (std::uint32_t q = 0; q < 8; ++q) {
      std::uint64_t want = 0;
      if (p != q) {
        std::uint32_t d = p > q ? p - q : q - p;
        want = d == 1 ? 2000 : d == 2 ? 1000 : 0;
      }
      CHECK(m.at(p, q) == want);
    }
}

TEST_CASE("sharing matrix at one-tenth scale") {
  Workload w = load_workload("prog1_small");
  SharingMatrix m = build_sharing_matrix(w.processes, w.arrays);
  CHECK(m.at(0, 1) == 200);
  CHECK(m.at(0, 2) == 100);
  CHECK(m.at(0, 3) == 0);
  CHECK(m.at(4, 5) == 200);
}

TEST_CASE("disjoint arrays share nothing") {
  std::vector<ArrayDecl> arrays{testutil::make_array(0, "X", {16}),
                                testutil::make_array(1, "Y", {16})};
  Process a = trivial_process(0, 0, 0);
  Process b = trivial_process(0, 1, 1);
  a.space.bounds = {{0, 16}};
  b.space.bounds = {{0, 16}};
  a.refs = {testutil::ref1d(0, {1}, 0)};
  b.refs = {testutil::ref1d(1, {1}, 0)};
  SharingMatrix m = build_sharing_matrix(std::vector{a, b}, arrays);
  CHECK(m.at(0, 1) == 0);
  CHECK(m.at(0, 0) == 0);
}

TEST_CASE("matrix cells match the pairwise oracle on random workloads") {
  std::mt19937_64 rng(23);
  std::vector<ArrayDecl> arrays{testutil::make_array(0, "X", {128}),
                                testutil::make_array(1, "Y", {128})};
  std::vector<Process> ps;
  for (std::uint32_t i = 0; i < 12; ++i) {
    Process p;
    p.id = {0, i, i};
    std::int64_t lo = static_cast<std::int64_t>(rng() % 64);
    p.space.bounds = {{lo, lo + 1 + static_cast<std::int64_t>(rng() % 40)}};
    p.refs.push_back(testutil::ref1d(static_cast<ArrayId>(rng() % 2), {1}, 0));
    ps.push_back(std::move(p));
  }
  SharingMatrix m = build_sharing_matrix(ps, arrays);
  for (std::uint32_t p = 0; p < m.n; ++p) {
    CHECK(m.at(p, p) == 0);
    for (std::uint32_t q = 0; q < m.n; ++q) {
      CHECK(m.at(p, q) == m.at(q, p));
      if (p == q) continue;
      auto dp = testutil::oracle_data_set(ps[p], arrays);
      auto dq = testutil::oracle_data_set(ps[q], arrays);
      std::uint64_t n = 0;
      for (const auto& e : dp) n += dq.count(e);
      CHECK(m.at(p, q) == n);
    }
  }
}
