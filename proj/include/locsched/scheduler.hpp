#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <random>
#include <vector>

#include "locsched/process_graph.hpp"

// The four scheduling policies: random (RS), round-robin (RRS),
// locality-aware (LS) and locality-aware with data mapping (LSM). RS, LS and
// LSM produce static per-core queues; RRS is a dynamic descriptor executed by
// the engine. LSM reuses the LS schedule verbatim and differs only in the
// layout phase.

namespace locsched {

enum class PolicyKind { Random, RoundRobin, Locality, LocalityMapping };

inline const char* policy_name(PolicyKind k) {
  switch (k) {
    case PolicyKind::Random: return "rs";
    case PolicyKind::RoundRobin: return "rrs";
    case PolicyKind::Locality: return "ls";
    case PolicyKind::LocalityMapping: return "lsm";
  }
  return "?";
}

// Candidate-trimming rule for the first LS round. The remove-max rule keeps
// sharing between concurrently running processes low; remove-min is the
// literal pseudocode alternative, kept for comparison.
enum class TrimRule { RemoveMax, RemoveMin };

// Explicit idle marker inside a static queue: the core waits out the round.
inline constexpr std::uint32_t kIdleSlot = std::numeric_limits<std::uint32_t>::max();

struct StaticSchedule {
  std::uint32_t cores = 0;
  std::vector<std::vector<std::uint32_t>> queues;  // per core, global ids / kIdleSlot
};

struct TrimResult {
  std::vector<std::uint32_t> selected;  // ascending global id
  std::vector<std::uint32_t> deferred;  // in removal order
};

// One LS pick with the considered alternatives, for audit/replay.
struct LsDecision {
  std::uint32_t round = 0;
  std::uint32_t core = 0;
  std::uint32_t chosen = kIdleSlot;
  std::uint32_t previous = kIdleSlot;                            // core's prior process
  std::vector<std::pair<std::uint32_t, std::uint64_t>> considered;  // (candidate, m-value)
};

struct LsDecisionLog {
  std::vector<LsDecision> decisions;

  void write(std::ostream& os) const {
    for (const auto& d : decisions) {
      os << "round " << d.round << " core " << d.core << " chose ";
      if (d.chosen == kIdleSlot)
        os << "idle";
      else
        os << "P" << d.chosen;
      os << " considered";
      for (const auto& [q, m] : d.considered) os << " P" << q << "=" << m;
      os << "\n";
    }
  }
};

// Repeatedly drops one candidate (arg-max of its sharing-row sum over the
// remaining candidates under RemoveMax, arg-min under RemoveMin; ties go to
// the lowest global id) until exactly x remain.
inline TrimResult ls_trim(std::vector<std::uint32_t> candidates, const SharingMatrix& m,
                          std::uint32_t x, TrimRule rule) {
  if (candidates.size() <= x)
    throw std::logic_error("ls_trim: candidate count must exceed core count");
  std::sort(candidates.begin(), candidates.end());
  TrimResult r;
  while (candidates.size() > x) {
    std::size_t pick = 0;
    std::int64_t best = 0;
    bool have = false;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      std::int64_t sum = 0;
      for (std::size_t j = 0; j < candidates.size(); ++j)
        if (j != i) sum += static_cast<std::int64_t>(m.at(candidates[i], candidates[j]));
      if (rule == TrimRule::RemoveMin) sum = -sum;
      if (!have || sum > best) {  // strict: ties keep the earlier (lower) id
        best = sum;
        pick = i;
        have = true;
      }
    }
    r.deferred.push_back(candidates[pick]);
    candidates.erase(candidates.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  r.selected = std::move(candidates);
  return r;
}

namespace detail {

// Round-based LS body shared by the free and pinned-first-round variants.
inline StaticSchedule ls_rounds(const ExtendedProcessGraph& g, const SharingMatrix& m,
                                std::uint32_t x, std::vector<std::uint32_t> first_round,
                                LsDecisionLog* log) {
  const std::uint32_t n = g.size();
  StaticSchedule s;
  s.cores = x;
  s.queues.assign(x, {});
  std::vector<bool> placed(n, false);

  for (std::uint32_t c = 0; c < x && c < first_round.size(); ++c) {
    s.queues[c].push_back(first_round[c]);
    placed[first_round[c]] = true;
  }
  std::uint32_t remaining = n - static_cast<std::uint32_t>(first_round.size());
  std::vector<std::uint32_t> prev(x, kIdleSlot);
  for (std::uint32_t c = 0; c < x && c < first_round.size(); ++c) prev[c] = first_round[c];

  std::uint32_t round = 1;
  while (remaining > 0) {
    // Eligible means: unplaced, and every predecessor placed in an earlier
    // round. Freeze eligibility before the round so same-round placements do
    // not unlock successors early.
    std::vector<std::uint32_t> eligible = independent_set(g, placed);
    std::vector<bool> taken(n, false);
    for (std::uint32_t c = 0; c < x; ++c) {
      std::uint32_t best = kIdleSlot;
      std::uint64_t best_m = 0;
      LsDecision d;
      d.round = round;
      d.core = c;
      d.previous = prev[c];
      for (auto q : eligible) {
        if (taken[q]) continue;
        std::uint64_t mv = (prev[c] == kIdleSlot) ? 0 : m.at(prev[c], q);
        d.considered.emplace_back(q, mv);
        if (best == kIdleSlot || mv > best_m) {  // ties keep the lower id (eligible ascends)
          best = q;
          best_m = mv;
        }
      }
      d.chosen = best;
      if (log) log->decisions.push_back(std::move(d));
      if (best == kIdleSlot) {
        s.queues[c].push_back(kIdleSlot);
      } else {
        s.queues[c].push_back(best);
        taken[best] = true;
        prev[c] = best;
        --remaining;
      }
    }
    for (std::uint32_t v = 0; v < n; ++v)
      if (taken[v]) placed[v] = true;
    ++round;
  }
  return s;
}

}  // namespace detail

inline StaticSchedule ls_schedule(const ExtendedProcessGraph& g, const SharingMatrix& m,
                                  std::uint32_t x, TrimRule rule = TrimRule::RemoveMax,
                                  LsDecisionLog* log = nullptr) {
  if (x < 1) throw std::invalid_argument("ls_schedule: core count must be >= 1");
  std::vector<bool> none(g.size(), false);
  std::vector<std::uint32_t> in = independent_set(g, none);
  std::vector<std::uint32_t> first;
  if (in.size() > x) {
    first = ls_trim(in, m, x, rule).selected;
  } else {
    first = in;  // surplus cores start idle
  }
  return detail::ls_rounds(g, m, x, std::move(first), log);
}

// First round pinned by the caller (harness/test use).
inline StaticSchedule ls_schedule_pinned(const ExtendedProcessGraph& g, const SharingMatrix& m,
                                         std::uint32_t x, std::vector<std::uint32_t> first_round,
                                         LsDecisionLog* log = nullptr) {
  return detail::ls_rounds(g, m, x, std::move(first_round), log);
}

// RS: each ready process goes to a uniformly random core; deterministic for a
// fixed seed.
inline StaticSchedule rs_schedule(const ExtendedProcessGraph& g, std::uint32_t x,
                                  std::uint64_t seed) {
  if (x < 1) throw std::invalid_argument("rs_schedule: core count must be >= 1");
  StaticSchedule s;
  s.cores = x;
  s.queues.assign(x, {});
  std::mt19937_64 rng(seed);
  const std::uint32_t n = g.size();
  std::vector<bool> placed(n, false);
  for (std::uint32_t left = n; left > 0; --left) {
    std::vector<std::uint32_t> ready = independent_set(g, placed);
    std::uint32_t p = ready[rng() % ready.size()];
    std::uint32_t c = static_cast<std::uint32_t>(rng() % x);
    s.queues[c].push_back(p);
    placed[p] = true;
  }
  return s;
}

struct RoundRobinPolicy {
  std::uint64_t quantum_cycles = 50000;
};

}  // namespace locsched
