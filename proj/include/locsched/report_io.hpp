#pragma once

#include <iomanip>
#include <ostream>
#include <sstream>

#include "locsched/engine.hpp"

// CSV and text emission. Column orders are fixed; given identical inputs the
// output is bit-identical.

namespace locsched {

inline void write_sharing_matrix_csv(const SharingMatrix& m, std::ostream& os) {
  os << "process";
  for (std::uint32_t q = 0; q < m.n; ++q) os << ",P" << q;
  os << "\n";
  for (std::uint32_t p = 0; p < m.n; ++p) {
    os << "P" << p;
    for (std::uint32_t q = 0; q < m.n; ++q) os << "," << m.at(p, q);
    os << "\n";
  }
}

inline void write_sharing_matrix_text(const SharingMatrix& m, std::ostream& os) {
  os << std::setw(6) << "";
  for (std::uint32_t q = 0; q < m.n; ++q) os << std::setw(8) << ("P" + std::to_string(q));
  os << "\n";
  for (std::uint32_t p = 0; p < m.n; ++p) {
    os << std::setw(6) << ("P" + std::to_string(p));
    for (std::uint32_t q = 0; q < m.n; ++q) {
      if (p == q)
        os << std::setw(8) << ".";
      else
        os << std::setw(8) << m.at(p, q);
    }
    os << "\n";
  }
}

inline void write_conflict_matrix_csv(const ConflictMatrix& m,
                                      std::span<const ArrayDecl> arrays, std::ostream& os) {
  os << "array";
  for (auto id : m.ids) os << "," << array_by_id(arrays, id).name;
  os << "\n";
  for (std::uint32_t x = 0; x < m.n; ++x) {
    os << array_by_id(arrays, m.ids[x]).name;
    for (std::uint32_t y = 0; y < m.n; ++y) os << "," << m.at(x, y);
    os << "\n";
  }
}

inline void write_layout_csv(std::span<const LayoutSummaryEntry> layout, std::ostream& os) {
  os << "array,region_base,region_size,relayouted,b\n";
  for (const auto& e : layout)
    os << e.array << "," << e.base << "," << e.size << "," << (e.relayouted ? 1 : 0) << ","
       << e.b << "\n";
}

// One row per core, one per process, one summary row; fixed column order.
inline void write_report_csv(const Report& r, double clock_mhz, std::ostream& os) {
  os << "policy,scope,id,core,hits,misses,busy_cycles,idle_cycles,start_cycle,finish_cycle,"
        "preemptions,makespan_cycles,wall_clock_ms\n";
  for (std::size_t c = 0; c < r.cores.size(); ++c) {
    const auto& cs = r.cores[c];
    os << r.policy << ",core," << c << "," << c << "," << cs.hits << "," << cs.misses << ","
       << cs.busy_cycles << "," << cs.idle_cycles << ",,,,,\n";
  }
  for (std::size_t p = 0; p < r.processes.size(); ++p) {
    const auto& ps = r.processes[p];
    os << r.policy << ",process," << p << "," << ps.core << "," << ps.hits << "," << ps.misses
       << ",,," << ps.start << "," << ps.finish << "," << ps.preemptions << ",,\n";
  }
  std::ostringstream ms;
  ms << std::fixed << std::setprecision(6) << r.wall_clock_ms(clock_mhz);
  os << r.policy << ",summary,,," << r.total_hits() << "," << r.total_misses() << ",,,,,,"
     << r.makespan << "," << ms.str() << "\n";
}

inline void write_report_text(const Report& r, double clock_mhz, std::ostream& os) {
  os << "policy " << r.policy << ": makespan " << r.makespan << " cycles ("
     << std::fixed << std::setprecision(3) << r.wall_clock_ms(clock_mhz) << " ms), "
     << r.total_hits() << " hits, " << r.total_misses() << " misses\n";
  for (std::size_t c = 0; c < r.cores.size(); ++c)
    os << "  core " << c << ": hits " << r.cores[c].hits << " misses " << r.cores[c].misses
       << " busy " << r.cores[c].busy_cycles << " idle " << r.cores[c].idle_cycles << "\n";
  for (std::size_t p = 0; p < r.processes.size(); ++p) {
    const auto& ps = r.processes[p];
    os << "  P" << p << ": core " << ps.core << " start " << ps.start << " finish " << ps.finish
       << " hits " << ps.hits << " misses " << ps.misses;
    if (ps.preemptions) os << " preemptions " << ps.preemptions;
    os << "\n";
  }
  if (!r.layout.empty()) {
    os << "  layout:\n";
    for (const auto& e : r.layout)
      os << "    " << e.array << ": base " << e.base << " size " << e.size
         << (e.relayouted ? " relayouted b=" + std::to_string(e.b) : "") << "\n";
  }
}

inline void write_sweep_csv_header(std::ostream& os) {
  os << "tasks,policy,makespan_cycles,total_hits,total_misses,wall_clock_ms\n";
}

inline void write_sweep_csv_row(std::size_t tasks, const Report& r, double clock_mhz,
                                std::ostream& os) {
  std::ostringstream ms;
  ms << std::fixed << std::setprecision(6) << r.wall_clock_ms(clock_mhz);
  os << tasks << "," << r.policy << "," << r.makespan << "," << r.total_hits() << ","
     << r.total_misses() << "," << ms.str() << "\n";
}

}  // namespace locsched
