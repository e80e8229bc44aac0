#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "locsched/report_io.hpp"
#include "locsched/workload.hpp"

// locsched: sharing-matrix | conflict-matrix | relayout-plan | simulate | sweep

namespace {

using namespace locsched;

struct CommonOpts {
  std::vector<std::string> workloads;
  std::string policy = "ls";
  std::uint32_t cores = 8;
  std::uint64_t cache_size = 8192;
  std::uint64_t assoc = 2;
  std::uint64_t line = 32;
  std::int64_t elem = 4;
  std::uint64_t quantum = 50000;
  std::uint32_t hit_cycles = 2;
  std::uint32_t miss_cycles = 75;
  std::string trim = "max";
  std::uint64_t seed = 0;
  std::string out;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool multi_workload) {
  auto* w = cmd->add_option("--workload", o.workloads, "workload file path");
  w->required();
  if (!multi_workload) w->expected(1);
  cmd->add_option("--policy", o.policy, "rs|rrs|ls|lsm")
      ->check(CLI::IsMember({"rs", "rrs", "ls", "lsm"}));
  cmd->add_option("--cores", o.cores, "core count (default 8)");
  cmd->add_option("--cache-size", o.cache_size, "data cache bytes per core (default 8192)");
  cmd->add_option("--assoc", o.assoc, "associativity (default 2)");
  cmd->add_option("--line", o.line, "cache line bytes (default 32)");
  cmd->add_option("--elem", o.elem, "default element size override in bytes (default 4)");
  cmd->add_option("--quantum", o.quantum, "round-robin quantum cycles (default 50000)");
  cmd->add_option("--hit-cycles", o.hit_cycles, "cache hit latency (default 2)");
  cmd->add_option("--miss-cycles", o.miss_cycles, "off-chip miss latency (default 75)");
  cmd->add_option("--trim-rule", o.trim, "max|min first-round trimming (default max)")
      ->check(CLI::IsMember({"max", "min"}));
  cmd->add_option("--seed", o.seed, "rng seed for the rs policy (default 0)");
  cmd->add_option("--out", o.out, "output file path (default stdout; simulate writes PATH and PATH.txt)");
}

SimConfig make_config(const CommonOpts& o) {
  SimConfig cfg;
  cfg.cores = o.cores;
  cfg.geometry = {o.cache_size, o.assoc, o.line};
  cfg.geometry.validate();
  cfg.hit_latency = o.hit_cycles;
  cfg.miss_latency = o.miss_cycles;
  cfg.quantum_cycles = o.quantum;
  cfg.seed = o.seed;
  cfg.trim_rule = o.trim == "min" ? TrimRule::RemoveMin : TrimRule::RemoveMax;
  return cfg;
}

PolicyKind parse_policy(const std::string& s) {
  if (s == "rs") return PolicyKind::Random;
  if (s == "rrs") return PolicyKind::RoundRobin;
  if (s == "ls") return PolicyKind::Locality;
  return PolicyKind::LocalityMapping;
}

Workload load(const CommonOpts& o) {
  std::vector<Workload> parts;
  for (const auto& p : o.workloads) parts.push_back(parse_workload(p));
  Workload w = parts.size() == 1 ? std::move(parts[0]) : merge_workloads(parts);
  if (o.elem != 4)
    for (auto& a : w.arrays)
      if (a.element_size == 4) a.element_size = o.elem;
  return w;
}

// Opens --out or falls back to stdout.
class OutStream {
 public:
  explicit OutStream(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw std::runtime_error("cannot open output file '" + path + "'");
    }
  }
  std::ostream& get() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

int cmd_sharing_matrix(const CommonOpts& o) {
  Workload w = load(o);
  SharingMatrix m = build_sharing_matrix(w.processes, w.arrays);
  OutStream os(o.out);
  write_sharing_matrix_csv(m, os.get());
  if (o.out.empty()) write_sharing_matrix_text(m, std::cout);
  return 0;
}

int cmd_conflict_matrix(const CommonOpts& o) {
  Workload w = load(o);
  SimConfig cfg = make_config(o);
  ExtendedProcessGraph g = build_epg(w.processes, w.edges);
  SharingMatrix m = build_sharing_matrix(w.processes, w.arrays);
  StaticSchedule s = ls_schedule(g, m, cfg.cores, cfg.trim_rule);
  AddressMap base = base_layout(w.arrays, cfg.geometry);
  auto ds = enumerate_all_data_sets(w.processes, w.arrays);
  ConflictMatrix cm =
      compute_conflict_matrix(w.processes, ds, base, cfg.geometry, schedule_relation(s));
  OutStream os(o.out);
  write_conflict_matrix_csv(cm, w.arrays, os.get());
  if (cm.n >= 2)
    std::cerr << "threshold (mean over pairs): " << default_threshold(cm) << "\n";
  return 0;
}

int cmd_relayout_plan(const CommonOpts& o) {
  Workload w = load(o);
  SimConfig cfg = make_config(o);
  ExtendedProcessGraph g = build_epg(w.processes, w.edges);
  SharingMatrix m = build_sharing_matrix(w.processes, w.arrays);
  LsmLayoutResult lr = lsm_layout(w, g, m, cfg);
  OutStream os(o.out);
  write_layout_csv(layout_summary(lr.layout), os.get());
  return 0;
}

int cmd_simulate(const CommonOpts& o) {
  Workload w = load(o);
  SimConfig cfg = make_config(o);
  Report r = run(w, parse_policy(o.policy), cfg);
  if (!o.out.empty()) {
    std::ofstream csv(o.out);
    if (!csv) throw std::runtime_error("cannot open output file '" + o.out + "'");
    write_report_csv(r, cfg.clock_mhz, csv);
    std::ofstream txt(o.out + ".txt");
    write_report_text(r, cfg.clock_mhz, txt);
  } else {
    write_report_csv(r, cfg.clock_mhz, std::cout);
  }
  std::cout << "makespan: " << r.makespan << " cycles\n";
  return 0;
}

int cmd_sweep(const CommonOpts& o, const std::vector<std::string>& policies) {
  SimConfig cfg = make_config(o);
  std::vector<Workload> parts;
  for (const auto& p : o.workloads) parts.push_back(parse_workload(p));
  OutStream os(o.out);
  write_sweep_csv_header(os.get());
  for (std::size_t nt = 1; nt <= parts.size(); ++nt) {
    Workload w = merge_workloads(std::span<const Workload>(parts.data(), nt));
    for (const auto& ps : policies) {
      Report r = run(w, parse_policy(ps), cfg);
      write_sweep_csv_row(nt, r, cfg.clock_mhz, os.get());
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cache-locality scheduling simulator"};
  app.require_subcommand(1);

  CommonOpts o;
  std::vector<std::string> sweep_policies{"rs", "rrs", "ls", "lsm"};

  auto* sm = app.add_subcommand("sharing-matrix", "print the process sharing matrix");
  add_common(sm, o, false);
  auto* cm = app.add_subcommand("conflict-matrix",
                                "print the array conflict matrix under the ls schedule");
  add_common(cm, o, false);
  auto* rp = app.add_subcommand("relayout-plan", "print the lsm layout plan");
  add_common(rp, o, false);
  auto* si = app.add_subcommand("simulate", "run one policy and emit a report");
  add_common(si, o, false);
  auto* sw = app.add_subcommand("sweep", "concurrent |T| sweep over workloads and policies");
  add_common(sw, o, true);
  sw->add_option("--policies", sweep_policies, "policies to sweep (default all four)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sm->parsed()) return cmd_sharing_matrix(o);
    if (cm->parsed()) return cmd_conflict_matrix(o);
    if (rp->parsed()) return cmd_relayout_plan(o);
    if (si->parsed()) return cmd_simulate(o);
    if (sw->parsed()) return cmd_sweep(o, sweep_policies);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 0;
}
