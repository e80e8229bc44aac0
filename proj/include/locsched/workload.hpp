#pragma once

#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "locsched/engine.hpp"

// Workload file parsing, serialization, and the concurrent-merge used by the
// sweep command. The on-disk format is JSON with top-level keys "arrays",
// "tasks" and "edges"; see the README for the schema.

namespace locsched {

namespace detail {

[[noreturn]] inline void parse_fail(const std::string& where, const std::string& what) {
  throw std::runtime_error("workload parse error at " + where + ": " + what);
}

inline AffineExpr parse_affine(const nlohmann::json& j, std::size_t depth,
                               const std::string& where) {
  if (!j.is_object() || !j.contains("coeffs")) parse_fail(where, "expected {coeffs, const}");
  AffineExpr e;
  e.coeffs = j.at("coeffs").get<std::vector<std::int64_t>>();
  e.constant = j.value("const", std::int64_t{0});
  if (e.coeffs.size() != depth)
    parse_fail(where, "coefficient count " + std::to_string(e.coeffs.size()) +
                          " does not match nest depth " + std::to_string(depth));
  return e;
}

}  // namespace detail

inline Workload parse_workload_json(const nlohmann::json& j, const std::string& origin) {
  Workload w;
  if (!j.is_object() || !j.contains("arrays") || !j.contains("tasks"))
    detail::parse_fail(origin, "top level must be an object with 'arrays' and 'tasks'");

  std::map<std::string, ArrayId> by_name;
  ArrayId next_id = 0;
  for (const auto& ja : j.at("arrays")) {
    const std::string where = origin + "/arrays[" + std::to_string(next_id) + "]";
    ArrayDecl a;
    a.id = next_id++;
    a.name = ja.value("name", "");
    if (a.name.empty()) detail::parse_fail(where, "array needs a name");
    if (by_name.count(a.name)) detail::parse_fail(where, "duplicate array '" + a.name + "'");
    if (!ja.contains("dims")) detail::parse_fail(where, "array needs dims");
    a.dims = ja.at("dims").get<std::vector<std::int64_t>>();
    a.element_size = ja.value("element_size", std::int64_t{4});
    if (ja.contains("base")) a.base = ja.at("base").get<std::uint64_t>();
    try {
      validate_array(a);
    } catch (const std::exception& ex) {
      detail::parse_fail(where, ex.what());
    }
    by_name[a.name] = a.id;
    w.arrays.push_back(std::move(a));
  }

  std::uint32_t global = 0;
  std::vector<std::vector<std::uint32_t>> task_base;  // (task, index) -> global id
  std::uint32_t ti = 0;
  for (const auto& jt : j.at("tasks")) {
    const std::string twhere = origin + "/tasks[" + std::to_string(ti) + "]";
    w.task_names.push_back(jt.value("name", "task" + std::to_string(ti)));
    task_base.emplace_back();
    std::uint32_t pi = 0;
    for (const auto& jp : jt.value("processes", nlohmann::json::array())) {
      const std::string pwhere = twhere + "/processes[" + std::to_string(pi) + "]";
      Process p;
      p.id = {ti, pi, global};
      if (!jp.contains("space")) detail::parse_fail(pwhere, "process needs a space");
      for (const auto& jb : jp.at("space").at("bounds")) {
        if (!jb.is_array() || jb.size() != 2)
          detail::parse_fail(pwhere, "each bound must be [lower, upper)");
        p.space.bounds.push_back({jb[0].get<std::int64_t>(), jb[1].get<std::int64_t>()});
      }
      try {
        p.space.validate();
      } catch (const std::exception& ex) {
        detail::parse_fail(pwhere, ex.what());
      }
      std::size_t ri = 0;
      for (const auto& jr : jp.value("refs", nlohmann::json::array())) {
        const std::string rwhere = pwhere + "/refs[" + std::to_string(ri++) + "]";
        AccessDescriptor r;
        std::string an = jr.value("array", "");
        auto it = by_name.find(an);
        if (it == by_name.end()) detail::parse_fail(rwhere, "unknown array '" + an + "'");
        r.array = it->second;
        for (const auto& je : jr.at("index"))
          r.index.push_back(detail::parse_affine(je, p.space.depth(), rwhere));
        std::string mode = jr.value("mode", "read");
        if (mode == "read")
          r.mode = AccessMode::Read;
        else if (mode == "write")
          r.mode = AccessMode::Write;
        else if (mode == "readwrite")
          r.mode = AccessMode::ReadWrite;
        else
          detail::parse_fail(rwhere, "mode must be read|write|readwrite");
        try {
          validate_ref(r, p.space, w.arrays, "");
        } catch (const std::exception& ex) {
          detail::parse_fail(rwhere, ex.what());
        }
        p.refs.push_back(std::move(r));
      }
      if (p.refs.empty()) detail::parse_fail(pwhere, "process needs at least one ref");
      task_base.back().push_back(global);
      w.processes.push_back(std::move(p));
      ++global;
      ++pi;
    }
    // Intra-task edges by process index.
    for (const auto& je : jt.value("edges", nlohmann::json::array())) {
      if (!je.is_array() || je.size() != 2) detail::parse_fail(twhere, "edge must be [from, to]");
      std::uint32_t f = je[0].get<std::uint32_t>(), t = je[1].get<std::uint32_t>();
      if (f >= pi || t >= pi)
        detail::parse_fail(twhere, "edge endpoint out of range");
      w.edges.push_back({task_base[ti][f], task_base[ti][t]});
    }
    ++ti;
  }

  // Inter-task edges: [[task, proc], [task, proc]].
  for (const auto& je : j.value("edges", nlohmann::json::array())) {
    const std::string ewhere = origin + "/edges";
    if (!je.is_array() || je.size() != 2 || !je[0].is_array() || !je[1].is_array())
      detail::parse_fail(ewhere, "inter-task edge must be [[task,proc],[task,proc]]");
    auto endpoint = [&](const nlohmann::json& jp) -> std::uint32_t {
      std::uint32_t t = jp[0].get<std::uint32_t>(), p = jp[1].get<std::uint32_t>();
      if (t >= task_base.size() || p >= task_base[t].size())
        detail::parse_fail(ewhere, "edge endpoint (" + std::to_string(t) + "," +
                                       std::to_string(p) + ") does not exist");
      return task_base[t][p];
    };
    w.edges.push_back({endpoint(je[0]), endpoint(je[1])});
  }

  // Full validation: EPG construction rejects cycles and self-edges.
  build_epg(w.processes, w.edges);
  return w;
}

inline Workload parse_workload(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open workload file '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& ex) {
    throw std::runtime_error("workload '" + path + "': " + ex.what());
  }
  return parse_workload_json(j, path);
}

inline nlohmann::json serialize_workload(const Workload& w) {
  nlohmann::json j;
  j["arrays"] = nlohmann::json::array();
  for (const auto& a : w.arrays) {
    nlohmann::json ja{{"name", a.name}, {"dims", a.dims}, {"element_size", a.element_size}};
    if (a.base) ja["base"] = *a.base;
    j["arrays"].push_back(std::move(ja));
  }
  j["tasks"] = nlohmann::json::array();
  std::vector<std::vector<std::uint32_t>> task_base(w.task_names.size());
  for (std::size_t t = 0; t < w.task_names.size(); ++t) {
    nlohmann::json jt{{"name", w.task_names[t]}, {"processes", nlohmann::json::array()},
                      {"edges", nlohmann::json::array()}};
    j["tasks"].push_back(std::move(jt));
  }
  for (const auto& p : w.processes) {
    nlohmann::json jp;
    for (const auto& b : p.space.bounds)
      jp["space"]["bounds"].push_back({b.lower, b.upper});
    for (const auto& r : p.refs) {
      nlohmann::json jr;
      jr["array"] = array_by_id(w.arrays, r.array).name;
      for (const auto& e : r.index)
        jr["index"].push_back({{"coeffs", e.coeffs}, {"const", e.constant}});
      jr["mode"] = r.mode == AccessMode::Read      ? "read"
                   : r.mode == AccessMode::Write   ? "write"
                                                   : "readwrite";
      jp["refs"].push_back(std::move(jr));
    }
    task_base[p.id.task].push_back(p.id.global);
    j["tasks"][p.id.task]["processes"].push_back(std::move(jp));
  }
  nlohmann::json inter = nlohmann::json::array();
  auto locate = [&](std::uint32_t gid) {
    const ProcessId& id = w.processes[gid].id;
    return std::pair<std::uint32_t, std::uint32_t>{id.task, id.index};
  };
  for (const auto& e : w.edges) {
    auto [ft, fp] = locate(e.from);
    auto [tt, tp] = locate(e.to);
    if (ft == tt) {
      j["tasks"][ft]["edges"].push_back({fp, tp});
    } else {
      inter.push_back({{ft, fp}, {tt, tp}});
    }
  }
  j["edges"] = std::move(inter);
  return j;
}

// Union of tasks with disjoint array namespaces; identical declarations under
// the same name are shared, conflicting ones are an error.
inline Workload merge_workloads(std::span<const Workload> parts) {
  Workload out;
  for (const auto& w : parts) {
    std::map<ArrayId, ArrayId> remap;
    for (const auto& a : w.arrays) {
      auto it = std::find_if(out.arrays.begin(), out.arrays.end(),
                             [&](const ArrayDecl& b) { return b.name == a.name; });
      if (it != out.arrays.end()) {
        if (it->dims != a.dims || it->element_size != a.element_size || it->base != a.base)
          throw std::runtime_error("array '" + a.name +
                                   "' declared differently in merged workloads");
        remap[a.id] = it->id;
      } else {
        ArrayDecl copy = a;
        copy.id = static_cast<ArrayId>(out.arrays.size());
        remap[a.id] = copy.id;
        out.arrays.push_back(std::move(copy));
      }
    }
    std::uint32_t task_off = static_cast<std::uint32_t>(out.task_names.size());
    std::uint32_t gid_off = static_cast<std::uint32_t>(out.processes.size());
    for (const auto& t : w.task_names) out.task_names.push_back(t);
    for (const auto& p : w.processes) {
      Process copy = p;
      copy.id.task += task_off;
      copy.id.global += gid_off;
      for (auto& r : copy.refs) r.array = remap.at(r.array);
      out.processes.push_back(std::move(copy));
    }
    for (const auto& e : w.edges) out.edges.push_back({e.from + gid_off, e.to + gid_off});
  }
  return out;
}

}  // namespace locsched
