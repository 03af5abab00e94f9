#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lsqlab/adversary.hpp"
#include "lsqlab/core.hpp"
#include "lsqlab/graph.hpp"
#include "lsqlab/path_system.hpp"
#include "lsqlab/separation.hpp"
#include "lsqlab/solvers.hpp"
#include "lsqlab/staircase.hpp"

namespace lsqlab {

using Json = nlohmann::ordered_json;

inline Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open '" + path.string() + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ValidationError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ArgumentError("cannot write '" + path.string() + "'");
  out << text;
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

namespace detail {

template <typename T>
T field(const Json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) {
    throw ValidationError(std::string("missing field '") + name + "'");
  }
  try {
    return j.at(name).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("field '") + name + "' has the wrong type: " + e.what());
  }
}

}  // namespace detail

inline Json to_json(const Graph& g) {
  Json edges = Json::array();
  for (const auto& [u, v] : g.edges()) edges.push_back({u, v});
  return Json{{"n", g.size()}, {"edges", edges}};
}

inline Graph graph_from_json(const Json& j) {
  const int n = detail::field<int>(j, "n");
  std::vector<Edge> edges;
  for (const auto& e : detail::field<std::vector<std::vector<int>>>(j, "edges")) {
    if (e.size() != 2) throw ValidationError("edge entries must be [u, v] pairs");
    edges.emplace_back(e[0], e[1]);
  }
  try {
    return Graph(n, std::move(edges));
  } catch (const ConstructionError& e) {
    throw ValidationError(std::string("invalid graph: ") + e.what());
  }
}

inline Json to_json(const PathSystem& ps) {
  Json paths = Json::array();
  for (Vertex u = 1; u <= ps.size(); ++u) {
    for (Vertex v = 1; v <= ps.size(); ++v) {
      auto p = ps.path(u, v);
      paths.push_back(Json{{"u", u}, {"v", v}, {"p", std::vector<Vertex>(p.begin(), p.end())}});
    }
  }
  return Json{{"n", ps.size()}, {"paths", paths}};
}

inline PathSystem path_system_from_json(const Json& j) {
  const int n = detail::field<int>(j, "n");
  if (n < 1) throw ValidationError("path system needs n >= 1");
  std::vector<VertexSequence> table(static_cast<std::size_t>(n) * n);
  std::vector<bool> seen(table.size(), false);
  if (!j.contains("paths") || !j.at("paths").is_array()) throw ValidationError("missing field 'paths'");
  for (const auto& entry : j.at("paths")) {
    const int u = detail::field<int>(entry, "u");
    const int v = detail::field<int>(entry, "v");
    if (u < 1 || u > n || v < 1 || v > n) throw ValidationError("path endpoints out of range");
    const std::size_t k = static_cast<std::size_t>(u - 1) * n + (v - 1);
    if (seen[k]) throw ValidationError("duplicate entry for pair (" + std::to_string(u) + "," +
                                       std::to_string(v) + ")");
    seen[k] = true;
    table[k] = detail::field<std::vector<Vertex>>(entry, "p");
  }
  for (std::size_t k = 0; k < seen.size(); ++k) {
    if (!seen[k]) throw ValidationError("path table is incomplete");
  }
  return PathSystem::from_table(n, table);
}

struct InstanceFile {
  std::string graph_path;
  std::string paths_path;
  MilestoneSequence milestones;
  int bit = 0;
  std::optional<ValueFunction> values;
  std::optional<VertexMap<int>> flags;
};

inline Json to_json(const InstanceFile& inst) {
  Json j{{"graph", inst.graph_path},
         {"paths", inst.paths_path},
         {"milestones", inst.milestones.values()},
         {"bit", inst.bit}};
  if (inst.values) j["values"] = inst.values->values();
  if (inst.flags) j["flags"] = inst.flags->values();
  return j;
}

inline InstanceFile instance_from_json(const Json& j) {
  InstanceFile inst;
  inst.graph_path = detail::field<std::string>(j, "graph");
  inst.paths_path = detail::field<std::string>(j, "paths");
  try {
    inst.milestones = MilestoneSequence(detail::field<std::vector<Vertex>>(j, "milestones"));
  } catch (const ArgumentError& e) {
    throw ValidationError(std::string("invalid milestones: ") + e.what());
  }
  inst.bit = detail::field<int>(j, "bit");
  if (inst.bit != 0 && inst.bit != 1) throw ValidationError("bit must be 0 or 1");
  if (j.contains("values")) inst.values = ValueFunction(detail::field<std::vector<std::int64_t>>(j, "values"));
  if (j.contains("flags")) inst.flags = VertexMap<int>(detail::field<std::vector<int>>(j, "flags"));
  return inst;
}

inline Json to_json(const PathArrangement& pa) {
  Json paths = Json::array();
  for (int k = 1; k <= pa.m(); ++k) {
    for (int i = 1; i <= pa.m(); ++i) {
      for (int j = 1; j <= pa.m(); ++j) {
        paths.push_back(Json{{"k", k}, {"i", i}, {"j", j}, {"p", pa.path(k, i, j)}});
      }
    }
  }
  return Json{{"m", pa.m()}, {"clusters", pa.clusters()}, {"v_start", pa.v_start()}, {"inter_paths", paths}};
}

inline PathArrangement arrangement_from_json(const Json& j) {
  const int m = detail::field<int>(j, "m");
  PathArrangement pa;
  try {
    pa = PathArrangement(m, detail::field<std::vector<std::vector<Vertex>>>(j, "clusters"),
                         detail::field<Vertex>(j, "v_start"));
    if (!j.contains("inter_paths") || !j.at("inter_paths").is_array()) {
      throw ValidationError("missing field 'inter_paths'");
    }
    for (const auto& entry : j.at("inter_paths")) {
      pa.set_path(detail::field<int>(entry, "k"), detail::field<int>(entry, "i"),
                  detail::field<int>(entry, "j"), detail::field<std::vector<Vertex>>(entry, "p"));
    }
  } catch (const ArgumentError& e) {
    throw ValidationError(std::string("invalid arrangement: ") + e.what());
  }
  return pa;
}

struct BoundReport {
  std::string family;
  std::size_t size = 0;
  VariantBound variant;
  AaronsonBound aaronson;
};

inline Json to_json(const BoundReport& report) {
  return Json{{"family", report.family},
              {"size", report.size},
              {"min_ratio", rational_string(report.variant.min_ratio)},
              {"variant_bound", rational_string(report.variant.bound)},
              {"vmin", rational_string(report.aaronson.vmin)},
              {"aaronson_bound", rational_string(report.aaronson.bound)},
              {"argmin_subset", report.variant.argmin}};
}

inline Json to_json(const std::vector<QueryRecord>& transcript) {
  Json queries = Json::array();
  for (const auto& q : transcript) queries.push_back(Json::array({q.vertex, q.value, q.flag}));
  return Json{{"queries", queries}};
}

inline std::vector<QueryRecord> transcript_from_json(const Json& j) {
  std::vector<QueryRecord> out;
  for (const auto& q : detail::field<std::vector<std::vector<std::int64_t>>>(j, "queries")) {
    if (q.size() != 3) throw ValidationError("transcript entries must be [vertex, value, flag]");
    out.push_back({static_cast<Vertex>(q[0]), q[1], static_cast<int>(q[2])});
  }
  return out;
}

}  // namespace lsqlab
