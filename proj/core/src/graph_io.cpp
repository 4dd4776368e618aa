#include "rdag/graph_io.hpp"

#include <algorithm>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "rdag/error.hpp"

namespace rdag {

namespace {

using nlohmann::json;

template <typename T>
T require(const json& doc, const char* key) {
  if (!doc.contains(key)) throw ConfigError(key, "missing field");
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(key, e.what());
  }
}

}  // namespace

std::string dump_graph_bundle(const GraphBundle& bundle) {
  json doc;
  doc["n"] = bundle.graph.size();
  doc["in_neighbors"] = bundle.graph.adjacency();
  doc["levels"] = bundle.partition.levels;
  doc["r"] = bundle.partition.r;
  auto adversaries = bundle.placement.adversaries;
  std::sort(adversaries.begin(), adversaries.end());
  doc["adversaries"] = adversaries;
  doc["F"] = bundle.placement.F;
  return doc.dump(2) + "\n";
}

GraphBundle parse_graph_bundle(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("graph JSON parse error: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("", "graph document must be a JSON object");

  const int n = require<int>(doc, "n");
  auto in = require<std::vector<std::vector<VertexId>>>(doc, "in_neighbors");
  if (n < 0 || static_cast<int>(in.size()) != n) throw ConfigError("in_neighbors", "length must equal n");

  GraphBundle bundle;
  try {
    bundle.graph = Digraph(std::move(in));
  } catch (const Error& e) {
    throw ConfigError("in_neighbors", e.what());
  }
  bundle.partition.levels = doc.contains("levels") ? require<std::vector<std::vector<VertexId>>>(doc, "levels")
                                                   : std::vector<std::vector<VertexId>>{};
  bundle.partition.r = doc.contains("r") ? require<int>(doc, "r") : 0;
  bundle.placement.adversaries = doc.contains("adversaries") ? require<std::vector<VertexId>>(doc, "adversaries")
                                                             : std::vector<VertexId>{};
  std::sort(bundle.placement.adversaries.begin(), bundle.placement.adversaries.end());
  bundle.placement.F = doc.contains("F") ? require<int>(doc, "F") : 0;
  return bundle;
}

GraphBundle load_graph_bundle(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open graph file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_graph_bundle(ss.str());
}

void save_graph_bundle(const GraphBundle& bundle, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("", "cannot write graph file " + path.string());
  out << dump_graph_bundle(bundle);
}

}  // namespace rdag
