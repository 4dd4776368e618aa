#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "rdag/graph.hpp"

namespace rdag {

/// Graph, partition and adversary placement as stored on disk.
struct GraphBundle {
  Digraph graph;
  RdagPartition partition;
  AdversaryPlacement placement;

  friend bool operator==(const GraphBundle&, const GraphBundle&) = default;
};

/// {"F", "adversaries", "in_neighbors", "levels", "n", "r"} with sorted keys,
/// two-space indentation and a trailing newline. Saving a loaded document
/// reproduces it byte for byte.
std::string dump_graph_bundle(const GraphBundle& bundle);

/// Throws ConfigError naming the offending field.
GraphBundle parse_graph_bundle(std::string_view text);

GraphBundle load_graph_bundle(const std::filesystem::path& path);
void save_graph_bundle(const GraphBundle& bundle, const std::filesystem::path& path);

}  // namespace rdag
