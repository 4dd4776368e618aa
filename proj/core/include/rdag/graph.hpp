#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rdag/types.hpp"

namespace rdag {

/// Directed graph stored as per-vertex in-neighbor lists.
///
/// An entry j in in_neighbors(i) is the edge (j, i): agent i senses agent j.
/// Lists are kept sorted by source id so every downstream tie-break is
/// deterministic. Immutable after construction.
class Digraph {
 public:
  Digraph() = default;

  /// Throws ParameterError on self-loops, duplicate entries or ids outside [0, n).
  explicit Digraph(std::vector<std::vector<VertexId>> in_neighbors);

  int size() const noexcept { return static_cast<int>(in_.size()); }
  std::span<const VertexId> in_neighbors(VertexId i) const { return in_.at(static_cast<std::size_t>(i)); }
  int in_degree(VertexId i) const { return static_cast<int>(in_neighbors(i).size()); }
  std::size_t edge_count() const noexcept;
  const std::vector<std::vector<VertexId>>& adjacency() const noexcept { return in_; }

  friend bool operator==(const Digraph&, const Digraph&) = default;

 private:
  std::vector<std::vector<VertexId>> in_;
};

/// Layered partition S_0..S_m with redundancy parameter r.
struct RdagPartition {
  std::vector<std::vector<VertexId>> levels;
  int r = 0;

  int level_count() const noexcept { return static_cast<int>(levels.size()); }

  /// Level index of every vertex of an n-vertex graph. Throws StructuralError
  /// when the levels overlap, miss a vertex, or name an id outside [0, n).
  std::vector<int> level_of(int n) const;

  friend bool operator==(const RdagPartition&, const RdagPartition&) = default;
};

struct AdversaryPlacement {
  std::vector<VertexId> adversaries;
  int F = 0;

  bool contains(VertexId v) const;

  friend bool operator==(const AdversaryPlacement&, const AdversaryPlacement&) = default;
};

struct Violation {
  std::string clause;  // "level-size", "in-neighbor-level", "f-local", "in-degree"
  VertexId vertex = -1;
  int level = -1;
  std::string message;
};

struct ValidationReport {
  bool ok = true;
  std::vector<Violation> violations;

  void add(Violation v) {
    ok = false;
    violations.push_back(std::move(v));
  }
};

/// Checks both clauses of the layered-robustness definition: every level holds
/// at least r vertices, and every vertex only hears from strictly earlier
/// levels (so level 0 has no in-neighbors at all).
ValidationReport validate_rdag(const Digraph& graph, const RdagPartition& partition);

/// Every non-adversarial vertex has at most F adversarial in-neighbors.
ValidationReport validate_f_local(const Digraph& graph, const AdversaryPlacement& placement);

/// Every vertex outside level 0 has at least `required` in-neighbors
/// (the controller hypothesis is required = 3F + 1).
ValidationReport validate_in_degree(const Digraph& graph, const RdagPartition& partition, int required);

/// Smallest in-degree over `subset`. Throws ParameterError if the subset is empty.
int min_in_degree(const Digraph& graph, std::span<const VertexId> subset);

enum class Wiring {
  kFullPreviousLevel,   // every level-j vertex hears all of level j-1
  kSampleFromPrevious,  // k distinct sources drawn from levels 0..j-1
};

struct WiringRule {
  Wiring kind = Wiring::kFullPreviousLevel;
  int k = 0;
  std::uint64_t seed = 0;

  static WiringRule full_previous() { return {}; }
  static WiringRule sample(int k, std::uint64_t seed) { return {Wiring::kSampleFromPrevious, k, seed}; }
};

struct LayeredGraph {
  Digraph graph;
  RdagPartition partition;
};

/// Consecutive ids per level: level 0 gets [0, sizes[0]), level 1 the next block, ...
/// The returned partition carries r = min(level_sizes).
LayeredGraph build_layered_rdag(std::span<const int> level_sizes, const WiringRule& rule);

/// Vertex i hears (i+1) mod n, ..., (i+k) mod n. Requires 1 <= k < n.
Digraph build_k_circulant(int n, int k);

}  // namespace rdag
