#include "rdag/graph.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>

#include "rdag/error.hpp"

namespace rdag {

Digraph::Digraph(std::vector<std::vector<VertexId>> in_neighbors) : in_(std::move(in_neighbors)) {
  const int n = size();
  for (int i = 0; i < n; ++i) {
    auto& list = in_[static_cast<std::size_t>(i)];
    for (VertexId j : list) {
      if (j < 0 || j >= n) throw ParameterError(fmt::format("vertex {}: in-neighbor id {} outside [0, {})", i, j, n));
      if (j == i) throw ParameterError(fmt::format("vertex {}: self-loop", i));
    }
    std::sort(list.begin(), list.end());
    if (std::adjacent_find(list.begin(), list.end()) != list.end()) {
      throw ParameterError(fmt::format("vertex {}: duplicate in-neighbor entry", i));
    }
  }
}

std::size_t Digraph::edge_count() const noexcept {
  std::size_t m = 0;
  for (const auto& list : in_) m += list.size();
  return m;
}

std::vector<int> RdagPartition::level_of(int n) const {
  std::vector<int> level(static_cast<std::size_t>(n), -1);
  for (int j = 0; j < level_count(); ++j) {
    for (VertexId v : levels[static_cast<std::size_t>(j)]) {
      if (v < 0 || v >= n) throw StructuralError(fmt::format("level {}: vertex id {} outside [0, {})", j, v, n));
      auto& slot = level[static_cast<std::size_t>(v)];
      if (slot != -1) throw StructuralError(fmt::format("vertex {} appears in levels {} and {}", v, slot, j));
      slot = j;
    }
  }
  for (int v = 0; v < n; ++v) {
    if (level[static_cast<std::size_t>(v)] == -1) {
      throw StructuralError(fmt::format("vertex {} is not assigned to any level", v));
    }
  }
  return level;
}

bool AdversaryPlacement::contains(VertexId v) const {
  return std::find(adversaries.begin(), adversaries.end(), v) != adversaries.end();
}

ValidationReport validate_rdag(const Digraph& graph, const RdagPartition& partition) {
  if (partition.r < 0) throw StructuralError("partition parameter r must be >= 0");
  const auto level = partition.level_of(graph.size());

  ValidationReport report;
  for (int j = 0; j < partition.level_count(); ++j) {
    const auto sz = static_cast<int>(partition.levels[static_cast<std::size_t>(j)].size());
    if (sz < partition.r) {
      report.add({"level-size", -1, j, fmt::format("|S_{}| = {} < r = {}", j, sz, partition.r)});
    }
  }
  for (int i = 0; i < graph.size(); ++i) {
    const int li = level[static_cast<std::size_t>(i)];
    for (VertexId j : graph.in_neighbors(i)) {
      const int lj = level[static_cast<std::size_t>(j)];
      if (lj >= li) {
        report.add({"in-neighbor-level", i, li,
                    fmt::format("vertex {} in level {} hears vertex {} from level {}", i, li, j, lj)});
      }
    }
  }
  return report;
}

ValidationReport validate_f_local(const Digraph& graph, const AdversaryPlacement& placement) {
  const int n = graph.size();
  if (placement.F < 0) throw ParameterError("F must be >= 0");
  std::vector<char> adversarial(static_cast<std::size_t>(n), 0);
  for (VertexId a : placement.adversaries) {
    if (a < 0 || a >= n) throw ParameterError(fmt::format("adversary id {} outside [0, {})", a, n));
    adversarial[static_cast<std::size_t>(a)] = 1;
  }

  ValidationReport report;
  for (int i = 0; i < n; ++i) {
    if (adversarial[static_cast<std::size_t>(i)]) continue;
    const auto in = graph.in_neighbors(i);
    const auto count = std::count_if(in.begin(), in.end(), [&](VertexId j) { return adversarial[static_cast<std::size_t>(j)] != 0; });
    if (count > placement.F) {
      report.add({"f-local", i, -1,
                  fmt::format("vertex {} has {} adversarial in-neighbors > F = {}", i, count, placement.F)});
    }
  }
  return report;
}

ValidationReport validate_in_degree(const Digraph& graph, const RdagPartition& partition, int required) {
  const auto level = partition.level_of(graph.size());
  ValidationReport report;
  for (int i = 0; i < graph.size(); ++i) {
    const int li = level[static_cast<std::size_t>(i)];
    if (li == 0) continue;
    if (graph.in_degree(i) < required) {
      report.add({"in-degree", i, li,
                  fmt::format("vertex {} in level {} has in-degree {} < {}", i, li, graph.in_degree(i), required)});
    }
  }
  return report;
}

int min_in_degree(const Digraph& graph, std::span<const VertexId> subset) {
  if (subset.empty()) throw ParameterError("min_in_degree over an empty vertex subset");
  int best = std::numeric_limits<int>::max();
  for (VertexId v : subset) {
    if (v < 0 || v >= graph.size()) throw ParameterError(fmt::format("vertex id {} outside graph", v));
    best = std::min(best, graph.in_degree(v));
  }
  return best;
}

LayeredGraph build_layered_rdag(std::span<const int> level_sizes, const WiringRule& rule) {
  if (level_sizes.empty()) throw ParameterError("level_sizes must be nonempty");
  for (int s : level_sizes) {
    if (s < 1) throw ParameterError("every level needs at least one vertex");
  }
  if (rule.kind == Wiring::kSampleFromPrevious && rule.k < 0) throw ParameterError("sample size k must be >= 0");

  LayeredGraph out;
  int next = 0;
  for (int s : level_sizes) {
    std::vector<VertexId> level(static_cast<std::size_t>(s));
    std::iota(level.begin(), level.end(), next);
    next += s;
    out.partition.levels.push_back(std::move(level));
  }
  out.partition.r = *std::min_element(level_sizes.begin(), level_sizes.end());

  std::vector<std::vector<VertexId>> in(static_cast<std::size_t>(next));
  std::mt19937_64 rng(rule.seed);
  std::vector<VertexId> pool;
  for (std::size_t j = 1; j < out.partition.levels.size(); ++j) {
    const auto& prev = out.partition.levels[j - 1];
    pool.insert(pool.end(), prev.begin(), prev.end());
    for (VertexId v : out.partition.levels[j]) {
      auto& list = in[static_cast<std::size_t>(v)];
      if (rule.kind == Wiring::kFullPreviousLevel) {
        list = prev;
      } else {
        if (static_cast<std::size_t>(rule.k) > pool.size()) {
          throw ParameterError(fmt::format("cannot sample {} in-neighbors for level {}: only {} predecessors",
                                           rule.k, j, pool.size()));
        }
        std::sample(pool.begin(), pool.end(), std::back_inserter(list), rule.k, rng);
      }
    }
  }
  out.graph = Digraph(std::move(in));
  return out;
}

Digraph build_k_circulant(int n, int k) {
  if (k < 1 || k >= n) throw ParameterError(fmt::format("k-circulant needs 1 <= k < n (got n={}, k={})", n, k));
  std::vector<std::vector<VertexId>> in(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    auto& list = in[static_cast<std::size_t>(i)];
    for (int s = 1; s <= k; ++s) list.push_back((i + s) % n);
  }
  return Digraph(std::move(in));
}

}  // namespace rdag
