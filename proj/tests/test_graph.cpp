#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "rdag/error.hpp"
#include "rdag/graph.hpp"
#include "rdag/graph_io.hpp"

namespace rdag {
namespace {

std::vector<VertexId> range(int lo, int hi) {
  std::vector<VertexId> v(static_cast<std::size_t>(hi - lo));
  std::iota(v.begin(), v.end(), lo);
  return v;
}

LayeredGraph sec5_topology() {
  const std::vector<int> sizes{16, 16, 16, 16, 16};
  return build_layered_rdag(sizes, WiringRule::full_previous());
}

bool has_clause(const ValidationReport& r, const std::string& clause) {
  return std::any_of(r.violations.begin(), r.violations.end(), [&](const Violation& v) { return v.clause == clause; });
}

TEST(Digraph, RejectsSelfLoopsDuplicatesAndBadIds) {
  EXPECT_THROW(Digraph(std::vector<std::vector<VertexId>>{{0}}), ParameterError);
  EXPECT_THROW(Digraph({{}, {0, 0}}), ParameterError);
  EXPECT_THROW(Digraph({{}, {2}}), ParameterError);
  EXPECT_THROW(Digraph({{}, {-1}}), ParameterError);
}

TEST(Digraph, SortsInNeighbors) {
  Digraph g({{}, {}, {}, {2, 0, 1}});
  const auto in = g.in_neighbors(3);
  EXPECT_TRUE(std::is_sorted(in.begin(), in.end()));
  EXPECT_EQ(g.edge_count(), 3u);
}

TEST(ValidateRdag, Sec5TopologyIsValid) {
  const auto t = sec5_topology();
  EXPECT_EQ(t.graph.size(), 80);
  EXPECT_EQ(t.partition.r, 16);
  const auto r = validate_rdag(t.graph, t.partition);
  EXPECT_TRUE(r.ok);
  EXPECT_TRUE(r.violations.empty());
}

TEST(ValidateRdag, SingleLevelWithEdgesFails) {
  const Digraph g({{}, {0}, {}});
  const RdagPartition p{{{0, 1, 2}}, 0};
  const auto r = validate_rdag(g, p);
  EXPECT_FALSE(r.ok);
  ASSERT_EQ(r.violations.size(), 1u);
  EXPECT_EQ(r.violations[0].clause, "in-neighbor-level");
  EXPECT_EQ(r.violations[0].vertex, 1);
}

TEST(ValidateRdag, SingleLevelWithoutEdgesPasses) {
  const Digraph g({{}, {}, {}});
  EXPECT_TRUE(validate_rdag(g, RdagPartition{{{0, 1, 2}}, 0}).ok);
}

TEST(ValidateRdag, UndersizedLevelIsReported) {
  const std::vector<int> sizes{4, 4, 3};
  auto t = build_layered_rdag(sizes, WiringRule::full_previous());
  t.partition.r = 4;
  const auto r = validate_rdag(t.graph, t.partition);
  EXPECT_FALSE(r.ok);
  ASSERT_EQ(r.violations.size(), 1u);
  EXPECT_EQ(r.violations[0].clause, "level-size");
  EXPECT_EQ(r.violations[0].level, 2);
}

TEST(ValidateRdag, SameLevelEdgeIsReported) {
  const Digraph g({{}, {}, {0, 1}, {2}});
  const RdagPartition p{{{0, 1}, {2, 3}}, 2};
  const auto r = validate_rdag(g, p);
  EXPECT_FALSE(r.ok);
  EXPECT_TRUE(has_clause(r, "in-neighbor-level"));
  EXPECT_EQ(r.violations[0].vertex, 3);
}

TEST(ValidateRdag, MalformedPartitionIsStructuralError) {
  const Digraph g({{}, {}, {}});
  EXPECT_THROW(validate_rdag(g, RdagPartition{{{0, 1}, {1, 2}}, 1}), StructuralError);
  EXPECT_THROW(validate_rdag(g, RdagPartition{{{0, 1}}, 1}), StructuralError);
  EXPECT_THROW(validate_rdag(g, RdagPartition{{{0, 1}, {2, 3}}, 1}), StructuralError);
}

TEST(ValidateFLocal, Sec5PlacementIsFiveLocal) {
  const auto t = sec5_topology();
  AdversaryPlacement a{{}, 5};
  for (int l = 0; l < 5; ++l) {
    for (int k = 0; k < 5; ++k) a.adversaries.push_back(16 * l + 3 * k);
  }
  EXPECT_TRUE(validate_f_local(t.graph, a).ok);
}

TEST(ValidateFLocal, EmptySetIsAlwaysOk) {
  const auto t = sec5_topology();
  for (int F : {0, 1, 5}) EXPECT_TRUE(validate_f_local(t.graph, AdversaryPlacement{{}, F}).ok);
}

TEST(ValidateFLocal, SixAdversarialInNeighborsWithFFive) {
  const auto t = sec5_topology();
  AdversaryPlacement a{range(0, 6), 5};
  const auto r = validate_f_local(t.graph, a);
  EXPECT_FALSE(r.ok);
  ASSERT_EQ(r.violations.size(), 16u);
  EXPECT_EQ(r.violations[0].clause, "f-local");
  EXPECT_EQ(r.violations[0].vertex, 16);
}

TEST(ValidateFLocal, AdversariesThemselvesAreNotAudited) {
  const Digraph g({{}, {}, {0, 1}});
  EXPECT_TRUE(validate_f_local(g, AdversaryPlacement{{0, 1, 2}, 0}).ok);
}

TEST(ValidateFLocal, MonotoneUnderRemoval) {
  std::mt19937_64 rng(5);
  const auto t = sec5_topology();
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<VertexId> adv = range(0, 80);
    std::shuffle(adv.begin(), adv.end(), rng);
    adv.resize(std::uniform_int_distribution<std::size_t>(1, 30)(rng));
    const int F = std::uniform_int_distribution<int>(0, 6)(rng);
    if (!validate_f_local(t.graph, AdversaryPlacement{adv, F}).ok) continue;
    adv.pop_back();
    EXPECT_TRUE(validate_f_local(t.graph, AdversaryPlacement{adv, F}).ok);
  }
}

TEST(BuildLayered, Sec5InDegrees) {
  const auto t = sec5_topology();
  for (int i = 0; i < 16; ++i) EXPECT_EQ(t.graph.in_degree(i), 0);
  for (int i = 16; i < 80; ++i) {
    ASSERT_EQ(t.graph.in_degree(i), 16);
    const int prev = i / 16 - 1;
    for (VertexId j : t.graph.in_neighbors(i)) EXPECT_EQ(j / 16, prev);
  }
}

TEST(BuildLayered, SingleLeader) {
  const std::vector<int> sizes{1};
  const auto t = build_layered_rdag(sizes, WiringRule::full_previous());
  EXPECT_EQ(t.graph.size(), 1);
  EXPECT_EQ(t.graph.edge_count(), 0u);
  EXPECT_EQ(t.partition.r, 1);
  EXPECT_TRUE(validate_rdag(t.graph, t.partition).ok);
}

TEST(BuildLayered, SampleThreeFromFour) {
  const std::vector<int> sizes{4, 4};
  const auto t = build_layered_rdag(sizes, WiringRule::sample(3, 42));
  EXPECT_EQ(t.partition.r, 4);
  for (int i = 4; i < 8; ++i) {
    ASSERT_EQ(t.graph.in_degree(i), 3);
    for (VertexId j : t.graph.in_neighbors(i)) EXPECT_LT(j, 4);
  }
  EXPECT_TRUE(validate_rdag(t.graph, t.partition).ok);
  // The 3F+1 hypothesis is a separate audit: F = 1 needs 4 in-neighbors.
  EXPECT_FALSE(validate_in_degree(t.graph, t.partition, 4).ok);
  EXPECT_TRUE(validate_in_degree(t.graph, t.partition, 3).ok);
}

TEST(BuildLayered, SampleLargerThanPoolThrows) {
  const std::vector<int> sizes{4, 4};
  EXPECT_THROW(build_layered_rdag(sizes, WiringRule::sample(5, 1)), ParameterError);
  const std::vector<int> empty;
  EXPECT_THROW(build_layered_rdag(empty, WiringRule::full_previous()), ParameterError);
}

TEST(BuildLayered, RandomizedRoundTripAndDeterminism) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<int> sizes(std::uniform_int_distribution<std::size_t>(1, 6)(rng));
    for (auto& s : sizes) s = std::uniform_int_distribution<int>(1, 9)(rng);
    const auto seed = rng();
    const int k = std::min(sizes.front(), std::uniform_int_distribution<int>(1, 5)(rng));
    const auto rule = WiringRule::sample(k, seed);
    const auto a = build_layered_rdag(sizes, rule);
    const auto b = build_layered_rdag(sizes, rule);
    EXPECT_EQ(a.graph, b.graph);
    EXPECT_EQ(a.partition.r, *std::min_element(sizes.begin(), sizes.end()));
    EXPECT_TRUE(validate_rdag(a.graph, a.partition).ok);
    EXPECT_TRUE(validate_rdag(build_layered_rdag(sizes, WiringRule::full_previous()).graph, a.partition).ok);
  }
}

TEST(KCirculant, Examples) {
  const auto g = build_k_circulant(5, 2);
  EXPECT_EQ(std::vector<VertexId>(g.in_neighbors(0).begin(), g.in_neighbors(0).end()), (std::vector<VertexId>{1, 2}));

  const auto c3 = build_k_circulant(3, 1);
  EXPECT_EQ(c3.adjacency(), (std::vector<std::vector<VertexId>>{{1}, {2}, {0}}));

  const auto k16 = build_k_circulant(16, 15);
  for (int i = 0; i < 16; ++i) {
    EXPECT_EQ(k16.in_degree(i), 15);
    for (int j = 0; j < 16; ++j) {
      if (j != i) {
        EXPECT_TRUE(std::binary_search(k16.in_neighbors(i).begin(), k16.in_neighbors(i).end(), j));
      }
    }
  }
}

TEST(KCirculant, RotationInvariance) {
  for (int n = 2; n <= 12; ++n) {
    for (int k = 1; k < n; ++k) {
      const auto g = build_k_circulant(n, k);
      for (int i = 0; i < n; ++i) {
        ASSERT_EQ(g.in_degree(i), k);
        std::vector<VertexId> shifted;
        for (VertexId j : g.in_neighbors(i)) shifted.push_back((j + 1) % n);
        std::sort(shifted.begin(), shifted.end());
        const auto next = g.in_neighbors((i + 1) % n);
        EXPECT_EQ(shifted, std::vector<VertexId>(next.begin(), next.end()));
      }
    }
  }
}

TEST(KCirculant, BadParameters) {
  EXPECT_THROW(build_k_circulant(5, 5), ParameterError);
  EXPECT_THROW(build_k_circulant(5, 0), ParameterError);
}

TEST(MinInDegree, Examples) {
  const auto t = sec5_topology();
  EXPECT_EQ(min_in_degree(t.graph, range(16, 80)), 16);
  EXPECT_EQ(min_in_degree(t.graph, t.partition.levels[0]), 0);
  const auto c = build_k_circulant(5, 2);
  EXPECT_EQ(min_in_degree(c, range(0, 5)), 2);
  EXPECT_THROW(min_in_degree(c, std::vector<VertexId>{}), ParameterError);
}

TEST(InDegreeAudit, ThreeFLevelFails) {
  const std::vector<int> sizes{6, 6};
  const auto t = build_layered_rdag(sizes, WiringRule::full_previous());
  const auto r = validate_in_degree(t.graph, t.partition, 7);
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.violations.size(), 6u);
  EXPECT_EQ(r.violations[0].clause, "in-degree");
}

TEST(GraphIo, RoundTripIsByteStable) {
  const auto t = sec5_topology();
  GraphBundle b{t.graph, t.partition, AdversaryPlacement{{3, 1, 40}, 5}};
  const auto text = dump_graph_bundle(b);
  const auto parsed = parse_graph_bundle(text);
  EXPECT_EQ(parsed.graph, b.graph);
  EXPECT_EQ(parsed.partition, b.partition);
  EXPECT_EQ(parsed.placement.adversaries, (std::vector<VertexId>{1, 3, 40}));
  EXPECT_EQ(dump_graph_bundle(parsed), text);
}

TEST(GraphIo, KeysAreCanonical) {
  GraphBundle b{Digraph({{}, {0}}), RdagPartition{{{0}, {1}}, 1}, AdversaryPlacement{{}, 0}};
  const auto text = dump_graph_bundle(b);
  const auto pos = [&](const char* key) { return text.find(key); };
  EXPECT_LT(pos("\"F\""), pos("\"adversaries\""));
  EXPECT_LT(pos("\"adversaries\""), pos("\"in_neighbors\""));
  EXPECT_LT(pos("\"in_neighbors\""), pos("\"levels\""));
  EXPECT_LT(pos("\"levels\""), pos("\"n\""));
  EXPECT_LT(pos("\"n\""), pos("\"r\""));
}

TEST(GraphIo, MalformedInputIsConfigError) {
  EXPECT_THROW(parse_graph_bundle("{"), ConfigError);
  EXPECT_THROW(parse_graph_bundle(R"({"n": 2, "in_neighbors": [[]]})"), ConfigError);
  EXPECT_THROW(parse_graph_bundle(R"({"n": 2, "in_neighbors": [[], [1]]})"), Error);
}

}  // namespace
}  // namespace rdag
