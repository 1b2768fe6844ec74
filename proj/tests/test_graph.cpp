#include <doctest.h>

#include "flowpotts/errors.hpp"
#include "flowpotts/graph.hpp"

#include <random>

using namespace flowpotts;

namespace {

EdgeSubset subset(const Multigraph& g, std::initializer_list<std::size_t> idx) {
  EdgeSubset s = g.no_edges();
  for (auto i : idx) s.set(i);
  return s;
}

// All multiplicity vectors with entries in [0, cap].
std::vector<MultiplicityVector> all_multiplicities(std::size_t edges, std::uint32_t cap) {
  std::vector<MultiplicityVector> out;
  std::vector<std::uint32_t> m(edges, 0);
  while (true) {
    out.emplace_back(m);
    std::size_t i = 0;
    while (i < edges && m[i] == cap) m[i++] = 0;
    if (i == edges) break;
    ++m[i];
  }
  return out;
}

}  // namespace

TEST_CASE("component_count") {
  auto tri = builtin_graph("triangle");
  CHECK(component_count(tri, tri.no_edges()) == 3);
  CHECK(component_count(tri, tri.all_edges()) == 1);
  auto p4 = builtin_graph("path:4");
  CHECK(component_count(p4, subset(p4, {1})) == 3);
  CHECK(component_count(p4, std::uint64_t{0b010}) == 3);
}

TEST_CASE("rank_corank") {
  auto tri = builtin_graph("triangle");
  CHECK(rank_corank(tri, tri.no_edges()) == RankCorank{0, 0});
  CHECK(rank_corank(tri, tri.all_edges()) == RankCorank{2, 1});
  auto k4 = builtin_graph("k4");
  // star at vertex 0 is a spanning tree
  CHECK(rank_corank(k4, subset(k4, {0, 1, 2})) == RankCorank{3, 0});

  SUBCASE("literal identities on every subset") {
    for (const auto& name : {"k4", "digon", "ladder:3", "cycle:5"}) {
      auto g = builtin_graph(name);
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << g.edge_count()); ++mask) {
        EdgeSubset s(g.edge_count(), mask);
        auto k = component_count(g, s);
        auto rc = rank_corank(g, s);
        CHECK(rc.rank == g.vertex_count() - k);
        CHECK(rc.corank == s.count() + k - g.vertex_count());
        CHECK(rc.rank + rc.corank == s.count());
      }
    }
  }
}

TEST_CASE("expand") {
  auto k2 = builtin_graph("k2");
  auto empty = expand(k2, {0});
  CHECK(empty.vertex_count() == 2);
  CHECK(empty.edge_count() == 0);
  auto triple = expand(k2, {3});
  CHECK(triple.edge_count() == 3);
  for (const auto& e : triple.edges()) CHECK(e == Edge{0, 1});
  auto tri = expand(builtin_graph("triangle"), {1, 2, 0});
  CHECK(tri.vertex_count() == 3);
  CHECK(tri.edge_count() == 3);
  CHECK_THROWS_AS(expand(k2, {1, 1}), InvalidArgument);
}

TEST_CASE("add_pair_edge") {
  auto digon = add_pair_edge(builtin_graph("k2"), 0, 1);
  CHECK(digon == builtin_graph("digon"));
  auto k2 = add_pair_edge(Multigraph(2, {}), 0, 1);
  CHECK(k2 == builtin_graph("k2"));
  auto g = add_pair_edge(builtin_graph("triangle"), 0, 2);
  CHECK(g.edge_count() == 4);
  CHECK(g.edge(3) == Edge{0, 2});
  CHECK_THROWS_AS(add_pair_edge(g, 1, 1), InvalidArgument);
}

TEST_CASE("is_even") {
  CHECK(is_even(builtin_graph("triangle")));
  CHECK_FALSE(is_even(builtin_graph("k2")));
  CHECK(is_even(expand(builtin_graph("k2"), {2})));
  CHECK(is_even(Multigraph(1, {{0, 0}})));
}

TEST_CASE("source_set") {
  auto k2 = builtin_graph("k2");
  CHECK(source_set(k2, {1}) == SourceSet{0, 1});
  CHECK(source_set(builtin_graph("triangle"), {2, 0, 4}).empty());
  CHECK(source_set(builtin_graph("path:3"), {1, 1}) == SourceSet{0, 2});

  SUBCASE("even cardinality and emptiness matches evenness, exhaustively") {
    for (const auto& name : {"k2", "digon", "triangle", "path:4", "cycle:4"}) {
      auto g = builtin_graph(name);
      REQUIRE(g.edge_count() <= 4);
      for (const auto& m : all_multiplicities(g.edge_count(), 2)) {
        auto s = source_set(g, m);
        CHECK(s.size() % 2 == 0);
        CHECK(is_even(expand(g, m)) == s.empty());
        CHECK(expand(g, m).edge_count() == m.total());
      }
    }
  }
}

TEST_CASE("connected_in") {
  auto k2 = builtin_graph("k2");
  CHECK(connected_in(k2, {0}, 1, 1));
  CHECK_FALSE(connected_in(k2, {0}, 0, 1));
  CHECK(connected_in(builtin_graph("path:3"), {1, 1}, 0, 2));
  CHECK_FALSE(connected_in(builtin_graph("path:3"), {1, 0}, 0, 2));
}

TEST_CASE("SourceSet algebra") {
  SourceSet a{0, 1};
  CHECK(a.symmetric_difference({1, 2}) == SourceSet{0, 2});
  CHECK(a.symmetric_difference(a).empty());
  CHECK(SourceSet::from_mask(a.mask()) == a);
}

TEST_CASE("separation") {
  auto p = builtin_graph("path:3");
  CHECK(separates(p, {1}, 0, 2));
  CHECK_FALSE(separates(p, {}, 0, 2));
  CHECK_FALSE(separates(p, {0}, 0, 2));
  auto ladder = builtin_graph("ladder:3");
  // middle rung {1, 4} splits the ends
  CHECK(separates(ladder, {1, 4}, 0, 2));
  CHECK_FALSE(separates(ladder, {1}, 0, 2));
}

TEST_CASE("builtins and text format") {
  CHECK(builtin_graph("path:4").edge_count() == 3);
  CHECK(builtin_graph("cycle:3").edge_count() == 3);
  auto ladder = builtin_graph("ladder:3");
  CHECK(ladder.vertex_count() == 6);
  CHECK(ladder.edge_count() == 7);
  CHECK_THROWS_AS(builtin_graph("petersen"), InvalidArgument);
  CHECK_THROWS_AS(builtin_graph("path:x"), InvalidArgument);

  auto k4 = builtin_graph("k4");
  CHECK(parse_graph_text(format_graph(k4)) == k4);
  CHECK(parse_graph_text("2 2\n0 1\n1 1\n").has_loops());
  CHECK_THROWS_AS(parse_graph_text("2 1\n0 2\n"), InvalidArgument);
  CHECK_THROWS_AS(parse_graph_text("2 2\n0 1\n"), InvalidArgument);
  CHECK_THROWS_AS(Multigraph(2, {{0, 5}}), InvalidArgument);
}

TEST_CASE("bfs distances") {
  auto d = bfs_distances(builtin_graph("path:5"), 0);
  CHECK(d == std::vector<std::size_t>{0, 1, 2, 3, 4});
}
