#include <doctest.h>

#include <random>
#include <set>

#include "congen/graph.hpp"
#include "congen/oracle.hpp"
#include "congen/rng.hpp"
#include "test_support.hpp"

using namespace congen;

namespace {

std::vector<Point> grid_positions(std::size_t n) {
    std::vector<Point> positions(n);
    for (std::size_t k = 0; k < n; ++k)
        positions[k] = {double(k) / double(n), 0.5};
    return positions;
}

}  // namespace

TEST_CASE("edge basics: add, remove, lookup") {
    SpatialGraph g(grid_positions(4));
    CHECK_FALSE(g.has_edge(0, 1));

    g.add_edge(0, 1);
    CHECK(g.has_edge(0, 1));
    CHECK(g.has_edge(1, 0));  // symmetric
    CHECK(g.edge_count() == 1);

    g.remove_edge(0, 1);
    CHECK_FALSE(g.has_edge(0, 1));
    CHECK(g.edge_count() == 0);
}

TEST_CASE("edge precondition violations are caller bugs") {
    SpatialGraph g(grid_positions(3));
    g.add_edge(0, 1);
    CHECK_THROWS_AS(g.add_edge(0, 1), std::logic_error);
    CHECK_THROWS_AS(g.add_edge(1, 0), std::logic_error);
    CHECK_THROWS_AS(g.remove_edge(0, 2), std::logic_error);
    CHECK_THROWS_AS(g.has_edge(0, 0), std::invalid_argument);
    CHECK_THROWS_AS(g.has_edge(0, 3), std::invalid_argument);
}

TEST_CASE("has_path on simple shapes") {
    SpatialGraph path(grid_positions(3));
    path.add_edge(0, 1);
    path.add_edge(1, 2);
    CHECK(path.has_path(0, 2));

    SpatialGraph isolated(grid_positions(2));
    CHECK_FALSE(isolated.has_path(0, 1));

    // star: every spoke is a bridge
    SpatialGraph star(grid_positions(5));
    for (NodeId leaf = 1; leaf < 5; ++leaf) star.add_edge(0, leaf);
    star.remove_edge(0, 3);
    CHECK_FALSE(star.has_path(0, 3));
    CHECK(star.has_path(1, 2));
}

TEST_CASE("is_connected on simple shapes") {
    SpatialGraph k4(grid_positions(4));
    for (NodeId i = 0; i < 4; ++i)
        for (NodeId j = i + 1; j < 4; ++j) k4.add_edge(i, j);
    CHECK(k4.is_connected());

    SpatialGraph with_isolated(grid_positions(3));
    with_isolated.add_edge(0, 1);
    CHECK_FALSE(with_isolated.is_connected());

    SpatialGraph single(grid_positions(1));
    CHECK(single.is_connected());
}

TEST_CASE("connected_components partitions the nodes") {
    SpatialGraph edgeless(grid_positions(3));
    CHECK(edgeless.connected_components().size() == 3);

    SpatialGraph chain(grid_positions(4));
    chain.add_edge(0, 1);
    chain.add_edge(1, 2);
    chain.add_edge(2, 3);
    CHECK(chain.connected_components().size() == 1);

    // triangle plus one separate edge
    SpatialGraph two(grid_positions(5));
    two.add_edge(0, 1);
    two.add_edge(1, 2);
    two.add_edge(0, 2);
    two.add_edge(3, 4);
    auto components = two.connected_components();
    REQUIRE(components.size() == 2);
    std::multiset<std::size_t> sizes{components[0].size(), components[1].size()};
    CHECK(sizes == std::multiset<std::size_t>{2, 3});
}

TEST_CASE("stats on hand-computed shapes") {
    SpatialGraph path(std::vector<Point>{{0, 0}, {0.5, 0}, {1, 0}});
    path.add_edge(0, 1);
    path.add_edge(1, 2);
    GraphStats stats = compute_stats(path, true);
    CHECK(stats.avg_degree == doctest::Approx(4.0 / 3.0));
    CHECK(stats.avg_edge_length == doctest::Approx(0.5));
    CHECK(stats.avg_path_length.value() == doctest::Approx((1.0 + 1.0 + 2.0) / 3.0));

    SpatialGraph edgeless(grid_positions(4));
    stats = compute_stats(edgeless);
    CHECK(stats.avg_degree == 0.0);
    CHECK(stats.avg_edge_length == 0.0);  // empty-set convention

    SpatialGraph k4(std::vector<Point>{{0, 0}, {0, 1}, {1, 0}, {1, 1}});
    for (NodeId i = 0; i < 4; ++i)
        for (NodeId j = i + 1; j < 4; ++j) k4.add_edge(i, j);
    stats = compute_stats(k4, true);
    CHECK(stats.avg_path_length.value() == doctest::Approx(1.0));

    SpatialGraph split(grid_positions(4));
    split.add_edge(0, 1);
    CHECK_THROWS_AS(compute_stats(split, true), std::domain_error);
}

TEST_CASE("random edit sequences keep the adjacency invariants") {
    auto rng = make_rng(1234, 99);
    SpatialGraph g(grid_positions(8));
    std::set<std::pair<NodeId, NodeId>> reference;

    for (int step = 0; step < 4000; ++step) {
        auto i = static_cast<NodeId>(uniform_below(rng, 8));
        auto j = static_cast<NodeId>(uniform_below(rng, 7));
        if (j >= i) ++j;
        const auto key = std::minmax(i, j);
        if (reference.contains(key)) {
            g.remove_edge(i, j);
            reference.erase(key);
        } else {
            g.add_edge(i, j);
            reference.insert(key);
        }

        REQUIRE(g.edge_count() == reference.size());
        std::size_t degree_total = 0;
        for (NodeId u = 0; u < 8; ++u) {
            degree_total += g.neighbors(u).size();
            for (const NodeId v : g.neighbors(u)) {
                REQUIRE(v != u);                    // no self-loops
                REQUIRE(g.neighbors(v).contains(u));  // symmetry
            }
        }
        REQUIRE(degree_total == 2 * g.edge_count());
    }
}

// After removing (i, j) from a connected graph, connectivity survives iff
// a path between i and j survives. Exhaustive over all labeled graphs on
// up to 5 nodes.
TEST_CASE("removal connectivity criterion, exhaustive n <= 5") {
    for (std::size_t n = 2; n <= 5; ++n) {
        const auto positions = grid_positions(n);
        const GraphKey key_end = GraphKey{1} << (n * (n - 1) / 2);
        for (GraphKey key = 0; key < key_end; ++key) {
            SpatialGraph g = graph_from_key(positions, key);
            if (!g.is_connected()) continue;
            for (const auto& [i, j] : g.edges()) {
                g.remove_edge(i, j);
                CHECK(g.has_path(i, j) == g.is_connected());
                g.add_edge(i, j);
            }
        }
    }
}

TEST_CASE("is_connected matches connected_components and union-find") {
    // exhaustive at n = 5
    const auto positions = grid_positions(5);
    for (GraphKey key = 0; key < (GraphKey{1} << 10); ++key) {
        SpatialGraph g = graph_from_key(positions, key);
        CHECK(g.is_connected() == (g.connected_components().size() == 1));
    }

    // randomized at larger n against an independent union-find
    auto rng = make_rng(77, 5);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + uniform_below(rng, 40);
        SpatialGraph g(grid_positions(n));
        const std::size_t edges = uniform_below(rng, 2 * n);
        for (std::size_t e = 0; e < edges; ++e) {
            auto i = static_cast<NodeId>(uniform_below(rng, n));
            auto j = static_cast<NodeId>(uniform_below(rng, n - 1));
            if (j >= i) ++j;
            if (!g.has_edge(i, j)) g.add_edge(i, j);
        }
        const auto edge_list = g.edges();
        CHECK(g.is_connected() == testsupport::union_find_connected(n, edge_list));
    }
}
