#include <doctest.h>

#include <cmath>
#include <limits>

#include "congen/model.hpp"
#include "congen/oracle.hpp"
#include "congen/rng.hpp"
#include "test_support.hpp"

using namespace congen;

TEST_CASE("edge_prob follows q exp(-s d)") {
    const EdgeModel ger = EdgeModel::ger(0.7);
    CHECK(ger.edge_prob(0.0) == doctest::Approx(0.7));
    CHECK(ger.edge_prob(0.33) == doctest::Approx(0.7));  // s = 0: distance-free

    CHECK(EdgeModel::waxman(1.0, 3.0).edge_prob(0.0) == doctest::Approx(1.0));
    CHECK(EdgeModel::waxman(0.5, 2.0).edge_prob(1.0) ==
          doctest::Approx(0.5 * std::exp(-2.0)));

    CHECK_THROWS_AS(ger.edge_prob(-0.1), std::invalid_argument);
    CHECK_THROWS_AS(ger.edge_prob(std::numeric_limits<double>::infinity()),
                    std::invalid_argument);
}

TEST_CASE("parameter domains enforced at construction") {
    CHECK_THROWS_AS(WaxmanParams(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(WaxmanParams(1.2, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(WaxmanParams(0.5, -0.5), std::invalid_argument);
    CHECK_NOTHROW(WaxmanParams(1.0, 0.0));
}

TEST_CASE("acceptance ratios") {
    // p = 0.5 at d = 0
    const EdgeModel half = EdgeModel::ger(0.5);
    CHECK(half.ratio_add(0.3) == doctest::Approx(1.0));
    CHECK(half.ratio_remove(0.3) == doctest::Approx(1.0));

    // p = 0.25
    const EdgeModel quarter = EdgeModel::ger(0.25);
    CHECK(quarter.ratio_add(0.1) == doctest::Approx(1.0 / 3.0));
    CHECK(quarter.ratio_remove(0.1) == doctest::Approx(3.0));

    // p = 1: additions always accepted, removals never
    const EdgeModel certain = EdgeModel::waxman(1.0, 5.0);
    CHECK(certain.ratio_add(0.0) == std::numeric_limits<double>::infinity());
    CHECK(certain.ratio_remove(0.0) == 0.0);
}

TEST_CASE("edge_prob monotonicity and ratio product") {
    auto rng = make_rng(42, 11);
    for (int trial = 0; trial < 500; ++trial) {
        const double q = 0.05 + 0.9 * uniform01(rng);
        const double s = 8.0 * uniform01(rng);
        const double d1 = 1.5 * uniform01(rng);
        const double d2 = d1 + 1.5 * uniform01(rng);
        const EdgeModel m = EdgeModel::waxman(q, s);

        CHECK(m.edge_prob(d1) >= m.edge_prob(d2));  // non-increasing in d
        const EdgeModel denser = EdgeModel::waxman(std::min(1.0, q + 0.05), s);
        CHECK(denser.edge_prob(d1) >= m.edge_prob(d1));  // increasing in q

        const double p = m.edge_prob(d1);
        if (p > 0.0 && p < 1.0)
            CHECK(m.ratio_add(d1) * m.ratio_remove(d1) == doctest::Approx(1.0));
    }
}

TEST_CASE("sample_positions: range, determinism, moments") {
    auto rng = make_rng(7, stream::positions);
    const auto points = sample_positions(1000, rng);
    for (const auto& p : points) {
        CHECK(p.x >= 0.0);
        CHECK(p.x < 1.0);
        CHECK(p.y >= 0.0);
        CHECK(p.y < 1.0);
    }

    auto rng_a = make_rng(123, stream::positions);
    auto rng_b = make_rng(123, stream::positions);
    const auto a = sample_positions(50, rng_a);
    const auto b = sample_positions(50, rng_b);
    for (std::size_t k = 0; k < a.size(); ++k) {
        CHECK(a[k].x == b[k].x);
        CHECK(a[k].y == b[k].y);
    }

    CHECK_THROWS_AS(sample_positions(0, rng), std::invalid_argument);

    const std::size_t n = 100'000;
    auto rng_m = make_rng(99, stream::positions);
    const auto big = sample_positions(n, rng_m);
    double mean_x = 0.0;
    for (const auto& p : big) mean_x += p.x;
    mean_x /= double(n);
    const double tol = 3.0 * (1.0 / std::sqrt(12.0)) / std::sqrt(double(n));
    CHECK(std::abs(mean_x - 0.5) < tol);
}

TEST_CASE("generate_graph: complete at p=1, Bernoulli per pair") {
    auto rng = make_rng(5, stream::initial_graph);
    SpatialGraph complete =
        generate_graph(EdgeModel::ger(1.0), sample_positions(20, rng), rng);
    CHECK(complete.edge_count() == 20 * 19 / 2);

    // fixed positions: the (0,1) indicator across repeats is Bernoulli(p_01)
    const std::vector<Point> positions{{0.1, 0.1}, {0.6, 0.4}, {0.9, 0.8}};
    const EdgeModel m = EdgeModel::waxman(0.8, 1.3);
    const double p01 = m.edge_prob(distance(positions[0], positions[1]));
    const int repeats = 20'000;
    int hits = 0;
    for (int r = 0; r < repeats; ++r)
        if (generate_graph(m, positions, rng).has_edge(0, 1)) ++hits;
    const double freq = double(hits) / repeats;
    CHECK(std::abs(freq - p01) < 4.0 * std::sqrt(p01 * (1.0 - p01) / repeats));
}

TEST_CASE("generate_graph edge count in the q -> 0 limit") {
    // mean edge count ~ q C(n,2) Gtilde(s) when q is tiny
    const double q = 0.001, s = 1.0;
    const std::size_t n = 50;
    auto rng = make_rng(23, stream::initial_graph);
    const int repeats = 2000;
    double mean = 0.0, mean_sq = 0.0;
    for (int k = 0; k < repeats; ++k) {
        const auto count = double(
            generate_graph(EdgeModel::waxman(q, s), sample_positions(n, rng), rng)
                .edge_count());
        mean += count;
        mean_sq += count * count;
    }
    mean /= repeats;
    const double sd =
        std::sqrt((mean_sq / repeats - mean * mean) * repeats / (repeats - 1));
    const double expected =
        q * double(n * (n - 1) / 2) * testsupport::gtilde_quadrature(s);
    CHECK(std::abs(mean - expected) < 4.0 * sd / std::sqrt(double(repeats)));
}

TEST_CASE("generate_graph mean degree tracks (n-1) q Gtilde(s)") {
    const double s = 6.0;
    const double q = 0.01;
    const std::size_t n = 1000;
    const double gt = testsupport::gtilde_quadrature(s);

    auto rng = make_rng(31, stream::initial_graph);
    const int graphs = 50;
    double mean = 0.0, mean_sq = 0.0;
    for (int k = 0; k < graphs; ++k) {
        SpatialGraph g = generate_graph(EdgeModel::waxman(q, s),
                                        sample_positions(n, rng), rng);
        const double deg = 2.0 * double(g.edge_count()) / double(n);
        mean += deg;
        mean_sq += deg * deg;
    }
    mean /= graphs;
    const double sd = std::sqrt((mean_sq / graphs - mean * mean) * graphs / (graphs - 1));
    const double expected = double(n - 1) * q * gt;
    CHECK(std::abs(mean - expected) < 4.0 * sd / std::sqrt(double(graphs)));
}

TEST_CASE("log_likelihood on 2-node graphs and whole-ensemble mass") {
    const std::vector<Point> pair_positions{{0.2, 0.2}, {0.7, 0.2}};
    const EdgeModel quarter = EdgeModel::ger(0.25);

    SpatialGraph with_edge(pair_positions);
    with_edge.add_edge(0, 1);
    CHECK(log_likelihood(quarter, with_edge) == doctest::Approx(std::log(0.25)));

    SpatialGraph without_edge(pair_positions);
    CHECK(log_likelihood(quarter, without_edge) == doctest::Approx(std::log(0.75)));

    // exp(log_likelihood) sums to 1 over every labeled graph, n = 3 and 5
    for (const std::size_t n : {std::size_t{3}, std::size_t{5}}) {
        auto rng = make_rng(n, stream::positions);
        const auto positions = sample_positions(n, rng);
        const EdgeModel m = EdgeModel::waxman(0.55, 1.2);
        double total = 0.0;
        for (GraphKey key = 0; key < (GraphKey{1} << (n * (n - 1) / 2)); ++key)
            total += std::exp(log_likelihood(m, graph_from_key(positions, key)));
        CHECK(std::abs(total - 1.0) < 1e-12);
    }
}

TEST_CASE("connect_arbitrarily") {
    // already connected: untouched
    std::vector<Point> square{{0, 0}, {1, 0}, {0, 1}, {1, 1}};
    SpatialGraph ring(square);
    ring.add_edge(0, 1);
    ring.add_edge(1, 3);
    ring.add_edge(3, 2);
    ring.add_edge(2, 0);
    auto rng = make_rng(3, stream::connect);
    connect_arbitrarily(ring, rng);
    CHECK(ring.edge_count() == 4);

    // edgeless: a tree appears
    SpatialGraph empty(sample_positions(40, rng));
    connect_arbitrarily(empty, rng);
    CHECK(empty.edge_count() == 39);
    CHECK(empty.is_connected());

    // postcondition over sparse Waxman draws
    const EdgeModel m = EdgeModel::waxman(0.05, 4.0);
    for (int trial = 0; trial < 1000; ++trial) {
        SpatialGraph g = generate_graph(m, sample_positions(100, rng), rng);
        const std::size_t components = g.connected_components().size();
        const std::size_t before = g.edge_count();
        connect_arbitrarily(g, rng);
        CHECK(g.is_connected());
        CHECK(g.edge_count() == before + components - 1);
    }
}

TEST_CASE("laplace_line_picking") {
    auto rng = make_rng(17, stream::line_picking);

    // s = 0: every term is exactly 1
    CHECK(laplace_line_picking(0.0, 1000, rng).value == 1.0);

    // large s: transform collapses
    const auto far = laplace_line_picking(50.0, 200'000, rng);
    CHECK(far.value < 0.01);
    CHECK(std::abs(far.value - testsupport::gtilde_quadrature(50.0)) <
          3.0 * far.std_error + 1e-9);

    // moderate s against the quadrature oracle
    for (const double s : {0.5, 1.0, 2.0, 6.0}) {
        const auto estimate = laplace_line_picking(s, 400'000, rng);
        CHECK(std::abs(estimate.value - testsupport::gtilde_quadrature(s)) <
              3.0 * estimate.std_error);
    }

    CHECK_THROWS_AS(laplace_line_picking(1.0, 0, rng), std::invalid_argument);
}
