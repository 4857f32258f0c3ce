#include "congen/oracle.hpp"

#include <cmath>
#include <set>

namespace congen {

namespace {

void check_oracle_n(std::size_t n) {
    if (n < 1 || n > max_oracle_nodes)
        throw std::invalid_argument("oracle routines require 1 <= n <= " +
                                    std::to_string(max_oracle_nodes) + ", got " +
                                    std::to_string(n));
}

std::size_t pair_count(std::size_t n) { return n * (n - 1) / 2; }

}  // namespace

std::size_t pair_bit_index(std::size_t n, NodeId i, NodeId j) {
    check_oracle_n(n);
    if (i >= j || j >= n) throw std::invalid_argument("pair_bit_index: need i < j < n");
    return std::size_t(i) * n - std::size_t(i) * (i + 1) / 2 + (j - i - 1);
}

GraphKey graph_key(const SpatialGraph& g) {
    const std::size_t n = g.node_count();
    check_oracle_n(n);
    GraphKey key = 0;
    for (NodeId i = 0; i + 1 < n; ++i)
        for (const NodeId j : g.neighbors(i))
            if (i < j) key |= GraphKey{1} << pair_bit_index(n, i, j);
    return key;
}

SpatialGraph graph_from_key(std::vector<Point> positions, GraphKey key) {
    const std::size_t n = positions.size();
    check_oracle_n(n);
    if (key >> pair_count(n))
        throw std::invalid_argument("graph_from_key: key has bits beyond C(n,2)");
    SpatialGraph g(std::move(positions));
    for (NodeId i = 0; i + 1 < n; ++i)
        for (NodeId j = i + 1; j < n; ++j)
            if (key >> pair_bit_index(n, i, j) & 1) g.add_edge(i, j);
    return g;
}

ConditionalEnumeration enumerate_conditional(const std::vector<Point>& positions,
                                             const EdgeModel& m) {
    const std::size_t n = positions.size();
    check_oracle_n(n);

    ConditionalEnumeration out;
    out.distribution.n = n;
    const GraphKey key_end = GraphKey{1} << pair_count(n);
    for (GraphKey key = 0; key < key_end; ++key) {
        SpatialGraph g = graph_from_key(positions, key);
        if (!g.is_connected()) continue;
        const double mass = n < 2 ? 1.0 : std::exp(log_likelihood(m, g));
        out.distribution.mass[key] = mass;
        out.p_connected += mass;
    }
    for (auto& [key, mass] : out.distribution.mass) mass /= out.p_connected;
    out.distribution.total_mass = 1.0;
    return out;
}

RejectionResult rejection_sample(const EdgeModel& m, const std::vector<Point>& positions,
                                 std::mt19937_64& rng, std::size_t max_attempts) {
    if (max_attempts == 0)
        throw std::invalid_argument("rejection_sample: max_attempts must be >= 1");
    for (std::size_t attempt = 1; attempt <= max_attempts; ++attempt) {
        SpatialGraph g = generate_graph(m, positions, rng);
        if (g.is_connected()) return RejectionResult{std::move(g), attempt};
    }
    throw RejectionExhaustedError(max_attempts);
}

GraphDistribution empirical_distribution(std::span<const SpatialGraph> graphs) {
    if (graphs.empty())
        throw std::invalid_argument("empirical_distribution: no graphs given");
    GraphDistribution dist;
    dist.n = graphs.front().node_count();
    check_oracle_n(dist.n);
    for (const SpatialGraph& g : graphs) {
        if (g.node_count() != dist.n)
            throw std::invalid_argument("empirical_distribution: mixed node counts");
        dist.mass[graph_key(g)] += 1.0;
        dist.total_mass += 1.0;
    }
    return dist;
}

GraphDistribution empirical_distribution_from_keys(std::size_t n,
                                                   std::span<const GraphKey> keys) {
    check_oracle_n(n);
    if (keys.empty())
        throw std::invalid_argument("empirical_distribution: no keys given");
    GraphDistribution dist;
    dist.n = n;
    for (const GraphKey key : keys) {
        dist.mass[key] += 1.0;
        dist.total_mass += 1.0;
    }
    return dist;
}

double total_variation(const GraphDistribution& a, const GraphDistribution& b) {
    if (a.n != b.n)
        throw std::invalid_argument("total_variation: distributions differ in n");
    if (!(a.total_mass > 0.0) || !(b.total_mass > 0.0))
        throw std::invalid_argument("total_variation: empty distribution");

    double sum = 0.0;
    auto ia = a.mass.begin();
    auto ib = b.mass.begin();
    while (ia != a.mass.end() || ib != b.mass.end()) {
        if (ib == b.mass.end() || (ia != a.mass.end() && ia->first < ib->first)) {
            sum += std::abs(ia->second / a.total_mass);
            ++ia;
        } else if (ia == a.mass.end() || ib->first < ia->first) {
            sum += std::abs(ib->second / b.total_mass);
            ++ib;
        } else {
            sum += std::abs(ia->second / a.total_mass - ib->second / b.total_mass);
            ++ia;
            ++ib;
        }
    }
    return 0.5 * sum;
}

TwoSampleTest two_sample_chi_square(const GraphDistribution& a,
                                    const GraphDistribution& b, double min_expected) {
    if (a.n != b.n)
        throw std::invalid_argument("two_sample_chi_square: distributions differ in n");
    const double na = a.total_mass;
    const double nb = b.total_mass;
    if (!(na > 0.0) || !(nb > 0.0))
        throw std::invalid_argument("two_sample_chi_square: empty sample");

    std::set<GraphKey> keys;
    for (const auto& [key, count] : a.mass) keys.insert(key);
    for (const auto& [key, count] : b.mass) keys.insert(key);

    // Cells with small combined counts get pooled so the chi-square
    // approximation stays valid.
    std::vector<std::pair<double, double>> cells;
    double pooled_a = 0.0, pooled_b = 0.0;
    for (const GraphKey key : keys) {
        const auto ita = a.mass.find(key);
        const auto itb = b.mass.find(key);
        const double ca = ita == a.mass.end() ? 0.0 : ita->second;
        const double cb = itb == b.mass.end() ? 0.0 : itb->second;
        if (ca + cb < min_expected) {
            pooled_a += ca;
            pooled_b += cb;
        } else {
            cells.emplace_back(ca, cb);
        }
    }
    if (pooled_a + pooled_b > 0.0) cells.emplace_back(pooled_a, pooled_b);

    TwoSampleTest test;
    if (cells.size() < 2) {
        // both samples concentrated on a single cell: nothing to distinguish
        test.indistinguishable = true;
        return test;
    }
    for (const auto& [ca, cb] : cells) {
        const double expected_a = na * (ca + cb) / (na + nb);
        const double expected_b = nb * (ca + cb) / (na + nb);
        test.statistic += (ca - expected_a) * (ca - expected_a) / expected_a +
                          (cb - expected_b) * (cb - expected_b) / expected_b;
    }
    test.dof = cells.size() - 1;

    // Wilson-Hilferty approximation to the chi-square 99.9% quantile.
    const double k = double(test.dof);
    const double z = 3.090232306167814;  // normal 99.9% quantile
    const double t = 1.0 - 2.0 / (9.0 * k) + z * std::sqrt(2.0 / (9.0 * k));
    test.critical_999 = k * t * t * t;
    test.indistinguishable = test.statistic <= test.critical_999;
    return test;
}

}  // namespace congen
