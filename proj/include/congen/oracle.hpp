#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "congen/graph.hpp"
#include "congen/model.hpp"

namespace congen {

// Canonical edge-set encoding for labeled graphs on n <= 6 nodes: pair
// (i, j), i < j, lives at bit i*n - i*(i+1)/2 + (j-i-1).
using GraphKey = std::uint32_t;

inline constexpr std::size_t max_oracle_nodes = 6;

std::size_t pair_bit_index(std::size_t n, NodeId i, NodeId j);
GraphKey graph_key(const SpatialGraph& g);
SpatialGraph graph_from_key(std::vector<Point> positions, GraphKey key);

// Probability masses (or sample frequencies) over labeled graphs on a
// shared position set.
struct GraphDistribution {
    std::size_t n = 0;
    std::map<GraphKey, double> mass;
    double total_mass = 0.0;
};

struct ConditionalEnumeration {
    GraphDistribution distribution;  // normalized over connected graphs
    double p_connected = 0.0;        // total model mass on connected graphs
};

// Walks all 2^C(n,2) labeled graphs, keeps the connected ones with their
// model probabilities, and normalizes. n > 6 is refused outright.
ConditionalEnumeration enumerate_conditional(const std::vector<Point>& positions,
                                             const EdgeModel& m);

struct RejectionExhaustedError : std::runtime_error {
    explicit RejectionExhaustedError(std::size_t attempts_in)
        : std::runtime_error("rejection sampling exhausted after " +
                             std::to_string(attempts_in) + " attempts"),
          attempts(attempts_in) {}
    std::size_t attempts;
};

struct RejectionResult {
    SpatialGraph graph;
    std::size_t attempts;
};

// Draws unconditioned graphs until one is connected. Throws
// RejectionExhaustedError carrying the attempt count when max_attempts
// draws all fail.
RejectionResult rejection_sample(const EdgeModel& m, const std::vector<Point>& positions,
                                 std::mt19937_64& rng, std::size_t max_attempts);

GraphDistribution empirical_distribution(std::span<const SpatialGraph> graphs);
GraphDistribution empirical_distribution_from_keys(std::size_t n,
                                                   std::span<const GraphKey> keys);

// (1/2) sum |p_a - p_b| over keys, after normalizing both sides.
double total_variation(const GraphDistribution& a, const GraphDistribution& b);

// Two-sample chi-square homogeneity test on key frequencies. Keys whose
// combined count falls below min_expected are pooled into one cell.
struct TwoSampleTest {
    double statistic = 0.0;
    std::size_t dof = 0;
    double critical_999 = 0.0;  // chi-square 99.9% quantile at dof
    bool indistinguishable = false;
};

TwoSampleTest two_sample_chi_square(const GraphDistribution& a,
                                    const GraphDistribution& b,
                                    double min_expected = 10.0);

}  // namespace congen
