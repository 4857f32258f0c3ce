#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "congen/graph.hpp"

namespace congen {

// Waxman edge-probability parameters: p(d) = q * exp(-s * d).
// s = 0 is the GER (fixed edge probability) special case.
struct WaxmanParams {
    double q;
    double s;
    WaxmanParams(double q, double s);
};

// Distance-dependent edge-probability law plus the likelihood ratios the
// chain acceptance step needs. Immutable, safe to share across threads.
class EdgeModel {
public:
    explicit EdgeModel(WaxmanParams params) : params_(params) {}
    static EdgeModel waxman(double q, double s) { return EdgeModel(WaxmanParams(q, s)); }
    static EdgeModel ger(double q) { return EdgeModel(WaxmanParams(q, 0.0)); }

    const WaxmanParams& params() const { return params_; }

    // q * exp(-s * d), in (0, 1] for finite d >= 0.
    double edge_prob(double d) const;

    // Likelihood ratio for toggling a single pair at distance d:
    //   add:    p / (1 - p), +inf when p == 1
    //   remove: (1 - p) / p
    // Computed in linear space; p underflowing to 0 gives ratio_add = 0,
    // the exact limit.
    double ratio_add(double d) const;
    double ratio_remove(double d) const;

private:
    WaxmanParams params_;
};

// n i.i.d. uniform points in the unit square.
std::vector<Point> sample_positions(std::size_t n, std::mt19937_64& rng);

// Unconditioned model draw: each unordered pair made adjacent
// independently with probability edge_prob(d_ij). O(n^2).
SpatialGraph generate_graph(const EdgeModel& m, std::vector<Point> positions,
                            std::mt19937_64& rng);

// log P(G) = sum_E log p_ij + sum_notE log(1 - p_ij). Returns -inf when an
// absent pair has p_ij = 1. O(n^2); meant for small-n oracle work.
double log_likelihood(const EdgeModel& m, const SpatialGraph& g);

// Joins components by attaching one uniformly random node of each
// non-giant component to a uniformly random node of the largest
// component. Adds exactly (#components - 1) edges.
void connect_arbitrarily(SpatialGraph& g, std::mt19937_64& rng);

struct LinePickingEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::size_t samples = 0;
};

// Monte Carlo estimate of E[exp(-s D)] where D is the distance between two
// uniform points in the unit square. Appears in the expected-degree
// formula z = (n-1) q E[exp(-s D)].
LinePickingEstimate laplace_line_picking(double s, std::size_t samples,
                                         std::mt19937_64& rng);

}  // namespace congen
