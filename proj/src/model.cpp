#include "congen/model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "congen/rng.hpp"

namespace congen {

WaxmanParams::WaxmanParams(double q_in, double s_in) : q(q_in), s(s_in) {
    if (!(q > 0.0) || q > 1.0 || !std::isfinite(q))
        throw std::invalid_argument("WaxmanParams: q must be in (0, 1], got " +
                                    std::to_string(q_in));
    if (!(s >= 0.0) || !std::isfinite(s))
        throw std::invalid_argument("WaxmanParams: s must be >= 0, got " +
                                    std::to_string(s_in));
}

double EdgeModel::edge_prob(double d) const {
    if (!(d >= 0.0) || !std::isfinite(d))
        throw std::invalid_argument("edge_prob: distance must be finite and >= 0");
    return params_.q * std::exp(-params_.s * d);
}

double EdgeModel::ratio_add(double d) const {
    const double p = edge_prob(d);
    if (p >= 1.0) return std::numeric_limits<double>::infinity();
    return p / (1.0 - p);
}

double EdgeModel::ratio_remove(double d) const {
    const double p = edge_prob(d);
    return (1.0 - p) / p;
}

std::vector<Point> sample_positions(std::size_t n, std::mt19937_64& rng) {
    if (n == 0) throw std::invalid_argument("sample_positions: n must be >= 1");
    std::vector<Point> points(n);
    for (auto& pt : points) {
        pt.x = uniform01(rng);
        pt.y = uniform01(rng);
    }
    return points;
}

SpatialGraph generate_graph(const EdgeModel& m, std::vector<Point> positions,
                            std::mt19937_64& rng) {
    SpatialGraph g(std::move(positions));
    const std::size_t n = g.node_count();
    for (NodeId i = 0; i + 1 < n; ++i) {
        for (NodeId j = i + 1; j < n; ++j) {
            const double p = m.edge_prob(g.distance(i, j));
            if (uniform01(rng) < p) g.add_edge(i, j);
        }
    }
    return g;
}

double log_likelihood(const EdgeModel& m, const SpatialGraph& g) {
    const std::size_t n = g.node_count();
    if (n < 2) throw std::invalid_argument("log_likelihood: graph needs >= 2 nodes");
    double sum = 0.0;
    for (NodeId i = 0; i + 1 < n; ++i) {
        for (NodeId j = i + 1; j < n; ++j) {
            const double p = m.edge_prob(g.distance(i, j));
            if (g.has_edge(i, j)) {
                sum += std::log(p);
            } else {
                if (p >= 1.0) return -std::numeric_limits<double>::infinity();
                sum += std::log1p(-p);
            }
        }
    }
    return sum;
}

void connect_arbitrarily(SpatialGraph& g, std::mt19937_64& rng) {
    auto components = g.connected_components();
    if (components.size() <= 1) return;

    std::size_t giant = 0;
    for (std::size_t c = 1; c < components.size(); ++c)
        if (components[c].size() > components[giant].size()) giant = c;

    const auto& anchor = components[giant];
    for (std::size_t c = 0; c < components.size(); ++c) {
        if (c == giant) continue;
        const auto& comp = components[c];
        const NodeId u = comp[uniform_below(rng, comp.size())];
        const NodeId v = anchor[uniform_below(rng, anchor.size())];
        g.add_edge(u, v);
    }
}

LinePickingEstimate laplace_line_picking(double s, std::size_t samples,
                                         std::mt19937_64& rng) {
    if (samples == 0)
        throw std::invalid_argument("laplace_line_picking: samples must be >= 1");
    if (!(s >= 0.0) || !std::isfinite(s))
        throw std::invalid_argument("laplace_line_picking: s must be finite and >= 0");

    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t k = 0; k < samples; ++k) {
        const Point a{uniform01(rng), uniform01(rng)};
        const Point b{uniform01(rng), uniform01(rng)};
        const double term = std::exp(-s * distance(a, b));
        sum += term;
        sum_sq += term * term;
    }
    const double mean = sum / static_cast<double>(samples);
    double std_error = 0.0;
    if (samples > 1) {
        const double var =
            (sum_sq - sum * mean) / static_cast<double>(samples - 1);
        std_error = std::sqrt(std::max(var, 0.0) / static_cast<double>(samples));
    }
    return LinePickingEstimate{mean, std_error, samples};
}

}  // namespace congen
