#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "congen/sampler.hpp"

namespace congen {

// Parameters of f(x) = c + a * exp(-b * x) fitted by damped Gauss-Newton.
struct ExponentialFit {
    double c = 0.0;    // asymptote
    double a = 0.0;    // amplitude
    double b = 0.0;    // decay rate per x unit, > 0 when identifiable
    double rss = 0.0;  // residual sum of squares
    bool converged = false;
    bool b_identifiable = true;  // false for flat input, where b means nothing
    int iterations = 0;
};

// Least-squares fit of c + a*exp(-b*x). Input must be sorted by x
// (ties allowed, e.g. several chains recorded on one grid) with at least
// 4 points and 3 distinct x values. A constant series comes back as
// c = mean, a = 0, b_identifiable = false rather than an error.
ExponentialFit fit_exponential(std::span<const double> xs, std::span<const double> ys);

// Smallest x with |a| exp(-b x) <= rel_tol |c|: where the fitted curve
// stays within rel_tol of its asymptote. 0 when already inside.
double iterations_to_convergence(const ExponentialFit& fit, double rel_tol = 1e-3);

// Closed-form behaviour of one node pair toggled with selection
// probability delta: acceptance rates, stationary link probability
// (equal to p), spectral gap and relaxation time of the 2x2 transition
// matrix.
struct PairChainAnalysis {
    double p = 0.0;
    double delta = 0.0;
    double alpha_add = 0.0;     // min(1, p/(1-p))
    double alpha_remove = 0.0;  // min(1, (1-p)/p)
    double stationary_p = 0.0;  // alpha_add / (alpha_add + alpha_remove) = p
    double spectral_gap = 0.0;  // delta * (alpha_add + alpha_remove)
    double relaxation_time = 0.0;
    double lambda2 = 0.0;  // second eigenvalue, 1 - spectral_gap
    bool periodic = false;  // lambda2 == -1: the delta = 1, p = 0.5 boundary
};

PairChainAnalysis pair_chain_analysis(double p, double delta);

// Pair-selection probability for an n-node graph. The two-state analysis
// uses the ordered convention 1/(n(n-1)) by default; the proposal itself
// is uniform over unordered pairs, 2/(n(n-1)).
double pair_selection_probability(std::size_t n, bool ordered = true);

// Simulates the reduced link/no-link chain for `steps` steps and returns
// the fraction spent in the link state (which converges to p).
double simulate_pair_chain(double p, double delta, std::uint64_t steps,
                           std::mt19937_64& rng);

struct PowerLawFit {
    double exponent = 0.0;
    double exponent_stderr = 0.0;
    double intercept = 0.0;  // of the log-log line
    std::size_t points = 0;
};

// OLS of log(y) on log(x).
PowerLawFit fit_power_law(std::span<const double> xs, std::span<const double> ys);

enum class TraceStat { avg_degree, avg_edge_length };

struct ScalingConfig {
    std::vector<std::size_t> n_values;
    double s = 2.0;
    double target_degree = 6.0;  // expected degree held fixed across n
    std::size_t chains_per_n = 20;
    double iterations_factor = 10.0;  // K = factor * n^2
    std::size_t records_per_chain = 400;
    double rel_tol = 1e-3;
    std::uint64_t seed = 0;
    std::size_t jobs = 0;  // 0 = all cores
    std::size_t gtilde_samples = 1'000'000;
};

struct ScalingSeries {
    std::vector<double> k_conv;         // aligned with n_values; NaN when excluded
    std::vector<ExponentialFit> fits;   // pooled fit per n
    std::vector<std::size_t> excluded;  // indices whose fit did not converge
    PowerLawFit power_law;              // over the included (n, k_conv) points
};

struct ScalingResult {
    std::vector<std::size_t> n_values;
    std::vector<double> q_values;  // q chosen per n to hold the expected degree
    double gtilde = 0.0;
    ScalingSeries degree;
    ScalingSeries edge_length;
};

// Runs chains_per_n chains per n (fresh positions each), pools the
// recorded values across chains, fits the exponential per statistic, and
// regresses log k_conv on log n. Chains run on a worker pool; the result
// does not depend on scheduling.
ScalingResult scaling_study(const ScalingConfig& cfg);

struct SweepPoint {
    double q = 0.0;
    double s = 0.0;
    std::size_t samples = 0;
    std::size_t connected = 0;
    double proportion = 0.0;
    double std_error = 0.0;  // binomial
};

// Fraction of unconditioned model draws that come out connected, per
// (q, s) grid point.
std::vector<SweepPoint> connectedness_sweep(std::size_t n,
                                            std::span<const std::pair<double, double>> grid,
                                            std::size_t samples, std::uint64_t seed,
                                            std::size_t jobs = 0);

}  // namespace congen
