#include "congen/diagnostics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "congen/parallel.hpp"
#include "congen/rng.hpp"

namespace congen {

namespace {

constexpr double nan64 = std::numeric_limits<double>::quiet_NaN();

// Solve the 3x3 system A x = b by Gaussian elimination with partial
// pivoting. Returns false on a (near-)singular matrix.
bool solve3(std::array<std::array<double, 3>, 3> a, std::array<double, 3> b,
            std::array<double, 3>& x) {
    std::array<int, 3> perm{0, 1, 2};
    for (int col = 0; col < 3; ++col) {
        int pivot = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(a[perm[r]][col]) > std::abs(a[perm[pivot]][col])) pivot = r;
        std::swap(perm[col], perm[pivot]);
        const double diag = a[perm[col]][col];
        if (std::abs(diag) < 1e-300) return false;
        for (int r = col + 1; r < 3; ++r) {
            const double f = a[perm[r]][col] / diag;
            for (int c = col; c < 3; ++c) a[perm[r]][c] -= f * a[perm[col]][c];
            b[perm[r]] -= f * b[perm[col]];
        }
    }
    for (int row = 2; row >= 0; --row) {
        double sum = b[perm[row]];
        for (int c = row + 1; c < 3; ++c) sum -= a[perm[row]][c] * x[c];
        x[row] = sum / a[perm[row]][row];
    }
    return std::isfinite(x[0]) && std::isfinite(x[1]) && std::isfinite(x[2]);
}

double residual_sum(std::span<const double> xs, std::span<const double> ys, double c,
                    double a, double b) {
    double rss = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        const double r = ys[k] - c - a * std::exp(-b * xs[k]);
        rss += r * r;
    }
    return rss;
}

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    bool ok = false;
};

LinearFit ols(std::span<const double> xs, std::span<const double> ys) {
    LinearFit fit;
    const std::size_t m = xs.size();
    if (m < 2) return fit;
    const double xm = std::accumulate(xs.begin(), xs.end(), 0.0) / double(m);
    const double ym = std::accumulate(ys.begin(), ys.end(), 0.0) / double(m);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        sxx += (xs[k] - xm) * (xs[k] - xm);
        sxy += (xs[k] - xm) * (ys[k] - ym);
    }
    if (sxx <= 0.0) return fit;
    fit.slope = sxy / sxx;
    fit.intercept = ym - fit.slope * xm;
    if (m > 2) {
        double rss = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            const double r = ys[k] - fit.intercept - fit.slope * xs[k];
            rss += r * r;
        }
        fit.slope_stderr = std::sqrt(rss / double(m - 2) / sxx);
    }
    fit.ok = true;
    return fit;
}

// Starting point per the usual tail/head heuristics: asymptote from the
// last 10% of the series, amplitude from the first x, decay rate from a
// log-linear fit of |y - c0| over the first half.
void initial_guess(std::span<const double> xs, std::span<const double> ys, double& c0,
                   double& a0, double& b0) {
    const std::size_t m = xs.size();
    const std::size_t tail = std::max<std::size_t>(1, m / 10);
    c0 = std::accumulate(ys.end() - static_cast<std::ptrdiff_t>(tail), ys.end(), 0.0) /
         double(tail);

    double head_sum = 0.0;
    std::size_t head_count = 0;
    for (std::size_t k = 0; k < m && xs[k] == xs.front(); ++k) {
        head_sum += ys[k];
        ++head_count;
    }
    a0 = head_sum / double(head_count) - c0;

    const double x_range = xs.back() - xs.front();
    b0 = x_range > 0.0 ? 2.0 / x_range : 1.0;
    std::vector<double> lxs, lys;
    const double floor = 1e-12 * std::max({std::abs(c0), std::abs(a0), 1.0});
    for (std::size_t k = 0; k < m / 2; ++k) {
        const double dev = std::abs(ys[k] - c0);
        if (dev > floor) {
            lxs.push_back(xs[k]);
            lys.push_back(std::log(dev));
        }
    }
    if (lxs.size() >= 2) {
        const LinearFit lf = ols(lxs, lys);
        if (lf.ok && lf.slope < 0.0) b0 = -lf.slope;
    }
}

}  // namespace

ExponentialFit fit_exponential(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size())
        throw std::invalid_argument("fit_exponential: xs and ys sizes differ");
    if (xs.size() < 4) throw std::invalid_argument("fit_exponential: need >= 4 points");
    std::size_t distinct = 1;
    for (std::size_t k = 1; k < xs.size(); ++k) {
        if (xs[k] < xs[k - 1])
            throw std::invalid_argument("fit_exponential: xs must be sorted");
        if (xs[k] > xs[k - 1]) ++distinct;
    }
    if (distinct < 3)
        throw std::invalid_argument("fit_exponential: need >= 3 distinct x values");
    for (std::size_t k = 0; k < xs.size(); ++k)
        if (!std::isfinite(xs[k]) || !std::isfinite(ys[k]))
            throw std::invalid_argument("fit_exponential: non-finite input");

    ExponentialFit fit;
    const auto [y_min, y_max] = std::minmax_element(ys.begin(), ys.end());
    const double y_scale = std::max(std::abs(*y_min), std::abs(*y_max));
    if (*y_max - *y_min <= 1e-14 * std::max(y_scale, 1.0)) {
        // flat series: the asymptote is the mean and the rate is undefined
        fit.c = std::accumulate(ys.begin(), ys.end(), 0.0) / double(ys.size());
        fit.a = 0.0;
        fit.b = 0.0;
        fit.rss = residual_sum(xs, ys, fit.c, 0.0, 0.0);
        fit.converged = true;
        fit.b_identifiable = false;
        return fit;
    }

    double c0, a0, b0;
    initial_guess(xs, ys, c0, a0, b0);
    const double x_range = xs.back() - xs.front();

    // Damped Gauss-Newton from one starting point.
    auto descend = [&](double c, double a, double b) {
        ExponentialFit local;
        double rss = residual_sum(xs, ys, c, a, b);
        double lambda = 1e-3;
        const int max_iter = 300;
        bool done = false;
        int iter = 0;
        for (; iter < max_iter && !done; ++iter) {
            // normal equations J^T J delta = J^T r with Levenberg damping
            std::array<std::array<double, 3>, 3> jtj{};
            std::array<double, 3> jtr{};
            for (std::size_t k = 0; k < xs.size(); ++k) {
                const double e = std::exp(-b * xs[k]);
                const double r = ys[k] - c - a * e;
                const std::array<double, 3> grad{1.0, e, -a * xs[k] * e};
                for (int p = 0; p < 3; ++p) {
                    jtr[p] += grad[p] * r;
                    for (int q = p; q < 3; ++q) jtj[p][q] += grad[p] * grad[q];
                }
            }
            jtj[1][0] = jtj[0][1];
            jtj[2][0] = jtj[0][2];
            jtj[2][1] = jtj[1][2];

            bool stepped = false;
            while (lambda <= 1e14) {
                auto damped = jtj;
                for (int p = 0; p < 3; ++p)
                    damped[p][p] += lambda * std::max(jtj[p][p], 1e-300);
                std::array<double, 3> delta{};
                if (solve3(damped, jtr, delta)) {
                    const double c_new = c + delta[0];
                    const double a_new = a + delta[1];
                    const double b_new = b + delta[2];
                    if (b_new > 0.0 && std::isfinite(b_new)) {
                        const double rss_new = residual_sum(xs, ys, c_new, a_new, b_new);
                        if (rss_new <= rss) {
                            const double drop = rss - rss_new;
                            c = c_new;
                            a = a_new;
                            b = b_new;
                            rss = rss_new;
                            lambda = std::max(lambda * 0.3, 1e-12);
                            stepped = true;
                            if (drop <= 1e-12 * (rss + 1e-30)) done = true;
                            break;
                        }
                    }
                }
                lambda *= 10.0;
            }
            if (!stepped) break;  // no acceptable step at any damping
        }
        local.c = c;
        local.a = a;
        local.b = b;
        local.rss = rss;
        local.iterations = iter;
        local.converged = done;
        return local;
    };

    // Multi-start over decay rates: the RSS surface has a flat ridge at
    // b -> 0 where the model degenerates to a line, and a single start
    // can settle there. A true asymptote lies within the observed data
    // range once the series has plateaued, so in-range candidates win
    // over ridge candidates regardless of their RSS.
    std::vector<double> b_starts{b0};
    if (x_range > 0.0)
        for (const double scale : {0.25, 1.0, 4.0, 16.0, 64.0, 256.0})
            b_starts.push_back(scale / x_range);

    const double span = *y_max - *y_min;
    auto in_range = [&](const ExponentialFit& f) {
        return f.c >= *y_min - span && f.c <= *y_max + span;
    };
    bool have_best = false, best_in_range = false;
    for (const double b_start : b_starts) {
        if (!(b_start > 0.0) || !std::isfinite(b_start)) continue;
        const ExponentialFit candidate = descend(c0, a0, b_start);
        const bool candidate_in_range = in_range(candidate);
        const bool better =
            !have_best || (candidate_in_range && !best_in_range) ||
            (candidate_in_range == best_in_range && candidate.rss < fit.rss);
        if (better) {
            fit = candidate;
            have_best = true;
            best_in_range = candidate_in_range;
        }
    }

    if (std::abs(fit.a) <= 1e-12 * std::max(std::abs(fit.c), 1.0)) {
        fit.b_identifiable = false;
    } else if (fit.b * x_range < 1e-3) {
        // the fitted curve barely decays inside the observed window, so
        // the asymptote is an extrapolation of a near-line: unusable
        fit.b_identifiable = false;
    }
    if (!best_in_range) fit.converged = false;
    return fit;
}

double iterations_to_convergence(const ExponentialFit& fit, double rel_tol) {
    if (!(rel_tol > 0.0))
        throw std::invalid_argument("iterations_to_convergence: rel_tol must be > 0");
    if (!fit.converged)
        throw std::invalid_argument("iterations_to_convergence: fit did not converge");
    if (fit.c == 0.0)
        throw std::domain_error(
            "iterations_to_convergence: criterion is relative to c, and c = 0");
    const double threshold = rel_tol * std::abs(fit.c);
    if (std::abs(fit.a) <= threshold) return 0.0;
    if (!(fit.b > 0.0))
        throw std::invalid_argument("iterations_to_convergence: needs b > 0");
    return std::log(std::abs(fit.a) / threshold) / fit.b;
}

PairChainAnalysis pair_chain_analysis(double p, double delta) {
    if (!(p > 0.0) || !(p < 1.0))
        throw std::domain_error("pair_chain_analysis: p must be in (0, 1)");
    if (!(delta > 0.0) || delta > 1.0)
        throw std::domain_error("pair_chain_analysis: delta must be in (0, 1]");
    PairChainAnalysis out;
    out.p = p;
    out.delta = delta;
    out.alpha_add = std::min(1.0, p / (1.0 - p));
    out.alpha_remove = std::min(1.0, (1.0 - p) / p);
    out.stationary_p = out.alpha_add / (out.alpha_add + out.alpha_remove);
    out.spectral_gap = delta * (out.alpha_add + out.alpha_remove);
    out.relaxation_time = 1.0 / out.spectral_gap;
    out.lambda2 = 1.0 - out.spectral_gap;
    out.periodic = out.lambda2 <= -1.0 + 1e-12;
    return out;
}

double pair_selection_probability(std::size_t n, bool ordered) {
    if (n < 2) throw std::invalid_argument("pair_selection_probability: need n >= 2");
    const double pairs = double(n) * double(n - 1);
    return ordered ? 1.0 / pairs : 2.0 / pairs;
}

double simulate_pair_chain(double p, double delta, std::uint64_t steps,
                           std::mt19937_64& rng) {
    if (steps == 0) throw std::invalid_argument("simulate_pair_chain: steps must be >= 1");
    const PairChainAnalysis a = pair_chain_analysis(p, delta);
    bool link = uniform01(rng) < p;
    std::uint64_t occupancy = 0;
    for (std::uint64_t k = 0; k < steps; ++k) {
        if (delta >= 1.0 || uniform01(rng) < delta) {
            if (link) {
                if (uniform01(rng) < a.alpha_remove) link = false;
            } else {
                if (uniform01(rng) < a.alpha_add) link = true;
            }
        }
        occupancy += link ? 1 : 0;
    }
    return double(occupancy) / double(steps);
}

PowerLawFit fit_power_law(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw std::invalid_argument("fit_power_law: need >= 2 (x, y) pairs");
    std::vector<double> lx(xs.size()), ly(ys.size());
    for (std::size_t k = 0; k < xs.size(); ++k) {
        if (!(xs[k] > 0.0) || !(ys[k] > 0.0))
            throw std::invalid_argument("fit_power_law: values must be positive");
        lx[k] = std::log(xs[k]);
        ly[k] = std::log(ys[k]);
    }
    const LinearFit lf = ols(lx, ly);
    if (!lf.ok) throw std::invalid_argument("fit_power_law: degenerate x values");
    return PowerLawFit{lf.slope, lf.slope_stderr, lf.intercept, xs.size()};
}

namespace {

ScalingSeries build_series(const std::vector<std::size_t>& n_values,
                           const std::vector<ExponentialFit>& fits, double rel_tol) {
    ScalingSeries series;
    series.fits = fits;
    series.k_conv.assign(n_values.size(), nan64);
    std::vector<double> ns, ks;
    for (std::size_t i = 0; i < n_values.size(); ++i) {
        const auto& fit = fits[i];
        if (!fit.converged || !fit.b_identifiable || !(fit.b > 0.0) || fit.c == 0.0) {
            series.excluded.push_back(i);
            continue;
        }
        const double k = iterations_to_convergence(fit, rel_tol);
        series.k_conv[i] = k;
        if (k > 0.0) {
            ns.push_back(double(n_values[i]));
            ks.push_back(k);
        } else {
            series.excluded.push_back(i);
        }
    }
    if (ns.size() >= 2) series.power_law = fit_power_law(ns, ks);
    return series;
}

}  // namespace

ScalingResult scaling_study(const ScalingConfig& cfg) {
    if (cfg.n_values.size() < 3)
        throw std::invalid_argument("scaling_study: need >= 3 n values");
    for (const std::size_t n : cfg.n_values)
        if (n < 4) throw std::invalid_argument("scaling_study: n values must be >= 4");
    if (cfg.chains_per_n == 0)
        throw std::invalid_argument("scaling_study: chains_per_n must be >= 1");
    if (!(cfg.iterations_factor > 0.0))
        throw std::invalid_argument("scaling_study: iterations_factor must be > 0");
    if (cfg.records_per_chain < 8)
        throw std::invalid_argument("scaling_study: records_per_chain must be >= 8");

    ScalingResult result;
    result.n_values = cfg.n_values;

    auto gt_rng = make_rng(cfg.seed, stream::line_picking);
    result.gtilde = laplace_line_picking(cfg.s, cfg.gtilde_samples, gt_rng).value;

    result.q_values.reserve(cfg.n_values.size());
    for (const std::size_t n : cfg.n_values) {
        const double q = cfg.target_degree / (double(n - 1) * result.gtilde);
        if (!(q > 0.0) || q > 1.0)
            throw std::invalid_argument(
                "scaling_study: target degree infeasible at n = " + std::to_string(n));
        result.q_values.push_back(q);
    }

    const std::size_t n_count = cfg.n_values.size();
    std::vector<ChainTrace> traces(n_count * cfg.chains_per_n);
    parallel_for(traces.size(), cfg.jobs, [&](std::size_t task) {
        const std::size_t n_idx = task / cfg.chains_per_n;
        const std::size_t n = cfg.n_values[n_idx];
        const EdgeModel model = EdgeModel::waxman(result.q_values[n_idx], cfg.s);
        ChainConfig chain_cfg;
        chain_cfg.iterations =
            static_cast<std::uint64_t>(cfg.iterations_factor * double(n) * double(n));
        chain_cfg.seed = cfg.seed;
        chain_cfg.stat_cadence =
            std::max<std::uint64_t>(1, chain_cfg.iterations / cfg.records_per_chain);
        traces[task] = run_chain(model, n, chain_cfg, task + 1).trace;
    });

    // Pool the recorded values across chains per n; chains share one
    // record grid, so grid-major order keeps xs sorted.
    std::vector<ExponentialFit> degree_fits(n_count), length_fits(n_count);
    for (std::size_t n_idx = 0; n_idx < n_count; ++n_idx) {
        const std::size_t first = n_idx * cfg.chains_per_n;
        const std::size_t rows = traces[first].rows.size();
        std::vector<double> xs, ys_degree, ys_length;
        xs.reserve(rows * cfg.chains_per_n);
        ys_degree.reserve(xs.capacity());
        ys_length.reserve(xs.capacity());
        for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t c = 0; c < cfg.chains_per_n; ++c) {
                const TraceRow& row = traces[first + c].rows[r];
                xs.push_back(double(row.iteration));
                ys_degree.push_back(row.stats.avg_degree);
                ys_length.push_back(row.stats.avg_edge_length);
            }
        }
        degree_fits[n_idx] = fit_exponential(xs, ys_degree);
        length_fits[n_idx] = fit_exponential(xs, ys_length);
    }

    result.degree = build_series(cfg.n_values, degree_fits, cfg.rel_tol);
    result.edge_length = build_series(cfg.n_values, length_fits, cfg.rel_tol);
    return result;
}

std::vector<SweepPoint> connectedness_sweep(std::size_t n,
                                            std::span<const std::pair<double, double>> grid,
                                            std::size_t samples, std::uint64_t seed,
                                            std::size_t jobs) {
    if (samples == 0) throw std::invalid_argument("connectedness_sweep: samples >= 1");
    if (n < 2) throw std::invalid_argument("connectedness_sweep: need n >= 2");

    std::vector<SweepPoint> table(grid.size());
    parallel_for(grid.size(), jobs, [&](std::size_t idx) {
        const auto [q, s] = grid[idx];
        const EdgeModel model = EdgeModel::waxman(q, s);
        auto rng = make_rng(seed, stream::sweep, idx);
        std::size_t connected = 0;
        for (std::size_t k = 0; k < samples; ++k) {
            SpatialGraph g = generate_graph(model, sample_positions(n, rng), rng);
            if (g.is_connected()) ++connected;
        }
        SweepPoint& point = table[idx];
        point.q = q;
        point.s = s;
        point.samples = samples;
        point.connected = connected;
        point.proportion = double(connected) / double(samples);
        point.std_error =
            std::sqrt(point.proportion * (1.0 - point.proportion) / double(samples));
    });
    return table;
}

}  // namespace congen
