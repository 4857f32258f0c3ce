// Acceptance suite: one test case per criterion, each printing a
// PASS/FAIL line with the measured numbers.
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <vector>

#include "congen/diagnostics.hpp"
#include "congen/oracle.hpp"
#include "congen/rng.hpp"
#include "congen/sampler.hpp"
#include "test_support.hpp"

using namespace congen;

namespace {

struct Verdict {
    bool pass = true;
    void require(bool ok) { pass = pass && ok; }
};

void print_verdict(int index, const char* name, bool pass) {
    std::printf("ACCEPTANCE %d [%s]: %s\n", index, name, pass ? "PASS" : "FAIL");
    std::fflush(stdout);
}

struct SamplerComparison {
    double tv_mcmc = 0.0;
    double tv_rejection = 0.0;
    TwoSampleTest two_sample;
    double p_connected = 0.0;
};

SamplerComparison compare_samplers(const std::vector<Point>& positions,
                                   const EdgeModel& m, std::size_t samples,
                                   std::uint64_t thinning, std::uint64_t seed) {
    const std::size_t n = positions.size();
    const ConditionalEnumeration exact = enumerate_conditional(positions, m);

    ChainConfig cfg;
    cfg.seed = seed;
    cfg.burn_in = 10'000;
    cfg.thinning = thinning;
    std::vector<GraphKey> mcmc_keys;
    mcmc_keys.reserve(samples);
    sample_ensemble_at(m, positions, cfg, samples,
                       [&](const SpatialGraph& g, std::uint64_t) {
                           mcmc_keys.push_back(graph_key(g));
                       });

    auto rng = make_rng(seed, stream::rejection);
    std::vector<GraphKey> rejection_keys;
    rejection_keys.reserve(samples);
    for (std::size_t k = 0; k < samples; ++k)
        rejection_keys.push_back(
            graph_key(rejection_sample(m, positions, rng, 1'000'000).graph));

    const auto mcmc = empirical_distribution_from_keys(n, mcmc_keys);
    const auto rejection = empirical_distribution_from_keys(n, rejection_keys);
    SamplerComparison out;
    out.tv_mcmc = total_variation(mcmc, exact.distribution);
    out.tv_rejection = total_variation(rejection, exact.distribution);
    out.two_sample = two_sample_chi_square(mcmc, rejection);
    out.p_connected = exact.p_connected;
    return out;
}

}  // namespace

TEST_CASE("acceptance 1: distributional correctness on the oracle fixtures") {
    const auto start = std::chrono::steady_clock::now();
    const EdgeModel m = EdgeModel::waxman(0.6, 1.0);
    const std::size_t samples = 100'000;
    Verdict verdict;

    const SamplerComparison four =
        compare_samplers(testsupport::fixture4(), m, samples, 30, 41);
    std::printf("  n=4: TV(mcmc,exact)=%.5f TV(rej,exact)=%.5f chi2=%.1f/%.1f (dof %zu)\n",
                four.tv_mcmc, four.tv_rejection, four.two_sample.statistic,
                four.two_sample.critical_999, four.two_sample.dof);
    CHECK(four.tv_mcmc <= 0.02);
    CHECK(four.two_sample.indistinguishable);
    verdict.require(four.tv_mcmc <= 0.02 && four.two_sample.indistinguishable);

    const SamplerComparison five =
        compare_samplers(testsupport::fixture5(), m, samples, 50, 51);
    std::printf("  n=5: TV(mcmc,exact)=%.5f TV(rej,exact)=%.5f chi2=%.1f/%.1f (dof %zu)\n",
                five.tv_mcmc, five.tv_rejection, five.two_sample.statistic,
                five.two_sample.critical_999, five.two_sample.dof);
    if (five.tv_mcmc > 0.02)
        std::printf(
            "  note: at n=5 the exact iid rejection sampler itself measures TV=%.5f\n"
            "  against the enumeration at this sample size (728-graph support), so the\n"
            "  0.02 bound is below the attainable Monte Carlo noise floor here; the\n"
            "  samplers remain statistically indistinguishable.\n",
            five.tv_rejection);
    CHECK(five.tv_mcmc <= 0.02);  // below the n=5 noise floor at 1e5 samples
    CHECK(five.two_sample.indistinguishable);
    verdict.require(five.tv_mcmc <= 0.02 && five.two_sample.indistinguishable);

    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("  runtime %.1f s (limit 120)\n", seconds);
    CHECK(seconds <= 120.0);
    verdict.require(seconds <= 120.0);
    print_verdict(1, "distributional-correctness", verdict.pass);
}

TEST_CASE("acceptance 2: exact detailed balance on the 4-node fixture") {
    const auto positions = testsupport::fixture4();
    const EdgeModel m = EdgeModel::waxman(0.6, 1.0);
    const auto& pi = enumerate_conditional(positions, m).distribution.mass;
    const double select = 1.0 / 6.0;  // uniform unordered pair proposal

    double worst = 0.0;
    std::size_t pairs_checked = 0;
    for (const auto& [key, mass] : pi) {
        for (NodeId i = 0; i < 4; ++i) {
            for (NodeId j = i + 1; j < 4; ++j) {
                const auto bit = GraphKey{1} << pair_bit_index(4, i, j);
                const auto other = pi.find(key ^ bit);
                if (other == pi.end()) continue;
                const double d = distance(positions[i], positions[j]);
                const bool adding = !(key & bit);
                const double forward =
                    mass * select *
                    std::min(1.0, adding ? m.ratio_add(d) : m.ratio_remove(d));
                const double backward =
                    other->second * select *
                    std::min(1.0, adding ? m.ratio_remove(d) : m.ratio_add(d));
                worst = std::max(worst, std::abs(forward - backward));
                ++pairs_checked;
            }
        }
    }
    std::printf("  %zu adjacent transitions, worst |pi T - pi' T'| = %.3e\n",
                pairs_checked, worst);
    CHECK(pairs_checked > 0);
    CHECK(worst <= 1e-12);
    print_verdict(2, "detailed-balance", pairs_checked > 0 && worst <= 1e-12);
}

TEST_CASE("acceptance 3: reduced two-state chain occupancy equals p") {
    const std::uint64_t steps = 1'000'000;
    Verdict verdict;
    for (const double p : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        auto rng = make_rng(300 + std::uint64_t(p * 10), stream::chain);
        const double occupancy = simulate_pair_chain(p, 1.0, steps, rng);
        const double se = std::sqrt(p * (1.0 - p) / double(steps));
        const bool ok = std::abs(occupancy - p) <= 3.0 * se;
        std::printf("  p=%.1f occupancy=%.5f (|diff|=%.5f, 3se=%.5f)\n", p, occupancy,
                    std::abs(occupancy - p), 3.0 * se);
        CHECK(ok);
        verdict.require(ok);
    }
    print_verdict(3, "single-link-stationarity", verdict.pass);
}

TEST_CASE("acceptance 4: connectivity invariant over recorded and emitted graphs") {
    Verdict verdict;
    std::size_t checked = 0, violations = 0;

    const EdgeModel sparse = EdgeModel::waxman(0.03, 3.0);
    ChainConfig cfg;
    cfg.iterations = 200'000;
    cfg.seed = 404;
    cfg.stat_cadence = 1'000;
    const ChainResult run = run_chain(sparse, 100, cfg);
    for (const TraceRow& row : run.trace.rows) {
        ++checked;
        if (!row.connected) ++violations;
    }
    if (!run.graph.is_connected()) ++violations;

    ChainConfig ens_cfg;
    ens_cfg.seed = 405;
    ens_cfg.burn_in = 20'000;
    ens_cfg.thinning = 2'000;
    sample_ensemble(sparse, 60, ens_cfg, 200, [&](const SpatialGraph& g, std::uint64_t) {
        ++checked;
        if (!g.is_connected()) ++violations;
    });

    const auto oracle_positions = testsupport::fixture5();
    const EdgeModel m = EdgeModel::waxman(0.6, 1.0);
    ChainConfig tiny_cfg;
    tiny_cfg.seed = 406;
    tiny_cfg.burn_in = 1'000;
    tiny_cfg.thinning = 25;
    sample_ensemble_at(m, oracle_positions, tiny_cfg, 5'000,
                       [&](const SpatialGraph& g, std::uint64_t) {
                           ++checked;
                           if (!g.is_connected()) ++violations;
                       });

    std::printf("  %zu recorded/emitted graphs checked by full BFS, %zu violations\n",
                checked, violations);
    CHECK(checked > 5'400);
    CHECK(violations == 0);
    verdict.require(checked > 5'400 && violations == 0);
    print_verdict(4, "connectivity-invariant", verdict.pass);
}

TEST_CASE("acceptance 5: mixing scales like n^2 and edge length lags degree") {
    const auto start = std::chrono::steady_clock::now();
    ScalingConfig cfg;
    cfg.n_values = {50, 100, 200, 400};
    cfg.s = 4.0;
    cfg.target_degree = 1.6;  // sparse, (n-1) q Gtilde held fixed
    cfg.chains_per_n = 20;
    cfg.iterations_factor = 10.0;
    cfg.records_per_chain = 1'000;
    cfg.seed = 1;
    const ScalingResult result = scaling_study(cfg);
    Verdict verdict;

    CHECK(result.degree.excluded.empty());
    CHECK(result.edge_length.excluded.empty());
    verdict.require(result.degree.excluded.empty() &&
                    result.edge_length.excluded.empty());

    for (std::size_t i = 0; i < result.n_values.size(); ++i) {
        const double k_deg = result.degree.k_conv[i];
        const double k_len = result.edge_length.k_conv[i];
        std::printf("  n=%zu: k_conv degree=%.0f edge_length=%.0f\n", result.n_values[i],
                    k_deg, k_len);
        CHECK(k_len > k_deg);  // edge length converges more slowly
        verdict.require(k_len > k_deg);
    }

    const double exponent = result.degree.power_law.exponent;
    std::printf("  degree exponent %.3f +- %.3f, edge-length exponent %.3f +- %.3f\n",
                exponent, result.degree.power_law.exponent_stderr,
                result.edge_length.power_law.exponent,
                result.edge_length.power_law.exponent_stderr);
    CHECK(exponent >= 1.7);
    CHECK(exponent <= 2.3);
    verdict.require(exponent >= 1.7 && exponent <= 2.3);

    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("  runtime %.1f s (limit 1800)\n", seconds);
    CHECK(seconds <= 1800.0);
    verdict.require(seconds <= 1800.0);
    print_verdict(5, "mixing-scaling", verdict.pass);
}

TEST_CASE("acceptance 6: per-iteration cost is flat in n (sparse regime)") {
    const double s = 2.0, target = 4.0;
    auto grng = make_rng(600, stream::line_picking);
    const double gtilde = laplace_line_picking(s, 500'000, grng).value;

    const std::vector<std::size_t> sizes{200, 400, 800};
    std::vector<double> per_iter;
    for (const std::size_t n : sizes) {
        const EdgeModel m = EdgeModel::waxman(target / (double(n - 1) * gtilde), s);
        ChainConfig cfg;
        cfg.iterations = 2'000'000;
        cfg.stat_cadence = cfg.iterations;  // record only the endpoints
        cfg.seed = 17;
        double best = std::numeric_limits<double>::infinity();
        for (int rep = 0; rep < 3; ++rep)
            best = std::min(best, run_chain(m, n, cfg, rep).trace.wall_seconds);
        per_iter.push_back(best / double(cfg.iterations));
        std::printf("  n=%zu: %.0f ns/iteration\n", n, per_iter.back() * 1e9);
    }

    const double ratio = per_iter[2] / per_iter[0];
    const std::vector<double> ns{200.0, 400.0, 800.0};
    const double slope = fit_power_law(ns, per_iter).exponent;
    std::printf("  t(800)/t(200) = %.3f (< 2), log-log slope = %.3f (< 0.5)\n", ratio,
                slope);
    CHECK(ratio < 2.0);
    CHECK(slope < 0.5);
    print_verdict(6, "per-iteration-complexity", ratio < 2.0 && slope < 0.5);
}

TEST_CASE("acceptance 7: expected degree matches (n-1) q Gtilde(s)") {
    const std::size_t n = 500;
    const int graphs = 100;
    Verdict verdict;
    int setting = 0;
    for (const auto& [q, s] : std::vector<std::pair<double, double>>{
             {0.05, 0.0}, {0.03, 2.0}, {0.02, 5.0}}) {
        auto gt_rng = make_rng(700 + setting, stream::line_picking);
        const LinePickingEstimate gtilde = laplace_line_picking(s, 1'000'000, gt_rng);

        // the Monte Carlo transform itself is held to the quadrature oracle
        const double quad = testsupport::gtilde_quadrature(s);
        const bool gt_ok =
            std::abs(gtilde.value - quad) <= 3.0 * gtilde.std_error + 1e-12;
        CHECK(gt_ok);

        const EdgeModel m = EdgeModel::waxman(q, s);
        auto rng = make_rng(710 + setting, stream::initial_graph);
        double mean = 0.0, mean_sq = 0.0;
        for (int k = 0; k < graphs; ++k) {
            const SpatialGraph g = generate_graph(m, sample_positions(n, rng), rng);
            const double degree = 2.0 * double(g.edge_count()) / double(n);
            mean += degree;
            mean_sq += degree * degree;
        }
        mean /= graphs;
        const double var = (mean_sq / graphs - mean * mean) * graphs / (graphs - 1);
        const double se_mean = std::sqrt(var / graphs);
        const double expected = double(n - 1) * q * gtilde.value;
        const double se_expected = double(n - 1) * q * gtilde.std_error;
        const double tolerance =
            3.0 * std::sqrt(se_mean * se_mean + se_expected * se_expected);
        const bool ok = std::abs(mean - expected) <= tolerance;
        std::printf("  q=%.2f s=%.0f: mean degree %.3f vs (n-1)qG=%.3f (tol %.3f) %s\n",
                    q, s, mean, expected, tolerance, ok ? "ok" : "off");
        CHECK(ok);
        verdict.require(gt_ok && ok);
        ++setting;
    }
    print_verdict(7, "expected-degree", verdict.pass);
}

TEST_CASE("acceptance 8: convergence-fit recovery") {
    Verdict verdict;

    // noiseless closed form to 1e-9
    std::vector<double> xs(201), ys(201);
    for (int k = 0; k <= 200; ++k) {
        xs[k] = 25.0 * k;
        ys[k] = 3.0 + 2.0 * std::exp(-0.001 * xs[k]);
    }
    const ExponentialFit clean = fit_exponential(xs, ys);
    const double k_closed = std::log(2.0 / (0.001 * 3.0)) / 0.001;
    const double k_err = std::abs(iterations_to_convergence(clean) - k_closed);
    std::printf("  noiseless: |k_conv - closed form| = %.2e\n", k_err);
    CHECK(clean.converged);
    CHECK(k_err <= 1e-9);
    verdict.require(clean.converged && k_err <= 1e-9);

    // noisy: sigma = 5% of |A|, C recovered within 1% in all 100 trials
    const double c_true = 3.0, a_true = 2.0, b_true = 0.002, sigma = 0.05 * a_true;
    auto rng = make_rng(800, stream::chain);
    std::vector<double> noisy_xs(2000), noisy_ys(2000);
    for (int k = 0; k < 2000; ++k) noisy_xs[k] = 1.5 * k;
    int recovered = 0;
    for (int trial = 0; trial < 100; ++trial) {
        for (int k = 0; k < 2000; ++k) {
            const double u1 = 1.0 - uniform01(rng);
            const double u2 = uniform01(rng);
            const double gauss =
                std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
            noisy_ys[k] =
                c_true + a_true * std::exp(-b_true * noisy_xs[k]) + sigma * gauss;
        }
        const ExponentialFit fit = fit_exponential(noisy_xs, noisy_ys);
        if (fit.converged && std::abs(fit.c - c_true) <= 0.01 * c_true) ++recovered;
    }
    std::printf("  noisy: C within 1%% in %d/100 trials\n", recovered);
    CHECK(recovered == 100);
    verdict.require(recovered == 100);
    print_verdict(8, "convergence-fit-recovery", verdict.pass);
}

TEST_CASE("acceptance 9: connectedness falls with s at fixed expected degree") {
    const std::size_t n = 200, samples = 500;
    const double target = 7.0;
    std::vector<std::pair<double, double>> grid;
    for (std::size_t k = 0; k < 5; ++k) {
        const double s = double(k);
        auto rng = make_rng(900, stream::line_picking, k);
        const double gtilde = laplace_line_picking(s, 500'000, rng).value;
        grid.emplace_back(target / (double(n - 1) * gtilde), s);
    }
    const auto table = connectedness_sweep(n, grid, samples, 901, 0);

    // Cochran-Armitage one-sided trend test at the 5% level
    double total = 0.0;
    for (const auto& point : table) total += double(point.connected);
    const double p_bar = total / double(table.size() * samples);
    double numerator = 0.0, score_ss = 0.0;
    const double s_bar = 2.0;
    for (const auto& point : table) {
        numerator += point.s * (double(point.connected) - double(samples) * p_bar);
        score_ss += (point.s - s_bar) * (point.s - s_bar);
        std::printf("  s=%.0f q=%.4f proportion=%.3f (se %.3f)\n", point.s, point.q,
                    point.proportion, point.std_error);
    }
    const double z =
        numerator / std::sqrt(p_bar * (1.0 - p_bar) * double(samples) * score_ss);
    std::printf("  trend z = %.2f (reject no-trend if z < -1.645)\n", z);
    CHECK(z < -1.645);
    print_verdict(9, "connectedness-sweep-trend", z < -1.645);
}
