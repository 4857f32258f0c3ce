#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cli_util.hpp"
#include "congen/diagnostics.hpp"
#include "congen/io.hpp"
#include "congen/oracle.hpp"
#include "congen/rng.hpp"
#include "congen/sampler.hpp"
#include "congen/version.hpp"

namespace {

using namespace congen;
using cli::ModelOptions;
using cli::ProgressMeter;
using cli::RunContext;
using cli::ValidationFailed;
using nlohmann::json;

json json_number(double value) {
    if (!std::isfinite(value)) return nullptr;
    return value;
}

struct OutputFlags {
    std::string out_root;
    std::string run_dir;
};

void add_output_flags(CLI::App* cmd, OutputFlags& out) {
    cmd->add_option("--out", out.out_root,
                    "Output root directory (default: $CONGEN_OUTPUT_ROOT or .)");
    cmd->add_option("--run-dir", out.run_dir,
                    "Exact run directory (must not exist yet)");
}

struct ModelFlags {
    ModelOptions options;
    std::string config_path;
    CLI::Option* model_opt = nullptr;
    CLI::Option* q_opt = nullptr;
    CLI::Option* s_opt = nullptr;
    CLI::Option* n_opt = nullptr;
    CLI::Option* seed_opt = nullptr;
};

void add_model_flags(CLI::App* cmd, ModelFlags& m) {
    m.model_opt = cmd->add_option("--model", m.options.model, "Edge model: waxman or ger");
    m.q_opt = cmd->add_option("--q", m.options.q, "Edge density parameter, in (0, 1]");
    m.s_opt = cmd->add_option("--s", m.options.s, "Distance decay rate, >= 0");
    m.n_opt = cmd->add_option("--n", m.options.n, "Node count");
    m.seed_opt = cmd->add_option("--seed", m.options.seed, "Master RNG seed");
    cmd->add_option("--config", m.config_path,
                    "JSON config file; explicit flags override its fields");
}

ModelOptions resolve_model(const ModelFlags& m) {
    ModelOptions options = m.options;
    options.resolve(m.config_path, m.model_opt->count() > 0, m.q_opt->count() > 0,
                    m.s_opt->count() > 0, m.n_opt->count() > 0,
                    m.seed_opt->count() > 0);
    return options;
}

// ---------------------------------------------------------------- generate

struct GenerateOptions {
    ModelFlags model;
    OutputFlags out;
    std::uint64_t count = 1;
    std::uint64_t burn_in = 0;
    std::uint64_t thinning = 1;
    std::string from_diagnose;
    CLI::Option* burn_opt = nullptr;
    CLI::Option* thin_opt = nullptr;
};

void run_generate(GenerateOptions& opt) {
    ModelOptions mo = resolve_model(opt.model);
    std::uint64_t burn_in = opt.burn_in;
    std::uint64_t thinning = opt.thinning;

    if (!opt.from_diagnose.empty()) {
        std::ifstream in(opt.from_diagnose);
        if (!in)
            throw std::runtime_error("cannot open diagnose report: " + opt.from_diagnose);
        json report;
        in >> report;
        if (opt.burn_opt->count() == 0) {
            if (!report.contains("recommended_burn_in") ||
                report["recommended_burn_in"].is_null())
                throw std::runtime_error(
                    "diagnose report has no usable recommended_burn_in");
            burn_in = report["recommended_burn_in"].get<std::uint64_t>();
        }
        if (opt.thin_opt->count() == 0 && report.contains("recommended_thinning") &&
            !report["recommended_thinning"].is_null())
            thinning = report["recommended_thinning"].get<std::uint64_t>();
    } else if (opt.burn_opt->count() == 0) {
        throw std::invalid_argument(
            "field 'burn_in' missing: pass --burn-in or --from-diagnose");
    }
    if (thinning < 1) throw std::invalid_argument("field 'thinning' must be >= 1");
    if (opt.count < 1) throw std::invalid_argument("field 'count' must be >= 1");

    RunContext run("generate", mo.seed, opt.out.out_root, opt.out.run_dir);
    const EdgeModel model = EdgeModel::waxman(mo.q, mo.s);
    ChainConfig cfg;
    cfg.seed = mo.seed;
    cfg.burn_in = burn_in;
    cfg.thinning = thinning;
    run.phase_done("init");

    int width = 3;
    for (std::uint64_t c = opt.count; c > 999; c /= 10) ++width;

    ProgressMeter meter("generate");
    std::size_t emitted = 0;
    sample_ensemble(model, mo.n, cfg, opt.count,
                    [&](const SpatialGraph& g, std::uint64_t) {
                        if (emitted == 0) {
                            write_positions_csv(run.file("positions.csv"), g.positions());
                            run.note_output("positions.csv");
                        }
                        char name[48];
                        std::snprintf(name, sizeof name, "graph_%0*zu.edges", width,
                                      emitted);
                        write_edge_list(run.file(name), g);
                        run.note_output(name);
                        ++emitted;
                        meter.update(emitted, opt.count);
                    });
    meter.finish();
    run.phase_done("chain");

    json config = mo.to_json();
    config["count"] = opt.count;
    config["burn_in"] = burn_in;
    config["thinning"] = thinning;
    run.write_manifest(config);
    std::cout << run.dir().string() << '\n';
}

// ------------------------------------------------------------------- chain

struct ChainOptions {
    ModelFlags model;
    OutputFlags out;
    std::uint64_t iterations = 0;
    std::uint64_t stat_cadence = 0;  // 0: iterations/100
    bool record_path_length = false;
};

void run_chain_cmd(ChainOptions& opt) {
    ModelOptions mo = resolve_model(opt.model);
    ChainConfig cfg;
    cfg.iterations = opt.iterations;
    cfg.seed = mo.seed;
    cfg.stat_cadence =
        opt.stat_cadence > 0 ? opt.stat_cadence : std::max<std::uint64_t>(1, opt.iterations / 100);
    cfg.record_path_length = opt.record_path_length;
    cfg.validate();

    RunContext run("chain", mo.seed, opt.out.out_root, opt.out.run_dir);
    const EdgeModel model = EdgeModel::waxman(mo.q, mo.s);
    run.phase_done("init");

    ProgressMeter meter("chain");
    ChainResult result =
        run_chain(model, mo.n, cfg, 0,
                  [&](std::uint64_t done, std::uint64_t total) { meter.update(done, total); });
    meter.finish();
    run.phase_done("chain");

    write_trace_csv(run.file("trace.csv"), result.trace);
    run.note_output("trace.csv");
    write_edge_list(run.file("final.edges"), result.graph);
    run.note_output("final.edges");
    write_positions_csv(run.file("positions.csv"), result.graph.positions());
    run.note_output("positions.csv");
    run.phase_done("io");

    json config = mo.to_json();
    config["iterations"] = cfg.iterations;
    config["stat_cadence"] = cfg.stat_cadence;
    config["record_path_length"] = cfg.record_path_length;
    run.write_manifest(config);
    std::cout << run.dir().string() << '\n';
}

// ---------------------------------------------------------------- diagnose

struct DiagnoseOptions {
    std::vector<std::string> traces;
    double rel_tol = 1e-3;
    OutputFlags out;
};

void run_diagnose(DiagnoseOptions& opt) {
    json report;
    report["tool"] = "congen";
    report["version"] = version;
    report["rel_tol"] = opt.rel_tol;
    report["inputs"] = opt.traces;
    std::vector<std::string> warnings;

    std::vector<TraceTable> tables;
    tables.reserve(opt.traces.size());
    for (const auto& path : opt.traces) tables.push_back(read_trace_csv(path));

    const std::vector<std::string> stats = {"avg_degree", "avg_edge_length",
                                            "avg_path_length"};
    json stat_reports = json::object();
    double max_k_conv = -1.0;

    for (const auto& stat : stats) {
        // pool (iteration, value) points across every file carrying the column
        std::vector<std::pair<double, double>> points;
        for (const auto& table : tables) {
            const auto it = table.find(stat);
            if (it == table.end()) continue;
            const auto& iters = table.at("iteration");
            for (std::size_t k = 0; k < it->second.size(); ++k)
                points.emplace_back(iters[k], it->second[k]);
        }
        if (points.empty()) continue;
        std::stable_sort(points.begin(), points.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });

        json entry;
        entry["points"] = points.size();
        if (points.size() < 4) {
            warnings.push_back(stat + ": fewer than 4 points, cannot fit");
            entry["converged"] = false;
            stat_reports[stat] = entry;
            continue;
        }
        std::vector<double> xs(points.size()), ys(points.size());
        for (std::size_t k = 0; k < points.size(); ++k) {
            xs[k] = points[k].first;
            ys[k] = points[k].second;
        }
        const ExponentialFit fit = fit_exponential(xs, ys);
        entry["c"] = json_number(fit.c);
        entry["a"] = json_number(fit.a);
        entry["b"] = json_number(fit.b);
        entry["rss"] = json_number(fit.rss);
        entry["converged"] = fit.converged;
        entry["b_identifiable"] = fit.b_identifiable;
        entry["k_conv"] = nullptr;
        if (!fit.converged) {
            warnings.push_back(stat + ": fit did not converge");
        } else if (!fit.b_identifiable) {
            warnings.push_back(stat + ": decay rate unidentifiable (flat series?)");
        } else if (fit.c == 0.0) {
            warnings.push_back(stat + ": asymptote is 0, relative criterion undefined");
        } else {
            const double k_conv = iterations_to_convergence(fit, opt.rel_tol);
            entry["k_conv"] = json_number(k_conv);
            max_k_conv = std::max(max_k_conv, k_conv);
            if (k_conv > xs.back())
                warnings.push_back(stat + ": k_conv " + std::to_string(k_conv) +
                                   " lies beyond the recorded window (" +
                                   std::to_string(xs.back()) +
                                   "); extend the chain or pool more chains");
        }
        stat_reports[stat] = entry;
    }

    report["statistics"] = stat_reports;
    if (max_k_conv >= 0.0) {
        const auto rec = static_cast<std::uint64_t>(std::ceil(max_k_conv));
        report["recommended_burn_in"] = rec;
        report["recommended_thinning"] = rec;  // decorrelation needs the same order
    } else {
        report["recommended_burn_in"] = nullptr;
        report["recommended_thinning"] = nullptr;
    }
    report["warnings"] = warnings;
    for (const auto& w : warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());

    RunContext run("diagnose", 0, opt.out.out_root, opt.out.run_dir);
    std::ofstream out(run.file("report.json"));
    if (!out) throw std::runtime_error("cannot write report.json");
    out << report.dump(2) << '\n';
    run.note_output("report.json");
    run.phase_done("fit");
    run.write_manifest({{"rel_tol", opt.rel_tol}, {"inputs", opt.traces}});
    std::cout << report.dump(2) << '\n';
}

// ------------------------------------------------------------------- sweep

struct SweepOptions {
    std::uint64_t n = 0;
    std::uint64_t seed = 0;
    std::size_t samples = 200;
    std::string q_grid;
    std::string s_grid;
    double target_degree = 0.0;
    std::size_t gtilde_samples = 1'000'000;
    std::size_t jobs = 0;
    OutputFlags out;
};

void run_sweep(SweepOptions& opt) {
    if (opt.n < 2) throw std::invalid_argument("field 'n' must be >= 2");
    if (opt.samples < 1) throw std::invalid_argument("field 'samples' must be >= 1");

    std::vector<std::pair<double, double>> grid;
    if (opt.target_degree > 0.0) {
        if (opt.s_grid.empty())
            throw std::invalid_argument("--target-degree needs --s-grid");
        const auto s_values = cli::parse_double_list(opt.s_grid, "--s-grid");
        for (std::size_t k = 0; k < s_values.size(); ++k) {
            auto rng = make_rng(opt.seed, stream::line_picking, k);
            const double gt = laplace_line_picking(s_values[k], opt.gtilde_samples, rng).value;
            const double q = opt.target_degree / (double(opt.n - 1) * gt);
            if (q <= 0.0 || q > 1.0)
                throw std::invalid_argument("target degree infeasible at s=" +
                                            std::to_string(s_values[k]));
            grid.emplace_back(q, s_values[k]);
        }
    } else {
        if (opt.q_grid.empty() || opt.s_grid.empty())
            throw std::invalid_argument("sweep needs --q-grid and --s-grid (or --target-degree)");
        for (const double q : cli::parse_double_list(opt.q_grid, "--q-grid"))
            for (const double s : cli::parse_double_list(opt.s_grid, "--s-grid"))
                grid.emplace_back(q, s);
    }

    RunContext run("sweep", opt.seed, opt.out.out_root, opt.out.run_dir);
    std::fprintf(stderr, "sweep: %zu grid points x %zu samples at n=%llu\n", grid.size(),
                 opt.samples, static_cast<unsigned long long>(opt.n));
    const auto table = connectedness_sweep(opt.n, grid, opt.samples, opt.seed, opt.jobs);
    run.phase_done("sweep");

    std::ofstream csv(run.file("sweep.csv"));
    if (!csv) throw std::runtime_error("cannot write sweep.csv");
    csv << "q,s,samples,connected,proportion,std_error\n";
    for (const auto& point : table)
        csv << format_double(point.q) << ',' << format_double(point.s) << ','
            << point.samples << ',' << point.connected << ','
            << format_double(point.proportion) << ',' << format_double(point.std_error)
            << '\n';
    run.note_output("sweep.csv");
    run.phase_done("io");

    json config = {{"n", opt.n},
                   {"seed", opt.seed},
                   {"samples", opt.samples},
                   {"target_degree", opt.target_degree},
                   {"jobs", opt.jobs}};
    run.write_manifest(config);
    std::cout << run.dir().string() << '\n';
}

// ----------------------------------------------------------------- scaling

struct ScalingOptions {
    std::string n_list = "50,100,200,400";
    std::size_t chains = 20;
    double s = 2.0;
    double target_degree = 6.0;
    double iterations_factor = 10.0;
    std::size_t records = 400;
    double rel_tol = 1e-3;
    std::uint64_t seed = 0;
    std::size_t jobs = 0;
    std::string synthetic;  // csv of n,k_conv: regression only
    OutputFlags out;
};

json series_to_json(const ScalingSeries& series, const std::vector<std::size_t>& ns) {
    json fits = json::array();
    for (std::size_t i = 0; i < ns.size(); ++i) {
        const auto& fit = series.fits[i];
        fits.push_back({{"n", ns[i]},
                        {"c", json_number(fit.c)},
                        {"a", json_number(fit.a)},
                        {"b", json_number(fit.b)},
                        {"rss", json_number(fit.rss)},
                        {"converged", fit.converged},
                        {"b_identifiable", fit.b_identifiable},
                        {"k_conv", json_number(series.k_conv[i])}});
    }
    return {{"fits", fits},
            {"excluded", series.excluded},
            {"exponent", json_number(series.power_law.exponent)},
            {"exponent_stderr", json_number(series.power_law.exponent_stderr)},
            {"intercept", json_number(series.power_law.intercept)},
            {"regression_points", series.power_law.points}};
}

void run_scaling(ScalingOptions& opt) {
    if (!opt.synthetic.empty()) {
        // regression-only hook: fit the power law to externally supplied
        // (n, k_conv) points
        std::ifstream in(opt.synthetic);
        if (!in) throw std::runtime_error("cannot open " + opt.synthetic);
        std::string line;
        if (!std::getline(in, line) || line.rfind("n,k_conv", 0) != 0)
            throw std::runtime_error("synthetic csv must start with 'n,k_conv'");
        std::vector<double> ns, ks;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const auto comma = line.find(',');
            if (comma == std::string::npos)
                throw std::runtime_error("bad synthetic row: " + line);
            ns.push_back(std::stod(line.substr(0, comma)));
            ks.push_back(std::stod(line.substr(comma + 1)));
        }
        const PowerLawFit fit = fit_power_law(ns, ks);
        json report = {{"exponent", json_number(fit.exponent)},
                       {"exponent_stderr", json_number(fit.exponent_stderr)},
                       {"intercept", json_number(fit.intercept)},
                       {"regression_points", fit.points}};
        std::cout << report.dump(2) << '\n';
        return;
    }

    ScalingConfig cfg;
    for (const auto n : cli::parse_uint_list(opt.n_list, "--n-list"))
        cfg.n_values.push_back(static_cast<std::size_t>(n));
    cfg.s = opt.s;
    cfg.target_degree = opt.target_degree;
    cfg.chains_per_n = opt.chains;
    cfg.iterations_factor = opt.iterations_factor;
    cfg.records_per_chain = opt.records;
    cfg.rel_tol = opt.rel_tol;
    cfg.seed = opt.seed;
    cfg.jobs = opt.jobs;

    RunContext run("scaling", opt.seed, opt.out.out_root, opt.out.run_dir);
    std::fprintf(stderr, "scaling: %zu sizes x %zu chains\n", cfg.n_values.size(),
                 cfg.chains_per_n);
    const ScalingResult result = scaling_study(cfg);
    run.phase_done("chains+fits");

    std::ofstream csv(run.file("scaling.csv"));
    if (!csv) throw std::runtime_error("cannot write scaling.csv");
    csv << "n,q,k_conv_avg_degree,k_conv_avg_edge_length\n";
    for (std::size_t i = 0; i < result.n_values.size(); ++i)
        csv << result.n_values[i] << ',' << format_double(result.q_values[i]) << ','
            << format_double(result.degree.k_conv[i]) << ','
            << format_double(result.edge_length.k_conv[i]) << '\n';
    run.note_output("scaling.csv");

    json report = {{"gtilde", json_number(result.gtilde)},
                   {"n_values", result.n_values},
                   {"avg_degree", series_to_json(result.degree, result.n_values)},
                   {"avg_edge_length", series_to_json(result.edge_length, result.n_values)}};
    std::ofstream js(run.file("scaling.json"));
    if (!js) throw std::runtime_error("cannot write scaling.json");
    js << report.dump(2) << '\n';
    run.note_output("scaling.json");
    run.phase_done("io");

    json config = {{"n_values", cfg.n_values},
                   {"s", cfg.s},
                   {"target_degree", cfg.target_degree},
                   {"chains_per_n", cfg.chains_per_n},
                   {"iterations_factor", cfg.iterations_factor},
                   {"records_per_chain", cfg.records_per_chain},
                   {"rel_tol", cfg.rel_tol},
                   {"seed", cfg.seed}};
    run.write_manifest(config);
    std::cout << report.dump(2) << '\n';
}

// ---------------------------------------------------------------- validate

struct ValidateOptions {
    ModelFlags model;
    OutputFlags out;
    std::size_t samples = 100'000;
    std::uint64_t burn_in = 10'000;
    std::uint64_t thinning = 50;
    double tv_threshold = 0.02;
    std::size_t max_attempts_per_draw = 1'000'000;
    bool mutate_swap_ratios = false;
};

// Deliberately wrong acceptance (ratios swapped); used to show the oracle
// catches a broken sampler.
StepOutcome mutated_step(SpatialGraph& g, const EdgeModel& m, std::mt19937_64& rng) {
    const auto [i, j] = propose_pair(g.node_count(), rng);
    const double d = g.distance(i, j);
    if (g.has_edge(i, j)) {
        g.remove_edge(i, j);
        if (!g.has_path(i, j)) {
            g.add_edge(i, j);
            return {ProposalKind::remove, false, RejectReason::disconnect};
        }
        if (uniform01(rng) < m.ratio_add(d))
            return {ProposalKind::remove, true, RejectReason::none};
        g.add_edge(i, j);
        return {ProposalKind::remove, false, RejectReason::ratio};
    }
    if (uniform01(rng) < m.ratio_remove(d)) {
        g.add_edge(i, j);
        return {ProposalKind::add, true, RejectReason::none};
    }
    return {ProposalKind::add, false, RejectReason::ratio};
}

void run_validate(ValidateOptions& opt) {
    ModelOptions mo = resolve_model(opt.model);
    if (mo.n > max_oracle_nodes)
        throw std::invalid_argument("validate needs n <= " +
                                    std::to_string(max_oracle_nodes) +
                                    " (exact enumeration)");
    const EdgeModel model = EdgeModel::waxman(mo.q, mo.s);

    auto pos_rng = make_rng(mo.seed, stream::positions, 0);
    const std::vector<Point> positions =
        sample_positions(static_cast<std::size_t>(mo.n), pos_rng);

    RunContext run("validate", mo.seed, opt.out.out_root, opt.out.run_dir);
    const ConditionalEnumeration exact = enumerate_conditional(positions, model);
    run.phase_done("enumerate");

    // MCMC ensemble, keys only
    std::vector<GraphKey> mcmc_keys;
    mcmc_keys.reserve(opt.samples);
    {
        ProgressMeter meter("validate/mcmc");
        SpatialGraph g = init_chain_at(model, positions, mo.seed);
        auto rng = make_rng(mo.seed, stream::chain, 0);
        auto step = [&](SpatialGraph& graph) {
            return opt.mutate_swap_ratios ? mutated_step(graph, model, rng)
                                          : mh_step(graph, model, rng);
        };
        for (std::uint64_t k = 0; k < opt.burn_in; ++k) step(g);
        mcmc_keys.push_back(graph_key(g));
        while (mcmc_keys.size() < opt.samples) {
            for (std::uint64_t k = 0; k < opt.thinning; ++k) step(g);
            mcmc_keys.push_back(graph_key(g));
            meter.update(mcmc_keys.size(), opt.samples);
        }
        meter.finish();
    }
    run.phase_done("mcmc");

    // rejection ensemble at equal sample size
    std::vector<GraphKey> rejection_keys;
    rejection_keys.reserve(opt.samples);
    std::uint64_t total_attempts = 0;
    {
        ProgressMeter meter("validate/rejection");
        auto rng = make_rng(mo.seed, stream::rejection, 0);
        for (std::size_t k = 0; k < opt.samples; ++k) {
            RejectionResult draw =
                rejection_sample(model, positions, rng, opt.max_attempts_per_draw);
            total_attempts += draw.attempts;
            rejection_keys.push_back(graph_key(draw.graph));
            meter.update(k + 1, opt.samples);
        }
        meter.finish();
    }
    run.phase_done("rejection");

    const auto n = static_cast<std::size_t>(mo.n);
    const GraphDistribution mcmc_dist = empirical_distribution_from_keys(n, mcmc_keys);
    const GraphDistribution rej_dist = empirical_distribution_from_keys(n, rejection_keys);
    const double tv_mcmc = total_variation(mcmc_dist, exact.distribution);
    const double tv_rej = total_variation(rej_dist, exact.distribution);
    const double tv_pair = total_variation(mcmc_dist, rej_dist);
    const TwoSampleTest twosample = two_sample_chi_square(mcmc_dist, rej_dist);

    const bool tv_pass = tv_mcmc <= opt.tv_threshold;
    const bool pair_pass = twosample.indistinguishable;
    const bool pass = tv_pass && pair_pass;

    write_distribution_csv(run.file("oracle.csv"), exact.distribution);
    run.note_output("oracle.csv");
    {
        json oracle_meta;
        oracle_meta["n"] = mo.n;
        oracle_meta["q"] = mo.q;
        oracle_meta["s"] = mo.s;
        oracle_meta["p_connected"] = exact.p_connected;
        json pos = json::array();
        for (const auto& p : positions) pos.push_back({p.x, p.y});
        oracle_meta["positions"] = pos;
        std::ofstream out(run.file("oracle.json"));
        if (!out) throw std::runtime_error("cannot write oracle.json");
        out << oracle_meta.dump(2) << '\n';
        run.note_output("oracle.json");
    }
    {
        json report = {{"tv_mcmc_exact", tv_mcmc},
                       {"tv_rejection_exact", tv_rej},
                       {"tv_mcmc_rejection", tv_pair},
                       {"tv_threshold", opt.tv_threshold},
                       {"chi_square", twosample.statistic},
                       {"chi_square_dof", twosample.dof},
                       {"chi_square_critical_999", twosample.critical_999},
                       {"p_connected", exact.p_connected},
                       {"rejection_mean_attempts",
                        double(total_attempts) / double(opt.samples)},
                       {"samples", opt.samples},
                       {"pass", pass}};
        std::ofstream out(run.file("report.json"));
        if (!out) throw std::runtime_error("cannot write report.json");
        out << report.dump(2) << '\n';
        run.note_output("report.json");
    }
    run.phase_done("io");

    json config = mo.to_json();
    config["samples"] = opt.samples;
    config["burn_in"] = opt.burn_in;
    config["thinning"] = opt.thinning;
    config["tv_threshold"] = opt.tv_threshold;
    config["mutate_swap_ratios"] = opt.mutate_swap_ratios;
    run.write_manifest(config);

    std::printf("run_dir: %s\n", run.dir().string().c_str());
    std::printf("p_connected = %.6f, support = %zu connected graphs\n", exact.p_connected,
                exact.distribution.mass.size());
    std::printf("TV(mcmc, exact) = %.5f (threshold %.5f): %s\n", tv_mcmc,
                opt.tv_threshold, tv_pass ? "PASS" : "FAIL");
    std::printf("TV(rejection, exact) = %.5f\n", tv_rej);
    std::printf("two-sample chi-square(mcmc, rejection) = %.2f (dof %zu, crit %.2f): %s\n",
                twosample.statistic, twosample.dof, twosample.critical_999,
                pair_pass ? "PASS" : "FAIL");
    std::printf("validate: %s\n", pass ? "PASS" : "FAIL");
    if (!pass) throw ValidationFailed("distributional validation failed");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Connected random graph sampling: single-link MCMC over spatial "
                 "(Waxman/GER) edge models, with convergence diagnostics and an "
                 "exact small-n oracle"};
    app.set_version_flag("--version", version);
    app.require_subcommand(1);

    GenerateOptions generate_opt;
    {
        auto* cmd = app.add_subcommand(
            "generate", "Sample connected graphs from one thinned chain");
        add_model_flags(cmd, generate_opt.model);
        add_output_flags(cmd, generate_opt.out);
        cmd->add_option("--count", generate_opt.count, "Number of graphs to emit");
        generate_opt.burn_opt =
            cmd->add_option("--burn-in", generate_opt.burn_in, "Iterations before the first snapshot");
        generate_opt.thin_opt =
            cmd->add_option("--thinning", generate_opt.thinning, "Iterations between snapshots");
        cmd->add_option("--from-diagnose", generate_opt.from_diagnose,
                        "Take burn-in/thinning from a diagnose report.json");
        cmd->callback([&]() { run_generate(generate_opt); });
    }

    ChainOptions chain_opt;
    {
        auto* cmd = app.add_subcommand("chain", "Run one chain and record the trace");
        add_model_flags(cmd, chain_opt.model);
        add_output_flags(cmd, chain_opt.out);
        cmd->add_option("--iterations", chain_opt.iterations, "Chain length K")->required();
        cmd->add_option("--stat-cadence", chain_opt.stat_cadence,
                        "Record stats every this many iterations (default K/100)");
        cmd->add_flag("--record-path-length", chain_opt.record_path_length,
                      "Also record avg path length (all-pairs BFS per record, slow)");
        cmd->callback([&]() { run_chain_cmd(chain_opt); });
    }

    DiagnoseOptions diagnose_opt;
    {
        auto* cmd = app.add_subcommand(
            "diagnose", "Fit convergence curves to trace CSVs and recommend burn-in");
        cmd->add_option("traces", diagnose_opt.traces, "Trace CSV files")
            ->required()
            ->expected(-1);
        cmd->add_option("--tol", diagnose_opt.rel_tol,
                        "Relative convergence tolerance (default 0.001)");
        add_output_flags(cmd, diagnose_opt.out);
        cmd->callback([&]() { run_diagnose(diagnose_opt); });
    }

    SweepOptions sweep_opt;
    {
        auto* cmd = app.add_subcommand(
            "sweep", "Proportion of connected unconditioned graphs over a (q, s) grid");
        cmd->add_option("--n", sweep_opt.n, "Node count")->required();
        cmd->add_option("--seed", sweep_opt.seed, "Master RNG seed");
        cmd->add_option("--samples", sweep_opt.samples, "Graphs per grid point");
        cmd->add_option("--q-grid", sweep_opt.q_grid, "Comma-separated q values");
        cmd->add_option("--s-grid", sweep_opt.s_grid, "Comma-separated s values");
        cmd->add_option("--target-degree", sweep_opt.target_degree,
                        "Hold expected degree fixed; q derived per s");
        cmd->add_option("--gtilde-samples", sweep_opt.gtilde_samples,
                        "Monte Carlo samples for the line-picking transform");
        cmd->add_option("--jobs", sweep_opt.jobs, "Worker threads (0 = all cores)");
        add_output_flags(cmd, sweep_opt.out);
        cmd->callback([&]() { run_sweep(sweep_opt); });
    }

    ScalingOptions scaling_opt;
    {
        auto* cmd = app.add_subcommand(
            "scaling", "Iterations-to-convergence vs n, with log-log power-law fit");
        cmd->add_option("--n-list", scaling_opt.n_list, "Comma-separated node counts");
        cmd->add_option("--chains", scaling_opt.chains, "Chains per n");
        cmd->add_option("--s", scaling_opt.s, "Distance decay rate");
        cmd->add_option("--target-degree", scaling_opt.target_degree,
                        "Expected degree held fixed across n");
        cmd->add_option("--iterations-factor", scaling_opt.iterations_factor,
                        "Chain length = factor * n^2");
        cmd->add_option("--records", scaling_opt.records, "Trace records per chain");
        cmd->add_option("--tol", scaling_opt.rel_tol, "Relative convergence tolerance");
        cmd->add_option("--seed", scaling_opt.seed, "Master RNG seed");
        cmd->add_option("--jobs", scaling_opt.jobs, "Worker threads (0 = all cores)");
        cmd->add_option("--synthetic", scaling_opt.synthetic,
                        "CSV of n,k_conv: skip the chains, fit the power law only")
            ->group("");  // developer hook, hidden from help
        add_output_flags(cmd, scaling_opt.out);
        cmd->callback([&]() { run_scaling(scaling_opt); });
    }

    ValidateOptions validate_opt;
    {
        auto* cmd = app.add_subcommand(
            "validate",
            "Compare MCMC and rejection samples against the exact enumeration (n <= 6)");
        add_model_flags(cmd, validate_opt.model);
        add_output_flags(cmd, validate_opt.out);
        cmd->add_option("--samples", validate_opt.samples, "Sample count per sampler");
        cmd->add_option("--burn-in", validate_opt.burn_in, "MCMC burn-in iterations");
        cmd->add_option("--thinning", validate_opt.thinning, "MCMC thinning interval");
        cmd->add_option("--tv-threshold", validate_opt.tv_threshold,
                        "Max allowed TV(mcmc, exact)");
        cmd->add_option("--max-attempts", validate_opt.max_attempts_per_draw,
                        "Rejection attempts allowed per draw");
        cmd->add_flag("--mutate-swap-ratios", validate_opt.mutate_swap_ratios,
                      "Swap the acceptance ratios (fault-injection check)")
            ->group("");  // developer hook, hidden from help
        cmd->callback([&]() { run_validate(validate_opt); });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    } catch (const ValidationFailed& e) {
        std::fprintf(stderr, "FAIL: %s\n", e.what());
        return 3;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
