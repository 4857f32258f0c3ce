#include "congen/sampler.hpp"

#include <cassert>
#include <chrono>
#include <stdexcept>

#include "congen/rng.hpp"

namespace congen {

void ChainConfig::validate() const {
    if (thinning < 1) throw std::invalid_argument("ChainConfig: thinning must be >= 1");
    if (stat_cadence < 1)
        throw std::invalid_argument("ChainConfig: stat_cadence must be >= 1");
    if (burn_in > iterations)
        throw std::invalid_argument("ChainConfig: burn_in exceeds iterations");
}

std::pair<NodeId, NodeId> propose_pair(std::size_t n, std::mt19937_64& rng) {
    if (n < 2) throw std::invalid_argument("propose_pair: need n >= 2");
    const auto i = static_cast<NodeId>(uniform_below(rng, n));
    auto j = static_cast<NodeId>(uniform_below(rng, n - 1));
    if (j >= i) ++j;
    return i < j ? std::pair{i, j} : std::pair{j, i};
}

StepOutcome mh_step(SpatialGraph& g, const EdgeModel& m, std::mt19937_64& rng) {
    assert(g.is_connected());
    const auto [i, j] = propose_pair(g.node_count(), rng);
    const double d = g.distance(i, j);

    if (g.has_edge(i, j)) {
        g.remove_edge(i, j);
        if (!g.has_path(i, j)) {
            g.add_edge(i, j);  // O(1) rollback
            return {ProposalKind::remove, false, RejectReason::disconnect};
        }
        if (uniform01(rng) < m.ratio_remove(d))
            return {ProposalKind::remove, true, RejectReason::none};
        g.add_edge(i, j);
        return {ProposalKind::remove, false, RejectReason::ratio};
    }

    if (uniform01(rng) < m.ratio_add(d)) {
        g.add_edge(i, j);
        return {ProposalKind::add, true, RejectReason::none};
    }
    return {ProposalKind::add, false, RejectReason::ratio};
}

SpatialGraph init_chain(const EdgeModel& m, std::size_t n, std::uint64_t seed,
                        std::uint64_t chain_index) {
    if (n < 2) throw std::invalid_argument("init_chain: need n >= 2");
    auto pos_rng = make_rng(seed, stream::positions, chain_index);
    return init_chain_at(m, sample_positions(n, pos_rng), seed, chain_index);
}

SpatialGraph init_chain_at(const EdgeModel& m, std::vector<Point> positions,
                           std::uint64_t seed, std::uint64_t chain_index) {
    auto graph_rng = make_rng(seed, stream::initial_graph, chain_index);
    auto connect_rng = make_rng(seed, stream::connect, chain_index);
    SpatialGraph g = generate_graph(m, std::move(positions), graph_rng);
    connect_arbitrarily(g, connect_rng);
    return g;
}

namespace {

void count_outcome(ChainTrace& trace, const StepOutcome& outcome) {
    if (outcome.accepted) {
        if (outcome.kind == ProposalKind::add)
            ++trace.acc_add;
        else
            ++trace.acc_remove;
    } else if (outcome.reason == RejectReason::disconnect) {
        ++trace.rej_disconnect;
    } else {
        ++trace.rej_ratio;
    }
}

void record_row(ChainTrace& trace, const SpatialGraph& g, std::uint64_t iteration,
                bool with_path_length) {
    TraceRow row;
    row.iteration = iteration;
    row.connected = g.is_connected();
    if (!row.connected)
        throw std::logic_error("chain state disconnected at iteration " +
                               std::to_string(iteration));
    row.stats = compute_stats(g, with_path_length);
    row.acc_add = trace.acc_add;
    row.acc_remove = trace.acc_remove;
    row.rej_disconnect = trace.rej_disconnect;
    row.rej_ratio = trace.rej_ratio;
    trace.rows.push_back(row);
}

ChainResult run_chain_impl(const EdgeModel& m, SpatialGraph g, const ChainConfig& cfg,
                           std::uint64_t chain_index, const ProgressFn& progress) {
    auto rng = make_rng(cfg.seed, stream::chain, chain_index);
    ChainTrace trace;
    trace.iterations = cfg.iterations;
    record_row(trace, g, 0, cfg.record_path_length);

    const auto start = std::chrono::steady_clock::now();
    for (std::uint64_t k = 1; k <= cfg.iterations; ++k) {
        count_outcome(trace, mh_step(g, m, rng));
        if (k % cfg.stat_cadence == 0) {
            record_row(trace, g, k, cfg.record_path_length);
            if (progress) progress(k, cfg.iterations);
        }
    }
    trace.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return ChainResult{std::move(g), std::move(trace)};
}

void sample_ensemble_impl(const EdgeModel& m, SpatialGraph g, const ChainConfig& cfg,
                          std::size_t count, const GraphSink& sink,
                          std::uint64_t chain_index) {
    if (count == 0) throw std::invalid_argument("sample_ensemble: count must be >= 1");
    auto rng = make_rng(cfg.seed, stream::chain, chain_index);
    std::uint64_t iteration = 0;
    for (std::uint64_t k = 0; k < cfg.burn_in; ++k, ++iteration) mh_step(g, m, rng);
    sink(g, iteration);
    for (std::size_t emitted = 1; emitted < count; ++emitted) {
        for (std::uint64_t k = 0; k < cfg.thinning; ++k, ++iteration) mh_step(g, m, rng);
        sink(g, iteration);
    }
}

}  // namespace

ChainResult run_chain(const EdgeModel& m, std::size_t n, const ChainConfig& cfg,
                      std::uint64_t chain_index, const ProgressFn& progress) {
    cfg.validate();
    return run_chain_impl(m, init_chain(m, n, cfg.seed, chain_index), cfg, chain_index,
                          progress);
}

ChainResult run_chain_at(const EdgeModel& m, std::vector<Point> positions,
                         const ChainConfig& cfg, std::uint64_t chain_index,
                         const ProgressFn& progress) {
    cfg.validate();
    return run_chain_impl(m, init_chain_at(m, std::move(positions), cfg.seed, chain_index),
                          cfg, chain_index, progress);
}

void sample_ensemble(const EdgeModel& m, std::size_t n, const ChainConfig& cfg,
                     std::size_t count, const GraphSink& sink) {
    if (cfg.thinning < 1) throw std::invalid_argument("sample_ensemble: thinning >= 1");
    sample_ensemble_impl(m, init_chain(m, n, cfg.seed, 0), cfg, count, sink, 0);
}

void sample_ensemble_at(const EdgeModel& m, std::vector<Point> positions,
                        const ChainConfig& cfg, std::size_t count,
                        const GraphSink& sink) {
    if (cfg.thinning < 1) throw std::invalid_argument("sample_ensemble: thinning >= 1");
    sample_ensemble_impl(m, init_chain_at(m, std::move(positions), cfg.seed, 0), cfg,
                         count, sink, 0);
}

std::vector<SpatialGraph> sample_ensemble(const EdgeModel& m, std::size_t n,
                                          const ChainConfig& cfg, std::size_t count) {
    std::vector<SpatialGraph> graphs;
    graphs.reserve(count);
    sample_ensemble(m, n, cfg, count,
                    [&](const SpatialGraph& g, std::uint64_t) { graphs.push_back(g); });
    return graphs;
}

}  // namespace congen
