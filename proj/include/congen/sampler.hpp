#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "congen/graph.hpp"
#include "congen/model.hpp"

namespace congen {

struct ChainConfig {
    std::uint64_t iterations = 0;  // K
    std::uint64_t seed = 0;
    std::uint64_t burn_in = 0;
    std::uint64_t thinning = 1;
    std::uint64_t stat_cadence = 1;
    bool record_path_length = false;

    void validate() const;  // burn_in <= iterations, thinning >= 1, cadence >= 1
};

enum class ProposalKind { add, remove };
enum class RejectReason { none, disconnect, ratio };

struct StepOutcome {
    ProposalKind kind;
    bool accepted;
    RejectReason reason;  // disconnect can only occur on a removal
};

struct TraceRow {
    std::uint64_t iteration = 0;
    GraphStats stats;
    // cumulative counters at this iteration
    std::uint64_t acc_add = 0;
    std::uint64_t acc_remove = 0;
    std::uint64_t rej_disconnect = 0;
    std::uint64_t rej_ratio = 0;
    bool connected = false;
};

struct ChainTrace {
    std::vector<TraceRow> rows;
    std::uint64_t iterations = 0;
    // the four counters sum to iterations
    std::uint64_t acc_add = 0;
    std::uint64_t acc_remove = 0;
    std::uint64_t rej_disconnect = 0;
    std::uint64_t rej_ratio = 0;
    double wall_seconds = 0.0;
};

struct ChainResult {
    SpatialGraph graph;
    ChainTrace trace;
};

// Unordered pair of distinct nodes, uniform over all C(n, 2) pairs:
// i uniform, j uniform over the remaining n-1, order normalized.
std::pair<NodeId, NodeId> propose_pair(std::size_t n, std::mt19937_64& rng);

// One single-link Metropolis-Hastings step. Pair an edge: remove it, and
// if i and j lose their last path, roll back and reject (disconnect);
// otherwise keep the removal with probability min(1, ratio_remove).
// Pair a non-edge: add it with probability min(1, ratio_add); an addition
// can never disconnect, so no path check is needed. The graph stays
// connected either way.
StepOutcome mh_step(SpatialGraph& g, const EdgeModel& m, std::mt19937_64& rng);

// Model draw followed by arbitrary connection: the chain's start state,
// connected with positive model probability. Position, graph, and connect
// RNG streams are derived from the seed.
SpatialGraph init_chain(const EdgeModel& m, std::size_t n, std::uint64_t seed,
                        std::uint64_t chain_index = 0);

// Same, on caller-fixed positions (oracle fixtures).
SpatialGraph init_chain_at(const EdgeModel& m, std::vector<Point> positions,
                           std::uint64_t seed, std::uint64_t chain_index = 0);

// Invoked at record points with (iterations done, iterations total).
using ProgressFn = std::function<void(std::uint64_t, std::uint64_t)>;

// Runs cfg.iterations steps from the initial state, recording stats at
// iteration 0 and every stat_cadence iterations. Recorded states are
// re-checked for connectivity by full BFS. Deterministic given seed.
ChainResult run_chain(const EdgeModel& m, std::size_t n, const ChainConfig& cfg,
                      std::uint64_t chain_index = 0, const ProgressFn& progress = {});
ChainResult run_chain_at(const EdgeModel& m, std::vector<Point> positions,
                         const ChainConfig& cfg, std::uint64_t chain_index = 0,
                         const ProgressFn& progress = {});

// Burn in, then emit a snapshot immediately and after every further
// `thinning` steps until `count` snapshots are delivered.
using GraphSink = std::function<void(const SpatialGraph&, std::uint64_t iteration)>;
void sample_ensemble(const EdgeModel& m, std::size_t n, const ChainConfig& cfg,
                     std::size_t count, const GraphSink& sink);
void sample_ensemble_at(const EdgeModel& m, std::vector<Point> positions,
                        const ChainConfig& cfg, std::size_t count,
                        const GraphSink& sink);
std::vector<SpatialGraph> sample_ensemble(const EdgeModel& m, std::size_t n,
                                          const ChainConfig& cfg, std::size_t count);

}  // namespace congen
