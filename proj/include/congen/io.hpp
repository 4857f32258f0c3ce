#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "congen/graph.hpp"
#include "congen/oracle.hpp"
#include "congen/sampler.hpp"

namespace congen {

// Edge-list file: header line `# nodes=<N>`, then ascending `i j` pairs,
// zero-based, whitespace-separated.
void write_edge_list(const std::filesystem::path& path, const SpatialGraph& g);

struct EdgeListFile {
    std::size_t n = 0;
    std::vector<std::pair<NodeId, NodeId>> edges;
};

EdgeListFile read_edge_list(const std::filesystem::path& path);

SpatialGraph build_graph(std::vector<Point> positions,
                         std::span<const std::pair<NodeId, NodeId>> edges);

// Positions file: CSV `node,x,y`.
void write_positions_csv(const std::filesystem::path& path,
                         std::span<const Point> positions);
std::vector<Point> read_positions_csv(const std::filesystem::path& path);

// Trace CSV: iteration,avg_degree,avg_edge_length[,avg_path_length],
// acc_add,acc_remove,rej_disconnect,rej_ratio,connected
void write_trace_csv(const std::filesystem::path& path, const ChainTrace& trace);

// Columns keyed by header name.
using TraceTable = std::map<std::string, std::vector<double>>;
TraceTable read_trace_csv(const std::filesystem::path& path);

// Oracle dump: CSV `graphkey,probability`.
void write_distribution_csv(const std::filesystem::path& path,
                            const GraphDistribution& dist);

// Shortest decimal form that round-trips the exact double.
std::string format_double(double value);

}  // namespace congen
