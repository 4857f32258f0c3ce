#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <unordered_set>
#include <utility>
#include <vector>

namespace congen {

using NodeId = std::uint32_t;

struct Point {
    double x = 0.0;
    double y = 0.0;
};

double distance(const Point& a, const Point& b);

struct GraphStats {
    double avg_degree = 0.0;
    double avg_edge_length = 0.0;  // 0 when the edge set is empty
    std::optional<double> avg_path_length;  // mean hop count, connected graphs only
};

// Labeled undirected graph with fixed node positions in the unit square.
// Adjacency is a hash set per node, so edge lookup/insert/erase are
// expected O(1). Positions are immutable after construction; only edges
// move. Single-writer: not internally synchronized.
class SpatialGraph {
public:
    explicit SpatialGraph(std::vector<Point> positions);

    std::size_t node_count() const { return positions_.size(); }
    std::size_t edge_count() const { return edge_count_; }
    const std::vector<Point>& positions() const { return positions_; }
    const Point& position(NodeId i) const { return positions_[i]; }
    double distance(NodeId i, NodeId j) const;

    bool has_edge(NodeId i, NodeId j) const;
    void add_edge(NodeId i, NodeId j);
    void remove_edge(NodeId i, NodeId j);
    const std::unordered_set<NodeId>& neighbors(NodeId i) const;

    // BFS from i, early exit on reaching j.
    bool has_path(NodeId i, NodeId j) const;
    bool is_connected() const;
    std::vector<std::vector<NodeId>> connected_components() const;

    // Edges as (i, j) with i < j, sorted ascending.
    std::vector<std::pair<NodeId, NodeId>> edges() const;

private:
    void check_pair(NodeId i, NodeId j) const;

    std::vector<Point> positions_;
    std::vector<std::unordered_set<NodeId>> adjacency_;
    std::size_t edge_count_ = 0;
};

// avg_path_length is computed only when requested: all-pairs BFS is
// O(N * (N + |E|)) and requires a connected graph.
GraphStats compute_stats(const SpatialGraph& g, bool with_path_length = false);

}  // namespace congen
