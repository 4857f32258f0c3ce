#include "congen/graph.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace congen {

double distance(const Point& a, const Point& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return std::sqrt(dx * dx + dy * dy);
}

SpatialGraph::SpatialGraph(std::vector<Point> positions)
    : positions_(std::move(positions)), adjacency_(positions_.size()) {
    if (positions_.empty())
        throw std::invalid_argument("SpatialGraph requires at least one node");
}

double SpatialGraph::distance(NodeId i, NodeId j) const {
    check_pair(i, j);
    return congen::distance(positions_[i], positions_[j]);
}

void SpatialGraph::check_pair(NodeId i, NodeId j) const {
    const std::size_t n = positions_.size();
    if (i >= n || j >= n)
        throw std::invalid_argument("node index out of range: (" + std::to_string(i) +
                                    ", " + std::to_string(j) + "), n=" + std::to_string(n));
    if (i == j)
        throw std::invalid_argument("self-loop pair (" + std::to_string(i) + ", " +
                                    std::to_string(i) + ")");
}

bool SpatialGraph::has_edge(NodeId i, NodeId j) const {
    check_pair(i, j);
    return adjacency_[i].contains(j);
}

void SpatialGraph::add_edge(NodeId i, NodeId j) {
    check_pair(i, j);
    if (adjacency_[i].contains(j))
        throw std::logic_error("add_edge: edge (" + std::to_string(i) + ", " +
                               std::to_string(j) + ") already present");
    adjacency_[i].insert(j);
    adjacency_[j].insert(i);
    ++edge_count_;
}

void SpatialGraph::remove_edge(NodeId i, NodeId j) {
    check_pair(i, j);
    if (!adjacency_[i].contains(j))
        throw std::logic_error("remove_edge: edge (" + std::to_string(i) + ", " +
                               std::to_string(j) + ") not present");
    adjacency_[i].erase(j);
    adjacency_[j].erase(i);
    --edge_count_;
}

const std::unordered_set<NodeId>& SpatialGraph::neighbors(NodeId i) const {
    if (i >= positions_.size())
        throw std::invalid_argument("node index out of range: " + std::to_string(i));
    return adjacency_[i];
}

// Explicit queue, no recursion: node counts around 1e5 must not overflow
// the call stack.
bool SpatialGraph::has_path(NodeId i, NodeId j) const {
    check_pair(i, j);
    std::vector<std::uint8_t> visited(positions_.size(), 0);
    std::vector<NodeId> queue;
    queue.reserve(64);
    visited[i] = 1;
    queue.push_back(i);
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const NodeId u = queue[head];
        for (const NodeId v : adjacency_[u]) {
            if (v == j) return true;
            if (!visited[v]) {
                visited[v] = 1;
                queue.push_back(v);
            }
        }
    }
    return false;
}

bool SpatialGraph::is_connected() const {
    const std::size_t n = positions_.size();
    if (n == 1) return true;
    std::vector<std::uint8_t> visited(n, 0);
    std::vector<NodeId> queue;
    queue.reserve(n);
    visited[0] = 1;
    queue.push_back(0);
    std::size_t seen = 1;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        for (const NodeId v : adjacency_[queue[head]]) {
            if (!visited[v]) {
                visited[v] = 1;
                ++seen;
                queue.push_back(v);
            }
        }
    }
    return seen == n;
}

std::vector<std::vector<NodeId>> SpatialGraph::connected_components() const {
    const std::size_t n = positions_.size();
    std::vector<std::uint8_t> visited(n, 0);
    std::vector<std::vector<NodeId>> components;
    std::vector<NodeId> queue;
    for (NodeId start = 0; start < n; ++start) {
        if (visited[start]) continue;
        std::vector<NodeId> component;
        queue.clear();
        visited[start] = 1;
        queue.push_back(start);
        for (std::size_t head = 0; head < queue.size(); ++head) {
            const NodeId u = queue[head];
            component.push_back(u);
            for (const NodeId v : adjacency_[u]) {
                if (!visited[v]) {
                    visited[v] = 1;
                    queue.push_back(v);
                }
            }
        }
        std::sort(component.begin(), component.end());
        components.push_back(std::move(component));
    }
    return components;
}

std::vector<std::pair<NodeId, NodeId>> SpatialGraph::edges() const {
    std::vector<std::pair<NodeId, NodeId>> out;
    out.reserve(edge_count_);
    for (NodeId i = 0; i < positions_.size(); ++i)
        for (const NodeId j : adjacency_[i])
            if (i < j) out.emplace_back(i, j);
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

// Sum of hop distances from src to all other nodes.
std::uint64_t bfs_distance_sum(const SpatialGraph& g, NodeId src,
                               std::vector<std::uint32_t>& dist,
                               std::vector<NodeId>& queue) {
    std::fill(dist.begin(), dist.end(), UINT32_MAX);
    queue.clear();
    dist[src] = 0;
    queue.push_back(src);
    std::uint64_t sum = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const NodeId u = queue[head];
        sum += dist[u];
        for (const NodeId v : g.neighbors(u)) {
            if (dist[v] == UINT32_MAX) {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    return sum;
}

}  // namespace

GraphStats compute_stats(const SpatialGraph& g, bool with_path_length) {
    GraphStats stats;
    const std::size_t n = g.node_count();
    stats.avg_degree = 2.0 * static_cast<double>(g.edge_count()) / static_cast<double>(n);

    if (g.edge_count() > 0) {
        double length_sum = 0.0;
        for (NodeId i = 0; i < n; ++i)
            for (const NodeId j : g.neighbors(i))
                if (i < j) length_sum += g.distance(i, j);
        stats.avg_edge_length = length_sum / static_cast<double>(g.edge_count());
    }

    if (with_path_length) {
        if (!g.is_connected())
            throw std::domain_error("avg_path_length requires a connected graph");
        if (n == 1) {
            stats.avg_path_length = 0.0;
        } else {
            std::vector<std::uint32_t> dist(n);
            std::vector<NodeId> queue;
            queue.reserve(n);
            std::uint64_t total = 0;
            for (NodeId src = 0; src < n; ++src)
                total += bfs_distance_sum(g, src, dist, queue);
            const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
            stats.avg_path_length = static_cast<double>(total) / 2.0 / pairs;
        }
    }
    return stats;
}

}  // namespace congen
