#include "congen/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace congen {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
    return in;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream stream(line);
    while (std::getline(stream, field, ',')) fields.push_back(field);
    return fields;
}

double parse_double(const std::string& text, const std::filesystem::path& path) {
    try {
        std::size_t used = 0;
        const double value = std::stod(text, &used);
        if (used == 0) throw std::invalid_argument(text);
        return value;
    } catch (const std::exception&) {
        throw std::runtime_error("bad numeric field '" + text + "' in " + path.string());
    }
}

}  // namespace

std::string format_double(double value) {
    char buffer[40];
    // round-trip: try increasing precision until the value survives
    for (int precision = 15; precision <= 17; ++precision) {
        std::snprintf(buffer, sizeof buffer, "%.*g", precision, value);
        double back = 0.0;
        std::sscanf(buffer, "%lf", &back);
        if (back == value) break;
    }
    return buffer;
}

void write_edge_list(const std::filesystem::path& path, const SpatialGraph& g) {
    auto out = open_out(path);
    out << "# nodes=" << g.node_count() << '\n';
    for (const auto& [i, j] : g.edges()) out << i << ' ' << j << '\n';
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

EdgeListFile read_edge_list(const std::filesystem::path& path) {
    auto in = open_in(path);
    std::string header;
    if (!std::getline(in, header) || header.rfind("# nodes=", 0) != 0)
        throw std::runtime_error("missing '# nodes=' header in " + path.string());
    EdgeListFile file;
    file.n = std::stoul(header.substr(8));
    NodeId i = 0, j = 0;
    while (in >> i >> j) {
        if (i >= j || j >= file.n)
            throw std::runtime_error("bad edge " + std::to_string(i) + " " +
                                     std::to_string(j) + " in " + path.string());
        file.edges.emplace_back(i, j);
    }
    return file;
}

SpatialGraph build_graph(std::vector<Point> positions,
                         std::span<const std::pair<NodeId, NodeId>> edges) {
    SpatialGraph g(std::move(positions));
    for (const auto& [i, j] : edges) g.add_edge(i, j);
    return g;
}

void write_positions_csv(const std::filesystem::path& path,
                         std::span<const Point> positions) {
    auto out = open_out(path);
    out << "node,x,y\n";
    for (std::size_t k = 0; k < positions.size(); ++k)
        out << k << ',' << format_double(positions[k].x) << ','
            << format_double(positions[k].y) << '\n';
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::vector<Point> read_positions_csv(const std::filesystem::path& path) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("node,x,y", 0) != 0)
        throw std::runtime_error("missing 'node,x,y' header in " + path.string());
    std::vector<Point> positions;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 3)
            throw std::runtime_error("bad positions row in " + path.string());
        const auto node = static_cast<std::size_t>(std::stoul(fields[0]));
        if (node != positions.size())
            throw std::runtime_error("positions rows out of order in " + path.string());
        positions.push_back(Point{parse_double(fields[1], path),
                                  parse_double(fields[2], path)});
    }
    return positions;
}

void write_trace_csv(const std::filesystem::path& path, const ChainTrace& trace) {
    auto out = open_out(path);
    const bool with_path =
        !trace.rows.empty() && trace.rows.front().stats.avg_path_length.has_value();
    out << "iteration,avg_degree,avg_edge_length";
    if (with_path) out << ",avg_path_length";
    out << ",acc_add,acc_remove,rej_disconnect,rej_ratio,connected\n";
    for (const TraceRow& row : trace.rows) {
        out << row.iteration << ',' << format_double(row.stats.avg_degree) << ','
            << format_double(row.stats.avg_edge_length);
        if (with_path) out << ',' << format_double(row.stats.avg_path_length.value());
        out << ',' << row.acc_add << ',' << row.acc_remove << ',' << row.rej_disconnect
            << ',' << row.rej_ratio << ',' << (row.connected ? 1 : 0) << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

TraceTable read_trace_csv(const std::filesystem::path& path) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("empty trace file: " + path.string());
    const auto headers = split_csv_line(line);
    if (headers.empty() || headers.front() != "iteration")
        throw std::runtime_error("trace header must start with 'iteration' in " +
                                 path.string());
    TraceTable table;
    for (const auto& name : headers) table[name] = {};
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != headers.size())
            throw std::runtime_error("ragged trace row in " + path.string());
        for (std::size_t k = 0; k < fields.size(); ++k)
            table[headers[k]].push_back(parse_double(fields[k], path));
    }
    return table;
}

void write_distribution_csv(const std::filesystem::path& path,
                            const GraphDistribution& dist) {
    auto out = open_out(path);
    out << "graphkey,probability\n";
    for (const auto& [key, mass] : dist.mass)
        out << key << ',' << format_double(mass / dist.total_mass) << '\n';
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace congen
