#include "ofc/io.hpp"

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace ofc {

Multigraph read_multigraph(std::istream& in) {
    int n = 0, m = 0;
    if (!(in >> n >> m)) throw std::invalid_argument("graph header: expected 'n m'");
    if (n < 0 || m < 0) throw std::invalid_argument("graph header: negative counts");
    Multigraph g(n);
    for (int i = 0; i < m; ++i) {
        int u, v, mult;
        if (!(in >> u >> v >> mult))
            throw std::invalid_argument("graph line " + std::to_string(i + 1) + ": expected 'u v mult'");
        g.add_edge(u, v, mult);
    }
    return g;
}

void write_multigraph(std::ostream& out, const Multigraph& g) {
    out << g.vertex_count() << ' ' << g.distinct_pair_count() << '\n';
    for (const auto& [pair, m] : g.pairs())
        out << pair.first << ' ' << pair.second << ' ' << m << '\n';
}

Multigraph load_multigraph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open graph file: " + path);
    return read_multigraph(in);
}

void save_multigraph(const std::string& path, const Multigraph& g) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write graph file: " + path);
    write_multigraph(out, g);
}

void write_dot(std::ostream& out, const Multigraph& g, const std::string& name) {
    out << "graph " << name << " {\n";
    for (VertexId v = 0; v < g.vertex_count(); ++v) out << "  " << v << ";\n";
    for (const auto& [pair, m] : g.pairs())
        out << "  " << pair.first << " -- " << pair.second << ";\n";
    out << "}\n";
}

std::vector<ColoringLine> read_coloring_lines(std::istream& in) {
    std::vector<ColoringLine> lines;
    int u, v, copy, color;
    while (in >> u >> v >> copy >> color) {
        if (u > v) std::swap(u, v);
        lines.push_back({{u, v, copy}, color});
    }
    return lines;
}

void write_coloring_lines(std::ostream& out, const std::vector<ColoringLine>& lines) {
    for (const auto& line : lines)
        out << line.instance.u << ' ' << line.instance.v << ' ' << line.instance.copy << ' '
            << line.color << '\n';
}

std::vector<std::vector<int>> read_sequences(std::istream& in) {
    std::vector<std::vector<int>> out;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::vector<int> seq;
        int x;
        while (ls >> x) seq.push_back(x);
        if (!seq.empty()) out.push_back(std::move(seq));
    }
    return out;
}

std::string graph_digest(const Multigraph& g) {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](std::uint64_t x) {
        for (int i = 0; i < 8; ++i) {
            h ^= (x >> (8 * i)) & 0xff;
            h *= 1099511628211ull;
        }
    };
    mix(static_cast<std::uint64_t>(g.vertex_count()));
    for (const auto& [pair, m] : g.pairs()) {
        mix(static_cast<std::uint64_t>(pair.first));
        mix(static_cast<std::uint64_t>(pair.second));
        mix(static_cast<std::uint64_t>(m));
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

}  // namespace ofc
