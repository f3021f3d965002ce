#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ofc/multigraph.hpp"

namespace ofc {

// Edge-list text format:
//   first line "n m" (vertex count, distinct pair count),
//   then m lines "u v mult" with 0-based indices.
Multigraph read_multigraph(std::istream& in);
void write_multigraph(std::ostream& out, const Multigraph& g);
Multigraph load_multigraph(const std::string& path);
void save_multigraph(const std::string& path, const Multigraph& g);

/// DOT output for the underlying simple graph.
void write_dot(std::ostream& out, const Multigraph& g, const std::string& name = "g");

// Coloring text format: one line per edge instance "u v copy color",
// uncolored serialized as 0.
struct ColoringLine {
    EdgeInstance instance;
    int color = 0;
};
std::vector<ColoringLine> read_coloring_lines(std::istream& in);
void write_coloring_lines(std::ostream& out, const std::vector<ColoringLine>& lines);

// Sequence text format: whitespace-separated integers, one sequence per line.
std::vector<std::vector<int>> read_sequences(std::istream& in);

/// FNV-1a digest of the canonical edge list, for report provenance.
std::string graph_digest(const Multigraph& g);

}  // namespace ofc
