#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ofc/multigraph.hpp"

namespace ofc {

constexpr int kUncolored = 0;

/// Partial or total proper assignment of colors in [1, k] to edge instances.
/// Instances are indexed against the canonical instance list of the graph the
/// coloring was created from; color 0 means uncolored.
class EdgeColoring {
public:
    EdgeColoring() = default;
    EdgeColoring(const Multigraph& g, int palette);

    int palette() const { return palette_; }
    void set_palette(int k);
    int size() const { return static_cast<int>(instances_.size()); }
    const std::vector<EdgeInstance>& instances() const { return instances_; }

    int color(int idx) const { return colors_.at(idx); }
    void set_color(int idx, int c);
    int color_of(const EdgeInstance& e) const;
    int index_of(const EdgeInstance& e) const;  // -1 when absent

    bool total() const;
    long long colored_count() const;

    /// Colors present at v over all colored incident instances.
    std::vector<int> present_colors(int vertex_count, VertexId v) const;
    /// Missing set relative to [1, palette].
    std::vector<int> missing_colors(int vertex_count, VertexId v) const;
    std::vector<long long> class_sizes() const;  // index 0 = uncolored count

private:
    int palette_ = 0;
    std::vector<EdgeInstance> instances_;
    std::vector<int> colors_;
};

struct ProperState {
    bool ok = true;
    // witness: two instance indices sharing a vertex and a color
    int first = -1;
    int second = -1;
    std::string detail;
};

ProperState check_proper(const Multigraph& g, const EdgeColoring& c);

struct ParityState {
    bool ok = true;
    int bad_color = 0;
    long long missing_count = 0;
};

/// For a total proper coloring with palette >= max degree: every color is
/// missed by a vertex count congruent to |V| mod 2.
ParityState parity_check(const Multigraph& g, const EdgeColoring& c);

/// chi'(G) = max degree for bipartite multigraphs; throws std::domain_error
/// with an odd-cycle witness message when g is not bipartite.
EdgeColoring color_bipartite_konig(const Multigraph& g);

/// Two-coloring of the simple support; nullopt with a witness when an odd
/// cycle exists.
struct BipartitionResult {
    bool bipartite = false;
    std::vector<int> side;          // 0/1 per vertex when bipartite
    std::vector<VertexId> odd_cycle;  // witness when not
};
BipartitionResult find_bipartition(const Multigraph& g);

/// Total proper coloring with at most max_degree + max_multiplicity colors.
EdgeColoring color_vizing_bound(const Multigraph& g);

/// Proper k-coloring whose class sizes differ by at most one, derived from c
/// by component swaps between large and small classes.
EdgeColoring equalize(const Multigraph& g, const EdgeColoring& c);

struct DensityValue {
    long long numerator = 0;    // e(H)
    long long denominator = 1;  // floor(|H| / 2)
    VertexSubset witness;

    double value() const { return static_cast<double>(numerator) / static_cast<double>(denominator); }
    long long ceiling() const { return (numerator + denominator - 1) / denominator; }
};

/// rho(G): max over odd-order induced subsets of size >= 3. Exhaustive;
/// requires |V| <= cap.
DensityValue density_rho(const Multigraph& g, int cap = 20);

struct ExactChromaticIndex {
    int chi = 0;
    EdgeColoring coloring;
};

/// Exact chi' by backtracking with color-symmetry breaking. Caps guard the
/// search; exceeding them raises resource_error.
ExactChromaticIndex chromatic_index_exact(const Multigraph& g, long long node_cap = 200'000'000,
                                          int color_cap = 62);

/// Total proper k-coloring for k >= max(Delta + sqrt((Delta-1)/2), rho).
/// Greedy with Kempe repairs, escalating to exact search.
EdgeColoring color_bounded(const Multigraph& g, int k, unsigned long long seed = 0);

/// Heuristic-only variant used internally: empty optional when the greedy /
/// Kempe strategy fails within the restart budget.
std::optional<EdgeColoring> try_color_heuristic(const Multigraph& g, int k,
                                                unsigned long long seed, int restarts = 40);

struct NearlyBipartiteResult {
    bool colored = false;
    EdgeColoring coloring;   // when colored
    VertexSubset overfull_witness;  // when not: subset X with e(G[X]) > Delta*floor(|X|/2)
    long long witness_edges = 0;
    long long witness_threshold = 0;
};

/// For nearly-bipartite g: either a proper Delta-coloring or an overfull
/// certificate proving chi' > Delta. Throws std::domain_error when g is not
/// nearly-bipartite.
NearlyBipartiteResult color_nearly_bipartite(const Multigraph& g);

/// First odd subset X (|X| >= 3) with e(G[X]) > target_delta * floor(|X|/2),
/// searched over induced subsets; nullopt when none exists. |V| <= cap.
std::optional<VertexSubset> exhaustive_overfull_subset(const Multigraph& g, int target_delta,
                                                       int cap = 16);

/// Swaps colors along an alternating path of edge instances: uncolored edges
/// gain color i, i-colored edges become uncolored. Validates alternation and
/// properness before mutating; throws std::invalid_argument on violation.
EdgeColoring swap_alternating_path(const Multigraph& g, const EdgeColoring& c,
                                   const std::vector<EdgeInstance>& path, int color);

}  // namespace ofc
