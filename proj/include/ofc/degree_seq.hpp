#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ofc/multigraph.hpp"

namespace ofc {

/// Non-increasing sequence of non-negative integers, length >= 2.
/// Accepts unsorted input; sorts internally and keeps the permutation
/// (position in sorted order -> position in the caller's order).
class DegreeSequence {
public:
    explicit DegreeSequence(std::vector<int> values);

    const std::vector<int>& values() const { return values_; }
    const std::vector<int>& sort_permutation() const { return perm_; }
    int length() const { return static_cast<int>(values_.size()); }
    long long sum() const;

    /// sum even and values[0] <= sum of the rest
    bool admissible() const;
    std::string admissibility_failure() const;

private:
    std::vector<int> values_;  // non-increasing
    std::vector<int> perm_;
};

/// d-regular circulant on m vertices: v_j adjacent to v_{j +- i mod m}
/// for i in [1, d/2]. Requires d even, 2 <= d < m, m >= 3.
Multigraph build_regular_circulant(int m, int d);

struct ReductionStep {
    int pivot_value = 0;              // degree removed this step
    std::vector<int> remaining;       // sequence after the reduction, re-sorted
};

struct GraphicResult {
    bool graphic = false;
    std::vector<ReductionStep> trace;
};

/// Havel-Hakimi test with the per-step reduction trace.
GraphicResult is_graphic(const DegreeSequence& seq);

/// Havel-Hakimi realization. The sorted degree sequence of the result equals
/// the input. Ties are broken by lowest index, so the output is deterministic.
/// Vertex i of the result corresponds to position i of the *sorted* sequence.
Multigraph realize_graphic(const DegreeSequence& seq);

/// Simple graph with exactly t vertices of degree d and m - t of degree d-1.
/// Requires m >= d+1 >= 3, t in [1, m], and even degree sum.
Multigraph realize_near_regular(int m, int d, int t);

/// Output of the admissible-sequence bipartite realization. The multigraph
/// lives on vertices {0, .., m-1} identified with sorted positions 1..m;
/// split_index is the even 1-based prefix length p. split_index == m means
/// the paired region covers the whole sequence and position p+1 is absent.
struct BipartiteRealization {
    Multigraph graph;
    int split_index = 0;

    bool has_tail_vertex() const { return split_index < graph.vertex_count(); }
};

/// Builds the bipartite layer L and even split index p for an admissible
/// sequence. Deterministic: repeated calls return the identical realization.
/// Throws std::domain_error when the sequence is not admissible, and also for
/// the degenerate admissible sequences (such as (3,3,3,1)) where no split
/// index can satisfy the required properties: the pairing and saturation
/// constraints force the boundary demand outside [0, d_{p+1}] for every even
/// p, so no conforming layer exists at all.
BipartiteRealization realize_admissible_bipartite(const DegreeSequence& seq);

/// Per-property verification of a bipartite realization against its sequence.
struct RealizationCheck {
    bool degree_pairing = false;     // paired prefix degrees: d_L(v_i) = d_i - d_{i+1}, d_L(v_{i+1}) = 0
    bool tail_degrees = false;       // d_L(v_{p+1}) <= d_{p+1}; d_L(v_i) = d_i beyond
    bool bipartition = false;        // every edge crosses {v_1..v_p} / {v_{p+1}..v_m}
    bool forest_shape = false;       // simple support is a forest, <= 2 non-leaf neighbors per vertex
    bool left_intervals = false;     // odd-prefix neighborhoods are consecutive and anti-ordered
    bool right_order = false;        // tail neighborhoods are anti-ordered across indices
    std::string detail;              // first failure witness, empty when all pass

    bool all() const {
        return degree_pairing && tail_degrees && bipartition && forest_shape &&
               left_intervals && right_order;
    }
};

RealizationCheck verify_bipartite_realization(const DegreeSequence& seq,
                                              const BipartiteRealization& r);

}  // namespace ofc
