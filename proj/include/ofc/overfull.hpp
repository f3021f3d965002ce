#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ofc/edge_color.hpp"
#include "ofc/multigraph.hpp"

namespace ofc {

/// Whole-graph test: e(G) > Delta(G) * floor(|V|/2).
bool is_overfull(const Multigraph& g);

enum class OverfullMode {
    Found,
    AbsentExhaustive,
    AbsentMinDegreeLemma,
    AbsentParity,  // fewer than 3 vertices: no eligible odd subset
};

struct OverfullCertificate {
    OverfullMode mode = OverfullMode::AbsentParity;
    VertexSubset subset;
    long long edge_count = 0;
    long long threshold = 0;

    bool found() const { return mode == OverfullMode::Found; }
    /// Re-check the defining inequality from the stored numbers.
    bool arithmetic_ok(const Multigraph& g) const;
};

/// Witness X with e(G[X]) > Delta * floor(|X|/2), or certified absence.
/// Exhaustive search over induced odd subsets; |V| <= cap or resource_error.
OverfullCertificate find_delta_overfull_subgraph(const Multigraph& g, int cap = 16);

/// Same search against an explicit degree target instead of Delta(g).
OverfullCertificate find_overfull_against(const Multigraph& g, int target_delta, int cap = 16);

/// Simple graph, even order, min degree > n/2, at least two minimum-degree
/// vertices: certified absence without search. Returns false when any
/// hypothesis fails (which certifies nothing).
bool min_degree_no_overfull(const Multigraph& g);

struct ValCheck {
    bool degree_sum_ok = false;     // d(x) + d(y) >= Delta + 2
    bool x_neighbors_ok = false;    // x has >= Delta - d(y) + 1 degree-Delta neighbors off y
    bool y_neighbors_ok = false;    // symmetric
    int required_at_x = 0;
    int found_at_x = 0;
    int required_at_y = 0;
    int found_at_y = 0;

    bool pass() const { return degree_sum_ok && x_neighbors_ok && y_neighbors_ok; }
};

/// Adjacency conditions every critical edge must satisfy; failure certifies
/// the edge is not critical. Requires a simple graph and an existing edge.
ValCheck val_check(const Multigraph& g, VertexId x, VertexId y);

/// chi'(g) = Delta + 1, g connected, and chi'(g - e) <= Delta for every edge.
bool is_edge_chromatic_critical(const Multigraph& g, long long node_cap = 200'000'000);

struct CriterionVerdict {
    bool hypothesis_holds = false;
    bool conclusion_holds = false;
    bool pass() const { return !hypothesis_holds || conclusion_holds; }
    std::string detail;
};

/// For critical g: 4*Delta - 7*delta >= 3n - 17 forces overfullness.
CriterionVerdict critical_overfull_bound(const Multigraph& g);

/// For critical g: average degree at least Delta - 1 + 3/n, evaluated as
/// 2 e(G) >= n (Delta - 1) + 3 in exact integers.
CriterionVerdict average_degree_criterion(const Multigraph& g, bool assume_critical = false);

struct ExpanderReport {
    bool pass = true;
    bool exhaustive = true;
    long long sets_checked = 0;
    VertexSubset violating_set;     // when !pass
    long long robust_neighborhood = 0;

    std::string summary() const;
};

/// Robust (nu, tau)-expander check over the simple neighborhoods: every S
/// with tau*n <= |S| <= (1-tau)*n must satisfy |RN(S)| >= |S| + nu*n where
/// RN(S) = vertices with at least nu*n neighbors in S. Exhaustive for
/// |V| <= exhaustive_cap, otherwise seeded sampling (reports, never proves).
ExpanderReport robust_expander_check(const Multigraph& g, double nu, double tau,
                                     int exhaustive_cap = 18, int samples_per_size = 64,
                                     unsigned long long seed = 1);

struct ConjectureReport {
    int n = 0;
    int delta = 0;
    int chi = 0;
    OverfullCertificate overfull;
    bool chi_equals_delta = false;
    bool biconditional_holds = false;   // (chi == Delta) <=> no overfull subgraph
    bool hypothesis_third = false;      // Delta > n/3
    bool hypothesis_epsilon = false;    // Delta >= (1 - eps) n
    double epsilon = 0.0;
};

/// Evaluates both sides of the overfull biconditional independently.
ConjectureReport conjecture_verdict(const Multigraph& g, double epsilon,
                                    long long node_cap = 200'000'000, int subset_cap = 16);

/// The Petersen graph with one vertex deleted: 9 vertices, 12 edges.
Multigraph petersen_minus_vertex();

}  // namespace ofc
