#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ofc/augment.hpp"
#include "ofc/edge_color.hpp"
#include "ofc/multigraph.hpp"

namespace ofc {

struct Partition {
    VertexSubset A;
    VertexSubset B;
    std::vector<std::pair<VertexId, VertexId>> partner_pairs;
    int balance_tolerance = 0;  // bound the construction was asked to meet

    bool in_a(VertexId v) const { return A.contains(v); }
    /// max over v of |d^s(v, A) - d^s(v, B)| in g
    int max_imbalance(const Multigraph& g) const;
};

struct DecompositionParams {
    double eta = 0.0;
    int n_ref = 0;            // vertex count the eta-scaled constants refer to
    int delta = 0;            // degree target
    int delta_prime = 0;      // ceil(delta/2 + 5.3 eta n)
    int k = 0;                // delta_prime + ceil(sqrt(delta_prime))
    int boundary_pairs = 0;   // e_p
    int l1 = 0, l2 = 0, l = 0;
    int tolerance = 0;        // partition balance target

    // audit caps, paper defaults scaled to n_ref
    double missing_cap = 0.0;          // 9 eta n - 2 per color
    double residual_edges_cap = 0.0;   // 18 eta n^2 per side
    double residual_degree_cap = 0.0;  // 5 sqrt(eta) n
    int path_cap = 13;
    int per_pair_residual_cap = 4;
};

struct SpecialEdgeSets {
    std::vector<EdgeInstance> E1, E2, F1, F2, F21, F22;
    VertexId u_partner = -1;  // high-degree partner carrying E1/E2; -1 when unused
};

struct ResidualPair {
    Multigraph RA;
    Multigraph RB;
};

/// Failure record carried by analytic step failures.
struct StepFailure {
    std::string step;
    std::string condition;
    std::string diagnostics;
};

class StepFailureError : public std::runtime_error {
public:
    explicit StepFailureError(StepFailure f)
        : std::runtime_error(f.step + ": " + f.condition), failure(std::move(f)) {}
    StepFailure failure;
};

struct DecompositionTrace {
    std::vector<std::string> notes;
    std::map<std::string, long long> metrics;
    std::vector<NamedCheck> audits;
    bool rescue_used = false;

    void note(const std::string& s) { notes.push_back(s); }
    void bump(const std::string& key, long long by = 1) { metrics[key] += by; }
};

struct DecompositionResult {
    bool complete = false;
    EdgeColoring coloring;        // over g3; ignored-edge instances stay uncolored
    std::vector<EdgeInstance> ignored;  // the edges excluded from the coloring
    int k = 0;
    int l = 0;
    int colors_used = 0;
    std::optional<StepFailure> failure;
    DecompositionTrace trace;
    PipelineState state;
    Partition partition;

    /// Proper coloring of the input graph induced by restriction (empty when
    /// the run failed). Pairs are input-graph edge instances.
    std::vector<std::pair<EdgeInstance, int>> restricted_to_input;
};

/// Lemma-style balanced partition: |A| = |B|, partner pairs split, simple
/// degrees balanced within tolerance. Retries with fresh randomness; throws
/// resource_error carrying the best imbalance found when the budget runs out.
Partition random_balanced_partition(const Multigraph& g,
                                    const std::vector<std::pair<VertexId, VertexId>>& pairs,
                                    int tolerance, std::uint64_t seed, int retries = 5000);

/// Swaps partner pairs so the sorted-odd prefix sits in A, its mates in B,
/// and the boundary-range vertices sit in B. Only pairs are swapped; the
/// balance degradation is recorded on the result.
Partition partition_modification(const Partition& p, const PipelineState& state);

/// Partner pairs for the balanced partition: deficient-prefix pairs, the
/// boundary block paired against distinct full vertices, and the remaining
/// deficient range paired consecutively.
std::vector<std::pair<VertexId, VertexId>> build_partner_pairs(const PipelineState& state);

/// Copies the regularization stacked on a pair (layer plus paired additions),
/// read from provenance; pairs without provenance count whole.
int constructed_multiplicity(const PipelineState& state, VertexId a, VertexId b);

/// Derived integers for the decomposition; throws std::invalid_argument when
/// eta * n < 1.
DecompositionParams compute_params(const PipelineState& state, double eta);

SpecialEdgeSets select_special_edge_sets(const PipelineState& state, const Partition& part,
                                         const DecompositionParams& params);

struct GabResult {
    Multigraph graph;
    std::vector<NamedCheck> audits;
};

/// The balanced core: inside-A edges minus E1, inside-B edges minus
/// (F1, F21, F22), plus the selected cross edges (E2 and half of the
/// multiplicity layer toward boundary vertices).
GabResult form_gab(const PipelineState& state, const Partition& part, const SpecialEdgeSets& sets);

/// Equalized proper coloring of the core with k colors (k_override > 0 takes
/// precedence over params.k).
EdgeColoring color_gab(const Multigraph& gab, const DecompositionParams& params,
                       int k_override = -1, std::uint64_t seed = 0);

struct Step3Result {
    EdgeColoring coloring;  // over g3, classes 1..k are perfect matchings
    ResidualPair residual;
    std::vector<EdgeInstance> residual_a_instances;
    std::vector<EdgeInstance> residual_b_instances;
    DecompositionTrace trace;
};

/// Extends every core color class into a perfect matching by alternating-path
/// exchanges over the uncolored cross edges. Throws StepFailureError when a
/// pair admits no path and rescue is off.
Step3Result extend_to_one_factors(const PipelineState& state, const Partition& part,
                                  const DecompositionParams& params, const SpecialEdgeSets& sets,
                                  const EdgeColoring& phi0, std::uint64_t seed, bool rescue);

struct Step4Result {
    EdgeColoring coloring;  // classes 1..k+l are perfect matchings
    int l1 = 0, l2 = 0;
    DecompositionTrace trace;
};

/// Colors the residual edges with l = l1 + l2 fresh colors and extends each
/// new class into a perfect matching through cross-edge matchings.
/// core_colors is the number of classes already extended (the palette of the
/// incoming coloring may be wider than the classes actually used).
Step4Result color_residual(const PipelineState& state, const Partition& part,
                           const DecompositionParams& params, const SpecialEdgeSets& sets,
                           const EdgeColoring& phi2, int core_colors, bool rescue);

struct Step5Result {
    EdgeColoring coloring;  // total over g3 minus the ignored edges
    int tail_colors = 0;
    DecompositionTrace trace;
};

/// Colors the remaining regular leftover (cross edges plus E1) with the last
/// delta - k - l colors via a bipartite or nearly-bipartite finish.
Step5Result finish_nearly_bipartite(const PipelineState& state, const Partition& part,
                                    const DecompositionParams& params, const SpecialEdgeSets& sets,
                                    const EdgeColoring& phi4, int colors_used_so_far);

/// Full pipeline: regularize, partition, core coloring, one-factor extension,
/// residual coloring, finish. Never throws for analytic reasons; failures are
/// returned in the result. target_delta < 0 means the input max degree.
DecompositionResult run_pipeline(const Multigraph& g, double eta, std::uint64_t seed, bool rescue,
                                 int target_delta = -1);

/// Verifies a completed result: totality away from ignored edges, properness,
/// exact color count, and that classes 1..k+l are perfect matchings of g3.
/// Returns an empty string when valid, else the first violation.
std::string verify_decomposition(const DecompositionResult& r);

}  // namespace ofc
