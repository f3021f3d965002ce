#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ofc/degree_seq.hpp"
#include "ofc/multigraph.hpp"
#include "ofc/overfull.hpp"

namespace ofc {

/// One named inequality or structural check evaluated during a construction.
struct NamedCheck {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct AugmentedGraph {
    Multigraph graph;
    VertexSubset original_vertices;  // indices [0, n) of the input
    VertexSubset added_vertices;
    std::vector<NamedCheck> checks;

    bool all_checks_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

/// Supergraph construction for inputs far from regular: pads with a block of
/// new vertices wired as a circulant, then absorbs all deficiencies into the
/// block. Preserves the maximum degree and keeps the result simple.
AugmentedGraph build_case_a1_supergraph(const Multigraph& g, double eta);

/// Supergraph construction targeting a regular result on a near-minimal new
/// block. Requires deficiency_total > Delta + 1 and even Delta; when Delta is
/// odd and strip_matching_if_odd is set, a matching is removed first.
AugmentedGraph build_case_a2_supergraph(const Multigraph& g, double eta,
                                        bool strip_matching_if_odd = false);

/// Where an edge copy of the regularized graph came from.
enum class EdgeSource {
    Original,   // copy of an input edge
    Layer,      // bipartite deficiency layer
    Added,      // regularization additions
};

struct EdgeTag {
    EdgeSource source = EdgeSource::Added;
    VertexId orig_u = -1;  // endpoints in the input graph, for Original copies
    VertexId orig_v = -1;
};

using ProvenanceMap = std::map<std::pair<VertexId, VertexId>, std::vector<EdgeTag>>;

struct PipelineState {
    Multigraph original;
    int target_delta = 0;
    bool padded = false;             // an isolated vertex was appended

    Multigraph g0;
    Multigraph g1;
    Multigraph g2;
    Multigraph g3;

    // order[i] = vertex of the current stage at sorted position i+1;
    // positions are 1-based in the narration below.
    std::vector<VertexId> order;
    std::vector<int> base_deficiency;      // per sorted position, in g0
    int split_index = 0;                   // even p; == m means no tail vertex
    int g_index = 0;                       // last position with base deficiency > 0
    int h_index = 0;                       // last position inside U*
    VertexSubset U;                        // vertices with deficiency >= eta*n in g0
    VertexSubset U_star;                   // U plus the first sorted vertex
    double eta = 0.0;

    Multigraph layer;                      // bipartite layer on sorted positions
    ProvenanceMap provenance;              // tracks the current stage graph

    struct Identification {
        std::vector<VertexId> merged;  // old vertex ids collapsed together
        VertexId survivor;             // new vertex id
    };
    std::vector<Identification> identification_log;
    std::vector<VertexId> g0_to_g3;        // vertex map across identifications

    std::vector<NamedCheck> audits;

    int position_of(VertexId v) const;     // 1-based sorted position in the current stage
    VertexId at_position(int pos) const { return order.at(pos - 1); }
    int stage_size() const { return static_cast<int>(order.size()); }
    bool has_tail_vertex() const { return split_index < stage_size(); }
};

/// Even-order base graph: appends one isolated vertex when |V| is odd.
Multigraph build_g0(const Multigraph& g);

/// Sorts vertices by degree, realizes the deficiency sequence as a bipartite
/// layer, and overlays it. Throws std::domain_error when the deficiency
/// sequence is not admissible (an overfull obstruction upstream).
/// target_delta defaults to the max degree of g0.
PipelineState build_g1(const Multigraph& g, double eta, int target_delta = -1);

/// Collapses the triple at the split boundary while its outgoing edge count
/// stays below the degree target. No-op when split_index == m.
void vertex_identification(PipelineState& state);

/// Adds paired edges until every vertex reaches the degree target.
void edge_addition(PipelineState& state);

struct G3Verdict {
    bool regular = false;
    bool contains_g2 = false;
    bool overfull_checked = false;   // false when the cap truncated the search
    OverfullCertificate overfull;
    bool triple_bound_ok = true;     // e(G3[triple]) <= Delta when identifications ran
    std::string detail;

    bool clean() const {
        return regular && contains_g2 && (!overfull_checked || !overfull.found()) && triple_bound_ok;
    }
};

G3Verdict verify_g3(const PipelineState& state, int cap = 16);

/// Convenience: g0 through g3 in one call.
PipelineState regularize(const Multigraph& g, double eta, int target_delta = -1);

}  // namespace ofc
