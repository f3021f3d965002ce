#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace ofc {

using VertexId = int;

/// Error raised when an operation exceeds its configured search cap.
class resource_error : public std::runtime_error {
public:
    explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

/// A sorted, duplicate-free set of vertex indices.
struct VertexSubset {
    std::vector<VertexId> members;

    VertexSubset() = default;
    explicit VertexSubset(std::vector<VertexId> vs);

    int size() const { return static_cast<int>(members.size()); }
    bool empty() const { return members.empty(); }
    bool contains(VertexId v) const;
    bool disjoint_with(const VertexSubset& other) const;
    void validate_range(int vertex_count) const;
};

/// One parallel copy of an edge: pair (u,v) with u < v plus a copy index.
struct EdgeInstance {
    VertexId u = 0;
    VertexId v = 0;
    int copy = 0;

    friend bool operator==(const EdgeInstance&, const EdgeInstance&) = default;
    friend auto operator<=>(const EdgeInstance&, const EdgeInstance&) = default;
};

/// Loopless undirected multigraph over dense vertex indices [0, n).
/// Edges are stored sparsely as unordered-pair -> multiplicity; per-vertex
/// degrees are maintained incrementally.
class Multigraph {
public:
    Multigraph() = default;
    explicit Multigraph(int vertex_count);

    static Multigraph from_pairs(int vertex_count,
                                 const std::vector<std::tuple<VertexId, VertexId, int>>& pairs);

    int vertex_count() const { return n_; }
    long long edge_count() const { return edge_total_; }
    int distinct_pair_count() const { return static_cast<int>(pairs_.size()); }

    void add_vertex() { ++n_; adj_.emplace_back(); degree_.push_back(0); }
    void add_edge(VertexId u, VertexId v, int mult = 1);
    int remove_edge(VertexId u, VertexId v, int count = 1);
    int multiplicity(VertexId u, VertexId v) const;

    int degree(VertexId v) const;
    int simple_degree(VertexId v) const;
    int vertex_multiplicity(VertexId v) const;  // max multiplicity over pairs at v
    int max_degree() const;
    int min_degree() const;
    int max_multiplicity() const;
    int min_simple_degree() const;

    bool is_simple() const;
    bool is_regular() const;

    /// deficiency(v) = max_degree() - degree(v)
    int deficiency(VertexId v) const;
    long long deficiency_total() const;

    const std::map<std::pair<VertexId, VertexId>, int>& pairs() const { return pairs_; }
    const std::map<VertexId, int>& adjacency(VertexId v) const;
    std::vector<VertexId> neighbors(VertexId v) const;

    /// Canonical flat list of edge instances, ordered by (u, v, copy).
    std::vector<EdgeInstance> instances() const;

    long long edges_within(const VertexSubset& s) const;
    long long edges_between(const VertexSubset& a, const VertexSubset& b) const;
    long long edges_from_vertex_to(VertexId v, const VertexSubset& s) const;

    /// Induced subgraph on s; second component maps new index -> old index.
    std::pair<Multigraph, std::vector<VertexId>> induced_subgraph(const VertexSubset& s) const;

    /// Keeps only edges with one end in a and the other in b (a, b disjoint).
    Multigraph bipartite_subgraph(const VertexSubset& a, const VertexSubset& b) const;

    Multigraph underlying_simple() const;

    /// Handshake audit: sum of degrees equals twice the instance count.
    bool handshake_ok() const;

    void check_vertex(VertexId v) const;

private:
    int n_ = 0;
    long long edge_total_ = 0;
    std::map<std::pair<VertexId, VertexId>, int> pairs_;
    std::vector<std::map<VertexId, int>> adj_;
    std::vector<int> degree_;
};

struct DegreeProfile {
    int degree = 0;
    int simple_degree = 0;
    int vertex_multiplicity = 0;
};

/// (d_G(v), d_G^s(v), mu_G(v)) in one call.
DegreeProfile degree_profile(const Multigraph& g, VertexId v);

/// Per-vertex deficiencies (max_degree - degree) plus their sum.
std::pair<std::vector<int>, long long> deficiency_profile(const Multigraph& g);

}  // namespace ofc
