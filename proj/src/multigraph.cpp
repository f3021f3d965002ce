#include "ofc/multigraph.hpp"

#include <algorithm>

namespace ofc {

VertexSubset::VertexSubset(std::vector<VertexId> vs) : members(std::move(vs)) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
}

bool VertexSubset::contains(VertexId v) const {
    return std::binary_search(members.begin(), members.end(), v);
}

bool VertexSubset::disjoint_with(const VertexSubset& other) const {
    for (VertexId v : members)
        if (other.contains(v)) return false;
    return true;
}

void VertexSubset::validate_range(int vertex_count) const {
    for (VertexId v : members)
        if (v < 0 || v >= vertex_count)
            throw std::invalid_argument("vertex subset member out of range: " + std::to_string(v));
}

Multigraph::Multigraph(int vertex_count) : n_(vertex_count) {
    if (vertex_count < 0) throw std::invalid_argument("negative vertex count");
    adj_.resize(n_);
    degree_.assign(n_, 0);
}

Multigraph Multigraph::from_pairs(int vertex_count,
                                  const std::vector<std::tuple<VertexId, VertexId, int>>& pairs) {
    Multigraph g(vertex_count);
    for (const auto& [u, v, m] : pairs) g.add_edge(u, v, m);
    return g;
}

void Multigraph::check_vertex(VertexId v) const {
    if (v < 0 || v >= n_)
        throw std::invalid_argument("vertex index out of range: " + std::to_string(v));
}

void Multigraph::add_edge(VertexId u, VertexId v, int mult) {
    check_vertex(u);
    check_vertex(v);
    if (u == v) throw std::invalid_argument("loops are not allowed");
    if (mult <= 0) throw std::invalid_argument("multiplicity must be positive");
    auto key = std::minmax(u, v);
    pairs_[{key.first, key.second}] += mult;
    adj_[u][v] += mult;
    adj_[v][u] += mult;
    degree_[u] += mult;
    degree_[v] += mult;
    edge_total_ += mult;
}

int Multigraph::remove_edge(VertexId u, VertexId v, int count) {
    check_vertex(u);
    check_vertex(v);
    if (count <= 0) throw std::invalid_argument("removal count must be positive");
    auto key = std::minmax(u, v);
    auto it = pairs_.find({key.first, key.second});
    if (it == pairs_.end()) return 0;
    int removed = std::min(count, it->second);
    it->second -= removed;
    if (it->second == 0) pairs_.erase(it);
    adj_[u][v] -= removed;
    if (adj_[u][v] == 0) adj_[u].erase(v);
    adj_[v][u] -= removed;
    if (adj_[v][u] == 0) adj_[v].erase(u);
    degree_[u] -= removed;
    degree_[v] -= removed;
    edge_total_ -= removed;
    return removed;
}

int Multigraph::multiplicity(VertexId u, VertexId v) const {
    check_vertex(u);
    check_vertex(v);
    if (u == v) return 0;
    auto key = std::minmax(u, v);
    auto it = pairs_.find({key.first, key.second});
    return it == pairs_.end() ? 0 : it->second;
}

int Multigraph::degree(VertexId v) const {
    check_vertex(v);
    return degree_[v];
}

int Multigraph::simple_degree(VertexId v) const {
    check_vertex(v);
    return static_cast<int>(adj_[v].size());
}

int Multigraph::vertex_multiplicity(VertexId v) const {
    check_vertex(v);
    int best = 0;
    for (const auto& [u, m] : adj_[v]) best = std::max(best, m);
    return best;
}

int Multigraph::max_degree() const {
    int best = 0;
    for (int d : degree_) best = std::max(best, d);
    return best;
}

int Multigraph::min_degree() const {
    if (n_ == 0) return 0;
    int best = degree_[0];
    for (int d : degree_) best = std::min(best, d);
    return best;
}

int Multigraph::max_multiplicity() const {
    int best = 0;
    for (const auto& [pair, m] : pairs_) best = std::max(best, m);
    return best;
}

int Multigraph::min_simple_degree() const {
    if (n_ == 0) return 0;
    int best = simple_degree(0);
    for (VertexId v = 1; v < n_; ++v) best = std::min(best, simple_degree(v));
    return best;
}

bool Multigraph::is_simple() const { return max_multiplicity() <= 1; }

bool Multigraph::is_regular() const {
    if (n_ == 0) return true;
    for (int d : degree_)
        if (d != degree_[0]) return false;
    return true;
}

int Multigraph::deficiency(VertexId v) const {
    if (n_ == 0) throw std::invalid_argument("deficiency of empty graph");
    return max_degree() - degree(v);
}

long long Multigraph::deficiency_total() const {
    if (n_ == 0) throw std::invalid_argument("deficiency of empty graph");
    long long delta = max_degree();
    return delta * n_ - 2 * edge_total_;
}

const std::map<VertexId, int>& Multigraph::adjacency(VertexId v) const {
    check_vertex(v);
    return adj_[v];
}

std::vector<VertexId> Multigraph::neighbors(VertexId v) const {
    check_vertex(v);
    std::vector<VertexId> out;
    out.reserve(adj_[v].size());
    for (const auto& [u, m] : adj_[v]) out.push_back(u);
    return out;
}

std::vector<EdgeInstance> Multigraph::instances() const {
    std::vector<EdgeInstance> out;
    out.reserve(static_cast<size_t>(edge_total_));
    for (const auto& [pair, m] : pairs_)
        for (int c = 0; c < m; ++c) out.push_back({pair.first, pair.second, c});
    return out;
}

long long Multigraph::edges_within(const VertexSubset& s) const {
    s.validate_range(n_);
    long long total = 0;
    for (const auto& [pair, m] : pairs_)
        if (s.contains(pair.first) && s.contains(pair.second)) total += m;
    return total;
}

long long Multigraph::edges_between(const VertexSubset& a, const VertexSubset& b) const {
    a.validate_range(n_);
    b.validate_range(n_);
    if (!a.disjoint_with(b)) throw std::invalid_argument("vertex sets must be disjoint");
    long long total = 0;
    for (const auto& [pair, m] : pairs_) {
        bool ua = a.contains(pair.first), ub = b.contains(pair.first);
        bool va = a.contains(pair.second), vb = b.contains(pair.second);
        if ((ua && vb) || (ub && va)) total += m;
    }
    return total;
}

long long Multigraph::edges_from_vertex_to(VertexId v, const VertexSubset& s) const {
    check_vertex(v);
    long long total = 0;
    for (const auto& [u, m] : adj_[v])
        if (u != v && s.contains(u)) total += m;
    return total;
}

std::pair<Multigraph, std::vector<VertexId>> Multigraph::induced_subgraph(const VertexSubset& s) const {
    s.validate_range(n_);
    std::vector<VertexId> new_to_old = s.members;
    std::vector<int> old_to_new(n_, -1);
    for (int i = 0; i < static_cast<int>(new_to_old.size()); ++i) old_to_new[new_to_old[i]] = i;
    Multigraph sub(static_cast<int>(new_to_old.size()));
    for (const auto& [pair, m] : pairs_) {
        int a = old_to_new[pair.first], b = old_to_new[pair.second];
        if (a >= 0 && b >= 0) sub.add_edge(a, b, m);
    }
    return {std::move(sub), std::move(new_to_old)};
}

Multigraph Multigraph::bipartite_subgraph(const VertexSubset& a, const VertexSubset& b) const {
    a.validate_range(n_);
    b.validate_range(n_);
    if (!a.disjoint_with(b)) throw std::invalid_argument("vertex sets must be disjoint");
    Multigraph out(n_);
    for (const auto& [pair, m] : pairs_) {
        bool cross = (a.contains(pair.first) && b.contains(pair.second)) ||
                     (b.contains(pair.first) && a.contains(pair.second));
        if (cross) out.add_edge(pair.first, pair.second, m);
    }
    return out;
}

Multigraph Multigraph::underlying_simple() const {
    Multigraph out(n_);
    for (const auto& [pair, m] : pairs_) out.add_edge(pair.first, pair.second, 1);
    return out;
}

bool Multigraph::handshake_ok() const {
    long long sum = 0;
    for (int d : degree_) sum += d;
    return sum == 2 * edge_total_;
}

DegreeProfile degree_profile(const Multigraph& g, VertexId v) {
    g.check_vertex(v);
    return {g.degree(v), g.simple_degree(v), g.vertex_multiplicity(v)};
}

std::pair<std::vector<int>, long long> deficiency_profile(const Multigraph& g) {
    if (g.vertex_count() == 0) throw std::invalid_argument("deficiency of empty graph");
    int delta = g.max_degree();
    std::vector<int> def(g.vertex_count());
    long long total = 0;
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        def[v] = delta - g.degree(v);
        total += def[v];
    }
    return {std::move(def), total};
}

}  // namespace ofc
