#include "ofc/overfull.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>

namespace ofc {

bool is_overfull(const Multigraph& g) {
    if (g.vertex_count() == 0) throw std::invalid_argument("overfull test on empty graph");
    return g.edge_count() > static_cast<long long>(g.max_degree()) * (g.vertex_count() / 2);
}

bool OverfullCertificate::arithmetic_ok(const Multigraph& g) const {
    if (mode != OverfullMode::Found) return true;
    if (subset.size() < 3 || subset.size() % 2 == 0) return false;
    long long e = g.edges_within(subset);
    long long thr = static_cast<long long>(g.max_degree()) * (subset.size() / 2);
    return e == edge_count && thr == threshold && e > thr;
}

OverfullCertificate find_overfull_against(const Multigraph& g, int target_delta, int cap) {
    OverfullCertificate cert;
    if (g.vertex_count() < 3) {
        cert.mode = OverfullMode::AbsentParity;
        return cert;
    }
    if (target_delta == g.max_degree() && min_degree_no_overfull(g)) {
        cert.mode = OverfullMode::AbsentMinDegreeLemma;
        return cert;
    }
    auto witness = exhaustive_overfull_subset(g, target_delta, cap);
    if (!witness) {
        cert.mode = OverfullMode::AbsentExhaustive;
        return cert;
    }
    cert.mode = OverfullMode::Found;
    cert.subset = *witness;
    cert.edge_count = g.edges_within(*witness);
    cert.threshold = static_cast<long long>(target_delta) * (witness->size() / 2);
    return cert;
}

OverfullCertificate find_delta_overfull_subgraph(const Multigraph& g, int cap) {
    if (g.vertex_count() == 0) throw std::invalid_argument("overfull search on empty graph");
    return find_overfull_against(g, g.max_degree(), cap);
}

bool min_degree_no_overfull(const Multigraph& g) {
    int n = g.vertex_count();
    if (n == 0 || n % 2 != 0) return false;
    if (!g.is_simple()) return false;
    int dmin = g.min_degree();
    if (2 * dmin <= n) return false;
    int count = 0;
    for (VertexId v = 0; v < n; ++v)
        if (g.degree(v) == dmin) ++count;
    return count >= 2;
}

ValCheck val_check(const Multigraph& g, VertexId x, VertexId y) {
    if (!g.is_simple()) throw std::invalid_argument("adjacency check requires a simple graph");
    if (g.multiplicity(x, y) == 0) throw std::invalid_argument("edge is not present");
    int delta = g.max_degree();
    ValCheck out;
    out.degree_sum_ok = g.degree(x) + g.degree(y) >= delta + 2;

    auto count_heavy = [&](VertexId a, VertexId skip) {
        int c = 0;
        for (VertexId u : g.neighbors(a))
            if (u != skip && g.degree(u) == delta) ++c;
        return c;
    };
    out.required_at_x = delta - g.degree(y) + 1;
    out.found_at_x = count_heavy(x, y);
    out.x_neighbors_ok = out.found_at_x >= out.required_at_x;
    out.required_at_y = delta - g.degree(x) + 1;
    out.found_at_y = count_heavy(y, x);
    out.y_neighbors_ok = out.found_at_y >= out.required_at_y;
    return out;
}

namespace {

bool connected(const Multigraph& g) {
    int n = g.vertex_count();
    if (n <= 1) return true;
    std::vector<char> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int cnt = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int u : g.neighbors(v))
            if (!seen[u]) {
                seen[u] = 1;
                ++cnt;
                stack.push_back(u);
            }
    }
    return cnt == n;
}

}  // namespace

bool is_edge_chromatic_critical(const Multigraph& g, long long node_cap) {
    if (g.edge_count() == 0) return false;
    if (!connected(g)) return false;
    int delta = g.max_degree();
    auto full = chromatic_index_exact(g, node_cap);
    if (full.chi != delta + 1) return false;
    for (const auto& [pair, m] : g.pairs()) {
        Multigraph h = g;
        h.remove_edge(pair.first, pair.second, 1);
        auto sub = chromatic_index_exact(h, node_cap);
        if (sub.chi > delta) return false;
    }
    return true;
}

CriterionVerdict critical_overfull_bound(const Multigraph& g) {
    CriterionVerdict out;
    long long n = g.vertex_count();
    long long delta = g.max_degree();
    long long dmin = g.min_degree();
    out.hypothesis_holds = 4 * delta - 7 * dmin >= 3 * n - 17;
    out.conclusion_holds = out.hypothesis_holds ? is_overfull(g) : false;
    std::ostringstream os;
    os << "4*Delta - 7*delta = " << 4 * delta - 7 * dmin << ", 3n - 17 = " << 3 * n - 17;
    out.detail = os.str();
    return out;
}

CriterionVerdict average_degree_criterion(const Multigraph& g, bool assume_critical) {
    if (!assume_critical && !is_edge_chromatic_critical(g))
        throw std::domain_error("graph is not edge-chromatic critical");
    CriterionVerdict out;
    long long n = g.vertex_count();
    long long delta = g.max_degree();
    out.hypothesis_holds = true;
    out.conclusion_holds = 2 * g.edge_count() >= n * (delta - 1) + 3;
    std::ostringstream os;
    os << "2e = " << 2 * g.edge_count() << ", n(Delta-1)+3 = " << n * (delta - 1) + 3;
    out.detail = os.str();
    return out;
}

std::string ExpanderReport::summary() const {
    std::ostringstream os;
    if (pass)
        os << (exhaustive ? "expander (exhaustive over " : "no violation found in ")
           << sets_checked << (exhaustive ? " sets)" : " sampled sets");
    else {
        os << "violation: |S| = " << violating_set.size() << ", |RN(S)| = " << robust_neighborhood;
    }
    return os.str();
}

namespace {

bool expander_set_ok(const Multigraph& g, const std::vector<VertexId>& set_members, double nu,
                     ExpanderReport& report) {
    int n = g.vertex_count();
    VertexSubset s;
    s.members = set_members;
    long long rn = 0;
    double need = nu * n;
    for (VertexId v = 0; v < n; ++v) {
        int cnt = 0;
        for (const auto& [u, m] : g.adjacency(v))
            if (s.contains(u)) ++cnt;
        if (cnt + 1e-9 >= need) ++rn;
    }
    if (rn + 1e-9 < s.size() + need) {
        report.pass = false;
        report.violating_set = s;
        report.robust_neighborhood = rn;
        return false;
    }
    return true;
}

}  // namespace

ExpanderReport robust_expander_check(const Multigraph& g, double nu, double tau,
                                     int exhaustive_cap, int samples_per_size,
                                     unsigned long long seed) {
    if (nu <= 0 || nu > tau || tau >= 1)
        throw std::invalid_argument("need 0 < nu <= tau < 1");
    int n = g.vertex_count();
    double lo = tau * n, hi = (1.0 - tau) * n;
    ExpanderReport report;
    if (n <= exhaustive_cap && n <= 30) {
        report.exhaustive = true;
        for (std::uint32_t x = 1; x < (1u << n); ++x) {
            int sz = std::popcount(x);
            if (sz + 1e-9 < lo || sz - 1e-9 > hi) continue;
            std::vector<VertexId> members;
            for (int v = 0; v < n; ++v)
                if (x & (1u << v)) members.push_back(v);
            ++report.sets_checked;
            if (!expander_set_ok(g, members, nu, report)) return report;
        }
        return report;
    }
    report.exhaustive = false;
    std::mt19937_64 rng(seed);
    std::vector<VertexId> all(n);
    for (int v = 0; v < n; ++v) all[v] = v;
    int smin = static_cast<int>(std::ceil(lo - 1e-9));
    int smax = static_cast<int>(std::floor(hi + 1e-9));
    for (int sz = std::max(1, smin); sz <= smax; ++sz) {
        for (int it = 0; it < samples_per_size; ++it) {
            std::shuffle(all.begin(), all.end(), rng);
            std::vector<VertexId> members(all.begin(), all.begin() + sz);
            std::sort(members.begin(), members.end());
            ++report.sets_checked;
            if (!expander_set_ok(g, members, nu, report)) return report;
        }
    }
    return report;
}

ConjectureReport conjecture_verdict(const Multigraph& g, double epsilon, long long node_cap,
                                    int subset_cap) {
    ConjectureReport rep;
    rep.n = g.vertex_count();
    rep.delta = g.max_degree();
    rep.epsilon = epsilon;
    auto exact = chromatic_index_exact(g, node_cap);
    rep.chi = exact.chi;
    rep.overfull = find_delta_overfull_subgraph(g, subset_cap);
    rep.chi_equals_delta = rep.chi == rep.delta;
    rep.biconditional_holds = rep.chi_equals_delta == !rep.overfull.found();
    rep.hypothesis_third = 3 * rep.delta > rep.n;
    rep.hypothesis_epsilon = rep.delta + 1e-9 >= (1.0 - epsilon) * rep.n;
    return rep;
}

Multigraph petersen_minus_vertex() {
    // Kneser graph K(5,2) with the last vertex removed
    std::vector<std::pair<int, int>> labels;
    for (int a = 0; a < 5; ++a)
        for (int b = a + 1; b < 5; ++b) labels.emplace_back(a, b);
    Multigraph g(9);
    for (int i = 0; i < 9; ++i)
        for (int j = i + 1; j < 9; ++j) {
            auto [a, b] = labels[i];
            auto [c, d] = labels[j];
            if (a != c && a != d && b != c && b != d) g.add_edge(i, j, 1);
        }
    return g;
}

}  // namespace ofc
