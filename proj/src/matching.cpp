#include "ofc/matching.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <limits>
#include <random>

namespace ofc {

namespace {
constexpr int kInf = std::numeric_limits<int>::max();
}

BipartiteMatching hopcroft_karp(int nl, int nr, const std::vector<std::vector<int>>& adj) {
    BipartiteMatching m;
    m.left_match.assign(nl, -1);
    m.right_match.assign(nr, -1);
    std::vector<int> dist(nl);

    auto bfs = [&]() {
        std::deque<int> q;
        for (int u = 0; u < nl; ++u) {
            if (m.left_match[u] < 0) {
                dist[u] = 0;
                q.push_back(u);
            } else {
                dist[u] = kInf;
            }
        }
        bool found = false;
        while (!q.empty()) {
            int u = q.front();
            q.pop_front();
            for (int v : adj[u]) {
                int w = m.right_match[v];
                if (w < 0) {
                    found = true;
                } else if (dist[w] == kInf) {
                    dist[w] = dist[u] + 1;
                    q.push_back(w);
                }
            }
        }
        return found;
    };

    std::vector<size_t> it(nl);
    std::function<bool(int)> dfs = [&](int u) -> bool {
        for (; it[u] < adj[u].size(); ++it[u]) {
            int v = adj[u][it[u]];
            int w = m.right_match[v];
            if (w < 0 || (dist[w] == dist[u] + 1 && dfs(w))) {
                m.left_match[u] = v;
                m.right_match[v] = u;
                return true;
            }
        }
        dist[u] = kInf;
        return false;
    };

    while (bfs()) {
        std::fill(it.begin(), it.end(), 0);
        for (int u = 0; u < nl; ++u)
            if (m.left_match[u] < 0 && dfs(u)) ++m.size;
    }
    return m;
}

std::optional<HallWitness> hall_witness(int nl, int nr, const std::vector<std::vector<int>>& adj,
                                        const BipartiteMatching& m) {
    int start = -1;
    for (int u = 0; u < nl; ++u)
        if (m.left_match[u] < 0) {
            start = u;
            break;
        }
    if (start < 0) return std::nullopt;

    std::vector<char> seen_l(nl, 0), seen_r(nr, 0);
    std::deque<int> q{start};
    seen_l[start] = 1;
    while (!q.empty()) {
        int u = q.front();
        q.pop_front();
        for (int v : adj[u]) {
            if (seen_r[v]) continue;
            seen_r[v] = 1;
            int w = m.right_match[v];
            if (w >= 0 && !seen_l[w]) {
                seen_l[w] = 1;
                q.push_back(w);
            }
        }
    }
    HallWitness wit;
    for (int u = 0; u < nl; ++u)
        if (seen_l[u]) wit.left_set.push_back(u);
    for (int v = 0; v < nr; ++v)
        if (seen_r[v]) wit.right_neighborhood.push_back(v);
    return wit;
}

std::vector<int> blossom_maximum_matching(int n, const std::vector<std::vector<int>>& adj,
                                          const std::vector<int>* seed) {
    std::vector<int> match(n, -1);
    if (seed) {
        match = *seed;
        for (int v = 0; v < n; ++v)
            if (match[v] >= 0 && match[match[v]] != v)
                throw std::invalid_argument("seed matching is inconsistent");
    }
    std::vector<int> parent(n), base(n);
    std::vector<char> used(n), blossom(n);
    std::deque<int> q;

    auto lca = [&](int a, int b) {
        std::vector<char> used_path(n, 0);
        int x = a;
        while (true) {
            x = base[x];
            used_path[x] = 1;
            if (match[x] < 0) break;
            x = parent[match[x]];
        }
        int y = b;
        while (true) {
            y = base[y];
            if (used_path[y]) return y;
            y = parent[match[y]];
        }
    };

    auto mark_path = [&](int v, int b, int child) {
        while (base[v] != b) {
            blossom[base[v]] = 1;
            blossom[base[match[v]]] = 1;
            parent[v] = child;
            child = match[v];
            v = parent[match[v]];
        }
    };

    auto find_path = [&](int root) -> int {
        std::fill(used.begin(), used.end(), 0);
        std::fill(parent.begin(), parent.end(), -1);
        for (int i = 0; i < n; ++i) base[i] = i;
        q.clear();
        q.push_back(root);
        used[root] = 1;
        while (!q.empty()) {
            int v = q.front();
            q.pop_front();
            for (int to : adj[v]) {
                if (base[v] == base[to] || match[v] == to) continue;
                if (to == root || (match[to] >= 0 && parent[match[to]] >= 0)) {
                    int cur_base = lca(v, to);
                    std::fill(blossom.begin(), blossom.end(), 0);
                    mark_path(v, cur_base, to);
                    mark_path(to, cur_base, v);
                    for (int i = 0; i < n; ++i) {
                        if (blossom[base[i]]) {
                            base[i] = cur_base;
                            if (!used[i]) {
                                used[i] = 1;
                                q.push_back(i);
                            }
                        }
                    }
                } else if (parent[to] < 0) {
                    parent[to] = v;
                    if (match[to] < 0) return to;
                    used[match[to]] = 1;
                    q.push_back(match[to]);
                }
            }
        }
        return -1;
    };

    for (int v = 0; v < n; ++v) {
        if (match[v] >= 0) continue;
        int u = find_path(v);
        if (u < 0) continue;
        while (u >= 0) {
            int pv = parent[u], ppv = match[pv];
            match[u] = pv;
            match[pv] = u;
            u = ppv;
        }
    }
    return match;
}

std::optional<std::vector<std::pair<VertexId, VertexId>>> perfect_matching(
    const Multigraph& g, unsigned long long shuffle_seed) {
    int n = g.vertex_count();
    if (n % 2 != 0) return std::nullopt;
    std::vector<std::vector<int>> adj(n);
    for (const auto& [pair, m] : g.pairs()) {
        adj[pair.first].push_back(pair.second);
        adj[pair.second].push_back(pair.first);
    }
    std::mt19937_64 rng(shuffle_seed);
    for (auto& lst : adj) std::shuffle(lst.begin(), lst.end(), rng);

    // greedy seed in shuffled order, then augment
    std::vector<int> seed(n, -1);
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    for (int v : order) {
        if (seed[v] >= 0) continue;
        for (int u : adj[v])
            if (seed[u] < 0) {
                seed[v] = u;
                seed[u] = v;
                break;
            }
    }
    auto match = blossom_maximum_matching(n, adj, &seed);
    std::vector<std::pair<VertexId, VertexId>> out;
    for (int v = 0; v < n; ++v) {
        if (match[v] < 0) return std::nullopt;
        if (v < match[v]) out.emplace_back(v, match[v]);
    }
    return out;
}

}  // namespace ofc
