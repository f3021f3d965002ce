#include "ofc/edge_color.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <deque>
#include <random>
#include <sstream>

namespace ofc {

EdgeColoring::EdgeColoring(const Multigraph& g, int palette) : palette_(palette) {
    if (palette < 0) throw std::invalid_argument("palette must be non-negative");
    instances_ = g.instances();
    colors_.assign(instances_.size(), kUncolored);
}

void EdgeColoring::set_palette(int k) {
    if (k < 0) throw std::invalid_argument("palette must be non-negative");
    for (int c : colors_)
        if (c > k) throw std::invalid_argument("palette below a used color");
    palette_ = k;
}

void EdgeColoring::set_color(int idx, int c) {
    if (idx < 0 || idx >= size()) throw std::invalid_argument("edge instance index out of range");
    if (c < 0 || c > palette_) throw std::invalid_argument("color out of palette range");
    colors_[idx] = c;
}

int EdgeColoring::index_of(const EdgeInstance& e) const {
    EdgeInstance key = e;
    if (key.u > key.v) std::swap(key.u, key.v);
    auto it = std::lower_bound(instances_.begin(), instances_.end(), key);
    if (it == instances_.end() || !(*it == key)) return -1;
    return static_cast<int>(it - instances_.begin());
}

int EdgeColoring::color_of(const EdgeInstance& e) const {
    int idx = index_of(e);
    if (idx < 0) throw std::invalid_argument("edge instance not present in coloring");
    return colors_[idx];
}

bool EdgeColoring::total() const {
    for (int c : colors_)
        if (c == kUncolored) return false;
    return true;
}

long long EdgeColoring::colored_count() const {
    long long n = 0;
    for (int c : colors_)
        if (c != kUncolored) ++n;
    return n;
}

std::vector<int> EdgeColoring::present_colors(int vertex_count, VertexId v) const {
    if (v < 0 || v >= vertex_count) throw std::invalid_argument("vertex out of range");
    std::vector<char> seen(palette_ + 1, 0);
    for (int i = 0; i < size(); ++i) {
        if (colors_[i] == kUncolored) continue;
        if (instances_[i].u == v || instances_[i].v == v) seen[colors_[i]] = 1;
    }
    std::vector<int> out;
    for (int c = 1; c <= palette_; ++c)
        if (seen[c]) out.push_back(c);
    return out;
}

std::vector<int> EdgeColoring::missing_colors(int vertex_count, VertexId v) const {
    auto present = present_colors(vertex_count, v);
    std::vector<char> seen(palette_ + 1, 0);
    for (int c : present) seen[c] = 1;
    std::vector<int> out;
    for (int c = 1; c <= palette_; ++c)
        if (!seen[c]) out.push_back(c);
    return out;
}

std::vector<long long> EdgeColoring::class_sizes() const {
    std::vector<long long> sizes(palette_ + 1, 0);
    for (int c : colors_) ++sizes[c];
    return sizes;
}

namespace {

void require_matching_instances(const Multigraph& g, const EdgeColoring& c) {
    auto mine = g.instances();
    if (mine.size() != c.instances().size() || !std::equal(mine.begin(), mine.end(), c.instances().begin()))
        throw std::invalid_argument("coloring references edge instances not matching the graph");
}

}  // namespace

ProperState check_proper(const Multigraph& g, const EdgeColoring& c) {
    require_matching_instances(g, c);
    ProperState st;
    // last instance index seen per (vertex, color)
    std::vector<std::vector<int>> seen(g.vertex_count(), std::vector<int>(c.palette() + 1, -1));
    for (int i = 0; i < c.size(); ++i) {
        int col = c.color(i);
        if (col == kUncolored) continue;
        for (VertexId v : {c.instances()[i].u, c.instances()[i].v}) {
            if (seen[v][col] >= 0) {
                st.ok = false;
                st.first = seen[v][col];
                st.second = i;
                std::ostringstream os;
                os << "color " << col << " repeated at vertex " << v;
                st.detail = os.str();
                return st;
            }
            seen[v][col] = i;
        }
    }
    return st;
}

ParityState parity_check(const Multigraph& g, const EdgeColoring& c) {
    require_matching_instances(g, c);
    if (!c.total()) throw std::invalid_argument("parity check requires a total coloring");
    if (c.palette() < g.max_degree())
        throw std::invalid_argument("parity check requires palette >= max degree");
    auto proper = check_proper(g, c);
    if (!proper.ok) throw std::invalid_argument("parity check requires a proper coloring");

    int n = g.vertex_count();
    std::vector<std::vector<char>> has(n, std::vector<char>(c.palette() + 1, 0));
    for (int i = 0; i < c.size(); ++i) {
        has[c.instances()[i].u][c.color(i)] = 1;
        has[c.instances()[i].v][c.color(i)] = 1;
    }
    ParityState st;
    for (int col = 1; col <= c.palette(); ++col) {
        long long missing = 0;
        for (int v = 0; v < n; ++v)
            if (!has[v][col]) ++missing;
        if ((missing - n) % 2 != 0) {
            st.ok = false;
            st.bad_color = col;
            st.missing_count = missing;
            return st;
        }
    }
    return st;
}

BipartitionResult find_bipartition(const Multigraph& g) {
    int n = g.vertex_count();
    BipartitionResult res;
    res.side.assign(n, -1);
    std::vector<int> parent(n, -1);
    for (int s = 0; s < n; ++s) {
        if (res.side[s] >= 0) continue;
        res.side[s] = 0;
        std::deque<int> q{s};
        while (!q.empty()) {
            int v = q.front();
            q.pop_front();
            for (int u : g.neighbors(v)) {
                if (res.side[u] < 0) {
                    res.side[u] = 1 - res.side[v];
                    parent[u] = v;
                    q.push_back(u);
                } else if (res.side[u] == res.side[v]) {
                    // walk both tree paths to the root to recover an odd cycle
                    std::vector<int> pv, pu;
                    for (int x = v; x >= 0; x = parent[x]) pv.push_back(x);
                    for (int x = u; x >= 0; x = parent[x]) pu.push_back(x);
                    std::reverse(pv.begin(), pv.end());
                    std::reverse(pu.begin(), pu.end());
                    size_t common = 0;
                    while (common + 1 < pv.size() && common + 1 < pu.size() &&
                           pv[common + 1] == pu[common + 1])
                        ++common;
                    std::vector<int> cycle(pv.begin() + common, pv.end());
                    for (size_t i = pu.size(); i-- > common + 1;) cycle.push_back(pu[i]);
                    res.bipartite = false;
                    res.odd_cycle = cycle;
                    return res;
                }
            }
        }
    }
    res.bipartite = true;
    return res;
}

// ---------------------------------------------------------------------------
// internal mutable coloring state shared by the constructive engines
// ---------------------------------------------------------------------------

namespace {

struct ColorState {
    int n = 0;
    int k = 0;
    std::vector<EdgeInstance> edges;
    std::vector<int> assign;               // 0 = uncolored
    std::vector<std::vector<int>> at;      // at[v][c] = edge index or -1

    ColorState(const Multigraph& g, int palette) : n(g.vertex_count()), k(palette) {
        edges = g.instances();
        assign.assign(edges.size(), 0);
        at.assign(n, std::vector<int>(k + 1, -1));
    }

    bool has(int v, int c) const { return at[v][c] >= 0; }

    void put(int idx, int c) {
        assign[idx] = c;
        at[edges[idx].u][c] = idx;
        at[edges[idx].v][c] = idx;
    }

    void drop(int idx) {
        int c = assign[idx];
        if (c == 0) return;
        at[edges[idx].u][c] = -1;
        at[edges[idx].v][c] = -1;
        assign[idx] = 0;
    }

    // Maximal alternating path of colors (a, b) starting at v, which must
    // miss a. Returns the vertex where the path ends.
    int kempe_swap(int v, int a, int b) {
        int cur = v, want = b;
        std::vector<int> path;
        while (true) {
            int e = at[cur][want];
            if (e < 0) break;
            path.push_back(e);
            cur = edges[e].u == cur ? edges[e].v : edges[e].u;
            want = want == a ? b : a;
        }
        // clear the whole path before re-inserting so shared-vertex slots
        // are never transiently overwritten
        std::vector<int> old(path.size());
        for (size_t i = 0; i < path.size(); ++i) {
            old[i] = assign[path[i]];
            drop(path[i]);
        }
        for (size_t i = 0; i < path.size(); ++i) put(path[i], old[i] == a ? b : a);
        return cur;
    }

    // End vertex of the maximal (a, b) path from v without swapping.
    int kempe_end(int v, int a, int b) const {
        int cur = v, want = b, prev_edge = -1;
        while (true) {
            int e = at[cur][want];
            if (e < 0 || e == prev_edge) break;
            prev_edge = e;
            cur = edges[e].u == cur ? edges[e].v : edges[e].u;
            want = want == a ? b : a;
        }
        return cur;
    }

    EdgeColoring to_coloring(const Multigraph& g) const {
        EdgeColoring c(g, k);
        for (size_t i = 0; i < edges.size(); ++i)
            if (assign[i] != 0) c.set_color(static_cast<int>(i), assign[i]);
        return c;
    }
};

}  // namespace

EdgeColoring color_bipartite_konig(const Multigraph& g) {
    auto bip = find_bipartition(g);
    if (!bip.bipartite) {
        std::ostringstream os;
        os << "graph is not bipartite; odd cycle:";
        for (int v : bip.odd_cycle) os << ' ' << v;
        throw std::domain_error(os.str());
    }
    int k = g.max_degree();
    ColorState st(g, std::max(k, 0));
    for (int idx = 0; idx < static_cast<int>(st.edges.size()); ++idx) {
        int u = st.edges[idx].u, v = st.edges[idx].v;
        int free_u = 0, free_v = 0, common = 0;
        for (int c = 1; c <= k && common == 0; ++c) {
            bool fu = !st.has(u, c), fv = !st.has(v, c);
            if (fu && fv) common = c;
            if (fu && free_u == 0) free_u = c;
            if (fv && free_v == 0) free_v = c;
        }
        if (common != 0) {
            st.put(idx, common);
            continue;
        }
        // swap the (free_u, free_v) chain starting at u; bipartite parity
        // keeps v off that chain
        int endv = st.kempe_swap(u, free_u, free_v);
        if (endv == v) throw std::logic_error("bipartite chain ended at the opposite endpoint");
        st.put(idx, free_v);
    }
    return st.to_coloring(g);
}

// ---------------------------------------------------------------------------
// exact solver
// ---------------------------------------------------------------------------

namespace {

struct ExactSolver {
    int n = 0, k = 0;
    long long node_cap = 0;
    long long nodes = 0;
    std::vector<std::pair<int, int>> ends;
    std::vector<std::uint64_t> vmask;
    std::vector<int> assign;

    bool feasible(int palette) {
        k = palette;
        std::fill(vmask.begin(), vmask.end(), 0);
        std::fill(assign.begin(), assign.end(), 0);
        return dfs(0, 0);
    }

    bool dfs(int colored, int max_used) {
        if (colored == static_cast<int>(ends.size())) return true;
        if (++nodes > node_cap) throw resource_error("exact chromatic index: node cap exceeded");
        int limit = std::min(k, max_used + 1);
        std::uint64_t limit_mask = limit >= 64 ? ~0ull : ((1ull << limit) - 1);
        int best = -1, best_cnt = 65;
        std::uint64_t best_avail = 0;
        for (int i = 0; i < static_cast<int>(ends.size()); ++i) {
            if (assign[i] != 0) continue;
            std::uint64_t avail = ~(vmask[ends[i].first] | vmask[ends[i].second]) & limit_mask;
            int cnt = std::popcount(avail);
            if (cnt == 0) return false;
            if (cnt < best_cnt) {
                best_cnt = cnt;
                best = i;
                best_avail = avail;
                if (cnt == 1) break;
            }
        }
        auto [u, v] = ends[best];
        std::uint64_t avail = best_avail;
        while (avail) {
            int c = std::countr_zero(avail);
            avail &= avail - 1;
            std::uint64_t bit = 1ull << c;
            assign[best] = c + 1;
            vmask[u] |= bit;
            vmask[v] |= bit;
            if (dfs(colored + 1, std::max(max_used, c + 1))) return true;
            assign[best] = 0;
            vmask[u] &= ~bit;
            vmask[v] &= ~bit;
        }
        return false;
    }
};

}  // namespace

DensityValue density_rho(const Multigraph& g, int cap) {
    int n = g.vertex_count();
    if (n < 3) throw std::invalid_argument("density needs at least 3 vertices");
    if (n > cap || n > 30) throw resource_error("density: exhaustive cap exceeded");
    std::vector<std::uint32_t> pair_bits;
    std::vector<int> pair_mult;
    for (const auto& [pair, m] : g.pairs()) {
        pair_bits.push_back((1u << pair.first) | (1u << pair.second));
        pair_mult.push_back(m);
    }
    DensityValue best;
    best.numerator = 0;
    best.denominator = 1;
    bool found = false;
    for (std::uint32_t x = 0; x < (1u << n); ++x) {
        int sz = std::popcount(x);
        if (sz < 3 || sz % 2 == 0) continue;
        long long e = 0;
        for (size_t i = 0; i < pair_bits.size(); ++i)
            if ((x & pair_bits[i]) == pair_bits[i]) e += pair_mult[i];
        long long den = sz / 2;
        if (!found || e * best.denominator > best.numerator * den) {
            found = true;
            best.numerator = e;
            best.denominator = den;
            best.witness = VertexSubset{};
            for (int v = 0; v < n; ++v)
                if (x & (1u << v)) best.witness.members.push_back(v);
        }
    }
    return best;
}

ExactChromaticIndex chromatic_index_exact(const Multigraph& g, long long node_cap, int color_cap) {
    ExactChromaticIndex out;
    if (g.edge_count() == 0) {
        out.chi = 0;
        out.coloring = EdgeColoring(g, 0);
        return out;
    }
    int delta = g.max_degree();
    int mu = g.max_multiplicity();
    long long lb = delta;
    if (g.vertex_count() >= 3 && g.vertex_count() <= 20) {
        auto rho = density_rho(g);
        lb = std::max<long long>(lb, rho.ceiling());
    }
    int ub = delta + mu;
    if (ub > color_cap) throw resource_error("exact chromatic index: color cap exceeded");

    ExactSolver solver;
    solver.n = g.vertex_count();
    solver.node_cap = node_cap;
    for (const auto& e : g.instances()) solver.ends.emplace_back(e.u, e.v);
    solver.vmask.assign(solver.n, 0);
    solver.assign.assign(solver.ends.size(), 0);

    for (int k = static_cast<int>(lb); k <= ub; ++k) {
        if (solver.feasible(k)) {
            out.chi = k;
            out.coloring = EdgeColoring(g, k);
            for (int i = 0; i < static_cast<int>(solver.assign.size()); ++i)
                out.coloring.set_color(i, solver.assign[i]);
            return out;
        }
    }
    throw std::logic_error("exact chromatic index: no palette up to Delta + mu worked");
}

std::optional<EdgeColoring> try_color_heuristic(const Multigraph& g, int k,
                                                unsigned long long seed, int restarts) {
    if (k < g.max_degree()) return std::nullopt;
    int m = static_cast<int>(g.edge_count());
    for (int attempt = 0; attempt < restarts; ++attempt) {
        ColorState st(g, k);
        std::vector<int> order(m);
        for (int i = 0; i < m; ++i) order[i] = i;
        std::mt19937_64 rng(seed * 1000003ull + attempt);
        if (attempt > 0) std::shuffle(order.begin(), order.end(), rng);
        bool ok = true;
        for (int idx : order) {
            int u = st.edges[idx].u, v = st.edges[idx].v;
            int chosen = 0;
            for (int c = 1; c <= k; ++c)
                if (!st.has(u, c) && !st.has(v, c)) {
                    chosen = c;
                    break;
                }
            if (chosen != 0) {
                st.put(idx, chosen);
                continue;
            }
            bool placed = false;
            for (int a = 1; a <= k && !placed; ++a) {
                if (st.has(u, a)) continue;  // a free at u
                for (int b = 1; b <= k && !placed; ++b) {
                    if (b == a || st.has(v, b)) continue;  // b free at v
                    // u holds b, v holds a; swap the (a,b) chain from u
                    if (st.kempe_end(u, a, b) == v) continue;
                    st.kempe_swap(u, a, b);
                    st.put(idx, b);
                    placed = true;
                }
            }
            if (!placed) {
                ok = false;
                break;
            }
        }
        if (ok) return st.to_coloring(g);
    }
    return std::nullopt;
}

EdgeColoring color_vizing_bound(const Multigraph& g) {
    if (g.edge_count() == 0) return EdgeColoring(g, 0);
    int k = g.max_degree() + g.max_multiplicity();
    if (auto c = try_color_heuristic(g, k, 17)) return *c;
    // the bound always admits a coloring; fall back to exact search at k
    ExactSolver solver;
    solver.n = g.vertex_count();
    solver.node_cap = 400'000'000;
    for (const auto& e : g.instances()) solver.ends.emplace_back(e.u, e.v);
    solver.vmask.assign(solver.n, 0);
    solver.assign.assign(solver.ends.size(), 0);
    if (k > 62) throw resource_error("palette too large for exact fallback");
    if (!solver.feasible(k)) throw std::logic_error("Delta+mu coloring must exist");
    EdgeColoring c(g, k);
    for (int i = 0; i < static_cast<int>(solver.assign.size()); ++i) c.set_color(i, solver.assign[i]);
    return c;
}

EdgeColoring equalize(const Multigraph& g, const EdgeColoring& input) {
    require_matching_instances(g, input);
    if (!input.total()) throw std::invalid_argument("equalize requires a total coloring");
    auto proper = check_proper(g, input);
    if (!proper.ok) throw std::invalid_argument("equalize requires a proper coloring: " + proper.detail);
    int k = input.palette();
    if (k == 0) return input;

    ColorState st(g, k);
    for (int i = 0; i < input.size(); ++i) st.put(i, input.color(i));
    std::vector<long long> sizes(k + 1, 0);
    for (int i = 0; i < input.size(); ++i) ++sizes[input.color(i)];

    while (true) {
        int imax = 1, imin = 1;
        for (int c = 2; c <= k; ++c) {
            if (sizes[c] > sizes[imax]) imax = c;
            if (sizes[c] < sizes[imin]) imin = c;
        }
        if (sizes[imax] - sizes[imin] <= 1) break;

        // walk the (imax, imin) subgraph from a path endpoint holding imax
        bool swapped = false;
        for (int v = 0; v < st.n && !swapped; ++v) {
            if (!st.has(v, imax) || st.has(v, imin)) continue;  // endpoint starting with imax
            int end = st.kempe_end(v, imin, imax);
            // count colors on the path by walking again
            int cur = v, want = imax, cmax = 0, cmin = 0;
            while (true) {
                int e = st.at[cur][want];
                if (e < 0) break;
                if (want == imax) ++cmax; else ++cmin;
                cur = st.edges[e].u == cur ? st.edges[e].v : st.edges[e].u;
                want = want == imax ? imin : imax;
            }
            (void)end;
            if (cmax != cmin + 1) continue;
            st.kempe_swap(v, imin, imax);
            sizes[imax] -= 1;
            sizes[imin] += 1;
            swapped = true;
        }
        if (!swapped)
            throw std::logic_error("equalize: no reducing path although class sizes differ by >= 2");
    }
    return st.to_coloring(g);
}

EdgeColoring color_bounded(const Multigraph& g, int k, unsigned long long seed) {
    if (g.edge_count() == 0) {
        if (k < 0) throw std::invalid_argument("negative palette");
        EdgeColoring c(g, k);
        return c;
    }
    int delta = g.max_degree();
    double bound = delta + std::sqrt(std::max(0, delta - 1) / 2.0);
    if (k + 1e-9 < bound)
        throw std::invalid_argument("palette below Delta + sqrt((Delta-1)/2)");
    if (g.vertex_count() >= 3 && g.vertex_count() <= 20) {
        auto rho = density_rho(g);
        if (static_cast<long long>(k) * rho.denominator < rho.numerator)
            throw std::invalid_argument("palette below the density lower bound");
    }
    if (auto c = try_color_heuristic(g, k, seed)) return *c;
    auto exact = chromatic_index_exact(g);
    if (exact.chi > k) throw std::logic_error("bounded coloring: exact index above the bound");
    exact.coloring.set_palette(k);
    return exact.coloring;
}

std::optional<VertexSubset> exhaustive_overfull_subset(const Multigraph& g, int target_delta, int cap) {
    int n = g.vertex_count();
    if (n < 3) return std::nullopt;
    if (n > cap || n > 30) throw resource_error("overfull search: exhaustive cap exceeded");
    std::vector<std::uint32_t> pair_bits;
    std::vector<int> pair_mult;
    for (const auto& [pair, m] : g.pairs()) {
        pair_bits.push_back((1u << pair.first) | (1u << pair.second));
        pair_mult.push_back(m);
    }
    for (std::uint32_t x = 0; x < (1u << n); ++x) {
        int sz = std::popcount(x);
        if (sz < 3 || sz % 2 == 0) continue;
        long long e = 0;
        for (size_t i = 0; i < pair_bits.size(); ++i)
            if ((x & pair_bits[i]) == pair_bits[i]) e += pair_mult[i];
        if (e > static_cast<long long>(target_delta) * (sz / 2)) {
            VertexSubset s;
            for (int v = 0; v < n; ++v)
                if (x & (1u << v)) s.members.push_back(v);
            return s;
        }
    }
    return std::nullopt;
}

NearlyBipartiteResult color_nearly_bipartite(const Multigraph& g) {
    NearlyBipartiteResult res;
    auto bip = find_bipartition(g);
    int apex = -1;
    if (!bip.bipartite) {
        int n = g.vertex_count();
        for (int v = 0; v < n && apex < 0; ++v) {
            VertexSubset rest;
            for (int u = 0; u < n; ++u)
                if (u != v) rest.members.push_back(u);
            auto [sub, map] = g.induced_subgraph(rest);
            if (find_bipartition(sub).bipartite) apex = v;
        }
        if (apex < 0) throw std::domain_error("graph is not nearly-bipartite");
    }

    int delta = g.max_degree();
    if (auto witness = exhaustive_overfull_subset(g, delta, 24)) {
        res.colored = false;
        res.overfull_witness = *witness;
        res.witness_edges = g.edges_within(*witness);
        res.witness_threshold = static_cast<long long>(delta) * (witness->size() / 2);
        return res;
    }

    // no overfull subgraph: a Delta-coloring exists; build one
    if (bip.bipartite) {
        res.colored = true;
        res.coloring = color_bipartite_konig(g);
        res.coloring.set_palette(delta);
        return res;
    }
    if (auto c = try_color_heuristic(g, delta, 23, 80)) {
        res.colored = true;
        res.coloring = *c;
        return res;
    }
    auto exact = chromatic_index_exact(g);
    if (exact.chi != delta)
        throw std::logic_error("nearly-bipartite graph without overfull subgraph must be Delta-colorable");
    res.colored = true;
    res.coloring = exact.coloring;
    return res;
}

EdgeColoring swap_alternating_path(const Multigraph& g, const EdgeColoring& c,
                                   const std::vector<EdgeInstance>& path, int color) {
    require_matching_instances(g, c);
    if (path.empty()) throw std::invalid_argument("empty path");
    if (color < 1 || color > c.palette()) throw std::invalid_argument("color out of palette");
    if (path.size() % 2 != 1)
        throw std::invalid_argument("path must start and end with uncolored edges");

    std::vector<int> idx(path.size());
    for (size_t i = 0; i < path.size(); ++i) {
        idx[i] = c.index_of(path[i]);
        if (idx[i] < 0) throw std::invalid_argument("path references a nonexistent edge instance");
    }

    // recover the vertex walk
    std::vector<VertexId> verts;
    if (path.size() == 1) {
        verts = {path[0].u, path[0].v};
    } else {
        const auto& e0 = path[0];
        const auto& e1 = path[1];
        VertexId shared;
        if (e0.u == e1.u || e0.u == e1.v) shared = e0.u;
        else if (e0.v == e1.u || e0.v == e1.v) shared = e0.v;
        else throw std::invalid_argument("consecutive path edges do not share a vertex");
        verts.push_back(e0.u == shared ? e0.v : e0.u);
        verts.push_back(shared);
        for (size_t i = 1; i < path.size(); ++i) {
            const auto& e = path[i];
            VertexId prev = verts.back();
            if (e.u == prev) verts.push_back(e.v);
            else if (e.v == prev) verts.push_back(e.u);
            else throw std::invalid_argument("consecutive path edges do not share a vertex");
        }
    }
    {
        std::vector<VertexId> sorted = verts;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw std::invalid_argument("path revisits a vertex");
    }

    for (size_t i = 0; i < path.size(); ++i) {
        int col = c.color(idx[i]);
        if (i % 2 == 0 && col != kUncolored)
            throw std::invalid_argument("even path positions must be uncolored");
        if (i % 2 == 1 && col != color)
            throw std::invalid_argument("odd path positions must carry the swap color");
    }

    // endpoints must miss the color; interior properness follows from the
    // alternation plus vertex-simplicity, but verify directly for safety
    int n = g.vertex_count();
    auto misses = [&](VertexId v) {
        auto mc = c.missing_colors(n, v);
        return std::binary_search(mc.begin(), mc.end(), color);
    };
    if (!misses(verts.front()) || !misses(verts.back()))
        throw std::invalid_argument("path endpoints must miss the swap color");

    for (size_t i = 0; i < path.size(); i += 2) {
        for (VertexId v : {verts[i], verts[i + 1]}) {
            // any existing color-i edge at v must be an adjacent path edge
            bool held = false;
            for (int j = 0; j < c.size(); ++j) {
                if (c.color(j) != color) continue;
                const auto& e = c.instances()[j];
                if (e.u != v && e.v != v) continue;
                bool on_path = (i > 0 && j == idx[i - 1]) || (i + 1 < idx.size() && j == idx[i + 1]);
                if (!on_path) held = true;
            }
            if (held)
                throw std::invalid_argument("coloring a path edge would clash with an off-path edge");
        }
    }

    EdgeColoring out = c;
    for (size_t i = 0; i < path.size(); ++i)
        out.set_color(idx[i], i % 2 == 0 ? color : kUncolored);
    return out;
}

}  // namespace ofc
