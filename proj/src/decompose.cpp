#include "ofc/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "ofc/matching.hpp"

namespace ofc {

namespace {

std::string fmt(const std::string& a, long long x) {
    std::ostringstream os;
    os << a << x;
    return os.str();
}

[[noreturn]] void step_fail(const std::string& step, const std::string& condition,
                            const std::string& diagnostics = "") {
    throw StepFailureError({step, condition, diagnostics});
}

}  // namespace

int Partition::max_imbalance(const Multigraph& g) const {
    int worst = 0;
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        int da = 0, db = 0;
        for (const auto& [u, m] : g.adjacency(v)) {
            if (A.contains(u)) ++da;
            else if (B.contains(u)) ++db;
        }
        worst = std::max(worst, std::abs(da - db));
    }
    return worst;
}

Partition random_balanced_partition(const Multigraph& g,
                                    const std::vector<std::pair<VertexId, VertexId>>& pairs,
                                    int tolerance, std::uint64_t seed, int retries) {
    int m = g.vertex_count();
    if (m % 2 != 0) throw std::invalid_argument("partition needs an even vertex count");
    std::vector<char> paired(m, 0);
    for (auto [x, y] : pairs) {
        g.check_vertex(x);
        g.check_vertex(y);
        if (x == y || paired[x] || paired[y])
            throw std::invalid_argument("partner pairs must be disjoint");
        paired[x] = paired[y] = 1;
    }
    if (static_cast<int>(pairs.size()) > m / 2)
        throw std::invalid_argument("too many partner pairs");

    std::vector<VertexId> loose;
    for (VertexId v = 0; v < m; ++v)
        if (!paired[v]) loose.push_back(v);

    std::mt19937_64 rng(seed);
    Partition best;
    int best_imbalance = -1;
    for (int attempt = 0; attempt < retries; ++attempt) {
        Partition part;
        std::vector<VertexId> a, b;
        for (auto [x, y] : pairs) {
            if (rng() & 1) std::swap(x, y);
            a.push_back(x);
            b.push_back(y);
        }
        std::vector<VertexId> pool = loose;
        std::shuffle(pool.begin(), pool.end(), rng);
        int need_a = m / 2 - static_cast<int>(a.size());
        for (int i = 0; i < static_cast<int>(pool.size()); ++i)
            (i < need_a ? a : b).push_back(pool[i]);
        part.A = VertexSubset(std::move(a));
        part.B = VertexSubset(std::move(b));
        part.partner_pairs = pairs;
        part.balance_tolerance = tolerance;
        int imb = part.max_imbalance(g);
        if (imb <= tolerance) return part;
        if (best_imbalance < 0 || imb < best_imbalance) {
            best_imbalance = imb;
            best = part;
        }
    }
    throw resource_error(fmt("partition retries exhausted; best imbalance = ", best_imbalance) +
                         fmt(", tolerance = ", tolerance));
}

std::vector<std::pair<VertexId, VertexId>> build_partner_pairs(const PipelineState& state) {
    std::vector<std::pair<VertexId, VertexId>> pairs;
    int m = state.stage_size();
    int p = state.split_index;
    int g = state.g_index;
    int h = state.h_index;
    auto pos = [&state](int i) { return state.at_position(i); };

    if (h <= p) {
        for (int i = 1; 2 * i - 1 <= g; ++i) {
            if (2 * i > m) break;
            pairs.emplace_back(pos(2 * i - 1), pos(2 * i));
        }
        return pairs;
    }
    for (int i = 1; i <= p / 2; ++i) pairs.emplace_back(pos(2 * i - 1), pos(2 * i));
    // boundary block pairs against distinct full vertices; pos(g+1) is spared
    // only when the trailing deficient range needs it as a mate
    bool spare_next = (g - h) % 2 == 1;
    std::vector<VertexId> full_candidates;
    for (int i = g + (spare_next ? 2 : 1); i <= m; ++i) full_candidates.push_back(pos(i));
    int need = h - p;
    if (static_cast<int>(full_candidates.size()) < need)
        step_fail("partition_pairs", "not enough full vertices to partner the boundary block",
                  fmt("need = ", need) + fmt(", available = ", full_candidates.size()));
    for (int j = 0; j < need; ++j) pairs.emplace_back(pos(p + 1 + j), full_candidates[j]);
    for (int i = 1; h + 2 * i - 1 <= g; ++i) {
        if (h + 2 * i > m) break;
        pairs.emplace_back(pos(h + 2 * i - 1), pos(h + 2 * i));
    }
    return pairs;
}

Partition partition_modification(const Partition& p, const PipelineState& state) {
    Partition out = p;
    std::set<VertexId> a(out.A.members.begin(), out.A.members.end());
    std::set<VertexId> b(out.B.members.begin(), out.B.members.end());
    auto partner_of = [&out](VertexId v) -> VertexId {
        for (auto [x, y] : out.partner_pairs) {
            if (x == v) return y;
            if (y == v) return x;
        }
        return -1;
    };
    auto force = [&](VertexId v, bool into_a) {
        bool in_a = a.count(v) > 0;
        if (in_a == into_a) return;
        VertexId mate = partner_of(v);
        if (mate < 0)
            throw std::invalid_argument(fmt("vertex without a partner pair: ", v));
        a.erase(in_a ? v : mate);
        b.erase(in_a ? mate : v);
        a.insert(in_a ? mate : v);
        b.insert(in_a ? v : mate);
    };

    int ppos = state.split_index;
    for (int i = 1; 2 * i <= ppos; ++i) {
        VertexId x = state.at_position(2 * i - 1);
        bool required = 2 * i - 1 <= state.g_index;  // deficient slots must be paired
        if (partner_of(x) < 0) {
            if (required)
                throw std::invalid_argument(fmt("missing required partner pair at position ",
                                                2 * i - 1));
            continue;
        }
        force(x, true);
    }
    if (state.h_index >= ppos + 1)
        for (int j = ppos + 1; j <= state.h_index; ++j) force(state.at_position(j), false);

    out.A = VertexSubset(std::vector<VertexId>(a.begin(), a.end()));
    out.B = VertexSubset(std::vector<VertexId>(b.begin(), b.end()));
    double etan = state.eta * state.stage_size();
    out.balance_tolerance = p.balance_tolerance + static_cast<int>(std::ceil(4 * etan)) + 2;
    return out;
}

// copies the construction itself stacked on a pair; for simple inputs with an
// independent deficient prefix this is the full multiplicity
int constructed_multiplicity(const PipelineState& state, VertexId a, VertexId b) {
    auto key = std::minmax(a, b);
    auto it = state.provenance.find({key.first, key.second});
    if (it == state.provenance.end()) return state.g3.multiplicity(a, b);
    int cnt = 0;
    for (const auto& tag : it->second)
        if (tag.source != EdgeSource::Original) ++cnt;
    return cnt;
}

DecompositionParams compute_params(const PipelineState& state, double eta) {
    DecompositionParams par;
    int n = state.g3.vertex_count();
    if (eta * n < 1.0)
        throw std::invalid_argument(fmt("eta too small for this order; need eta >= 1/", n));
    par.eta = eta;
    par.n_ref = n;
    par.delta = state.target_delta;
    double en = eta * n;
    par.delta_prime = static_cast<int>(std::ceil(par.delta / 2.0 + 5.3 * en));
    par.k = par.delta_prime + static_cast<int>(std::ceil(std::sqrt((double)par.delta_prime)));
    par.tolerance = static_cast<int>(std::ceil(std::pow((double)n, 2.0 / 3.0)));
    par.missing_cap = 9 * en - 2;
    par.residual_edges_cap = 18 * eta * n * n;
    par.residual_degree_cap = 5 * std::sqrt(eta) * n;

    par.boundary_pairs = 0;
    if (state.has_tail_vertex() && state.split_index >= 2) {
        int p = state.split_index;
        VertexId va = state.at_position(p - 1), vb = state.at_position(p),
                 vc = state.at_position(p + 1);
        long long epq = constructed_multiplicity(state, vb, vc);
        if ((epq + 1) / 2 >= 6 * std::sqrt(eta) * n) {
            long long cap = par.k - constructed_multiplicity(state, va, vb) / 2 -
                            constructed_multiplicity(state, va, vc) / 2 - epq / 2;
            long long lim = static_cast<long long>(std::floor(6 * en));
            par.boundary_pairs = static_cast<int>(std::max(0ll, std::min(cap, lim)));
        }
    }
    return par;
}

namespace {

// picks `want` distinct-neighbor top-copy instances at v toward eligible
// targets inside `side`, excluding `avoid` endpoints and `used` neighbors
std::vector<EdgeInstance> pick_star_instances(const Multigraph& g, VertexId v, int want,
                                              const VertexSubset& side, const VertexSubset& avoid,
                                              std::set<VertexId>& used) {
    std::vector<EdgeInstance> out;
    for (const auto& [u, mult] : g.adjacency(v)) {
        if (static_cast<int>(out.size()) == want) break;
        if (!side.contains(u) || avoid.contains(u) || used.count(u)) continue;
        auto key = std::minmax(v, u);
        out.push_back({key.first, key.second, mult - 1});
        used.insert(u);
    }
    return out;
}

}  // namespace

SpecialEdgeSets select_special_edge_sets(const PipelineState& state, const Partition& part,
                                         const DecompositionParams& params) {
    SpecialEdgeSets s;
    if (!state.has_tail_vertex()) return s;
    int p = state.split_index;
    VertexId vp = state.at_position(p), vp1 = state.at_position(p + 1);
    if (state.h_index >= p + 1) {
        for (auto [x, y] : part.partner_pairs) {
            if (x == vp1) s.u_partner = y;
            if (y == vp1) s.u_partner = x;
        }
    }

    const Multigraph& g3 = state.g3;
    // only copies the construction stacked on the pair take part; input
    // copies stay ordinary side edges
    long long full_mult = g3.multiplicity(vp, vp1);
    long long epq = constructed_multiplicity(state, vp, vp1);
    long long e1_target = std::max(0ll, (epq + 1) / 2 - params.boundary_pairs);
    int e_p = params.boundary_pairs;
    if (e1_target == 0 && e_p == 0) return s;

    if (e1_target > 0) {
        auto key = std::minmax(vp, vp1);
        for (long long c = 0; c < e1_target; ++c)
            s.F1.push_back({key.first, key.second, static_cast<int>(full_mult - 1 - c)});
        for (long long c = 0; c < full_mult - e1_target; ++c)
            s.F2.push_back({key.first, key.second, static_cast<int>(c)});

        if (s.u_partner < 0) {
            // no designated partner: fall back to a full A vertex
            for (int i = state.g_index + 1; i <= state.stage_size(); ++i) {
                VertexId cand = state.at_position(i);
                if (part.in_a(cand)) {
                    s.u_partner = cand;
                    break;
                }
            }
        }
        if (s.u_partner < 0)
            throw std::domain_error("no full vertex available to carry the offload edges");
        std::set<VertexId> used;
        s.E1 = pick_star_instances(g3, s.u_partner, static_cast<int>(e1_target), part.A,
                                   VertexSubset({s.u_partner}), used);
        if (static_cast<int>(s.E1.size()) < e1_target)
            throw std::domain_error(fmt("offload deficit inside A: found ", s.E1.size()) +
                                    fmt(", need ", e1_target));
        std::set<VertexId> used2;
        s.E2 = pick_star_instances(g3, s.u_partner, static_cast<int>(e1_target), part.B,
                                   state.U_star, used2);
        if (static_cast<int>(s.E2.size()) < e1_target)
            throw std::domain_error(fmt("offload deficit across the cut: found ", s.E2.size()) +
                                    fmt(", need ", e1_target));
    } else if (full_mult > 0) {
        auto key = std::minmax(vp, vp1);
        for (long long c = 0; c < full_mult; ++c)
            s.F2.push_back({key.first, key.second, static_cast<int>(c)});
    }

    if (e_p > 0) {
        std::set<VertexId> used;
        VertexSubset avoid = state.U_star;
        if (!avoid.contains(vp1)) avoid.members.push_back(vp1);
        std::sort(avoid.members.begin(), avoid.members.end());
        s.F21 = pick_star_instances(g3, vp, e_p, part.B, avoid, used);
        VertexSubset avoid2 = state.U_star;
        if (!avoid2.contains(vp)) avoid2.members.push_back(vp);
        std::sort(avoid2.members.begin(), avoid2.members.end());
        s.F22 = pick_star_instances(g3, vp1, e_p, part.B, avoid2, used);
        if (static_cast<int>(s.F21.size()) < e_p || static_cast<int>(s.F22.size()) < e_p)
            throw std::domain_error(fmt("boundary star deficit: |F21| = ", s.F21.size()) +
                                    fmt(", |F22| = ", s.F22.size()) + fmt(", need ", e_p));
    }
    return s;
}

namespace {

struct PairCount {
    std::map<std::pair<VertexId, VertexId>, int> counts;

    void add(const EdgeInstance& e) {
        auto key = std::minmax(e.u, e.v);
        ++counts[{key.first, key.second}];
    }
    int at(VertexId u, VertexId v) const {
        auto key = std::minmax(u, v);
        auto it = counts.find({key.first, key.second});
        return it == counts.end() ? 0 : it->second;
    }
};

}  // namespace

GabResult form_gab(const PipelineState& state, const Partition& part, const SpecialEdgeSets& sets) {
    const Multigraph& g3 = state.g3;
    int m = g3.vertex_count();
    GabResult out;
    out.graph = Multigraph(m);

    PairCount exA, exB;
    for (const auto& e : sets.E1) exA.add(e);
    for (const auto& e : sets.F1) exB.add(e);
    for (const auto& e : sets.F21) exB.add(e);
    for (const auto& e : sets.F22) exB.add(e);
    PairCount inCross;
    for (const auto& e : sets.E2) inCross.add(e);

    auto constructed_mult = [&state](VertexId a, VertexId b) {
        return constructed_multiplicity(state, a, b);
    };

    // halved multiplicity-layer counts from odd-prefix vertices toward B
    std::map<std::pair<VertexId, VertexId>, int> half_add;
    for (int i = 1; 2 * i - 1 <= state.split_index; ++i) {
        VertexId v = state.at_position(2 * i - 1);
        if (!part.in_a(v)) continue;
        std::vector<std::pair<VertexId, int>> layer_neighbors;  // (u, constructed multiplicity)
        long long total = 0;
        for (const auto& [u, mult] : g3.adjacency(v)) {
            if (!part.B.contains(u) || !state.U_star.contains(u)) continue;
            int layered = constructed_mult(v, u);
            if (layered <= 0) continue;
            layer_neighbors.emplace_back(u, layered);
            total += layered;
        }
        long long target = total / 2;
        long long given = 0;
        for (auto& [u, ex] : layer_neighbors) given += ex / 2;
        for (auto& [u, ex] : layer_neighbors) {
            int cnt = ex / 2;
            if (ex % 2 == 1 && given < target) {
                ++cnt;
                ++given;
            }
            if (cnt > 0) {
                auto key = std::minmax(v, u);
                half_add[{key.first, key.second}] += cnt;
            }
        }
    }

    long long ea = 0, eb = 0;
    for (const auto& [pair, mult] : g3.pairs()) {
        bool ua = part.in_a(pair.first), va = part.in_a(pair.second);
        int cnt = 0;
        if (ua && va) {
            cnt = mult - exA.at(pair.first, pair.second);
            ea += cnt;
        } else if (!ua && !va) {
            cnt = mult - exB.at(pair.first, pair.second);
            eb += cnt;
        } else {
            auto it = half_add.find(pair);
            cnt = (it == half_add.end() ? 0 : it->second) + inCross.at(pair.first, pair.second);
        }
        if (cnt < 0) throw std::logic_error("special set exceeds pair multiplicity");
        if (cnt > 0) out.graph.add_edge(pair.first, pair.second, cnt);
    }

    out.audits.push_back({"core_side_balance",
                          ea == eb + static_cast<long long>(sets.F21.size() + sets.F22.size()),
                          fmt("e[A] = ", ea) + fmt(", e[B]+stars = ",
                                                   eb + (long long)(sets.F21.size() + sets.F22.size()))});

    // degree window audit, one band per vertex class
    double en = state.eta * m;
    double half = state.target_delta / 2.0;
    bool window_ok = true;
    std::string sample;
    for (VertexId v = 0; v < m; ++v) {
        double d = out.graph.degree(v);
        double lo, hi;
        if (!state.U_star.contains(v)) {
            lo = half - 3.6 * en;
            hi = half + 5.1 * en;
        } else {
            lo = half - 3.1 * en;
            hi = half + 3.1 * en;
        }
        if (d < lo - 1e-9 || d > hi + 1e-9) {
            window_ok = false;
            if (sample.empty()) sample = fmt("vertex ", v) + fmt(" degree ", (long long)d);
        }
    }
    out.audits.push_back({"core_degree_window", window_ok, sample});

    // leftover multiplicity audit: at least half of every constructed bundle
    // from an odd-prefix vertex toward B stays outside the core
    bool leftover_ok = true;
    for (int i = 1; 2 * i - 1 <= state.split_index && leftover_ok; ++i) {
        VertexId v = state.at_position(2 * i - 1);
        if (!part.in_a(v)) continue;
        for (const auto& [u, mult] : g3.adjacency(v)) {
            if (!part.B.contains(u)) continue;
            long long in_core = out.graph.multiplicity(v, u);
            if (2 * (mult - in_core) < constructed_mult(v, u)) leftover_ok = false;
        }
    }
    out.audits.push_back({"core_leftover_multiplicity", leftover_ok, ""});
    return out;
}

EdgeColoring color_gab(const Multigraph& gab, const DecompositionParams& params, int k_override,
                       std::uint64_t seed) {
    int k = k_override > 0 ? k_override : params.k;
    if (gab.edge_count() == 0) return EdgeColoring(gab, k);
    if (k < gab.max_degree())
        throw std::invalid_argument(fmt("core palette below max degree: k = ", k) +
                                    fmt(", Delta = ", gab.max_degree()));
    EdgeColoring base;
    if (auto c = try_color_heuristic(gab, k, seed)) {
        base = *c;
    } else {
        auto exact = chromatic_index_exact(gab);
        if (exact.chi > k)
            throw std::invalid_argument(fmt("core needs more colors than the palette: chi' = ",
                                            exact.chi));
        exact.coloring.set_palette(k);
        base = exact.coloring;
    }
    return equalize(gab, base);
}

// ---------------------------------------------------------------------------
// shared mutable state for steps 3-5
// ---------------------------------------------------------------------------

namespace {

struct Work {
    const PipelineState& st;
    const Partition& part;
    const DecompositionParams& par;
    const SpecialEdgeSets& sets;
    const Multigraph& g3;
    int m;
    int delta_t;
    int palette;

    std::vector<EdgeInstance> edges;
    std::map<std::pair<VertexId, VertexId>, int> pair_base;
    std::vector<int> color;
    std::vector<std::vector<int>> at;  // [v][c] -> edge index
    std::vector<char> is_cross, excluded, in_gab;
    std::vector<int> resdeg;
    std::map<std::pair<VertexId, int>, int> origin_extra;  // (vertex, color) -> chain edges
    DecompositionTrace trace;

    Work(const PipelineState& s, const Partition& p, const DecompositionParams& pr,
         const SpecialEdgeSets& se, int max_color)
        : st(s), part(p), par(pr), sets(se), g3(s.g3), m(s.g3.vertex_count()),
          delta_t(s.target_delta), palette(max_color) {
        edges = g3.instances();
        for (int i = 0; i < static_cast<int>(edges.size()); ++i) {
            auto key = std::make_pair(edges[i].u, edges[i].v);
            if (!pair_base.count(key)) pair_base[key] = i;
        }
        color.assign(edges.size(), 0);
        at.assign(m, std::vector<int>(palette + 1, -1));
        is_cross.assign(edges.size(), 0);
        excluded.assign(edges.size(), 0);
        in_gab.assign(edges.size(), 0);
        resdeg.assign(m, 0);
        for (int i = 0; i < static_cast<int>(edges.size()); ++i)
            is_cross[i] = part.in_a(edges[i].u) != part.in_a(edges[i].v);
        for (const auto& e : sets.E1) excluded[index_of(e)] = 1;
        for (const auto& e : sets.F1) excluded[index_of(e)] = 1;
        for (int i = 0; i < static_cast<int>(edges.size()); ++i)
            if (residual_eligible(i)) bump_res(i, +1);
    }

    int index_of(const EdgeInstance& e) const {
        auto key = std::minmax(e.u, e.v);
        auto it = pair_base.find({key.first, key.second});
        if (it == pair_base.end()) throw std::invalid_argument("unknown edge pair");
        int mult = g3.multiplicity(e.u, e.v);
        if (e.copy < 0 || e.copy >= mult) throw std::invalid_argument("copy index out of range");
        return it->second + e.copy;
    }

    bool residual_eligible(int idx) const { return !is_cross[idx] && !excluded[idx]; }
    bool in_a(VertexId v) const { return part.in_a(v); }

    void bump_res(int idx, int dir) {
        resdeg[edges[idx].u] += dir;
        resdeg[edges[idx].v] += dir;
    }

    void set_color(int idx, int c) {
        if (color[idx] != 0) throw std::logic_error("coloring an already colored edge");
        if (excluded[idx]) throw std::logic_error("coloring an excluded edge");
        VertexId u = edges[idx].u, v = edges[idx].v;
        if (at[u][c] >= 0 || at[v][c] >= 0) throw std::logic_error("color clash during exchange");
        color[idx] = c;
        at[u][c] = idx;
        at[v][c] = idx;
        if (residual_eligible(idx)) bump_res(idx, -1);
    }

    void unset_color(int idx) {
        int c = color[idx];
        if (c == 0) return;
        at[edges[idx].u][c] = -1;
        at[edges[idx].v][c] = -1;
        color[idx] = 0;
        if (residual_eligible(idx)) bump_res(idx, +1);
    }

    bool missing(VertexId v, int c) const { return at[v][c] < 0; }

    int uncolored_cross(VertexId a, VertexId b) const {
        auto key = std::minmax(a, b);
        auto it = pair_base.find({key.first, key.second});
        if (it == pair_base.end()) return -1;
        int mult = g3.multiplicity(a, b);
        for (int c = 0; c < mult; ++c) {
            int idx = it->second + c;
            if (color[idx] == 0 && is_cross[idx] && !excluded[idx]) return idx;
        }
        return -1;
    }

    // colored internal edge of color c at v, on v's own side, avoiding the
    // guarded vertex set, with both residual degrees under the cap
    int good_side_edge(VertexId v, int c, const std::set<VertexId>& guard) const {
        int e = at[v][c];
        if (e < 0 || is_cross[e]) return -1;
        VertexId o = edges[e].u == v ? edges[e].v : edges[e].u;
        if (guard.count(v) || guard.count(o)) return -1;
        if (resdeg[v] >= par.residual_degree_cap || resdeg[o] >= par.residual_degree_cap) return -1;
        return e;
    }

    int origin_of(VertexId v, int c) const {
        auto it = origin_extra.find({v, c});
        return it == origin_extra.end() ? 0 : it->second;
    }

    // swaps an alternating sequence: even slots get colored c, odd slots lose c
    void exchange(const std::vector<int>& to_color, const std::vector<int>& to_clear, int c) {
        for (int idx : to_clear) {
            if (color[idx] != c) throw std::logic_error("exchange expected the swap color");
            unset_color(idx);
        }
        for (int idx : to_color) set_color(idx, c);
    }

    EdgeColoring snapshot() const {
        EdgeColoring out(g3, palette);
        for (int i = 0; i < static_cast<int>(edges.size()); ++i)
            if (color[i] != 0) out.set_color(i, color[i]);
        return out;
    }

    void load(const EdgeColoring& c) {
        if (static_cast<int>(edges.size()) != c.size())
            throw std::invalid_argument("coloring does not match the regularized graph");
        for (int i = 0; i < c.size(); ++i)
            if (c.color(i) != 0) set_color(i, c.color(i));
    }

    bool class_is_perfect(int c) const {
        for (VertexId v = 0; v < m; ++v)
            if (at[v][c] < 0) return false;
        return true;
    }
};

std::vector<std::vector<int>> gab_instance_map(const Multigraph& gab, Work& w) {
    // gab instance (pair, j) corresponds to the j-th included copy, which by
    // construction is the j-th lowest copy of that pair in g3
    std::vector<std::vector<int>> map_per_pair;
    std::vector<std::vector<int>> out;
    out.reserve(gab.pairs().size());
    for (const auto& [pair, mult] : gab.pairs()) {
        std::vector<int> idxs;
        for (int c = 0; c < mult; ++c)
            idxs.push_back(w.index_of({pair.first, pair.second, c}));
        out.push_back(std::move(idxs));
    }
    return out;
}

void load_gab_coloring(Work& w, const Multigraph& gab, const EdgeColoring& phi0) {
    auto groups = gab_instance_map(gab, w);
    int gi = 0;
    size_t pair_idx = 0;
    for (const auto& [pair, mult] : gab.pairs()) {
        for (int c = 0; c < mult; ++c) {
            int col = phi0.color(gi++);
            int widx = groups[pair_idx][c];
            w.in_gab[widx] = 1;
            if (col != 0) w.set_color(widx, col);
        }
        ++pair_idx;
    }
}

// Perfect matching completion of one color class over colored-c plus
// uncolored non-excluded edges; used by the rescue path.
bool rescue_class_with_matching(Work& w, int c, DecompositionTrace& trace) {
    std::map<std::pair<VertexId, VertexId>, int> cand;  // pair -> representative idx
    std::vector<int> seed(w.m, -1);
    for (int i = 0; i < static_cast<int>(w.edges.size()); ++i) {
        if (w.excluded[i]) continue;
        if (w.color[i] != 0 && w.color[i] != c) continue;
        auto key = std::make_pair(w.edges[i].u, w.edges[i].v);
        if (w.color[i] == c) {
            cand[key] = i;
            seed[w.edges[i].u] = w.edges[i].v;
            seed[w.edges[i].v] = w.edges[i].u;
        } else if (!cand.count(key)) {
            cand[key] = i;
        }
    }
    std::vector<std::vector<int>> adj(w.m);
    for (const auto& [pair, idx] : cand) {
        adj[pair.first].push_back(pair.second);
        adj[pair.second].push_back(pair.first);
    }
    auto match = blossom_maximum_matching(w.m, adj, &seed);
    for (int v = 0; v < w.m; ++v)
        if (match[v] < 0) return false;
    // apply: drop class edges not kept, add new ones
    for (int i = 0; i < static_cast<int>(w.edges.size()); ++i) {
        if (w.color[i] != c) continue;
        if (match[w.edges[i].u] != w.edges[i].v) w.unset_color(i);
    }
    for (int v = 0; v < w.m; ++v) {
        int u = match[v];
        if (u < v) continue;
        if (w.at[v][c] >= 0) continue;  // kept class edge
        auto it = cand.find(std::minmax(v, u));
        if (it == cand.end() || w.color[it->second] != 0) {
            // the kept representative may have been a class edge; find any
            // uncolored non-excluded copy
            int mult = w.g3.multiplicity(v, u);
            int found = -1;
            for (int cc = 0; cc < mult; ++cc) {
                int idx = w.index_of({std::min(v, u), std::max(v, u), cc});
                if (w.color[idx] == 0 && !w.excluded[idx]) {
                    found = idx;
                    break;
                }
            }
            if (found < 0) return false;
            w.set_color(found, c);
        } else {
            w.set_color(it->second, c);
        }
    }
    trace.bump("rescued_classes");
    return w.class_is_perfect(c);
}

}  // namespace

// ---------------------------------------------------------------------------
// step 3
// ---------------------------------------------------------------------------

namespace {

struct Step3Engine {
    Work& w;
    int k;
    std::set<VertexId> ua, ub;  // guarded vertex sets per side
    bool rescue;

    Step3Engine(Work& work, int kk, bool resc) : w(work), k(kk), rescue(resc) {
        for (VertexId v : w.st.U_star.members)
            (w.in_a(v) ? ua : ub).insert(v);
        if (w.sets.u_partner >= 0) ua.insert(w.sets.u_partner);
    }

    // initial stage: clear every color missing at the padded vertex through
    // its pair partner
    void initial_stage() {
        if (!w.st.padded) return;
        VertexId v1 = w.st.original.vertex_count();  // the appended vertex id
        int pos = w.st.position_of(v1);
        int buddy_pos = pos % 2 == 1 ? pos + 1 : pos - 1;
        if (buddy_pos < 1 || buddy_pos > w.m) return;
        VertexId v2 = w.st.at_position(buddy_pos);
        if (w.in_a(v1) == w.in_a(v2)) {
            w.trace.note("initial stage skipped: padded vertex shares a side with its partner");
            return;
        }
        for (int c = 1; c <= k; ++c) {
            if (!w.missing(v1, c)) continue;
            int reservoir = w.uncolored_cross(v1, v2);
            if (reservoir < 0) {
                w.trace.note(fmt("initial stage: reservoir exhausted at color ", c));
                return;
            }
            if (w.missing(v2, c)) {
                w.exchange({reservoir}, {}, c);
                continue;
            }
            int e = w.at[v2][c];
            VertexId wv = w.edges[e].u == v2 ? w.edges[e].v : w.edges[e].u;
            if (w.is_cross[e]) {
                w.trace.note("initial stage: partner holds the color on a cross edge");
                continue;
            }
            if (!w.st.U_star.contains(wv)) {
                w.exchange({reservoir}, {e}, c);
                w.origin_extra[{wv, c}] = 2;
                continue;
            }
            // partner-side relief: move a shared color off both v2 and wv
            bool done = false;
            for (int j = 1; j <= k && !done; ++j) {
                if (j == c) continue;
                int ex = w.at[v2][j], ey = w.at[wv][j];
                if (ex < 0 || ey < 0 || ex == ey) continue;
                if (w.is_cross[ex] || w.is_cross[ey]) continue;
                VertexId x = w.edges[ex].u == v2 ? w.edges[ex].v : w.edges[ex].u;
                VertexId y = w.edges[ey].u == wv ? w.edges[ey].v : w.edges[ey].u;
                if (x == y || x == wv || y == v2) continue;
                if (w.st.U_star.contains(x) || w.st.U_star.contains(y)) continue;
                if (w.resdeg[x] != 0 || w.resdeg[y] != 0) continue;
                // recolor: v2-wv takes j, the two j-edges open up
                w.unset_color(ex);
                w.unset_color(ey);
                w.unset_color(e);
                w.set_color(e, j);
                w.set_color(reservoir, c);
                w.origin_extra[{x, j}] = 2;
                w.origin_extra[{y, j}] = 2;
                done = true;
            }
            if (!done) {
                w.exchange({reservoir}, {e}, c);
                w.origin_extra[{wv, c}] = 2;
                w.trace.note("initial stage: direct uncolor fallback touching the guarded set");
            }
        }
        w.trace.bump("initial_stage_colors");
    }

    // guarded-vertex stage: length-2 exchanges push missing colors off the
    // deficient set and its designated partner
    void guarded_stage() {
        std::set<VertexId> handled;
        for (VertexId v : w.st.U.members) handled.insert(v);
        if (w.sets.u_partner >= 0) handled.insert(w.sets.u_partner);
        auto handle = [&](VertexId a, bool a_in_a) {
            for (int c = 1; c <= k; ++c) {
                if (!w.missing(a, c)) continue;
                bool done = false;
                for (VertexId b1 = 0; b1 < w.m && !done; ++b1) {
                    if (w.in_a(b1) == a_in_a) continue;
                    int unc = w.uncolored_cross(a, b1);
                    if (unc < 0) continue;
                    int good = w.good_side_edge(b1, c, a_in_a ? ub : ua);
                    if (good < 0) continue;
                    VertexId b2 = w.edges[good].u == b1 ? w.edges[good].v : w.edges[good].u;
                    if (b2 == a) continue;
                    w.exchange({unc}, {good}, c);
                    w.origin_extra[{b2, c}] = w.origin_of(a, c) + 2;
                    w.trace.bump("guarded_exchanges");
                    done = true;
                }
                // a one-edge path to a vertex missing the color works just as
                // well and costs no residual edge
                for (VertexId b = 0; b < w.m && !done; ++b) {
                    if (w.in_a(b) == a_in_a || !w.missing(b, c)) continue;
                    int unc = w.uncolored_cross(a, b);
                    if (unc < 0) continue;
                    w.exchange({unc}, {}, c);
                    w.trace.bump("guarded_direct");
                    done = true;
                }
                if (!done) {
                    if (!rescue)
                        step_fail("extend_to_one_factors",
                                  "no relief exchange for a guarded vertex",
                                  fmt("vertex ", a) + fmt(", color ", c));
                    w.trace.note(fmt("guarded vertex left for rescue: ", a));
                }
            }
        };
        for (VertexId a : handled)
            if (w.in_a(a)) handle(a, true);
        for (VertexId b : handled)
            if (!w.in_a(b)) handle(b, false);
    }

    std::vector<VertexId> candidates_toward(VertexId from, int c, bool target_side_a) {
        // vertices across the cut joined to `from` by an uncolored cross edge
        // and holding a good same-side edge of color c
        std::vector<VertexId> out;
        const auto& guard = target_side_a ? ua : ub;
        for (const auto& [u, mult] : w.g3.adjacency(from)) {
            if (w.in_a(u) != target_side_a) continue;
            if (w.uncolored_cross(from, u) < 0) continue;
            if (w.good_side_edge(u, c, guard) < 0) continue;
            out.push_back(u);
        }
        return out;
    }

    bool join_cross_pair(VertexId a, VertexId b, int c) {
        // direct edge
        int direct = w.uncolored_cross(a, b);
        if (direct >= 0) {
            w.exchange({direct}, {}, c);
            w.trace.bump("paths_direct");
            return true;
        }
        // five-edge template: a b1 b2 a2 a1 b
        for (VertexId a1 : candidates_toward(b, c, true)) {
            int ea = w.good_side_edge(a1, c, ua);
            VertexId a2 = w.edges[ea].u == a1 ? w.edges[ea].v : w.edges[ea].u;
            if (a2 == a || a1 == a) continue;
            for (VertexId b2 : candidates_toward(a2, c, false)) {
                int eb = w.good_side_edge(b2, c, ub);
                VertexId b1 = w.edges[eb].u == b2 ? w.edges[eb].v : w.edges[eb].u;
                if (b1 == b || b2 == b) continue;
                int e_ab1 = w.uncolored_cross(a, b1);
                if (e_ab1 < 0) continue;
                int e_b2a2 = w.uncolored_cross(b2, a2);
                int e_a1b = w.uncolored_cross(a1, b);
                if (e_b2a2 < 0 || e_a1b < 0) continue;
                std::set<VertexId> distinct{a, b, a1, a2, b1, b2};
                if (distinct.size() != 6) continue;
                w.exchange({e_ab1, e_b2a2, e_a1b}, {ea, eb}, c);
                audit_path(a, b, c, 5, 2);
                w.trace.bump("paths_template5");
                return true;
            }
        }
        return false;
    }

    bool join_same_side_pair(VertexId a, VertexId astar, int c, bool side_a) {
        const auto& my_guard = side_a ? ua : ub;
        const auto& other_guard = side_a ? ub : ua;
        // three-edge template: a b1 b2 a*
        for (VertexId b1 : candidates_toward(a, c, !side_a)) {
            int eb = w.good_side_edge(b1, c, other_guard);
            VertexId b2 = w.edges[eb].u == b1 ? w.edges[eb].v : w.edges[eb].u;
            int e2 = w.uncolored_cross(b2, astar);
            if (e2 < 0) continue;
            int e1 = w.uncolored_cross(a, b1);
            if (e1 < 0) continue;
            std::set<VertexId> distinct{a, astar, b1, b2};
            if (distinct.size() != 4) continue;
            w.exchange({e1, e2}, {eb}, c);
            audit_path(a, astar, c, 3, 1);
            w.trace.bump("paths_template3");
            return true;
        }
        // seven-edge template: a b1 b2 a2 a2* b2* b1* a*
        for (VertexId b1s : candidates_toward(astar, c, !side_a)) {
            int ebs = w.good_side_edge(b1s, c, other_guard);
            VertexId b2s = w.edges[ebs].u == b1s ? w.edges[ebs].v : w.edges[ebs].u;
            for (VertexId a2s : candidates_toward(b2s, c, side_a)) {
                int eas = w.good_side_edge(a2s, c, my_guard);
                VertexId a2 = w.edges[eas].u == a2s ? w.edges[eas].v : w.edges[eas].u;
                for (VertexId b2 : candidates_toward(a2, c, !side_a)) {
                    int eb = w.good_side_edge(b2, c, other_guard);
                    VertexId b1 = w.edges[eb].u == b2 ? w.edges[eb].v : w.edges[eb].u;
                    int e_ab1 = w.uncolored_cross(a, b1);
                    if (e_ab1 < 0) continue;
                    int e_b2a2 = w.uncolored_cross(b2, a2);
                    int e_a2sb2s = w.uncolored_cross(a2s, b2s);
                    int e_b1sas = w.uncolored_cross(b1s, astar);
                    if (e_b2a2 < 0 || e_a2sb2s < 0 || e_b1sas < 0) continue;
                    std::set<VertexId> distinct{a, astar, a2, a2s, b1, b2, b1s, b2s};
                    if (distinct.size() != 8) continue;
                    if (eb == ebs) continue;
                    w.exchange({e_ab1, e_b2a2, e_a2sb2s, e_b1sas}, {eb, eas, ebs}, c);
                    audit_path(a, astar, c, 7, 3);
                    w.trace.bump("paths_template7");
                    return true;
                }
            }
        }
        return false;
    }

    void audit_path(VertexId x, VertexId y, int c, int length, int residual_adds) {
        int total = length + w.origin_of(x, c) + w.origin_of(y, c);
        if (total > w.par.path_cap)
            w.trace.audits.push_back({"path_length_cap", false, fmt("length ", total)});
        if (residual_adds + (w.origin_of(x, c) + w.origin_of(y, c)) / 2 >
            w.par.per_pair_residual_cap)
            w.trace.audits.push_back({"per_pair_residual_cap", false, fmt("adds ", residual_adds)});
    }

    void run() {
        initial_stage();
        guarded_stage();
        for (int c = 1; c <= k; ++c) {
            if (!complete_class(c)) {
                if (!rescue)
                    step_fail("extend_to_one_factors", "no alternating path for pair",
                              fmt("color ", c) + stats(c));
                if (!rescue_class_with_matching(w, c, w.trace))
                    step_fail("extend_to_one_factors",
                              "class admits no perfect-matching completion", fmt("color ", c));
                w.trace.rescue_used = true;
            }
            if (!w.class_is_perfect(c))
                throw std::logic_error("class completion left an uncovered vertex");
        }
    }

    std::string stats(int c) {
        int missing = 0, unc_cross = 0;
        for (VertexId v = 0; v < w.m; ++v)
            if (w.missing(v, c)) ++missing;
        for (int i = 0; i < static_cast<int>(w.edges.size()); ++i)
            if (w.is_cross[i] && w.color[i] == 0 && !w.excluded[i]) ++unc_cross;
        return fmt(", missing vertices ", missing) + fmt(", uncolored cross edges ", unc_cross);
    }

    bool complete_class(int c) {
        // direct tier: maximum matching between the missing sides over
        // uncolored cross edges
        while (true) {
            std::vector<VertexId> ma, mb;
            for (VertexId v = 0; v < w.m; ++v) {
                if (!w.missing(v, c)) continue;
                (w.in_a(v) ? ma : mb).push_back(v);
            }
            if (ma.empty() && mb.empty()) return true;
            if (!ma.empty() && !mb.empty()) {
                std::vector<std::vector<int>> adj(ma.size());
                for (size_t i = 0; i < ma.size(); ++i)
                    for (size_t j = 0; j < mb.size(); ++j)
                        if (w.uncolored_cross(ma[i], mb[j]) >= 0)
                            adj[i].push_back(static_cast<int>(j));
                auto hk = hopcroft_karp(static_cast<int>(ma.size()),
                                        static_cast<int>(mb.size()), adj);
                bool any = false;
                for (size_t i = 0; i < ma.size(); ++i) {
                    if (hk.left_match[i] < 0) continue;
                    int e = w.uncolored_cross(ma[i], mb[hk.left_match[i]]);
                    if (e < 0) continue;
                    w.exchange({e}, {}, c);
                    w.trace.bump("paths_direct");
                    any = true;
                }
                if (any) continue;  // refresh the missing sets
            }
            // template tier
            bool progressed = false;
            if (!ma.empty() && !mb.empty()) {
                progressed = join_cross_pair(ma[0], mb[0], c);
            } else if (ma.size() >= 2) {
                progressed = join_same_side_pair(ma[0], ma[1], c, true);
            } else if (mb.size() >= 2) {
                progressed = join_same_side_pair(mb[0], mb[1], c, false);
            } else {
                return false;  // odd leftover: parity broke upstream
            }
            if (!progressed) return false;
        }
    }
};

}  // namespace

Step3Result extend_to_one_factors(const PipelineState& state, const Partition& part,
                                  const DecompositionParams& params, const SpecialEdgeSets& sets,
                                  const EdgeColoring& phi0, std::uint64_t seed, bool rescue) {
    (void)seed;
    int k = phi0.palette();
    Work w(state, part, params, sets, std::max(k, state.target_delta));
    auto gab = form_gab(state, part, sets);
    load_gab_coloring(w, gab.graph, phi0);

    Step3Engine engine(w, k, rescue);
    engine.run();

    Step3Result out;
    out.trace = std::move(w.trace);
    out.coloring = w.snapshot();
    out.residual.RA = Multigraph(w.m);
    out.residual.RB = Multigraph(w.m);
    long long ra = 0, rb = 0;
    for (int i = 0; i < static_cast<int>(w.edges.size()); ++i) {
        if (w.color[i] != 0 || !w.residual_eligible(i)) continue;
        const auto& e = w.edges[i];
        if (part.in_a(e.u)) {
            out.residual.RA.add_edge(e.u, e.v, 1);
            out.residual_a_instances.push_back(e);
            ++ra;
        } else {
            out.residual.RB.add_edge(e.u, e.v, 1);
            out.residual_b_instances.push_back(e);
            ++rb;
        }
    }
    out.trace.audits.push_back({"residual_sides_equal", ra == rb,
                                fmt("|RA| = ", ra) + fmt(", |RB| = ", rb)});
    out.trace.audits.push_back({"residual_edge_cap",
                                ra < params.residual_edges_cap && rb < params.residual_edges_cap,
                                fmt("cap = ", (long long)params.residual_edges_cap)});
    int max_rd = 0;
    for (int v = 0; v < w.m; ++v) max_rd = std::max(max_rd, w.resdeg[v]);
    out.trace.audits.push_back({"residual_degree_cap", max_rd < params.residual_degree_cap,
                                fmt("max residual degree = ", max_rd)});
    bool ra_clean = true;
    for (const auto& e : out.residual_a_instances)
        if (state.U_star.contains(e.u) || state.U_star.contains(e.v)) ra_clean = false;
    out.trace.audits.push_back({"residual_a_avoids_guarded", ra_clean, ""});
    out.trace.metrics["residual_a"] = ra;
    out.trace.metrics["residual_b"] = rb;
    return out;
}

// ---------------------------------------------------------------------------
// step 4
// ---------------------------------------------------------------------------

namespace {

// Extends color class c of w into a perfect matching of g3 using uncolored
// cross edges; pre-matches the listed vertices first.
void extend_class_with_cross(Work& w, int c,
                             const std::vector<std::pair<VertexId, VertexId>>& forced,
                             const std::string& step) {
    for (auto [x, y] : forced) {
        if (!w.missing(x, c)) continue;
        int e = w.uncolored_cross(x, y);
        if (e < 0 || !w.missing(y, c))
            step_fail(step, "forced boundary match unavailable",
                      fmt("vertex ", x) + fmt(" to ", y) + fmt(", color ", c));
        w.exchange({e}, {}, c);
    }
    std::vector<VertexId> ma, mb;
    for (VertexId v = 0; v < w.m; ++v) {
        if (!w.missing(v, c)) continue;
        (w.in_a(v) ? ma : mb).push_back(v);
    }
    if (ma.size() != mb.size())
        step_fail(step, "uncovered sides of unequal size",
                  fmt("A side ", ma.size()) + fmt(", B side ", mb.size()));
    if (ma.empty()) return;
    std::vector<std::vector<int>> adj(ma.size());
    for (size_t i = 0; i < ma.size(); ++i)
        for (size_t j = 0; j < mb.size(); ++j)
            if (w.uncolored_cross(ma[i], mb[j]) >= 0) adj[i].push_back(static_cast<int>(j));
    auto hk = hopcroft_karp(static_cast<int>(ma.size()), static_cast<int>(mb.size()), adj);
    if (hk.size != static_cast<int>(ma.size())) {
        auto wit = hall_witness(static_cast<int>(ma.size()), static_cast<int>(mb.size()), adj, hk);
        std::ostringstream os;
        os << "deficient set:";
        if (wit)
            for (int i : wit->left_set) os << ' ' << ma[i];
        step_fail(step, "matching extension failed the neighborhood condition", os.str());
    }
    for (size_t i = 0; i < ma.size(); ++i) {
        int e = w.uncolored_cross(ma[i], mb[hk.left_match[i]]);
        w.exchange({e}, {}, c);
    }
}

std::vector<std::pair<VertexId, VertexId>> boundary_first_matches(const Work& w, bool stage_one) {
    // names the preferred spouses for the slot-1 vertex and the vertex just
    // inside the split boundary
    std::vector<std::pair<VertexId, VertexId>> forced;
    const PipelineState& st = w.st;
    int p = st.split_index;
    bool tail = st.has_tail_vertex();
    VertexId v1 = st.at_position(1);
    int e_p = w.par.boundary_pairs;
    if (!tail) return forced;
    VertexId vpm1 = p >= 2 ? st.at_position(p - 1) : -1;
    VertexId vp = st.at_position(p);
    VertexId vp1 = st.at_position(p + 1);
    if (stage_one) {
        if (p == 2 && e_p > 0) forced.emplace_back(v1, vp1);
        if (p >= 4 && e_p > 0) forced.emplace_back(vpm1, vp1);
    } else {
        if (e_p > 0) {
            forced.emplace_back(v1, st.at_position(2));
            if (p >= 4) forced.emplace_back(vpm1, vp);
        }
    }
    return forced;
}

}  // namespace

Step4Result color_residual(const PipelineState& state, const Partition& part,
                           const DecompositionParams& params, const SpecialEdgeSets& sets,
                           const EdgeColoring& phi2, int core_colors, bool rescue) {
    int k = core_colors;
    if (k < 0 || k > phi2.palette())
        throw std::invalid_argument("core class count outside the incoming palette");
    Step4Result out;

    // residual instances from the incoming coloring
    Work probe(state, part, params, sets, k);
    probe.load(phi2);
    std::vector<int> res_a, res_b;
    for (int i = 0; i < static_cast<int>(probe.edges.size()); ++i) {
        if (probe.color[i] != 0 || !probe.residual_eligible(i)) continue;
        (part.in_a(probe.edges[i].u) ? res_a : res_b).push_back(i);
    }
    if (res_a.size() != res_b.size())
        step_fail("color_residual", "residual sides of unequal size",
                  fmt("A ", res_a.size()) + fmt(", B ", res_b.size()));

    // boundary-incident residual edges are colored first; the slot-2 vertex
    // only needs protection when slot 1 holds the appended vertex
    VertexId v2 = state.padded && state.stage_size() >= 2 ? state.at_position(2) : -1;
    VertexId vp = state.has_tail_vertex() ? state.at_position(state.split_index) : -1;
    std::vector<int> f_edges;
    for (int idx : res_b) {
        const auto& e = probe.edges[idx];
        bool hit = (v2 >= 0 && (e.u == v2 || e.v == v2)) ||
                   (vp >= 0 && (e.u == vp || e.v == vp));
        if (hit) f_edges.push_back(idx);
    }
    int l1 = static_cast<int>(f_edges.size());

    // palette for the rest of the residual
    Multigraph rab(probe.m);
    for (int idx : res_a) rab.add_edge(probe.edges[idx].u, probe.edges[idx].v, 1);
    for (int idx : res_b) rab.add_edge(probe.edges[idx].u, probe.edges[idx].v, 1);
    int l2 = rab.edge_count() == 0 ? 0 : rab.max_degree() + rab.max_multiplicity();
    if (k + l1 + l2 > state.target_delta) {
        if (!rescue)
            step_fail("color_residual", "color budget exhausted",
                      fmt("k = ", k) + fmt(", l1 = ", l1) + fmt(", l2 = ", l2) +
                          fmt(", target = ", state.target_delta));
        long long chi_a = 0, chi_b = 0;
        Multigraph ra(probe.m), rb(probe.m);
        for (int idx : res_a) ra.add_edge(probe.edges[idx].u, probe.edges[idx].v, 1);
        for (int idx : res_b) rb.add_edge(probe.edges[idx].u, probe.edges[idx].v, 1);
        if (ra.edge_count() > 0) chi_a = chromatic_index_exact(ra).chi;
        if (rb.edge_count() > 0) chi_b = chromatic_index_exact(rb).chi;
        l2 = static_cast<int>(std::max(chi_a, chi_b));
        out.trace.note("residual palette tightened to the exact index");
        out.trace.rescue_used = true;
        if (k + l1 + l2 > state.target_delta)
            step_fail("color_residual", "color budget exhausted even at the exact index",
                      fmt("k = ", k) + fmt(", l = ", l1 + l2));
    }
    int l = l1 + l2;
    out.l1 = l1;
    out.l2 = l2;

    Work w(state, part, params, sets, std::max(k + l, state.target_delta));
    w.load(phi2);

    // stage one: boundary-incident residual edges paired with arbitrary
    // opposite-side residual edges, one fresh color each
    std::vector<int> fstar;
    for (int idx : res_a) {
        if (static_cast<int>(fstar.size()) == l1) break;
        fstar.push_back(idx);
    }
    if (static_cast<int>(fstar.size()) < l1)
        step_fail("color_residual", "not enough opposite-side residual edges", fmt("need ", l1));
    for (int j = 0; j < l1; ++j) {
        int c = k + 1 + j;
        w.exchange({f_edges[j], fstar[j]}, {}, c);
        extend_class_with_cross(w, c, boundary_first_matches(w, true), "color_residual.stage1");
        if (!w.class_is_perfect(c))
            throw std::logic_error("stage-one class is not a perfect matching");
    }

    // stage two: equalized coloring of the remaining residual edges, sides
    // paired by sorted class size
    auto remaining = [&w](const std::vector<int>& src) {
        std::vector<int> out_idx;
        for (int idx : src)
            if (w.color[idx] == 0) out_idx.push_back(idx);
        return out_idx;
    };
    std::vector<int> rem_a = remaining(res_a), rem_b = remaining(res_b);
    if (rem_a.size() != rem_b.size())
        step_fail("color_residual", "stage-two residual sides diverged", "");
    if (!rem_a.empty() && l2 == 0)
        step_fail("color_residual", "residual edges left but no palette", "");

    auto side_classes = [&](const std::vector<int>& rem) {
        Multigraph side(w.m);
        for (int idx : rem) side.add_edge(w.edges[idx].u, w.edges[idx].v, 1);
        EdgeColoring col;
        if (auto h = try_color_heuristic(side, l2, 97)) col = *h;
        else {
            auto exact = chromatic_index_exact(side);
            exact.coloring.set_palette(l2);
            col = exact.coloring;
        }
        col = equalize(side, col);
        // map side instances back onto work indices, grouped per class
        std::vector<std::vector<int>> classes(l2);
        std::map<std::pair<VertexId, VertexId>, std::vector<int>> groups;
        for (int idx : rem) groups[{w.edges[idx].u, w.edges[idx].v}].push_back(idx);
        int gi = 0;
        for (const auto& [pair, mult] : side.pairs())
            for (int c = 0; c < mult; ++c) {
                int cl = col.color(gi++);
                classes[cl - 1].push_back(groups[pair][c]);
            }
        std::sort(classes.begin(), classes.end(),
                  [](const auto& x, const auto& y) { return x.size() > y.size(); });
        return classes;
    };

    if (!rem_a.empty() || !rem_b.empty()) {
        auto ca = side_classes(rem_a);
        auto cb = side_classes(rem_b);
        for (int j = 0; j < l2; ++j) {
            if (ca[j].size() != cb[j].size())
                step_fail("color_residual", "stage-two class sizes diverged",
                          fmt("rank ", j));
            int c = k + l1 + 1 + j;
            std::vector<int> both = ca[j];
            both.insert(both.end(), cb[j].begin(), cb[j].end());
            w.exchange(both, {}, c);
            extend_class_with_cross(w, c, boundary_first_matches(w, false),
                                    "color_residual.stage2");
            if (!w.class_is_perfect(c))
                throw std::logic_error("stage-two class is not a perfect matching");
        }
    } else {
        // no residual left; stage-two colors, if any, become cross matchings
        for (int j = 0; j < l2; ++j) {
            int c = k + l1 + 1 + j;
            extend_class_with_cross(w, c, boundary_first_matches(w, false),
                                    "color_residual.stage2");
        }
    }

    // boundary-triple audit on the remaining uncolored subgraph
    if (state.has_tail_vertex() && state.split_index >= 2) {
        VertexId va = state.at_position(state.split_index - 1);
        VertexId vb = state.at_position(state.split_index);
        VertexId vc = state.at_position(state.split_index + 1);
        long long inside = 0;
        for (int i = 0; i < static_cast<int>(w.edges.size()); ++i) {
            if (w.color[i] != 0) continue;
            const auto& e = w.edges[i];
            bool ue = e.u == va || e.u == vb || e.u == vc;
            bool ve = e.v == va || e.v == vb || e.v == vc;
            if (ue && ve) ++inside;
        }
        long long cap = state.target_delta - k - l;
        out.trace.audits.push_back({"leftover_triple_bound", inside <= cap,
                                    fmt("inside = ", inside) + fmt(", degree left = ", cap)});
    }

    out.coloring = w.snapshot();
    out.trace.metrics["l1"] = l1;
    out.trace.metrics["l2"] = l2;
    return out;
}

// ---------------------------------------------------------------------------
// step 5
// ---------------------------------------------------------------------------

Step5Result finish_nearly_bipartite(const PipelineState& state, const Partition& part,
                                    const DecompositionParams& params, const SpecialEdgeSets& sets,
                                    const EdgeColoring& phi4, int colors_used_so_far) {
    Step5Result out;
    // widen the palette if the incoming coloring used more colors
    Work w(state, part, params, sets, std::max(phi4.palette(), state.target_delta));
    w.load(phi4);
    // the offload edges come back into play here
    for (const auto& e : sets.E1) w.excluded[w.index_of(e)] = 0;

    int base = colors_used_so_far;
    int want = state.target_delta - base;
    if (want < 0)
        step_fail("finish_nearly_bipartite", "no colors left for the remainder",
                  fmt("used = ", base));

    // gather the remainder: every uncolored non-ignored instance
    Multigraph rest(w.m);
    std::map<std::pair<VertexId, VertexId>, std::vector<int>> groups;
    std::vector<char> is_f1(w.edges.size(), 0);
    for (const auto& e : sets.F1) is_f1[w.index_of(e)] = 1;
    bool internal_off_apex = false;
    for (int i = 0; i < static_cast<int>(w.edges.size()); ++i) {
        if (w.color[i] != 0 || is_f1[i]) continue;
        const auto& e = w.edges[i];
        rest.add_edge(e.u, e.v, 1);
        groups[{e.u, e.v}].push_back(i);
        if (!w.is_cross[i]) {
            bool apex_edge = sets.u_partner >= 0 && (e.u == sets.u_partner || e.v == sets.u_partner);
            if (!apex_edge) internal_off_apex = true;
        }
    }
    if (rest.edge_count() == 0) {
        if (want != 0)
            step_fail("finish_nearly_bipartite", "colors left over with nothing to color",
                      fmt("unused = ", want));
        out.coloring = w.snapshot();
        return out;
    }
    if (internal_off_apex)
        step_fail("finish_nearly_bipartite", "remainder has inside edges away from the apex", "");
    if (rest.max_degree() != want)
        step_fail("finish_nearly_bipartite", "remainder degree does not match the colors left",
                  fmt("max degree = ", rest.max_degree()) + fmt(", colors left = ", want));

    EdgeColoring local;
    if (sets.E1.empty()) {
        local = color_bipartite_konig(rest);  // throws with a witness if not bipartite
    } else {
        auto res = color_nearly_bipartite(rest);
        if (!res.colored) {
            std::ostringstream os;
            os << "subset:";
            for (VertexId v : res.overfull_witness.members) os << ' ' << v;
            os << ", edges " << res.witness_edges << " > " << res.witness_threshold;
            step_fail("finish_nearly_bipartite", "remainder has an overfull obstruction", os.str());
        }
        local = res.coloring;
    }

    int gi = 0;
    for (const auto& [pair, mult] : rest.pairs())
        for (int c = 0; c < mult; ++c) {
            int lc = local.color(gi++);
            if (lc == 0) throw std::logic_error("finish produced a partial coloring");
            w.set_color(groups[pair][c], base + lc);
        }
    out.tail_colors = want;
    out.coloring = w.snapshot();
    return out;
}

// ---------------------------------------------------------------------------
// pipeline orchestration
// ---------------------------------------------------------------------------

namespace {

void merge_trace(DecompositionTrace& into, const DecompositionTrace& from) {
    for (const auto& n : from.notes) into.notes.push_back(n);
    for (const auto& [k, v] : from.metrics) into.metrics[k] += v;
    for (const auto& a : from.audits) into.audits.push_back(a);
    into.rescue_used = into.rescue_used || from.rescue_used;
}

struct RescueOutcome {
    EdgeColoring coloring;
    int pm_classes = 0;
    int colors_used = 0;
};

// Wholesale completion: peel perfect matchings off g3 minus the ignored
// edges, finishing bipartite leftovers by direct coloring.
std::optional<RescueOutcome> rescue_complete(const PipelineState& state,
                                             const std::vector<EdgeInstance>& f1,
                                             std::uint64_t seed, DecompositionTrace& trace) {
    const Multigraph& g3 = state.g3;
    int m = g3.vertex_count();
    int delta_t = state.target_delta;
    Multigraph base = g3;
    for (const auto& e : f1) base.remove_edge(e.u, e.v, 1);

    for (int attempt = 0; attempt < 60; ++attempt) {
        Multigraph cur = base;
        std::vector<std::vector<std::pair<VertexId, VertexId>>> classes;  // pair lists
        std::vector<char> class_pm;
        bool ok = true;
        while (cur.edge_count() > 0) {
            int remaining = delta_t - static_cast<int>(classes.size());
            if (remaining <= 0) {
                ok = false;
                break;
            }
            auto bip = find_bipartition(cur);
            if (bip.bipartite) {
                EdgeColoring fin = color_bipartite_konig(cur);
                int kk = fin.palette();
                if (kk != remaining) {
                    ok = false;
                    break;
                }
                std::vector<std::vector<std::pair<VertexId, VertexId>>> tail(kk);
                int gi = 0;
                for (const auto& [pair, mult] : cur.pairs())
                    for (int c = 0; c < mult; ++c) tail[fin.color(gi++) - 1].push_back(pair);
                for (auto& cls : tail) {
                    bool pm = static_cast<int>(cls.size()) * 2 == m;
                    classes.push_back(std::move(cls));
                    class_pm.push_back(pm);
                }
                cur = Multigraph(m);
                break;
            }
            auto pm = perfect_matching(cur, seed * 7919 + attempt * 131 + classes.size());
            if (!pm) {
                ok = false;
                break;
            }
            for (auto [a, b] : *pm) cur.remove_edge(a, b, 1);
            classes.push_back(
                std::vector<std::pair<VertexId, VertexId>>(pm->begin(), pm->end()));
            class_pm.push_back(true);
        }
        if (!ok || cur.edge_count() > 0) continue;
        if (static_cast<int>(classes.size()) != delta_t) continue;

        // perfect-matching classes first, then assign copies per pair
        std::vector<int> order(classes.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&class_pm](int a, int b) { return class_pm[a] > class_pm[b]; });
        RescueOutcome res;
        res.colors_used = delta_t;
        for (int i : order)
            if (class_pm[i]) ++res.pm_classes;

        EdgeColoring col(g3, delta_t);
        std::map<std::pair<VertexId, VertexId>, int> next_copy;
        for (int rank = 0; rank < static_cast<int>(order.size()); ++rank) {
            for (const auto& pair : classes[order[rank]]) {
                int copy = next_copy[pair]++;
                col.set_color(col.index_of({pair.first, pair.second, copy}), rank + 1);
            }
        }
        res.coloring = std::move(col);
        trace.note(fmt("rescue completion after attempt ", attempt));
        trace.rescue_used = true;
        return res;
    }
    return std::nullopt;
}

std::vector<std::pair<EdgeInstance, int>> restrict_to_input(const PipelineState& state,
                                                            const EdgeColoring& coloring,
                                                            std::string& error) {
    std::vector<std::pair<EdgeInstance, int>> out;
    std::map<std::pair<VertexId, VertexId>, int> copy_counter;
    for (const auto& [pair, tags] : state.provenance) {
        for (int c = 0; c < static_cast<int>(tags.size()); ++c) {
            if (tags[c].source != EdgeSource::Original) continue;
            int col = coloring.color_of({pair.first, pair.second, c});
            auto okey = std::minmax(tags[c].orig_u, tags[c].orig_v);
            int copy = copy_counter[{okey.first, okey.second}]++;
            if (col == 0) {
                error = "an input edge stayed uncolored";
                return {};
            }
            out.push_back({{okey.first, okey.second, copy}, col});
        }
    }
    // totality against the input graph
    std::map<std::pair<VertexId, VertexId>, int> want;
    for (const auto& [pair, mult] : state.original.pairs()) want[pair] = mult;
    for (const auto& [pair, got] : copy_counter) {
        auto it = want.find(pair);
        int expect = it == want.end() ? 0 : it->second;
        if (got != expect) {
            error = "identification dropped input edges";
            return {};
        }
        if (it != want.end()) want.erase(it);
    }
    if (!want.empty()) {
        error = "identification dropped input edges";
        return {};
    }
    return out;
}

}  // namespace

std::string verify_decomposition(const DecompositionResult& r) {
    if (!r.complete) return "result is not complete";
    const Multigraph& g3 = r.state.g3;
    std::vector<char> ignored(r.coloring.size(), 0);
    for (const auto& e : r.ignored) {
        int idx = r.coloring.index_of(e);
        if (idx < 0) return "ignored edge is not a graph instance";
        ignored[idx] = 1;
    }
    std::vector<char> used(r.colors_used + 1, 0);
    for (int i = 0; i < r.coloring.size(); ++i) {
        int c = r.coloring.color(i);
        if (ignored[i]) {
            if (c != 0) return "an ignored edge carries a color";
            continue;
        }
        if (c < 1 || c > r.colors_used) return "an edge is uncolored or out of range";
        used[c] = 1;
    }
    for (int c = 1; c <= r.colors_used; ++c)
        if (!used[c]) return fmt("color unused: ", c);
    auto proper = check_proper(g3, r.coloring);
    if (!proper.ok) return "coloring is not proper: " + proper.detail;

    int m = g3.vertex_count();
    for (int c = 1; c <= r.k + r.l; ++c) {
        std::vector<char> covered(m, 0);
        for (int i = 0; i < r.coloring.size(); ++i) {
            if (r.coloring.color(i) != c) continue;
            const auto& e = r.coloring.instances()[i];
            if (covered[e.u] || covered[e.v]) return fmt("class is not a matching: ", c);
            covered[e.u] = covered[e.v] = 1;
        }
        for (int v = 0; v < m; ++v)
            if (!covered[v]) return fmt("class is not a perfect matching: ", c);
    }

    // restriction properness and totality
    std::map<std::pair<VertexId, int>, int> seen;
    std::map<std::pair<VertexId, VertexId>, int> copies;
    for (const auto& [inst, col] : r.restricted_to_input) {
        for (VertexId v : {inst.u, inst.v}) {
            auto key = std::make_pair(v, col);
            if (seen.count(key)) return "input restriction is not proper";
            seen[key] = 1;
        }
        ++copies[{inst.u, inst.v}];
    }
    for (const auto& [pair, mult] : r.state.original.pairs()) {
        auto it = copies.find(pair);
        if (it == copies.end() || it->second != mult) return "input restriction is not total";
    }
    return "";
}

DecompositionResult run_pipeline(const Multigraph& g, double eta, std::uint64_t seed, bool rescue,
                                 int target_delta) {
    DecompositionResult result;
    auto fail = [&result](const StepFailure& f) -> DecompositionResult& {
        result.complete = false;
        result.failure = f;
        return result;
    };

    try {
        result.state = regularize(g, eta, target_delta);
    } catch (const std::domain_error& e) {
        fail({"regularize", "deficiency sequence rejected", e.what()});
        return result;
    } catch (const std::invalid_argument& e) {
        fail({"regularize", "invalid input", e.what()});
        return result;
    } catch (const std::runtime_error& e) {
        fail({"regularize", "regularization broke down", e.what()});
        return result;
    }
    PipelineState& st = result.state;
    for (const auto& a : st.audits) result.trace.audits.push_back(a);

    DecompositionParams params;
    try {
        params = compute_params(st, eta);
    } catch (const std::invalid_argument& e) {
        fail({"compute_params", "parameters rejected", e.what()});
        return result;
    }
    result.trace.metrics["k_formula"] = params.k;
    result.trace.metrics["delta_prime"] = params.delta_prime;
    result.trace.metrics["e_p"] = params.boundary_pairs;
    if (params.boundary_pairs > 0 &&
        params.boundary_pairs <= 5.3 * params.eta * params.n_ref)
        result.trace.audits.push_back({"boundary_pairs_margin", false,
                                       fmt("e_p = ", params.boundary_pairs)});

    SpecialEdgeSets sets;
    StepFailure pending;
    Partition part;
    try {
        auto pairs = build_partner_pairs(st);
        part = random_balanced_partition(st.g3, pairs, params.tolerance, seed);
        part = partition_modification(part, st);
        result.trace.metrics["partition_imbalance"] = part.max_imbalance(st.g3);
        sets = select_special_edge_sets(st, part, params);
        result.trace.metrics["ignored_edges"] = static_cast<long long>(sets.F1.size());

        auto gab = form_gab(st, part, sets);
        for (const auto& a : gab.audits) result.trace.audits.push_back(a);

        int k_run = rescue ? std::min(params.k, st.target_delta) : params.k;
        if (k_run != params.k) {
            result.trace.note(fmt("core palette clamped to the degree target: ", k_run));
            result.trace.rescue_used = true;
        }
        EdgeColoring phi0 = color_gab(gab.graph, params, k_run, seed);
        {
            long long worst = 0;
            auto sizes = phi0.class_sizes();
            for (int c = 1; c <= phi0.palette(); ++c) {
                long long missing = 0;
                for (VertexId v = 0; v < gab.graph.vertex_count(); ++v) {
                    bool has = false;
                    for (int i = 0; i < phi0.size() && !has; ++i)
                        if (phi0.color(i) == c && (phi0.instances()[i].u == v ||
                                                   phi0.instances()[i].v == v))
                            has = true;
                    if (!has) ++missing;
                }
                worst = std::max(worst, missing);
            }
            result.trace.audits.push_back({"core_missing_cap", worst < params.missing_cap,
                                           fmt("worst per-color missing = ", worst)});
        }

        auto s3 = extend_to_one_factors(st, part, params, sets, phi0, seed, rescue);
        merge_trace(result.trace, s3.trace);
        auto s4 = color_residual(st, part, params, sets, s3.coloring, k_run, rescue);
        merge_trace(result.trace, s4.trace);
        auto s5 = finish_nearly_bipartite(st, part, params, sets, s4.coloring,
                                          k_run + s4.l1 + s4.l2);
        merge_trace(result.trace, s5.trace);

        result.coloring = s5.coloring;
        result.coloring.set_palette(std::max(s5.coloring.palette(), st.target_delta));
        result.k = k_run;
        result.l = s4.l1 + s4.l2;
        result.colors_used = st.target_delta;
        result.ignored = sets.F1;
        result.partition = part;
        result.complete = true;
    } catch (const StepFailureError& e) {
        pending = e.failure;
    } catch (const resource_error& e) {
        pending = {"pipeline", "resource cap", e.what()};
    } catch (const std::domain_error& e) {
        pending = {"pipeline", "construction infeasible", e.what()};
    } catch (const std::invalid_argument& e) {
        pending = {"pipeline", "invalid stage input", e.what()};
    } catch (const std::runtime_error& e) {
        pending = {"pipeline", "stage broke down", e.what()};
    }

    if (result.complete) {
        std::string err;
        result.restricted_to_input = restrict_to_input(st, result.coloring, err);
        if (!err.empty()) {
            pending = {"restriction", "input restriction failed", err};
            result.complete = false;
        } else {
            std::string verdict = verify_decomposition(result);
            if (!verdict.empty()) {
                pending = {"verification", "emitted coloring failed verification", verdict};
                result.complete = false;
            }
        }
    }
    if (result.complete) return result;

    if (!rescue) {
        fail(pending);
        return result;
    }

    result.trace.note("staged run failed (" + pending.step + ": " + pending.condition +
                      "); switching to rescue completion");
    auto rc = rescue_complete(st, sets.F1, seed, result.trace);
    if (!rc) {
        fail({pending.step, pending.condition,
              pending.diagnostics + "; rescue completion also failed"});
        return result;
    }
    result.coloring = rc->coloring;
    result.colors_used = rc->colors_used;
    result.k = std::min(params.k, rc->pm_classes);
    result.l = rc->pm_classes - result.k;
    result.ignored = sets.F1;
    result.partition = part;
    result.complete = true;
    std::string err;
    result.restricted_to_input = restrict_to_input(st, result.coloring, err);
    if (!err.empty()) {
        result.complete = false;
        fail({pending.step, "rescue restriction failed", err});
        return result;
    }
    std::string verdict = verify_decomposition(result);
    if (!verdict.empty()) {
        result.complete = false;
        fail({pending.step, "rescue verification failed", verdict});
    }
    return result;
}

}  // namespace ofc
