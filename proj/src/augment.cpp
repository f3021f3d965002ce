#include "ofc/augment.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "ofc/matching.hpp"

namespace ofc {

namespace {

long long ceil_div(long long a, long long b) { return (a + b - 1) / b; }

void push_check(std::vector<NamedCheck>& checks, const std::string& name, bool pass,
                const std::string& detail = "") {
    checks.push_back({name, pass, detail});
}

std::string fmt2(const std::string& a, long long x, const std::string& b, long long y) {
    std::ostringstream os;
    os << a << x << b << y;
    return os.str();
}

}  // namespace

AugmentedGraph build_case_a1_supergraph(const Multigraph& g, double eta) {
    int n = g.vertex_count();
    if (n == 0) throw std::invalid_argument("empty input");
    if (!g.is_simple()) throw std::invalid_argument("construction expects a simple input graph");
    if (eta <= 0 || eta >= 1) throw std::invalid_argument("eta must lie in (0, 1)");
    int delta = g.max_degree();
    auto [def, df_total] = deficiency_profile(g);

    long long w0 = static_cast<long long>(std::floor(2.0 * delta - n - eta * eta * n));
    long long w = (w0 % 2 + 2) % 2 == (n % 2 + 2) % 2 ? w0 : w0 - 1;
    if (w < 3)
        throw std::domain_error(fmt2("new block too small: |W| = ", w, ", need >= ", 3));
    for (int v = 0; v < n; ++v)
        if (def[v] > w - 2)
            throw std::domain_error(fmt2("deficiency exceeds block capacity: df = ", def[v],
                                         " > |W| - 2 = ", w - 2));

    long long fl = delta - (df_total > 0 ? ceil_div(df_total, w) : 0);
    long long d = (fl - 2) % 2 == 0 ? fl - 2 : fl - 3;
    if (d < 2) throw std::domain_error(fmt2("block degree infeasible: d = ", d, ", need >= ", 2));
    if (d >= w) throw std::domain_error(fmt2("block degree too large: d = ", d, " >= |W| = ", w));

    Multigraph block = build_regular_circulant(static_cast<int>(w), static_cast<int>(d));

    Multigraph h(n + static_cast<int>(w));
    for (const auto& [pair, m] : g.pairs()) h.add_edge(pair.first, pair.second, m);
    for (const auto& [pair, m] : block.pairs()) h.add_edge(n + pair.first, n + pair.second, m);

    // absorb deficiencies round-robin over the block
    long long i = 0;  // 1-based edge counter
    for (int v = 0; v < n; ++v) {
        for (int t = 0; t < def[v]; ++t) {
            ++i;
            long long widx;
            if (i < df_total || df_total % w != (w - 1) % w) {
                widx = (i - 1) % w;
            } else {
                widx = 0;  // relocate the last edge to keep two minimum-degree vertices
            }
            h.add_edge(v, n + static_cast<int>(widx), 1);
        }
    }

    AugmentedGraph out;
    out.graph = std::move(h);
    for (int v = 0; v < n; ++v) out.original_vertices.members.push_back(v);
    for (int v = n; v < n + static_cast<int>(w); ++v) out.added_vertices.members.push_back(v);

    const Multigraph& H = out.graph;
    push_check(out.checks, "simple", H.is_simple());
    push_check(out.checks, "max_degree_preserved", H.max_degree() == delta,
               fmt2("Delta(H) = ", H.max_degree(), ", Delta(G) = ", delta));
    bool originals_full = true;
    for (int v = 0; v < n; ++v) originals_full = originals_full && H.degree(v) == delta;
    push_check(out.checks, "original_vertices_full", originals_full);
    bool block_window = true;
    for (int v = n; v < H.vertex_count(); ++v)
        block_window = block_window && H.degree(v) >= delta - 4 && H.degree(v) <= delta;
    push_check(out.checks, "block_degree_window", block_window);
    int dmin = H.min_degree(), count_min = 0;
    for (int v = 0; v < H.vertex_count(); ++v)
        if (H.degree(v) == dmin) ++count_min;
    push_check(out.checks, "two_minimum_degree_vertices", count_min >= 2,
               fmt2("count = ", count_min, ", delta(H) = ", dmin));
    double half_bound = 0.5 * (1.0 + 0.5 * eta * eta) * H.vertex_count();
    push_check(out.checks, "min_degree_above_half", dmin > half_bound,
               fmt2("delta(H) = ", dmin, " vs bound*2 = ", static_cast<long long>(2 * half_bound)));
    return out;
}

AugmentedGraph build_case_a2_supergraph(const Multigraph& g, double eta,
                                        bool strip_matching_if_odd) {
    int n = g.vertex_count();
    if (n == 0) throw std::invalid_argument("empty input");
    if (!g.is_simple()) throw std::invalid_argument("construction expects a simple input graph");
    if (eta <= 0 || eta >= 1) throw std::invalid_argument("eta must lie in (0, 1)");

    Multigraph work = g;
    int delta = work.max_degree();
    std::vector<std::pair<VertexId, VertexId>> stripped;
    if (delta % 2 != 0) {
        if (!strip_matching_if_odd)
            throw std::domain_error("max degree is odd; enable matching strip or re-target");
        bool found = false;
        if (n % 2 == 0) {
            for (unsigned long long s = 0; s < 8 && !found; ++s)
                if (auto m = perfect_matching(work, s)) {
                    stripped = *m;
                    found = true;
                }
        } else {
            int dmin = work.min_degree();
            for (VertexId skip = 0; skip < n && !found; ++skip) {
                if (work.degree(skip) != dmin) continue;
                VertexSubset rest;
                for (int v = 0; v < n; ++v)
                    if (v != skip) rest.members.push_back(v);
                auto [sub, map] = work.induced_subgraph(rest);
                for (unsigned long long s = 0; s < 8 && !found; ++s)
                    if (auto m = perfect_matching(sub, s)) {
                        for (auto [a, b] : *m) stripped.emplace_back(map[a], map[b]);
                        found = true;
                    }
            }
        }
        if (!found) throw std::domain_error("no saturating matching available to even the degree");
        for (auto [a, b] : stripped) work.remove_edge(a, b, 1);
        delta -= 1;
        if (work.max_degree() != delta)
            throw std::logic_error("matching strip failed to lower the maximum degree");
    }

    auto [def, df_total] = deficiency_profile(work);
    if (df_total <= delta + 1)
        throw std::domain_error(fmt2("total deficiency too small: df = ", df_total,
                                     ", need > Delta + 1 = ", delta + 1));

    long long w = -1;
    long long start = ceil_div(delta + 1, 2);
    if ((start % 2 + 2) % 2 != (n % 2 + 2) % 2) ++start;
    for (long long cand = start; cand <= delta + 1; cand += 2) {
        if (cand >= delta - ceil_div(df_total, cand) + 2) {
            w = cand;
            break;
        }
    }
    if (w < 0) throw std::domain_error("no feasible block size");
    for (int v = 0; v < n; ++v)
        if (def[v] > w)
            throw std::domain_error(fmt2("deficiency exceeds block size: df = ", def[v],
                                         " > |W| = ", w));

    long long q = df_total / w, rem = df_total % w;
    // block degrees: delta - (q+1) on the first rem slots, delta - q elsewhere
    long long d_high = delta - q;
    if (rem == 0) d_high = delta - q;  // all slots receive exactly q cross edges
    long long d_used = rem > 0 ? d_high : delta - q;
    if (d_used - (rem > 0 ? 1 : 0) < 1 || d_used < 2)
        throw std::domain_error(fmt2("block degree infeasible: d = ", d_used, ", need >= ", 2));

    Multigraph block;
    if (rem > 0) {
        // realize: W - rem vertices of degree d_high, rem of degree d_high - 1;
        // low-degree slots must be the first rem block indices
        Multigraph raw = realize_near_regular(static_cast<int>(w), static_cast<int>(d_high),
                                              static_cast<int>(w - rem));
        std::vector<int> relabel(w);
        for (long long r = 0; r < rem; ++r) relabel[w - rem + r] = static_cast<int>(r);
        for (long long r = 0; r < w - rem; ++r) relabel[r] = static_cast<int>(rem + r);
        Multigraph shuffled(static_cast<int>(w));
        for (const auto& [pair, m] : raw.pairs())
            shuffled.add_edge(relabel[pair.first], relabel[pair.second], m);
        block = std::move(shuffled);
    } else {
        block = realize_near_regular(static_cast<int>(w), static_cast<int>(d_high),
                                     static_cast<int>(w));
    }

    Multigraph h(n + static_cast<int>(w));
    for (const auto& [pair, m] : work.pairs()) h.add_edge(pair.first, pair.second, m);
    for (const auto& [pair, m] : block.pairs()) h.add_edge(n + pair.first, n + pair.second, m);
    long long i = 0;
    for (int v = 0; v < n; ++v)
        for (int t = 0; t < def[v]; ++t) {
            ++i;
            h.add_edge(v, n + static_cast<int>((i - 1) % w), 1);
        }

    AugmentedGraph out;
    out.graph = std::move(h);
    for (int v = 0; v < n; ++v) out.original_vertices.members.push_back(v);
    for (int v = n; v < n + static_cast<int>(w); ++v) out.added_vertices.members.push_back(v);

    const Multigraph& H = out.graph;
    push_check(out.checks, "simple", H.is_simple());
    push_check(out.checks, "regular", H.is_regular() && H.max_degree() == delta,
               fmt2("Delta(H) = ", H.max_degree(), ", target = ", delta));
    push_check(out.checks, "block_at_least_five_sixths_delta", 6 * w >= 5 * delta,
               fmt2("6|W| = ", 6 * w, ", 5Delta = ", 5ll * delta));
    push_check(out.checks, "simplicity_margin", work.min_degree() + w >= delta,
               fmt2("delta + |W| = ", work.min_degree() + w, ", Delta = ", delta));
    return out;
}

int PipelineState::position_of(VertexId v) const {
    for (int i = 0; i < static_cast<int>(order.size()); ++i)
        if (order[i] == v) return i + 1;
    throw std::invalid_argument("vertex not present in the stage ordering");
}

Multigraph build_g0(const Multigraph& g) {
    Multigraph g0 = g;
    if (g0.vertex_count() % 2 != 0) g0.add_vertex();
    return g0;
}

PipelineState build_g1(const Multigraph& g, double eta, int target_delta) {
    PipelineState st;
    st.original = g;
    st.eta = eta;
    st.g0 = build_g0(g);
    st.padded = st.g0.vertex_count() != g.vertex_count();
    int m = st.g0.vertex_count();
    if (m == 0) throw std::invalid_argument("empty input");
    int delta = target_delta < 0 ? st.g0.max_degree() : target_delta;
    if (delta < st.g0.max_degree())
        throw std::invalid_argument("degree target below the maximum degree");
    st.target_delta = delta;

    // sort by degree ascending, ties by index
    st.order.resize(m);
    std::iota(st.order.begin(), st.order.end(), 0);
    std::stable_sort(st.order.begin(), st.order.end(), [&](VertexId a, VertexId b) {
        return st.g0.degree(a) < st.g0.degree(b);
    });
    st.base_deficiency.resize(m);
    std::vector<int> def_by_pos(m);
    for (int i = 0; i < m; ++i) {
        st.base_deficiency[i] = delta - st.g0.degree(st.order[i]);
        def_by_pos[i] = st.base_deficiency[i];
    }

    DegreeSequence seq(def_by_pos);  // already non-increasing; sorting is stable
    if (!seq.admissible())
        throw std::domain_error("deficiency sequence is not admissible (" +
                                seq.admissibility_failure() +
                                "); the input has an overfull obstruction");
    auto realization = realize_admissible_bipartite(seq);
    st.split_index = realization.split_index;
    st.layer = realization.graph;

    st.g1 = st.g0;
    st.provenance.clear();
    for (const auto& [pair, mult] : st.g0.pairs()) {
        auto& tags = st.provenance[pair];
        for (int c = 0; c < mult; ++c) tags.push_back({EdgeSource::Original, pair.first, pair.second});
    }
    for (const auto& [pair, mult] : st.layer.pairs()) {
        VertexId a = st.order[pair.first], b = st.order[pair.second];
        st.g1.add_edge(a, b, mult);
        auto key = std::minmax(a, b);
        auto& tags = st.provenance[{key.first, key.second}];
        for (int c = 0; c < mult; ++c) tags.push_back({EdgeSource::Layer, -1, -1});
    }

    // membership sets: vertices far from the degree target, plus the first
    double un = eta * m;
    for (int i = 0; i < m; ++i) {
        VertexId v = st.order[i];
        if (delta - st.g0.degree(v) >= un) st.U.members.push_back(v);
    }
    std::sort(st.U.members.begin(), st.U.members.end());
    st.U_star = st.U;
    if (!st.U_star.contains(st.order[0])) st.U_star.members.push_back(st.order[0]);
    std::sort(st.U_star.members.begin(), st.U_star.members.end());

    st.g_index = 0;
    for (int i = 0; i < m; ++i)
        if (st.base_deficiency[i] > 0) st.g_index = i + 1;
    st.h_index = 0;
    for (int i = 0; i < m; ++i)
        if (st.U_star.contains(st.order[i])) st.h_index = i + 1;

    st.g0_to_g3.resize(st.g0.vertex_count());
    std::iota(st.g0_to_g3.begin(), st.g0_to_g3.end(), 0);

    // stage audits
    push_check(st.audits, "g1_max_degree", st.g1.max_degree() == delta,
               fmt2("Delta(G1) = ", st.g1.max_degree(), ", target = ", delta));
    bool only_prefix_deficient = true;
    for (int i = st.split_index + 1; i < m; ++i)
        if (st.g1.degree(st.order[i]) != delta) only_prefix_deficient = false;
    push_check(st.audits, "g1_deficient_prefix_only", only_prefix_deficient);
    if (st.has_tail_vertex()) {
        int tail_def = delta - st.g1.degree(st.order[st.split_index]);
        push_check(st.audits, "g1_tail_deficiency_even", tail_def % 2 == 0,
                   fmt2("df = ", tail_def, " at position ", st.split_index + 1));
    }
    bool pairs_equal = true;
    for (int i = 1; i <= st.split_index / 2; ++i) {
        int a = st.g1.degree(st.at_position(2 * i - 1));
        int b = st.g1.degree(st.at_position(2 * i));
        if (a != b) pairs_equal = false;
    }
    push_check(st.audits, "g1_pair_degrees_equal", pairs_equal);

    st.g2 = st.g1;
    st.g3 = st.g1;
    return st;
}

namespace {

long long triple_cut(const Multigraph& g, VertexId a, VertexId b, VertexId c) {
    VertexSubset triple(std::vector<VertexId>{a, b, c});
    long long total = 0;
    for (VertexId v : triple.members)
        for (const auto& [u, m] : g.adjacency(v))
            if (!triple.contains(u)) total += m;
    return total;
}

}  // namespace

void vertex_identification(PipelineState& state) {
    int delta = state.target_delta;
    int rounds = 0;
    while (state.has_tail_vertex()) {
        int p = state.split_index;
        if (p < 2) throw std::runtime_error("identification underflow: split index below 2");
        VertexId a = state.at_position(p - 1);
        VertexId b = state.at_position(p);
        VertexId c = state.at_position(p + 1);
        if (triple_cut(state.g2, a, b, c) >= delta) break;
        if (p == 2)
            throw std::runtime_error(
                "identification underflow: boundary triple is the whole deficient prefix");
        ++rounds;

        // merge b and c into a, drop internal edges, relabel densely
        int old_n = state.g2.vertex_count();
        std::vector<int> remap(old_n, -1);
        int next = 0;
        for (int v = 0; v < old_n; ++v) {
            if (v == b || v == c) continue;
            remap[v] = next++;
        }
        remap[b] = remap[a];
        remap[c] = remap[a];

        Multigraph merged(old_n - 2);
        ProvenanceMap new_prov;
        for (const auto& [pair, mult] : state.g2.pairs()) {
            int x = remap[pair.first], y = remap[pair.second];
            if (x == y) continue;  // internal to the triple: dropped with its provenance
            auto key = std::minmax(x, y);
            merged.add_edge(key.first, key.second, mult);
            auto& dst = new_prov[{key.first, key.second}];
            const auto& src = state.provenance.at(pair);
            dst.insert(dst.end(), src.begin(), src.end());
        }

        PipelineState::Identification rec;
        rec.merged = {a, b, c};
        rec.survivor = remap[a];
        state.identification_log.push_back(rec);
        for (auto& v : state.g0_to_g3)
            v = remap[v] >= 0 ? remap[v] : remap[a];

        // rebuild the ordering: positions p, p+1 removed, merged vertex stays
        // at position p-1 and takes over the boundary role
        std::vector<VertexId> new_order;
        std::vector<int> new_base;
        for (int i = 0; i < static_cast<int>(state.order.size()); ++i) {
            if (i + 1 == p || i + 1 == p + 1) continue;
            VertexId ov = state.order[i];
            new_order.push_back(remap[ov]);
            int base = state.base_deficiency[i];
            if (i + 1 == p - 1)
                base = std::max({state.base_deficiency[p - 2], state.base_deficiency[p - 1],
                                 state.base_deficiency[p]});
            new_base.push_back(base);
        }
        state.order = std::move(new_order);
        state.base_deficiency = std::move(new_base);

        auto remap_subset = [&](VertexSubset& s, bool add_survivor) {
            std::vector<VertexId> nm;
            for (VertexId v : s.members) {
                if (v == b || v == c) continue;
                nm.push_back(remap[v]);
            }
            if (add_survivor) nm.push_back(remap[a]);
            s = VertexSubset(std::move(nm));
        };
        remap_subset(state.U, true);
        remap_subset(state.U_star, true);

        state.g2 = std::move(merged);
        state.provenance = std::move(new_prov);
        state.split_index = p - 2;

        int m2 = state.stage_size();
        state.g_index = 0;
        for (int i = 0; i < m2; ++i)
            if (state.base_deficiency[i] > 0) state.g_index = i + 1;
        state.h_index = 0;
        for (int i = 0; i < m2; ++i)
            if (state.U_star.contains(state.order[i])) state.h_index = i + 1;
    }

    if (rounds > 0) {
        int p = state.split_index;
        bool stop_ok = true;
        if (p >= 2 && state.has_tail_vertex()) {
            stop_ok = triple_cut(state.g2, state.at_position(p - 1), state.at_position(p),
                                 state.at_position(p + 1)) >= delta;
        }
        push_check(state.audits, "identification_stop_cut", stop_ok,
                   fmt2("rounds = ", rounds, ", p = ", p));
        if (state.has_tail_vertex()) {
            VertexId vp1 = state.at_position(p + 1);
            long long keep = state.g2.degree(vp1);
            if (p >= 2) {
                keep -= state.g2.multiplicity(vp1, state.at_position(p - 1));
                keep -= state.g2.multiplicity(vp1, state.at_position(p));
            }
            push_check(state.audits, "merged_outside_degree_third", 3 * keep >= delta,
                       fmt2("outside degree = ", keep, ", Delta = ", delta));
        }
    }
    bool pairs_equal = true;
    for (int i = 1; i <= state.split_index / 2; ++i)
        if (state.g2.degree(state.at_position(2 * i - 1)) !=
            state.g2.degree(state.at_position(2 * i)))
            pairs_equal = false;
    push_check(state.audits, "g2_pair_degrees_equal", pairs_equal);
    state.g3 = state.g2;
}

void edge_addition(PipelineState& state) {
    int delta = state.target_delta;
    state.g3 = state.g2;
    auto add = [&state](VertexId x, VertexId y, int mult) {
        if (mult <= 0) return;
        state.g3.add_edge(x, y, mult);
        auto key = std::minmax(x, y);
        auto& tags = state.provenance[{key.first, key.second}];
        for (int c = 0; c < mult; ++c) tags.push_back({EdgeSource::Added, -1, -1});
    };

    int p = state.split_index;
    if (state.has_tail_vertex()) {
        VertexId va = state.at_position(p - 1);
        VertexId vb = state.at_position(p);
        VertexId vc = state.at_position(p + 1);
        int df_c = delta - state.g2.degree(vc);
        int df_a = delta - state.g2.degree(va);
        if (df_c < 0 || df_a < 0) throw std::runtime_error("degree above target before additions");
        if (df_c % 2 != 0)
            throw std::runtime_error("boundary vertex deficiency is odd; parity chain violated");
        if (df_a < df_c / 2)
            throw std::runtime_error("pair deficiency too small to absorb the boundary vertex");
        add(vc, va, df_c / 2);
        add(vc, vb, df_c / 2);
        add(va, vb, df_a - df_c / 2);
        for (int i = 1; i <= p / 2 - 1; ++i) {
            VertexId x = state.at_position(2 * i - 1);
            VertexId y = state.at_position(2 * i);
            int dfx = delta - state.g2.degree(x);
            int dfy = delta - state.g2.degree(y);
            if (dfx != dfy)
                throw std::runtime_error("paired deficiencies diverge at position " +
                                         std::to_string(2 * i - 1));
            add(x, y, dfx);
        }
    } else {
        for (int i = 1; i <= state.stage_size() / 2; ++i) {
            VertexId x = state.at_position(2 * i - 1);
            VertexId y = state.at_position(2 * i);
            int dfx = delta - state.g2.degree(x);
            int dfy = delta - state.g2.degree(y);
            if (dfx != dfy)
                throw std::runtime_error("paired deficiencies diverge at position " +
                                         std::to_string(2 * i - 1));
            add(x, y, dfx);
        }
    }

    bool regular = true;
    for (int v = 0; v < state.g3.vertex_count(); ++v)
        if (state.g3.degree(v) != delta) regular = false;
    push_check(state.audits, "g3_regular", regular,
               fmt2("target = ", delta, ", vertices = ", state.g3.vertex_count()));
    if (!regular) throw std::runtime_error("regularization failed to reach the degree target");
}

PipelineState regularize(const Multigraph& g, double eta, int target_delta) {
    PipelineState st = build_g1(g, eta, target_delta);
    vertex_identification(st);
    edge_addition(st);
    return st;
}

G3Verdict verify_g3(const PipelineState& state, int cap) {
    G3Verdict out;
    int delta = state.target_delta;
    out.regular = state.g3.is_regular() && (state.g3.edge_count() == 0 || state.g3.max_degree() == delta);

    out.contains_g2 = true;
    for (const auto& [pair, m] : state.g2.pairs())
        if (state.g3.multiplicity(pair.first, pair.second) < m) out.contains_g2 = false;

    try {
        out.overfull = find_overfull_against(state.g3, delta, cap);
        out.overfull_checked = true;
    } catch (const resource_error&) {
        out.overfull_checked = false;
        out.detail = "overfull search skipped: vertex count above cap";
    }

    if (state.has_tail_vertex() && state.split_index >= 2) {
        VertexSubset triple(std::vector<VertexId>{state.at_position(state.split_index - 1),
                                                  state.at_position(state.split_index),
                                                  state.at_position(state.split_index + 1)});
        out.triple_bound_ok = state.g3.edges_within(triple) <= delta;
    }
    return out;
}

}  // namespace ofc
