#include "ofc/degree_seq.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace ofc {

DegreeSequence::DegreeSequence(std::vector<int> values) {
    if (values.size() < 2) throw std::invalid_argument("degree sequence needs length >= 2");
    for (int v : values)
        if (v < 0) throw std::invalid_argument("degree sequence entries must be non-negative");
    perm_.resize(values.size());
    std::iota(perm_.begin(), perm_.end(), 0);
    std::stable_sort(perm_.begin(), perm_.end(),
                     [&values](int a, int b) { return values[a] > values[b]; });
    values_.reserve(values.size());
    for (int idx : perm_) values_.push_back(values[idx]);
}

long long DegreeSequence::sum() const {
    return std::accumulate(values_.begin(), values_.end(), 0ll);
}

bool DegreeSequence::admissible() const {
    long long s = sum();
    return s % 2 == 0 && values_[0] <= s - values_[0];
}

std::string DegreeSequence::admissibility_failure() const {
    long long s = sum();
    if (s % 2 != 0) return "odd degree sum " + std::to_string(s);
    if (values_[0] > s - values_[0])
        return "largest entry " + std::to_string(values_[0]) + " exceeds sum of the rest " +
               std::to_string(s - values_[0]);
    return "";
}

Multigraph build_regular_circulant(int m, int d) {
    if (m < 3) throw std::invalid_argument("circulant needs m >= 3");
    if (d < 2 || d % 2 != 0) throw std::invalid_argument("circulant degree must be even and >= 2");
    if (d >= m) throw std::invalid_argument("circulant degree must be less than m");
    Multigraph g(m);
    for (int i = 1; i <= d / 2; ++i)
        for (int j = 0; j < m; ++j) g.add_edge(j, (j + i) % m, 1);
    return g;
}

namespace {

// One Havel-Hakimi reduction on label-carrying entries. Ties broken by
// lowest original label.
struct Labeled {
    int degree;
    int label;
};

bool labeled_order(const Labeled& a, const Labeled& b) {
    if (a.degree != b.degree) return a.degree > b.degree;
    return a.label < b.label;
}

}  // namespace

GraphicResult is_graphic(const DegreeSequence& seq) {
    GraphicResult res;
    std::vector<int> d = seq.values();
    while (true) {
        std::sort(d.begin(), d.end(), std::greater<int>());
        if (d.empty() || d[0] == 0) {
            res.graphic = true;
            return res;
        }
        int s = d[0];
        if (s > static_cast<int>(d.size()) - 1) {
            res.graphic = false;
            return res;
        }
        std::vector<int> next(d.begin() + 1, d.end());
        for (int i = 0; i < s; ++i) {
            next[i] -= 1;
            if (next[i] < 0) {
                res.graphic = false;
                return res;
            }
        }
        std::sort(next.begin(), next.end(), std::greater<int>());
        res.trace.push_back({s, next});
        d = std::move(next);
    }
}

Multigraph realize_graphic(const DegreeSequence& seq) {
    auto check = is_graphic(seq);
    if (!check.graphic) {
        std::string step = check.trace.empty()
                               ? "initial sequence"
                               : "after " + std::to_string(check.trace.size()) + " reductions";
        throw std::domain_error("sequence is not graphic (" + step + ")");
    }
    int m = seq.length();
    std::vector<Labeled> entries(m);
    for (int i = 0; i < m; ++i) entries[i] = {seq.values()[i], i};
    Multigraph g(m);
    while (true) {
        std::sort(entries.begin(), entries.end(), labeled_order);
        if (entries[0].degree == 0) break;
        int s = entries[0].degree;
        int u = entries[0].label;
        entries[0].degree = 0;
        for (int i = 1; i <= s; ++i) {
            g.add_edge(u, entries[i].label, 1);
            entries[i].degree -= 1;
        }
    }
    return g;
}

Multigraph realize_near_regular(int m, int d, int t) {
    if (!(m >= d + 1 && d + 1 >= 3)) throw std::invalid_argument("need m >= d+1 >= 3");
    if (t < 1 || t > m) throw std::invalid_argument("t must lie in [1, m]");
    long long total = 1ll * t * d + 1ll * (m - t) * (d - 1);
    if (total % 2 != 0) throw std::invalid_argument("degree sum parity violation");
    std::vector<int> vals(m, d - 1);
    for (int i = 0; i < t; ++i) vals[i] = d;
    return realize_graphic(DegreeSequence(vals));
}

BipartiteRealization realize_admissible_bipartite(const DegreeSequence& seq) {
    if (!seq.admissible())
        throw std::domain_error("sequence is not admissible: " + seq.admissibility_failure());
    const auto& d = seq.values();
    const int m = seq.length();
    auto dval = [&d, m](int pos) { return pos >= 1 && pos <= m ? d[pos - 1] : 0; };

    // The split index is forced: the prefix pairs up with the layer carrying
    // d_i - d_{i+1} at odd positions, the tail must be saturated, and the
    // balance lands on position p+1. A split p works exactly when
    //   0 <= (prefix wiring demand) - (tail mass beyond p+1) <= d_{p+1}.
    // The demand gap grows with p, so valid splits are essentially unique;
    // take the largest, which keeps constant sequences at the p = m marker.
    long long prefix = 0;
    int split = -1;
    long long slack = 0;
    {
        std::vector<long long> tail(m + 3, 0);
        for (int i = m; i >= 1; --i) tail[i] = tail[i + 1] + dval(i);
        for (int p = 2; p <= m; p += 2) {
            prefix += dval(p - 1) - dval(p);
            long long s = prefix - (p + 2 <= m ? tail[p + 2] : 0);
            if (s >= 0 && s <= dval(p + 1)) {
                split = p;
                slack = s;
            }
        }
    }
    if (split < 0)
        throw std::domain_error(
            "admissible sequence admits no structured bipartite layer: every even split "
            "leaves the boundary demand outside [0, d_{p+1}]");

    // left demands at odd prefix positions, right demands on the tail; fill
    // northwest-style with the earliest left vertex taking the highest tail
    // positions, which yields the interval and ordering structure directly
    BipartiteRealization out;
    out.split_index = split;
    out.graph = Multigraph(m);
    std::vector<std::pair<int, long long>> rows;  // (0-based vertex, demand)
    for (int i = 1; i <= split; i += 2) {
        long long need = dval(i) - dval(i + 1);
        if (need > 0) rows.emplace_back(i - 1, need);
    }
    std::vector<std::pair<int, long long>> cols;
    if (split + 1 <= m && slack > 0) cols.emplace_back(split, slack);
    for (int i = split + 2; i <= m; ++i)
        if (dval(i) > 0) cols.emplace_back(i - 1, dval(i));
    // columns consumed from the highest position downward
    std::sort(cols.begin(), cols.end(), std::greater<>());
    size_t ci = 0;
    for (auto& [row, need] : rows) {
        while (need > 0) {
            if (ci >= cols.size()) throw std::logic_error("bipartite layer demands diverged");
            long long take = std::min(need, cols[ci].second);
            out.graph.add_edge(row, cols[ci].first, static_cast<int>(take));
            need -= take;
            cols[ci].second -= take;
            if (cols[ci].second == 0) ++ci;
        }
    }
    if (ci < cols.size() && cols[ci].second > 0)
        throw std::logic_error("bipartite layer demands diverged");
    return out;
}

RealizationCheck verify_bipartite_realization(const DegreeSequence& seq,
                                              const BipartiteRealization& r) {
    const int m = seq.length();
    if (r.graph.vertex_count() != m)
        throw std::invalid_argument("realization vertex count does not match sequence length");
    const int p = r.split_index;
    if (p < 2 || p > m || p % 2 != 0)
        throw std::invalid_argument("split index must be even and in [2, m]");
    const auto& d = seq.values();
    const Multigraph& L = r.graph;
    RealizationCheck out;
    std::ostringstream why;

    auto dval = [&d, m](int pos) { return pos >= 1 && pos <= m ? d[pos - 1] : 0; };
    auto dL = [&L](int pos) { return L.degree(pos - 1); };

    out.degree_pairing = true;
    for (int i = 1; i <= p && out.degree_pairing; i += 2) {
        if (dL(i) != dval(i) - dval(i + 1)) {
            out.degree_pairing = false;
            why << "position " << i << ": layer degree " << dL(i) << " != " << dval(i) - dval(i + 1);
        } else if (i + 1 <= m && dL(i + 1) != 0) {
            out.degree_pairing = false;
            why << "position " << i + 1 << ": expected isolated, degree " << dL(i + 1);
        }
    }

    out.tail_degrees = true;
    if (p + 1 <= m && dL(p + 1) > dval(p + 1)) {
        out.tail_degrees = false;
        why << "position " << p + 1 << ": layer degree " << dL(p + 1) << " > " << dval(p + 1);
    }
    for (int i = p + 2; i <= m && out.tail_degrees; ++i)
        if (dL(i) != dval(i)) {
            out.tail_degrees = false;
            why << "position " << i << ": layer degree " << dL(i) << " != " << dval(i);
        }

    out.bipartition = true;
    for (const auto& [pair, mult] : L.pairs()) {
        bool left_u = pair.first < p, left_v = pair.second < p;
        if (left_u == left_v) {
            out.bipartition = false;
            why << "edge (" << pair.first << "," << pair.second << ") does not cross the split";
            break;
        }
    }

    // forest with at most two non-leaf neighbors per vertex, on the support
    out.forest_shape = true;
    {
        Multigraph s = L.underlying_simple();
        std::vector<int> comp(m, -1);
        int edges_seen = 0, comps = 0, verts_seen = 0;
        for (int v = 0; v < m && out.forest_shape; ++v) {
            if (comp[v] >= 0) continue;
            ++comps;
            std::vector<int> stack{v};
            comp[v] = v;
            while (!stack.empty()) {
                int x = stack.back();
                stack.pop_back();
                ++verts_seen;
                for (int y : s.neighbors(x)) {
                    ++edges_seen;
                    if (comp[y] < 0) {
                        comp[y] = v;
                        stack.push_back(y);
                    }
                }
            }
        }
        if (edges_seen / 2 != verts_seen - comps) {
            out.forest_shape = false;
            why << "support contains a cycle";
        }
        for (int v = 0; v < m && out.forest_shape; ++v) {
            int heavy = 0;
            for (int u : s.neighbors(v))
                if (s.simple_degree(u) >= 2) ++heavy;
            if (heavy > 2) {
                out.forest_shape = false;
                why << "vertex " << v << " has " << heavy << " non-leaf neighbors";
            }
        }
    }

    auto neighbor_positions = [&L](int pos) {
        std::vector<int> out_pos;
        for (VertexId u : L.neighbors(pos - 1)) out_pos.push_back(u + 1);
        std::sort(out_pos.begin(), out_pos.end());
        return out_pos;
    };

    out.left_intervals = true;
    {
        std::vector<std::pair<int, std::vector<int>>> lefts;  // (i, neighbor positions)
        for (int i = 1; i <= p; i += 2) {
            auto nb = neighbor_positions(i);
            if (!nb.empty()) lefts.emplace_back(i, std::move(nb));
        }
        for (const auto& [i, nb] : lefts) {
            for (size_t t = 0; t + 1 < nb.size() && out.left_intervals; ++t)
                if (nb[t + 1] != nb[t] + 1) {
                    out.left_intervals = false;
                    why << "neighbors of position " << i << " are not consecutive";
                }
        }
        for (size_t a = 0; a + 1 < lefts.size() && out.left_intervals; ++a)
            for (size_t b = a + 1; b < lefts.size() && out.left_intervals; ++b)
                if (lefts[a].second.front() < lefts[b].second.back()) {
                    out.left_intervals = false;
                    why << "positions " << lefts[a].first << " and " << lefts[b].first
                        << " violate the neighbor ordering";
                }
    }

    out.right_order = true;
    {
        std::vector<std::pair<int, std::vector<int>>> rights;
        for (int i = p + 1; i <= m; ++i) {
            auto nb = neighbor_positions(i);
            if (!nb.empty()) rights.emplace_back(i, std::move(nb));
        }
        for (size_t a = 0; a + 1 < rights.size() && out.right_order; ++a)
            for (size_t b = a + 1; b < rights.size() && out.right_order; ++b)
                if (rights[a].second.front() < rights[b].second.back()) {
                    out.right_order = false;
                    why << "tail positions " << rights[a].first << " and " << rights[b].first
                        << " violate the neighbor ordering";
                }
    }

    out.detail = why.str();
    return out;
}

}  // namespace ofc
