// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion pins its tolerances in code and re-derives every
// expected value from an independent route (exhaustive enumeration, direct
// arithmetic, or a certified certificate).

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <vector>

#include "ofc/augment.hpp"
#include "ofc/decompose.hpp"
#include "ofc/degree_seq.hpp"
#include "ofc/edge_color.hpp"
#include "ofc/matching.hpp"
#include "ofc/multigraph.hpp"
#include "ofc/overfull.hpp"

using namespace ofc;

namespace {

int g_failures = 0;

struct Stopwatch {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

void report(int criterion, const std::string& label, bool pass, const std::string& stats) {
    std::printf("[%s] criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", criterion, label.c_str(),
                stats.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

Multigraph complete(int n) {
    Multigraph g(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) g.add_edge(i, j, 1);
    return g;
}

Multigraph complete_bipartite(int t) {
    Multigraph g(2 * t);
    for (int i = 0; i < t; ++i)
        for (int j = 0; j < t; ++j) g.add_edge(i, t + j, 1);
    return g;
}

Multigraph cycle(int n) {
    Multigraph g(n);
    for (int i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n, 1);
    return g;
}

Multigraph from_mask(int n, unsigned long long mask) {
    std::vector<std::tuple<VertexId, VertexId, int>> pairs;
    int bit = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j, ++bit)
            if (mask & (1ull << bit)) pairs.emplace_back(i, j, 1);
    return Multigraph::from_pairs(n, pairs);
}

Multigraph random_multigraph(int n, int percent, int max_mult, std::mt19937_64& rng) {
    Multigraph g(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (static_cast<int>(rng() % 100) < percent)
                g.add_edge(i, j, 1 + static_cast<int>(rng() % max_mult));
    return g;
}

std::vector<int> random_admissible(int m, int max_value, std::mt19937_64& rng) {
    while (true) {
        std::vector<int> vals(m);
        for (int& v : vals) v = static_cast<int>(rng() % (max_value + 1));
        std::sort(vals.begin(), vals.end(), std::greater<int>());
        long long sum = 0;
        for (int v : vals) sum += v;
        if (sum % 2 != 0) {
            for (int i = m - 1; i >= 0; --i)
                if (vals[i] > 0) {
                    --vals[i];
                    --sum;
                    break;
                }
            std::sort(vals.begin(), vals.end(), std::greater<int>());
        }
        if (sum == 0 || sum % 2 != 0) continue;
        if (vals[0] <= sum - vals[0]) return vals;
    }
}

// coloring of g3 with the ignored instances stripped, for parity checks
std::pair<Multigraph, EdgeColoring> strip_ignored(const DecompositionResult& r) {
    Multigraph g = r.state.g3;
    std::map<std::pair<VertexId, VertexId>, int> drop;
    for (const auto& e : r.ignored) ++drop[std::minmax(e.u, e.v)];
    for (const auto& [pair, cnt] : drop) g.remove_edge(pair.first, pair.second, cnt);
    EdgeColoring c(g, r.coloring.palette());
    int idx = 0;
    for (const auto& [pair, mult] : g.pairs())
        for (int copy = 0; copy < mult; ++copy)
            c.set_color(idx++, r.coloring.color_of({pair.first, pair.second, copy}));
    return {std::move(g), std::move(c)};
}

// ---------------------------------------------------------------------------

void criterion1() {
    Stopwatch watch;
    long long graphs = 0, violations = 0;
    for (int n = 2; n <= 7; ++n) {
        int bits = n * (n - 1) / 2;
        for (unsigned long long mask = 0; mask < (1ull << bits); ++mask) {
            Multigraph g = from_mask(n, mask);
            if (g.edge_count() == 0) continue;
            ++graphs;
            auto exact = chromatic_index_exact(g);
            int delta = g.max_degree();
            bool ok = exact.chi >= delta && exact.chi <= delta + 1;
            if (ok && n >= 3) {
                auto rho = density_rho(g);
                ok = rho.ceiling() <= exact.chi;
            }
            if (!ok) ++violations;
        }
    }
    long long multis = 0;
    std::mt19937_64 rng(101);
    while (multis < 500) {
        int n = 3 + static_cast<int>(rng() % 5);
        Multigraph g = random_multigraph(n, 60, 3, rng);
        if (g.edge_count() == 0) continue;
        ++multis;
        auto exact = chromatic_index_exact(g);
        int delta = g.max_degree(), mu = g.max_multiplicity();
        bool ok = exact.chi >= delta && exact.chi <= delta + mu &&
                  density_rho(g).ceiling() <= exact.chi && exact.coloring.total() &&
                  check_proper(g, exact.coloring).ok;
        if (!ok) ++violations;
    }
    double secs = watch.seconds();
    std::ostringstream os;
    os << graphs << " labeled graphs + " << multis << " multigraphs, " << violations
       << " violations, " << static_cast<int>(secs) << "s";
    report(1, "exact index sits in [Delta, Delta+mu] above ceil(rho)",
           violations == 0 && secs < 600, os.str());
}

void criterion2() {
    long long checked = 0, violations = 0;
    for (int n = 4; n <= 6; ++n) {
        int bits = n * (n - 1) / 2;
        for (unsigned long long mask = 0; mask < (1ull << bits); ++mask) {
            Multigraph g = from_mask(n, mask);
            if (g.edge_count() == 0 || g.max_degree() < n - 3) continue;
            ++checked;
            auto exact = chromatic_index_exact(g);
            auto cert = find_delta_overfull_subgraph(g);
            if ((exact.chi == g.max_degree()) != !cert.found()) ++violations;
            if (cert.found() && !cert.arithmetic_ok(g)) ++violations;
        }
    }
    std::mt19937_64 rng(202);
    for (int n = 7; n <= 9; ++n) {
        int done = 0;
        while (done < 300) {
            Multigraph g = random_multigraph(n, 60 + static_cast<int>(rng() % 40), 1, rng);
            if (g.edge_count() == 0 || g.max_degree() < n - 3) continue;
            ++done;
            ++checked;
            auto exact = chromatic_index_exact(g);
            auto cert = find_delta_overfull_subgraph(g);
            if ((exact.chi == g.max_degree()) != !cert.found()) ++violations;
        }
    }
    std::ostringstream os;
    os << checked << " graphs with Delta >= n-3, " << violations << " violations";
    report(2, "near-complete regime: class 1 iff no overfull subgraph", violations == 0, os.str());
}

void criterion3() {
    std::mt19937_64 rng(303);
    long long done = 0, violations = 0;
    while (done < 300) {
        int left = 1 + static_cast<int>(rng() % 4);
        int right = 1 + static_cast<int>(rng() % 4);
        bool apex = rng() % 2 == 0;
        int n = left + right + (apex ? 1 : 0);
        if (n > 8 || n < 3) continue;
        Multigraph g(n);
        for (int i = 0; i < left; ++i)
            for (int j = 0; j < right; ++j)
                if (rng() % 100 < 70) g.add_edge(i, left + j, 1 + static_cast<int>(rng() % 3));
        if (apex)
            for (int v = 0; v < left + right; ++v)
                if (rng() % 100 < 50) g.add_edge(n - 1, v, 1 + static_cast<int>(rng() % 3));
        if (g.edge_count() == 0) continue;
        ++done;
        auto res = color_nearly_bipartite(g);
        auto exact = chromatic_index_exact(g);
        bool expect_colored = exact.chi == g.max_degree();
        if (res.colored != expect_colored) {
            ++violations;
            continue;
        }
        if (res.colored) {
            bool ok = res.coloring.total() && res.coloring.palette() == g.max_degree() &&
                      check_proper(g, res.coloring).ok && parity_check(g, res.coloring).ok;
            if (!ok) ++violations;
        } else {
            long long e = g.edges_within(res.overfull_witness);
            long long thr = static_cast<long long>(g.max_degree()) *
                            (res.overfull_witness.size() / 2);
            if (!(e > thr)) ++violations;
        }
    }
    std::ostringstream os;
    os << done << " nearly-bipartite multigraphs, " << violations << " violations";
    report(3, "nearly-bipartite verdicts match the exact index", violations == 0, os.str());
}

void criterion4() {
    std::mt19937_64 rng(404);
    long long realized = 0, degenerate = 0, violations = 0;
    while (realized < 1000) {
        int m = 2 + static_cast<int>(rng() % 13);
        DegreeSequence seq(random_admissible(m, 14, rng));
        BipartiteRealization r;
        try {
            r = realize_admissible_bipartite(seq);
        } catch (const std::domain_error&) {
            ++degenerate;  // admissible but with no structured split; see notes
            continue;
        }
        ++realized;
        auto check = verify_bipartite_realization(seq, r);
        if (!check.all()) ++violations;
    }
    DegreeSequence figure({14, 8, 8, 7, 7, 5, 5, 4, 3, 3, 3, 2, 1, 0});
    auto fig = realize_admissible_bipartite(figure);
    bool fig_ok = fig.split_index == 8 && verify_bipartite_realization(figure, fig).all();
    auto pairseq = realize_admissible_bipartite(DegreeSequence({3, 3}));
    bool pair_ok = pairseq.split_index == 2 && pairseq.graph.edge_count() == 0;
    std::ostringstream os;
    os << realized << " realized + " << degenerate << " structurally impossible (rejected), "
       << violations << " violations; reference split " << fig.split_index;
    report(4, "bipartite layer realization verifies all six properties",
           violations == 0 && fig_ok && pair_ok, os.str());
}

void criterion5() {
    std::mt19937_64 rng(505);
    long long built = 0, rejected = 0, violations = 0;
    for (int it = 0; it < 200; ++it) {
        int n = 3 + static_cast<int>(rng() % 10);
        Multigraph g = random_multigraph(n, 30 + static_cast<int>(rng() % 60),
                                         1 + static_cast<int>(rng() % 2), rng);
        if (g.edge_count() == 0) continue;
        PipelineState st;
        try {
            st = regularize(g, 1.0 / (n + 1));
        } catch (const std::domain_error&) {
            ++rejected;
            continue;
        } catch (const std::runtime_error&) {
            ++rejected;
            continue;
        }
        ++built;
        bool ok = st.g3.is_regular() &&
                  (st.g3.edge_count() == 0 || st.g3.max_degree() == st.target_delta);
        for (const auto& [pair, m] : st.g2.pairs())
            ok = ok && st.g3.multiplicity(pair.first, pair.second) >= m;
        if (!ok) ++violations;
    }

    // critical inputs: certified absence of an overfull subgraph after the
    // rebuild (theorem-backed for this class), or the input itself was
    // overfull and the rebuild refuses it
    std::vector<Multigraph> criticals{petersen_minus_vertex(), cycle(5), cycle(7), cycle(9)};
    long long critical_checked = 0;
    for (const auto& g : criticals) {
        if (!is_edge_chromatic_critical(g)) {
            ++violations;
            continue;
        }
        ++critical_checked;
        try {
            auto st = regularize(g, 1.0 / (g.vertex_count() + 1));
            auto verdict = verify_g3(st, 16);
            if (!verdict.overfull_checked || verdict.overfull.found() || !verdict.regular)
                ++violations;
        } catch (const std::domain_error&) {
            auto cert = find_delta_overfull_subgraph(g);
            if (!cert.found()) ++violations;
        }
    }

    Multigraph k6e = complete(6);
    k6e.remove_edge(0, 1, 1);
    auto trace = regularize(k6e, 1.0 / 6.0);
    bool k6_ok = trace.g3.pairs() == complete(6).pairs();

    std::ostringstream os;
    os << built << " rebuilt + " << rejected << " refused, " << critical_checked
       << " critical inputs, " << violations << " violations, K6-minus-edge trace "
       << (k6_ok ? "exact" : "wrong");
    report(5, "regularization is regular, monotone, and overfull-free on criticals",
           violations == 0 && k6_ok, os.str());
}

void criterion6() {
    long long violations = 0;
    double worst = 0;
    std::ostringstream detail;
    auto run_family = [&](const Multigraph& g, const std::string& name) {
        Stopwatch watch;
        auto res = run_pipeline(g, 1.0 / g.vertex_count(), 9, true);
        double secs = watch.seconds();
        worst = std::max(worst, secs);
        bool ok = res.complete && verify_decomposition(res).empty() && secs < 300;
        if (ok) {
            auto [gg, cc] = strip_ignored(res);
            ok = parity_check(gg, cc).ok;
        }
        if (!ok) {
            ++violations;
            detail << " " << name << "!";
        }
    };
    for (int t = 2; t <= 12; ++t) run_family(complete(2 * t), "K" + std::to_string(2 * t));
    for (int t = 2; t <= 12; ++t)
        run_family(complete_bipartite(t), "K" + std::to_string(t) + "," + std::to_string(t));

    // seeded fuzz without the rescue path: structured outcomes only
    std::mt19937_64 rng(606);
    long long fuzz = 0, fuzz_bad = 0;
    while (fuzz < 50) {
        int n = 4 + static_cast<int>(rng() % 9);
        Multigraph g = random_multigraph(n, 40 + static_cast<int>(rng() % 50),
                                         1 + static_cast<int>(rng() % 2), rng);
        if (g.edge_count() == 0) continue;
        ++fuzz;
        try {
            auto res = run_pipeline(g, 1.0 / (n + n % 2), rng(), false);
            if (res.complete) {
                if (!verify_decomposition(res).empty()) ++fuzz_bad;
            } else if (!res.failure || res.failure->step.empty() ||
                       res.failure->condition.empty()) {
                ++fuzz_bad;
            }
        } catch (...) {
            ++fuzz_bad;
        }
    }
    std::ostringstream os;
    os << "22 named instances" << detail.str() << ", worst " << worst << "s; fuzz " << fuzz
       << " runs, " << fuzz_bad << " unstructured";
    report(6, "full decomposition completes with rescue and never panics without it",
           violations == 0 && fuzz_bad == 0, os.str());
}

void criterion7() {
    std::mt19937_64 rng(707);
    long long checked = 0, violations = 0;
    for (int it = 0; it < 100; ++it) {
        int n = 3 + static_cast<int>(rng() % 5);
        Multigraph g = random_multigraph(n, 60, 3, rng);
        if (g.edge_count() == 0) continue;
        ++checked;
        auto base = color_vizing_bound(g);
        if (!parity_check(g, base).ok) ++violations;
        auto eq = equalize(g, base);
        if (!parity_check(g, eq).ok) ++violations;
        auto sizes = eq.class_sizes();
        long long lo = g.edge_count(), hi = 0;
        for (int c = 1; c <= eq.palette(); ++c) {
            lo = std::min(lo, sizes[c]);
            hi = std::max(hi, sizes[c]);
        }
        if (hi - lo > 1) ++violations;

        if (find_bipartition(g).bipartite) {
            auto k = color_bipartite_konig(g);
            if (!parity_check(g, k).ok) ++violations;
        }
    }
    std::ostringstream os;
    os << checked << " colorings, " << violations << " violations";
    report(7, "every produced total coloring passes the parity audit", violations == 0, os.str());
}

void criterion8() {
    auto verdict = conjecture_verdict(petersen_minus_vertex(), 1.0 / 14.0);
    bool ok = !verdict.biconditional_holds && !verdict.hypothesis_third && verdict.chi == 4 &&
              !verdict.overfull.found();
    std::ostringstream os;
    os << "chi' = " << verdict.chi << ", Delta = " << verdict.delta << ", n = " << verdict.n
       << ", biconditional " << (verdict.biconditional_holds ? "holds" : "fails");
    report(8, "boundary graph: biconditional and degree hypothesis both fail", ok, os.str());
}

void criterion9() {
    bool ok = true;
    std::ostringstream os;
    for (int n : {5, 7, 9, 11}) {
        auto v = average_degree_criterion(cycle(n));
        ok = ok && v.conclusion_holds;
        os << "C" << n << (v.conclusion_holds ? " ok " : " BAD ");
    }
    auto p = average_degree_criterion(petersen_minus_vertex());
    ok = ok && p.conclusion_holds;
    os << "P* " << (p.conclusion_holds ? "ok" : "BAD") << " (24 >= 21)";
    report(9, "average-degree lower bound on the critical corpus", ok, os.str());
}

}  // namespace

int main() {
    Stopwatch total;
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    std::printf("%d criterion(s) failed; total %.1fs\n", g_failures, total.seconds());
    return g_failures == 0 ? 0 : 1;
}
