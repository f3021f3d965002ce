#include <doctest.h>

#include <functional>
#include <random>

#include "helpers.hpp"
#include "ofc/edge_color.hpp"
#include "ofc/overfull.hpp"

using namespace ofc;
using test_helpers::complete;
using test_helpers::cycle;

namespace {

Multigraph doubled_triangle() {
    Multigraph g(3);
    g.add_edge(0, 1, 2);
    g.add_edge(0, 2, 2);
    g.add_edge(1, 2, 2);
    return g;
}

Multigraph path3() {  // path with 3 edges on 4 vertices
    Multigraph g(4);
    g.add_edge(0, 1, 1);
    g.add_edge(1, 2, 1);
    g.add_edge(2, 3, 1);
    return g;
}

// all proper total colorings of g with palette k, by brute force
int count_proper_total(const Multigraph& g, int k,
                       const std::function<void(const EdgeColoring&)>& visit) {
    auto inst = g.instances();
    EdgeColoring c(g, k);
    int total = 0;
    std::function<void(size_t)> rec = [&](size_t i) {
        if (i == inst.size()) {
            ++total;
            visit(c);
            return;
        }
        for (int col = 1; col <= k; ++col) {
            c.set_color(static_cast<int>(i), col);
            if (check_proper(g, c).ok) rec(i + 1);
        }
        c.set_color(static_cast<int>(i), 0);
    };
    rec(0);
    return total;
}

}  // namespace

TEST_CASE("properness checking") {
    Multigraph k3 = complete(3);
    EdgeColoring c(k3, 3);
    c.set_color(0, 1);
    c.set_color(1, 2);
    c.set_color(2, 3);
    CHECK(check_proper(k3, c).ok);

    c.set_color(2, 1);  // edges (0,1) and (1,2) share vertex... recheck below
    auto bad = check_proper(k3, c);
    CHECK(!bad.ok);
    CHECK(bad.first >= 0);
    CHECK(bad.second >= 0);

    EdgeColoring blank(k3, 3);
    CHECK(check_proper(k3, blank).ok);
}

TEST_CASE("parity of missing counts") {
    Multigraph k4 = complete(4);
    auto exact = chromatic_index_exact(k4);
    REQUIRE(exact.chi == 3);
    CHECK(parity_check(k4, exact.coloring).ok);

    // every proper total 2-coloring of the 3-edge path passes
    Multigraph p3 = path3();
    int seen = count_proper_total(p3, 2, [&](const EdgeColoring& c) {
        CHECK(parity_check(p3, c).ok);
    });
    CHECK(seen == 2);

    // every proper total 3-coloring of C5: each color missed by an odd count
    Multigraph c5 = cycle(5);
    int colorings = count_proper_total(c5, 3, [&](const EdgeColoring& c) {
        REQUIRE(parity_check(c5, c).ok);
        for (int col = 1; col <= 3; ++col) {
            int missing = 0;
            for (int v = 0; v < 5; ++v) {
                auto mc = c.missing_colors(5, v);
                if (std::find(mc.begin(), mc.end(), col) != mc.end()) ++missing;
            }
            CHECK(missing % 2 == 1);
        }
    });
    CHECK(colorings > 0);

    EdgeColoring partial(k4, 3);
    CHECK_THROWS_AS(parity_check(k4, partial), std::invalid_argument);
}

TEST_CASE("bipartite coloring hits the degree bound") {
    Multigraph c6 = cycle(6);
    auto c = color_bipartite_konig(c6);
    CHECK(c.palette() == 2);
    CHECK(c.total());
    CHECK(check_proper(c6, c).ok);

    Multigraph bundle(2);
    bundle.add_edge(0, 1, 3);
    auto c2 = color_bipartite_konig(bundle);
    CHECK(c2.palette() == 3);
    CHECK(check_proper(bundle, c2).ok);
    CHECK(c2.total());

    CHECK_THROWS_WITH_AS(color_bipartite_konig(complete(3)),
                         doctest::Contains("odd cycle"), std::domain_error);

    // random bipartite multigraphs stay at Delta colors
    std::mt19937_64 rng(5);
    for (int it = 0; it < 40; ++it) {
        Multigraph g(8);
        for (int i = 0; i < 4; ++i)
            for (int j = 4; j < 8; ++j)
                if (rng() % 2) g.add_edge(i, j, 1 + rng() % 3);
        if (g.edge_count() == 0) continue;
        auto col = color_bipartite_konig(g);
        REQUIRE(col.palette() == g.max_degree());
        REQUIRE(col.total());
        REQUIRE(check_proper(g, col).ok);
        REQUIRE(parity_check(g, col).ok);
    }
}

TEST_CASE("degree-plus-multiplicity bound coloring") {
    Multigraph k3 = complete(3);
    auto c = color_vizing_bound(k3);
    CHECK(c.palette() <= 3);
    CHECK(c.total());
    CHECK(check_proper(k3, c).ok);

    Multigraph dt = doubled_triangle();
    auto cd = color_vizing_bound(dt);
    CHECK(cd.palette() <= 6);
    CHECK(cd.total());
    CHECK(check_proper(dt, cd).ok);
    auto rho = density_rho(dt);
    CHECK(rho.numerator == 6);
    CHECK(rho.denominator == 1);
    CHECK(chromatic_index_exact(dt).chi == 6);
}

TEST_CASE("equalized class sizes") {
    Multigraph p3 = path3();
    auto c = color_bipartite_konig(p3);
    auto eq = equalize(p3, c);
    auto sizes = eq.class_sizes();
    std::vector<long long> sorted(sizes.begin() + 1, sizes.end());
    std::sort(sorted.begin(), sorted.end(), std::greater<long long>());
    CHECK(sorted == std::vector<long long>{2, 1});

    Multigraph star(4);
    for (int leaf = 1; leaf < 4; ++leaf) star.add_edge(0, leaf, 1);
    auto cs = equalize(star, color_bipartite_konig(star));
    auto ssz = cs.class_sizes();
    CHECK(ssz[1] == 1);
    CHECK(ssz[2] == 1);
    CHECK(ssz[3] == 1);

    Multigraph k4 = complete(4);
    auto base = color_bounded(k4, 4, 3);
    auto eq4 = equalize(k4, base);
    auto s4 = eq4.class_sizes();
    std::vector<long long> sorted4(s4.begin() + 1, s4.end());
    std::sort(sorted4.begin(), sorted4.end(), std::greater<long long>());
    CHECK(sorted4 == std::vector<long long>{2, 2, 1, 1});
    CHECK(check_proper(k4, eq4).ok);
    // the colored multiset is preserved
    CHECK(eq4.colored_count() == base.colored_count());
}

TEST_CASE("density by exhaustive search") {
    auto k5 = density_rho(complete(5));
    CHECK(k5.numerator == 10);
    CHECK(k5.denominator == 2);
    CHECK(k5.witness.size() == 5);

    auto c5 = density_rho(cycle(5));
    CHECK(c5.numerator == 5);
    CHECK(c5.denominator == 2);

    auto dt = density_rho(doubled_triangle());
    CHECK(dt.numerator == 6);
    CHECK(dt.denominator == 1);

    Multigraph two(2);
    two.add_edge(0, 1, 1);
    CHECK_THROWS_AS(density_rho(two), std::invalid_argument);
    CHECK_THROWS_AS(density_rho(complete(8), 6), resource_error);
}

TEST_CASE("exact chromatic index on landmarks") {
    CHECK(chromatic_index_exact(complete(4)).chi == 3);
    CHECK(chromatic_index_exact(cycle(5)).chi == 3);
    CHECK(chromatic_index_exact(complete(5)).chi == 5);
    CHECK(chromatic_index_exact(complete(6)).chi == 5);
    auto pstar = chromatic_index_exact(petersen_minus_vertex());
    CHECK(pstar.chi == 4);
    CHECK(check_proper(petersen_minus_vertex(), pstar.coloring).ok);
}

TEST_CASE("bounded coloring") {
    auto c = color_bounded(complete(4), 4, 1);
    CHECK(c.total());
    CHECK(check_proper(complete(4), c).ok);

    auto cd = color_bounded(doubled_triangle(), 6, 1);
    CHECK(cd.total());
    CHECK(check_proper(doubled_triangle(), cd).ok);

    CHECK_THROWS_AS(color_bounded(cycle(6), 1, 1), std::invalid_argument);
}

TEST_CASE("nearly-bipartite coloring matches the overfull dichotomy") {
    auto res = color_nearly_bipartite(cycle(5));
    CHECK(!res.colored);
    CHECK(res.witness_edges == 5);
    CHECK(res.witness_threshold == 4);

    auto res6 = color_nearly_bipartite(cycle(6));
    CHECK(res6.colored);
    CHECK(res6.coloring.palette() == 2);
    CHECK(check_proper(cycle(6), res6.coloring).ok);

    // apex over a bipartite 3-regular block
    Multigraph g = test_helpers::complete_bipartite(3, 3);
    g.add_vertex();
    for (int j = 0; j < 3; ++j) g.add_edge(6, j, 1);
    auto resg = color_nearly_bipartite(g);
    auto exact = chromatic_index_exact(g);
    CHECK(resg.colored == (exact.chi == g.max_degree()));
    if (resg.colored) {
        CHECK(resg.coloring.total());
        CHECK(check_proper(g, resg.coloring).ok);
    }

    // K4 is not nearly-bipartite: removing one vertex leaves a triangle
    CHECK_THROWS_AS(color_nearly_bipartite(complete(4)), std::domain_error);
}

TEST_CASE("alternating path swaps") {
    // direct edge: both endpoints miss the color
    Multigraph p3 = path3();
    EdgeColoring c(p3, 2);
    c.set_color(c.index_of({0, 1, 0}), 1);
    c.set_color(c.index_of({2, 3, 0}), 1);
    auto swapped = swap_alternating_path(p3, c, {{1, 2, 0}}, 2);
    CHECK(swapped.color_of({1, 2, 0}) == 2);
    CHECK(check_proper(p3, swapped).ok);

    // length-3 alternation: uncolored, colored, uncolored
    Multigraph p = path3();
    EdgeColoring c2(p, 1);
    c2.set_color(c2.index_of({1, 2, 0}), 1);
    auto s2 = swap_alternating_path(p, c2, {{0, 1, 0}, {1, 2, 0}, {2, 3, 0}}, 1);
    CHECK(s2.color_of({0, 1, 0}) == 1);
    CHECK(s2.color_of({1, 2, 0}) == kUncolored);
    CHECK(s2.color_of({2, 3, 0}) == 1);
    CHECK(check_proper(p, s2).ok);

    // violations are rejected without touching the input
    EdgeColoring before = c2;
    CHECK_THROWS_AS(swap_alternating_path(p, c2, {{1, 2, 0}}, 1), std::invalid_argument);
    CHECK_THROWS_AS(swap_alternating_path(p, c2, {{0, 1, 0}, {2, 3, 0}}, 1),
                    std::invalid_argument);
    CHECK(c2.color_of({1, 2, 0}) == before.color_of({1, 2, 0}));
}

TEST_CASE("sandwich property on random multigraphs") {
    std::mt19937_64 rng(99);
    for (int it = 0; it < 80; ++it) {
        int n = 3 + static_cast<int>(rng() % 4);
        Multigraph g = test_helpers::random_multigraph(n, 0.6, 3, rng);
        if (g.edge_count() == 0) continue;
        auto exact = chromatic_index_exact(g);
        int delta = g.max_degree(), mu = g.max_multiplicity();
        REQUIRE(exact.chi >= delta);
        REQUIRE(exact.chi <= delta + mu);
        auto rho = density_rho(g);
        REQUIRE(rho.ceiling() <= exact.chi);
        REQUIRE(exact.coloring.total());
        REQUIRE(check_proper(g, exact.coloring).ok);
        REQUIRE(parity_check(g, exact.coloring).ok);

        auto viz = color_vizing_bound(g);
        REQUIRE(viz.total());
        REQUIRE(check_proper(g, viz).ok);
        auto eq = equalize(g, viz);
        REQUIRE(check_proper(g, eq).ok);
        auto sizes = eq.class_sizes();
        long long lo = g.edge_count(), hi = 0;
        for (int c2 = 1; c2 <= eq.palette(); ++c2) {
            lo = std::min(lo, sizes[c2]);
            hi = std::max(hi, sizes[c2]);
        }
        REQUIRE(hi - lo <= 1);
    }
}
