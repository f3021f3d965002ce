#include <doctest.h>

#include <random>
#include <sstream>

#include "ofc/io.hpp"
#include "ofc/multigraph.hpp"

using namespace ofc;

namespace {

Multigraph complete(int n) {
    Multigraph g(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) g.add_edge(i, j, 1);
    return g;
}

}  // namespace

TEST_CASE("degree profile basics") {
    Multigraph k3 = complete(3);
    auto p = degree_profile(k3, 0);
    CHECK(p.degree == 2);
    CHECK(p.simple_degree == 2);
    CHECK(p.vertex_multiplicity == 1);

    Multigraph bundle(2);
    bundle.add_edge(0, 1, 3);
    p = degree_profile(bundle, 0);
    CHECK(p.degree == 3);
    CHECK(p.simple_degree == 1);
    CHECK(p.vertex_multiplicity == 3);

    Multigraph lone(3);
    lone.add_edge(0, 1, 1);
    p = degree_profile(lone, 2);
    CHECK(p.degree == 0);
    CHECK(p.simple_degree == 0);
    CHECK(p.vertex_multiplicity == 0);

    CHECK_THROWS_AS(degree_profile(lone, 5), std::invalid_argument);
}

TEST_CASE("induced subgraphs") {
    Multigraph k4 = complete(4);
    auto [tri, map] = k4.induced_subgraph(VertexSubset({0, 1, 3}));
    CHECK(tri.vertex_count() == 3);
    CHECK(tri.edge_count() == 3);
    CHECK(map == std::vector<VertexId>{0, 1, 3});

    VertexSubset all({0, 1, 2, 3});
    auto [same, map2] = k4.induced_subgraph(all);
    CHECK(same.pairs() == k4.pairs());

    Multigraph pend = complete(3);
    pend.add_vertex();
    pend.add_edge(2, 3, 1);
    auto [tri2, map3] = pend.induced_subgraph(VertexSubset({0, 1, 2}));
    CHECK(tri2.edge_count() == 3);
}

TEST_CASE("induced subgraph composes") {
    std::mt19937_64 rng(7);
    for (int it = 0; it < 20; ++it) {
        Multigraph g(8);
        for (int i = 0; i < 8; ++i)
            for (int j = i + 1; j < 8; ++j)
                if (rng() % 3 == 0) g.add_edge(i, j, 1 + rng() % 2);
        VertexSubset big({0, 1, 2, 3, 4, 5});
        VertexSubset small({0, 2, 4});
        auto [mid, map1] = g.induced_subgraph(big);
        std::vector<VertexId> inner;
        for (int i = 0; i < static_cast<int>(map1.size()); ++i)
            if (small.contains(map1[i])) inner.push_back(i);
        auto [two_step, map2] = mid.induced_subgraph(VertexSubset(inner));
        auto [one_step, map3] = g.induced_subgraph(small);
        CHECK(two_step.pairs() == one_step.pairs());
    }
}

TEST_CASE("deficiency") {
    Multigraph k4 = complete(4);
    CHECK(k4.deficiency_total() == 0);
    for (int v = 0; v < 4; ++v) CHECK(k4.deficiency(v) == 0);

    Multigraph star(4);
    for (int leaf = 1; leaf < 4; ++leaf) star.add_edge(0, leaf, 1);
    CHECK(star.deficiency(0) == 0);
    CHECK(star.deficiency(1) == 2);
    CHECK(star.deficiency_total() == 6);

    Multigraph k6e = complete(6);
    k6e.remove_edge(0, 1, 1);
    int ones = 0;
    for (int v = 0; v < 6; ++v)
        if (k6e.deficiency(v) == 1) ++ones;
    CHECK(ones == 2);
    CHECK(k6e.deficiency_total() == 2);

    Multigraph empty;
    CHECK_THROWS_AS(empty.deficiency_total(), std::invalid_argument);
}

TEST_CASE("bipartite subgraph") {
    Multigraph k4 = complete(4);
    Multigraph cross = k4.bipartite_subgraph(VertexSubset({0, 1}), VertexSubset({2, 3}));
    CHECK(cross.edge_count() == 4);
    for (int v = 0; v < 4; ++v) CHECK(cross.degree(v) == 2);

    Multigraph none = k4.bipartite_subgraph(VertexSubset({0, 1}), VertexSubset{});
    CHECK(none.edge_count() == 0);

    Multigraph tri = complete(3);
    Multigraph path = tri.bipartite_subgraph(VertexSubset({0}), VertexSubset({1, 2}));
    CHECK(path.edge_count() == 2);

    CHECK_THROWS_AS(k4.bipartite_subgraph(VertexSubset({0, 1}), VertexSubset({1, 2})),
                    std::invalid_argument);
}

TEST_CASE("handshake holds under mutation") {
    std::mt19937_64 rng(11);
    Multigraph g(9);
    for (int step = 0; step < 300; ++step) {
        int u = rng() % 9, v = rng() % 9;
        if (u == v) continue;
        if (rng() % 3 == 0) g.remove_edge(u, v, 1 + rng() % 2);
        else g.add_edge(u, v, 1 + rng() % 3);
        REQUIRE(g.handshake_ok());
    }
    Multigraph s = g.underlying_simple();
    for (int v = 0; v < 9; ++v) CHECK(s.degree(v) == g.simple_degree(v));
}

TEST_CASE("no loops, positive multiplicity") {
    Multigraph g(3);
    CHECK_THROWS_AS(g.add_edge(1, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(g.add_edge(0, 1, 0), std::invalid_argument);
    CHECK_THROWS_AS(g.add_edge(0, 7, 1), std::invalid_argument);
}

TEST_CASE("edge list round trip") {
    Multigraph g(5);
    g.add_edge(0, 4, 2);
    g.add_edge(1, 2, 1);
    g.add_edge(3, 4, 3);
    std::stringstream ss;
    write_multigraph(ss, g);
    CHECK(ss.str() == "5 3\n0 4 2\n1 2 1\n3 4 3\n");
    Multigraph back = read_multigraph(ss);
    CHECK(back.pairs() == g.pairs());
    CHECK(graph_digest(back) == graph_digest(g));

    std::stringstream dot;
    write_dot(dot, g);
    CHECK(dot.str().find("0 -- 4") != std::string::npos);

    std::stringstream bad("3 1\n0 0 1\n");
    CHECK_THROWS_AS(read_multigraph(bad), std::invalid_argument);
}

TEST_CASE("instances enumerate copies in order") {
    Multigraph g(3);
    g.add_edge(0, 1, 2);
    g.add_edge(1, 2, 1);
    auto inst = g.instances();
    REQUIRE(inst.size() == 3);
    CHECK(inst[0] == EdgeInstance{0, 1, 0});
    CHECK(inst[1] == EdgeInstance{0, 1, 1});
    CHECK(inst[2] == EdgeInstance{1, 2, 0});
}

TEST_CASE("subset edge counts") {
    Multigraph g = complete(5);
    g.add_edge(0, 1, 2);
    VertexSubset s({0, 1, 2});
    CHECK(g.edges_within(s) == 5);
    CHECK(g.edges_between(VertexSubset({0, 1}), VertexSubset({3, 4})) == 4);
    CHECK(g.edges_from_vertex_to(0, VertexSubset({1, 2})) == 4);
}
