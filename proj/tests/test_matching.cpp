#include <doctest.h>

#include "helpers.hpp"
#include "ofc/matching.hpp"
#include "ofc/overfull.hpp"

using namespace ofc;

TEST_CASE("bipartite matching finds perfect matchings") {
    // K_{3,3}
    std::vector<std::vector<int>> adj{{0, 1, 2}, {0, 1, 2}, {0, 1, 2}};
    auto m = hopcroft_karp(3, 3, adj);
    CHECK(m.size == 3);
    CHECK(!hall_witness(3, 3, adj, m).has_value());
}

TEST_CASE("hall witness on a starved side") {
    // two left vertices share a single right neighbor
    std::vector<std::vector<int>> adj{{0}, {0}, {1}};
    auto m = hopcroft_karp(3, 2, adj);
    CHECK(m.size == 2);
    auto wit = hall_witness(3, 2, adj, m);
    REQUIRE(wit.has_value());
    CHECK(wit->left_set.size() > wit->right_neighborhood.size());
}

TEST_CASE("general matching handles blossoms") {
    // C5: maximum matching 2
    auto c5 = test_helpers::cycle(5);
    std::vector<std::vector<int>> adj(5);
    for (const auto& [pair, mult] : c5.pairs()) {
        adj[pair.first].push_back(pair.second);
        adj[pair.second].push_back(pair.first);
    }
    auto match = blossom_maximum_matching(5, adj);
    int size = 0;
    for (int v = 0; v < 5; ++v)
        if (match[v] >= 0) ++size;
    CHECK(size == 4);

    CHECK(perfect_matching(test_helpers::complete(6)).has_value());
    CHECK(perfect_matching(test_helpers::complete(4)).has_value());
    CHECK(!perfect_matching(test_helpers::cycle(5)).has_value());

    // Petersen graph: 3-regular with a perfect matching
    Multigraph pete(10);
    {
        std::vector<std::pair<int, int>> labels;
        for (int a = 0; a < 5; ++a)
            for (int b = a + 1; b < 5; ++b) labels.emplace_back(a, b);
        for (int i = 0; i < 10; ++i)
            for (int j = i + 1; j < 10; ++j) {
                auto [a, b] = labels[i];
                auto [c, d] = labels[j];
                if (a != c && a != d && b != c && b != d) pete.add_edge(i, j, 1);
            }
    }
    auto pm = perfect_matching(pete);
    REQUIRE(pm.has_value());
    std::vector<char> hit(10, 0);
    for (auto [a, b] : *pm) {
        CHECK(pete.multiplicity(a, b) == 1);
        hit[a] = hit[b] = 1;
    }
    for (int v = 0; v < 10; ++v) CHECK(hit[v]);
}

TEST_CASE("seeded matchings are honored and extended") {
    auto k6 = test_helpers::complete(6);
    std::vector<std::vector<int>> adj(6);
    for (const auto& [pair, mult] : k6.pairs()) {
        adj[pair.first].push_back(pair.second);
        adj[pair.second].push_back(pair.first);
    }
    std::vector<int> seed(6, -1);
    seed[0] = 3;
    seed[3] = 0;
    auto match = blossom_maximum_matching(6, adj, &seed);
    for (int v = 0; v < 6; ++v) REQUIRE(match[v] >= 0);

    std::vector<int> bad(6, -1);
    bad[0] = 3;  // inconsistent: 3 not matched back
    CHECK_THROWS_AS(blossom_maximum_matching(6, adj, &bad), std::invalid_argument);
}

TEST_CASE("two disjoint odd cliques have no perfect matching") {
    Multigraph g(6);
    for (int base : {0, 3})
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j) g.add_edge(base + i, base + j, 1);
    for (unsigned long long s = 0; s < 5; ++s) CHECK(!perfect_matching(g, s).has_value());
}
