#pragma once

#include <optional>
#include <vector>

#include "ofc/multigraph.hpp"

namespace ofc {

/// Bipartite maximum matching between left vertices [0, nl) and right
/// vertices [0, nr) given left adjacency lists.
struct BipartiteMatching {
    std::vector<int> left_match;   // size nl, -1 unmatched
    std::vector<int> right_match;  // size nr, -1 unmatched
    int size = 0;
};

BipartiteMatching hopcroft_karp(int nl, int nr, const std::vector<std::vector<int>>& adj);

/// For a non-perfect matching, a Hall violator: a set S of left vertices with
/// |N(S)| < |S| (alternating reachability from an unmatched left vertex).
struct HallWitness {
    std::vector<int> left_set;
    std::vector<int> right_neighborhood;
};

std::optional<HallWitness> hall_witness(int nl, int nr, const std::vector<std::vector<int>>& adj,
                                        const BipartiteMatching& m);

/// General-graph maximum matching (blossom contraction). Vertices [0, n);
/// adjacency as neighbor lists (parallel edges make no difference).
/// `seed` optionally provides an initial matching (size n, -1 unmatched).
std::vector<int> blossom_maximum_matching(int n, const std::vector<std::vector<int>>& adj,
                                          const std::vector<int>* seed = nullptr);

/// Perfect matching of the simple support of g, or nullopt. Deterministic for
/// a fixed shuffle_seed; different seeds explore different greedy orders.
std::optional<std::vector<std::pair<VertexId, VertexId>>> perfect_matching(
    const Multigraph& g, unsigned long long shuffle_seed = 0);

}  // namespace ofc
