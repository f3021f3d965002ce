#pragma once

#include <random>
#include <vector>

#include "ofc/multigraph.hpp"

namespace test_helpers {

inline ofc::Multigraph complete(int n) {
    ofc::Multigraph g(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) g.add_edge(i, j, 1);
    return g;
}

inline ofc::Multigraph cycle(int n) {
    ofc::Multigraph g(n);
    for (int i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n, 1);
    return g;
}

inline ofc::Multigraph complete_bipartite(int a, int b) {
    ofc::Multigraph g(a + b);
    for (int i = 0; i < a; ++i)
        for (int j = 0; j < b; ++j) g.add_edge(i, a + j, 1);
    return g;
}

inline ofc::Multigraph from_mask(int n, unsigned long long mask) {
    ofc::Multigraph g(n);
    int bit = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j, ++bit)
            if (mask & (1ull << bit)) g.add_edge(i, j, 1);
    return g;
}

inline ofc::Multigraph random_multigraph(int n, double p, int max_mult, std::mt19937_64& rng) {
    ofc::Multigraph g(n);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (coin(rng) < p) g.add_edge(i, j, 1 + static_cast<int>(rng() % max_mult));
    return g;
}

/// Non-increasing, even sum, largest entry at most the sum of the rest.
inline std::vector<int> random_admissible_sequence(int m, int max_value, std::mt19937_64& rng) {
    while (true) {
        std::vector<int> vals(m);
        for (int& v : vals) v = static_cast<int>(rng() % (max_value + 1));
        std::sort(vals.begin(), vals.end(), std::greater<int>());
        long long sum = 0;
        for (int v : vals) sum += v;
        if (sum % 2 != 0) {
            // fix parity on a smallest entry
            for (int i = m - 1; i >= 0; --i) {
                if (vals[i] > 0) {
                    --vals[i];
                    --sum;
                    break;
                }
            }
            if (sum % 2 != 0) continue;
            std::sort(vals.begin(), vals.end(), std::greater<int>());
        }
        if (sum == 0) continue;
        if (vals[0] <= sum - vals[0]) return vals;
    }
}

}  // namespace test_helpers
