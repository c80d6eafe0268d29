#pragma once

// Brute-force reference implementations the tests cross-check the library
// against. Everything here trades speed for obviousness: permutation-scan
// isomorphism, subset-scan census, digraph-enumeration probabilities.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "lmotif/block_model.hpp"
#include "lmotif/census.hpp"
#include "lmotif/common.hpp"
#include "lmotif/graph.hpp"
#include "lmotif/pattern.hpp"

namespace oracles {

using lmotif::BlockModel;
using lmotif::DirectedGraph;
using lmotif::Edge;
using lmotif::Pattern;
using lmotif::VertexId;
using lmotif::VertexSet;

// Adjacency bit layout matches Pattern: edge i->j at bit (k-1-i)*k + (k-1-j).
inline constexpr std::uint64_t cell(int i, int j, int k) {
    return std::uint64_t{1} << ((k - 1 - i) * k + (k - 1 - j));
}

inline bool iso(std::uint64_t a, std::uint64_t b, int k) {
    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    do {
        std::uint64_t mapped = 0;
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j)
                if (a & cell(i, j, k)) mapped |= cell(perm[i], perm[j], k);
        if (mapped == b) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

inline bool weakly_connected(std::uint64_t bits, int k) {
    unsigned seen = 1;
    std::vector<int> stack{0};
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int u = 0; u < k; ++u) {
            if (u == v || (seen >> u & 1u)) continue;
            if ((bits & cell(v, u, k)) || (bits & cell(u, v, k))) {
                seen |= 1u << u;
                stack.push_back(u);
            }
        }
    }
    return seen == (1u << k) - 1;
}

template <typename Fn>
void for_each_subset(std::uint32_t n, int k, Fn fn) {
    if (int(n) < k) return;
    std::vector<VertexId> idx(k);
    std::iota(idx.begin(), idx.end(), 0u);
    while (true) {
        fn(idx);
        int i = k - 1;
        while (i >= 0 && idx[i] == n - k + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

// Every connected induced k-set, by scanning all C(n,k) subsets.
inline std::vector<VertexSet> connected_ksets(const DirectedGraph& g, int k) {
    std::vector<VertexSet> out;
    for_each_subset(g.vertex_count(), k, [&](const VertexSet& verts) {
        if (weakly_connected(lmotif::induced_bits(g, verts), k)) out.push_back(verts);
    });
    return out;
}

// P(G[T] isomorphic to pattern) by enumerating every loop-free digraph on T.
inline double set_probability(const BlockModel& model, const VertexSet& verts,
                              const Pattern& pat) {
    const int k = int(verts.size());
    std::vector<std::pair<int, int>> slots;
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            if (i != j) slots.push_back({i, j});
    double total = 0;
    for (std::uint64_t mask = 0; mask < (1ull << slots.size()); ++mask) {
        std::uint64_t bits = 0;
        double weight = 1;
        for (std::size_t s = 0; s < slots.size(); ++s) {
            const auto [i, j] = slots[s];
            const double p = model.p(model.z[verts[i]], model.z[verts[j]]);
            if (mask >> s & 1ull) {
                bits |= cell(i, j, k);
                weight *= p;
            } else {
                weight *= 1 - p;
            }
        }
        if (weight > 0 && iso(bits, pat.bits(), k)) total += weight;
    }
    return total;
}

inline double expected_count(const BlockModel& model, const Pattern& pat) {
    double total = 0;
    for_each_subset(model.n, pat.k(),
                    [&](const VertexSet& verts) { total += oracles::set_probability(model, verts, pat); });
    return total;
}

inline DirectedGraph random_graph(std::mt19937_64& eng, VertexId n, double p) {
    std::vector<Edge> edges;
    for (VertexId u = 0; u < n; ++u)
        for (VertexId v = 0; v < n; ++v)
            if (u != v && lmotif::next_unit_double(eng) < p) edges.push_back({u, v});
    return DirectedGraph(n, std::move(edges));
}

inline BlockModel random_model(std::mt19937_64& eng, std::uint32_t n_min, std::uint32_t n_max,
                               std::uint32_t q_max, double pi_max) {
    BlockModel m;
    m.n = n_min + std::uint32_t(eng() % (n_max - n_min + 1));
    m.q = 1 + std::uint32_t(eng() % q_max);
    m.z.resize(m.n);
    for (std::uint32_t v = 0; v < m.n; ++v)
        m.z[v] = v < m.q ? v : std::uint32_t(eng() % m.q);  // every class inhabited
    m.pi.resize(std::size_t(m.q) * m.q);
    for (auto& p : m.pi) p = pi_max * lmotif::next_unit_double(eng);
    return m;
}

}  // namespace oracles
