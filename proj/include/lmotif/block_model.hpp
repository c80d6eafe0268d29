#pragma once

// Fixed-class blockmodel: n vertices, Q classes, membership Z, and a Q x Q
// matrix Pi of independent Bernoulli edge probabilities. The Erdos-Renyi and
// expected-degree nulls are both expressed as instances of this type.
//
// Everything downstream (extension probabilities, expected theme sizes,
// expected pattern counts) is exact under edge independence; occurrences are
// induced, so absent pattern edges contribute (1 - Pi) factors throughout.

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "lmotif/graph.hpp"
#include "lmotif/pattern.hpp"

namespace lmotif {

struct BlockModel {
    std::uint32_t n = 0;
    std::uint32_t q = 0;
    std::vector<std::uint32_t> z;    // size n, values in [0, q)
    std::vector<double> pi;          // row-major q x q
    bool allow_loops = false;

    double p(std::uint32_t a, std::uint32_t b) const { return pi[a * q + b]; }
    double max_p() const;
    std::vector<std::uint32_t> class_counts() const;
    void validate() const;
};

struct EstimateResult {
    BlockModel model;
    std::vector<std::string> warnings;  // one per zero-pair block
};

// Maximum-likelihood Pi for fixed memberships: edges / ordered pairs per block.
EstimateResult estimate_pi(const DirectedGraph& g, const std::vector<std::uint32_t>& z,
                           std::uint32_t q);

// One class per distinct (in-degree, out-degree) pair;
// Pi[a][b] = min(1, out_deg(a) * in_deg(b) / edge_count).
BlockModel expected_degree_model(const DirectedGraph& g);

// Single class, density chosen so the expected edge count matches the graph.
BlockModel erdos_renyi_model(const DirectedGraph& g);

// Draws every ordered pair (and loops when enabled) independently; fixed
// iteration order u-major so a seeded engine reproduces the graph exactly.
DirectedGraph generate(const BlockModel& model, std::mt19937_64& rng);

// Probability that the edge vector between a fresh vertex of class q_new and
// an embedded subpattern whose slot classes are zvec equals `config` exactly.
// Slot layout matches DeletionClass::extension_configs.
double config_probability(const BlockModel& model, const std::vector<std::uint32_t>& zvec,
                          std::uint32_t q_new, std::uint32_t config);

// P(fresh vertex of class q_new completes the occurrence) = sum of
// config_probability over the class's admissible configurations (disjoint events).
double extension_prob(const BlockModel& model, const DeletionClass& dc,
                      const std::vector<std::uint32_t>& zvec, std::uint32_t q_new);

// lambda = sum over available vertices of their extension probability, grouped
// by class; second entry is the corresponding sum of squares (lambda_2).
// avail[q] = number of class-q vertices outside the occurrence.
std::pair<double, double> lambda_pair(const BlockModel& model, const DeletionClass& dc,
                                      const std::vector<std::uint32_t>& zvec,
                                      const std::vector<std::uint32_t>& avail);

struct ExpectedCount {
    double value = 0;
    double log_value = kNegInf;
};

// E[number of occurrences] by summing over class assignments sigma in Q^k:
// (1/|Aut|) * sum_sigma W(sigma) * prod_q falling(n_q, multiplicity).
// Log-space accumulation; works for disconnected patterns too (subpatterns of
// connected patterns need not be connected).
ExpectedCount expected_count(const BlockModel& model, const Pattern& pattern);

// Per-position stats carried on theme records.
struct PositionStats {
    double lambda = 0;
    double lambda2 = 0;
    std::uint32_t n_u = 0;
    double delta = 0;
};

// P(G[T] isomorphic to pattern) for one fixed vertex set: sum over the
// distinct labeled copies of the pattern on T (disjoint events under induced
// semantics). Brute force over bijections; fine for k <= 8.
double set_probability(const BlockModel& model, const std::vector<VertexId>& verts,
                       const Pattern& pattern);

// Same, restricted to labeled copies consistent with a fixed embedding's
// class-set structure (slot j of the pattern is played by verts[j]).
double position_probability(const BlockModel& model, const std::vector<VertexId>& verts,
                            const Pattern& pattern);

}  // namespace lmotif
