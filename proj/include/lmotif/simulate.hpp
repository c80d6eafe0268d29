#pragma once

// Replicated-sampling studies against a null model. The central one draws R
// graphs, computes the score S = max over observed subpattern positions of
// g(lambda_U, Delta_U) for one (pattern, deletion class) pair, and tabulates
// the empirical tail of S next to the analytic bound min(1, E[N(sub)] e^{-s}).
//
// Reproducibility: replicate r always uses the engine from
// replicate_engine(master_seed, r), so results are bit-identical for any
// thread count, and a single replicate can be replayed in isolation.

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "lmotif/block_model.hpp"
#include "lmotif/pattern.hpp"

namespace lmotif {

std::mt19937_64 replicate_engine(std::uint64_t master_seed, std::uint64_t index);

struct WilsonInterval {
    double lo = 0;
    double hi = 1;
};

// 95% by default (z = 1.96).
WilsonInterval wilson_interval(std::uint64_t count, std::uint64_t n, double z = 1.96);

// 40 thresholds, linear in t between ln E[N(sub)] (where the bound leaves 1)
// and ln E + ln R (where it reaches 1/R, the resolution limit of R
// replicates); equivalently, log-spaced in the bound itself.
std::vector<double> default_t_grid(double expected_log, std::size_t replicates);

struct TailRow {
    double t = 0;                   // score threshold
    std::uint64_t exceedances = 0;  // replicates with S >= t
    double empirical = 0;
    double ci_lo = 0;
    double ci_hi = 1;
    double bound = 1;  // min(1, E[N(sub)] * e^{-t})
    double ratio = 0;  // empirical / bound
};

struct StudyConfig {
    Pattern pattern;  // connected, 3..8 vertices
    std::size_t class_index = 0;
    std::size_t replicates = 50000;
    std::uint64_t master_seed = 1;
    unsigned threads = 1;
    std::vector<double> grid;  // strictly increasing, positive; empty -> default_t_grid
    std::function<void(std::size_t done, std::size_t total)> progress;
};

struct StudyResult {
    std::vector<TailRow> rows;
    double expected_sub = 0;
    double expected_sub_log = 0;
    std::size_t replicates = 0;
    double max_score = 0;               // largest simulated S
    std::uint64_t positive_scores = 0;  // replicates with S > 0
};

StudyResult empirical_tail(const BlockModel& model, const StudyConfig& config);

// Law of one theme order N_U given that the embedding realizes the subpattern:
// extension indicators depend only on edges between outside vertices and the
// embedding, so they are drawn directly (no rejection step). embedding[j] is
// the graph vertex playing canonical subpattern vertex j.
struct ConditionalSample {
    bool estimable = true;  // false when the position itself has probability 0
    double lambda = 0;      // exact mean for this embedding
    double lambda2 = 0;
    double mean = 0;
    double variance = 0;
    double se = 0;  // standard error of the sample mean
    std::size_t replicates = 0;
};

ConditionalSample conditional_theme_moments(const BlockModel& model, const Pattern& pattern,
                                            std::size_t class_index,
                                            const std::vector<VertexId>& embedding,
                                            std::size_t replicates, std::uint64_t seed);

// Sample mean of the number of induced occurrences of a connected pattern.
struct SampleMean {
    double mean = 0;
    double se = 0;
    std::size_t replicates = 0;
};

SampleMean monte_carlo_count(const BlockModel& model, const Pattern& pattern,
                             std::size_t replicates, std::uint64_t seed, unsigned threads = 1);

}  // namespace lmotif
