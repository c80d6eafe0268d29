#pragma once

// Detection pipeline: census sizes 3..k_max in ascending order, a score per
// (pattern, deletion class), and a redundancy filter so that a pattern whose
// excess is fully explained by an already-declared smaller motif is not
// reported again.
//
// Score: s* = max over observed subpattern positions of g(lambda_U, Delta_U),
// p = min(1, E[N(subpattern)] * e^{-s*}). The p-value bound is valid for every
// (pattern, class) pair separately; alpha is applied per pair by design.
//
// Filter: candidate (m, C) with class representative a is redundant if some
// nonempty vertex set A avoiding a's neighborhood satisfies: m minus A was
// declared a motif (at a smaller size) with respect to a's deletion class
// there. The first witness in ascending subset order is recorded.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lmotif/block_model.hpp"
#include "lmotif/census.hpp"
#include "lmotif/graph.hpp"
#include "lmotif/pattern.hpp"

namespace lmotif {

enum class MotifStatus { NotSignificant, Potential, Motif, Filtered };

const char* to_string(MotifStatus status);

struct Witness {
    std::vector<std::uint8_t> removed;  // the set A, pattern vertex indices
    PatternCode smaller_code;
    std::uint32_t smaller_class = 0;
    std::string smaller_literal;
};

struct ThemeSummary {
    Position position;
    PositionStats stats;
    double score = 0;
    bool misfit = false;
};

struct MotifResult {
    PatternCode code;
    std::string pattern_literal;
    std::uint32_t class_index = 0;
    std::vector<std::uint8_t> class_members;
    std::uint8_t representative = 0;
    PatternCode subpattern_code;
    std::string subpattern_literal;
    std::size_t occurrence_count = 0;
    std::size_t position_count = 0;  // subpattern positions with >= 1 extension
    double expected_sub = 0;         // E[N(subpattern)] under the null
    double expected_sub_log = kNegInf;
    double s_star = 0;
    std::uint32_t n_u_star = 0;
    double p_bound = 1;
    double log10_p = 0;
    MotifStatus status = MotifStatus::NotSignificant;
    std::optional<Witness> witness;
    std::vector<Witness> witnesses_all;  // populated with collect_all_witnesses
    std::vector<ThemeSummary> top_themes;
    std::uint32_t misfit_positions = 0;
    std::optional<double> tv_bound;     // at the argmax position
    std::optional<double> prop1_ratio;  // tightness diagnostic, when applicable
    double rho = 0;                     // max Pi entry of the null
};

struct DetectOptions {
    int k_max = 3;
    double alpha = 1e-3;
    unsigned threads = 1;
    bool diagnostics = false;
    std::size_t theme_cap = 5;
    bool collect_all_witnesses = false;
    std::function<void(const std::string&)> log;  // progress/warnings sink
};

std::vector<MotifResult> detect(const DirectedGraph& g, const BlockModel& model,
                                const DetectOptions& opts = {});

using MotifKey = std::pair<PatternCode, std::uint32_t>;

// Returns the first witness in deterministic subset order, or nullopt.
// `declared` holds (canonical code, class index) pairs already accepted as motifs.
std::optional<Witness> find_redundancy_witness(const Pattern& canonical_pattern,
                                               std::uint32_t class_index,
                                               const std::set<MotifKey>& declared,
                                               PatternCatalog& catalog,
                                               std::vector<Witness>* all = nullptr);

// Sorts results: p ascending, then s* descending, then code, then class.
void rank_results(std::vector<MotifResult>& results);

std::string render_table(const std::vector<MotifResult>& results, const DirectedGraph& g);
void write_records(std::ostream& out, const std::vector<MotifResult>& results,
                   const DirectedGraph& g);
std::string format_pvalue(double log10_p);

}  // namespace lmotif
