#pragma once

// Exact census of connected induced k-subgraphs (ESU over the undirected
// support; every connected k-set is visited exactly once), grouped by
// canonical pattern code, plus the per-position theme machinery.
//
// A position of a pattern lists, for each deletion class, the (sorted) graph
// vertices playing that class; a vertex set realizes at most one position, so
// sets and positions are interchangeable keys for one pattern.
//
// Theme orders are computed by indexing size-k occurrences by their (k-1)
// subsets: deleting any class-C vertex of an occurrence yields a subpattern
// occurrence it extends. This never needs a census of the subpattern itself,
// which matters because subpatterns of connected patterns can be disconnected
// (zero-order diagnostic records, which do need one, are therefore only
// available for connected subpatterns).

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "lmotif/block_model.hpp"
#include "lmotif/graph.hpp"
#include "lmotif/pattern.hpp"

namespace lmotif {

using VertexSet = std::vector<VertexId>;  // sorted
using CensusMap = std::map<PatternCode, std::vector<VertexSet>>;

struct CensusOptions {
    unsigned threads = 1;
    PatternCatalog* catalog = nullptr;  // optional memo reuse (single-threaded only)
    std::function<void(std::size_t roots_done, std::size_t total)> progress;
};

CensusMap enumerate_subgraphs(const DirectedGraph& g, int k, const CensusOptions& opts = {});

// Induced adjacency bitmask of a sorted vertex set, in Pattern bit layout.
std::uint64_t induced_bits(const DirectedGraph& g, const VertexSet& verts);

// Calls emit(verts) for every connected induced k-set with min(verts) in
// [root_begin, root_end); verts arrives sorted.
void esu_scan(const DirectedGraph& g, int k, VertexId root_begin, VertexId root_end,
              const std::function<void(const VertexSet&)>& emit);

struct Position {
    std::vector<VertexSet> sets;  // one per deletion class, class order
    bool operator==(const Position& other) const { return sets == other.sets; }
    bool operator<(const Position& other) const { return sets < other.sets; }
    std::string to_string(const DirectedGraph* g = nullptr) const;
};

Position position_of(const VertexSet& verts, const Classified& cls, const PatternInfo& info);

struct ThemeRecord {
    Position position;
    VertexSet subset;     // the underlying subpattern occurrence vertices
    PositionStats stats;  // lambda, lambda2, n_u (= theme order), delta
    double score = 0;     // g(lambda, delta) when delta > 0, else 0; +inf on misfit
    bool misfit = false;  // order > 0 with lambda == 0: model cannot explain the data
};

struct ThemeOptions {
    PatternCatalog* catalog = nullptr;
    // When given (occurrences of the subpattern from a (k-1)-census),
    // positions with zero extensions are emitted too.
    const std::vector<VertexSet>* subpattern_occurrences = nullptr;
};

// Theme records for (pattern, deletion class), one per subpattern occurrence
// with at least one extension (plus zero-order records under diagnostics).
// Sorted by subset, ascending.
std::vector<ThemeRecord> theme_orders(const DirectedGraph& g, const BlockModel& model,
                                      const PatternInfo& pinfo, std::size_t class_index,
                                      const std::vector<VertexSet>& occurrences_k,
                                      const ThemeOptions& opts = {});

}  // namespace lmotif
