#pragma once

// Plain-text ingestion: whitespace-separated edge lists, full model files
// (memberships plus the Pi matrix) and bare membership files. String vertex
// ids are interned to dense indices in first-appearance order, so reports can
// round-trip the caller's labels. All parsers skip blank lines and `#`
// comments and report malformed input with its line number.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "lmotif/block_model.hpp"
#include "lmotif/graph.hpp"

namespace lmotif {

struct ParsedGraph {
    DirectedGraph graph;
    std::vector<std::string> warnings;  // duplicate edges, skipped loops
};

ParsedGraph parse_edge_list(std::istream& in, bool allow_loops = false);
ParsedGraph load_edge_list(const std::string& path, bool allow_loops = false);

// Header `n Q`, then n lines `vertex_id class` (class in [0, Q)), then Q rows
// of Q Pi entries. Vertex ids are arbitrary strings.
struct ModelFile {
    BlockModel model;                 // z indexed by file line order
    std::vector<std::string> labels;  // vertex id per membership line
};

ModelFile parse_model_file(std::istream& in, bool allow_loops = false);
ModelFile load_model_file(const std::string& path, bool allow_loops = false);

// Lines `vertex_id class_token`; class tokens are interned in
// first-appearance order.
struct Memberships {
    std::vector<std::string> labels;
    std::vector<std::uint32_t> z;
    std::vector<std::string> class_names;  // index = class id
};

Memberships parse_classes_file(std::istream& in);
Memberships load_classes_file(const std::string& path);

// Matches labeled memberships to graph vertices. Labels absent from the graph
// become fresh isolated vertices (the membership list defines the vertex
// universe); a graph vertex without a membership is an error.
struct AlignedGraph {
    DirectedGraph graph;  // input graph, possibly extended
    std::vector<std::uint32_t> z;
};

AlignedGraph align_memberships(const DirectedGraph& g, const std::vector<std::string>& labels,
                               const std::vector<std::uint32_t>& z);

// Study table: header plus per-threshold rows `t empirical ci_lo ci_hi bound
// ratio`, tab-separated.
struct StudyResult;
std::string render_study_table(const StudyResult& study);

}  // namespace lmotif
