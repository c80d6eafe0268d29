#pragma once

// Immutable directed graph over 0..n-1 with optional string labels.
// Keeps out-, in- and undirected-support adjacency sorted so that membership
// tests are binary searches and enumeration order is reproducible.

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "lmotif/common.hpp"

namespace lmotif {

using Edge = std::pair<VertexId, VertexId>;

class DirectedGraph {
  public:
    DirectedGraph(VertexId n, std::vector<Edge> edges, bool allow_loops = false);

    VertexId vertex_count() const { return n_; }
    std::size_t edge_count() const { return edge_count_; }
    bool loops_allowed() const { return allow_loops_; }

    bool has_edge(VertexId u, VertexId v) const {
        const auto& nb = out_[u];
        return std::binary_search(nb.begin(), nb.end(), v);
    }
    const std::vector<VertexId>& out_neighbors(VertexId v) const { return out_[v]; }
    const std::vector<VertexId>& in_neighbors(VertexId v) const { return in_[v]; }
    // Undirected support (union of both directions, loops excluded): drives
    // connected-subgraph enumeration.
    const std::vector<VertexId>& und_neighbors(VertexId v) const { return und_[v]; }

    std::size_t out_degree(VertexId v) const { return out_[v].size() - (has_edge(v, v) ? 1 : 0); }
    std::size_t in_degree(VertexId v) const { return in_[v].size() - (has_edge(v, v) ? 1 : 0); }

    const std::vector<Edge>& edges() const { return edges_; }

    void set_labels(std::vector<std::string> labels);
    bool has_labels() const { return !labels_.empty(); }
    std::string label(VertexId v) const {
        return labels_.empty() ? std::to_string(v) : labels_[v];
    }
    // Returns n if no vertex carries this label.
    VertexId vertex_by_label(const std::string& label) const;

  private:
    VertexId n_;
    bool allow_loops_;
    std::size_t edge_count_ = 0;
    std::vector<std::vector<VertexId>> out_, in_, und_;
    std::vector<Edge> edges_;
    std::vector<std::string> labels_;
};

}  // namespace lmotif
