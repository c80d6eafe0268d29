#include "lmotif/graph.hpp"

#include <algorithm>

namespace lmotif {

DirectedGraph::DirectedGraph(VertexId n, std::vector<Edge> edges, bool allow_loops)
    : n_(n), allow_loops_(allow_loops), out_(n), in_(n), und_(n) {
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    for (auto [u, v] : edges) {
        if (u >= n_ || v >= n_)
            throw Error("edge endpoint out of range: " + std::to_string(u) + "->" +
                        std::to_string(v) + " with n=" + std::to_string(n_));
        if (u == v && !allow_loops_)
            throw Error("self-loop " + std::to_string(u) + "->" + std::to_string(u) +
                        " not allowed (loops are opt-in)");
        out_[u].push_back(v);
        in_[v].push_back(u);
        if (u != v) {
            und_[u].push_back(v);
            und_[v].push_back(u);
        }
    }
    edges_ = std::move(edges);
    edge_count_ = edges_.size();
    for (VertexId v = 0; v < n_; ++v) {
        std::sort(in_[v].begin(), in_[v].end());
        std::sort(und_[v].begin(), und_[v].end());
        und_[v].erase(std::unique(und_[v].begin(), und_[v].end()), und_[v].end());
        // out_[v] is already sorted because the edge list was sorted lexicographically
    }
}

void DirectedGraph::set_labels(std::vector<std::string> labels) {
    if (labels.size() != n_) throw Error("label count does not match vertex count");
    labels_ = std::move(labels);
}

VertexId DirectedGraph::vertex_by_label(const std::string& label) const {
    if (labels_.empty()) {
        try {
            std::size_t pos = 0;
            unsigned long val = std::stoul(label, &pos);
            if (pos == label.size() && val < n_) return static_cast<VertexId>(val);
        } catch (...) {
        }
        return n_;
    }
    for (VertexId v = 0; v < n_; ++v)
        if (labels_[v] == label) return v;
    return n_;
}

}  // namespace lmotif
