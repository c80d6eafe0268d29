#include "lmotif/io.hpp"

#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "lmotif/simulate.hpp"

namespace lmotif {

namespace {

// Line-oriented tokenizer: strips `#` comments, skips blank lines, and keeps
// the current line number for error reporting.
struct LineReader {
    std::istream& in;
    std::size_t line_no = 0;

    bool next(std::vector<std::string>& tokens) {
        std::string line;
        while (std::getline(in, line)) {
            ++line_no;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            tokens.clear();
            std::istringstream fields(line);
            std::string tok;
            while (fields >> tok) tokens.push_back(tok);
            if (!tokens.empty()) return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError("line " + std::to_string(line_no) + ": " + what);
    }
};

std::uint64_t parse_uint(const std::string& tok, const LineReader& reader, const char* what) {
    try {
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        reader.fail(std::string("expected ") + what + ", got '" + tok + "'");
    }
}

double parse_double(const std::string& tok, const LineReader& reader, const char* what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        reader.fail(std::string("expected ") + what + ", got '" + tok + "'");
    }
}

std::ifstream open_or_throw(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    return in;
}

}  // namespace

ParsedGraph parse_edge_list(std::istream& in, bool allow_loops) {
    LineReader reader{in};
    std::vector<std::string> tokens;
    std::unordered_map<std::string, VertexId> ids;
    std::vector<std::string> labels;
    std::vector<Edge> edges;
    std::set<Edge> seen;
    std::vector<std::string> warnings;

    auto intern = [&](const std::string& name) {
        auto [it, fresh] = ids.try_emplace(name, VertexId(labels.size()));
        if (fresh) labels.push_back(name);
        return it->second;
    };

    while (reader.next(tokens)) {
        if (tokens.size() != 2)
            reader.fail("expected `src dst`, got " + std::to_string(tokens.size()) + " fields");
        const VertexId u = intern(tokens[0]);
        const VertexId v = intern(tokens[1]);
        if (u == v && !allow_loops) {
            warnings.push_back("line " + std::to_string(reader.line_no) + ": self-loop on '" +
                               tokens[0] + "' skipped (loop mode is off)");
            continue;
        }
        if (!seen.insert({u, v}).second) {
            warnings.push_back("line " + std::to_string(reader.line_no) + ": duplicate edge " +
                               tokens[0] + " -> " + tokens[1] + " collapsed");
            continue;
        }
        edges.push_back({u, v});
    }

    DirectedGraph g(VertexId(labels.size()), std::move(edges), allow_loops);
    g.set_labels(std::move(labels));
    return {std::move(g), std::move(warnings)};
}

ParsedGraph load_edge_list(const std::string& path, bool allow_loops) {
    auto in = open_or_throw(path);
    return parse_edge_list(in, allow_loops);
}

ModelFile parse_model_file(std::istream& in, bool allow_loops) {
    LineReader reader{in};
    std::vector<std::string> tokens;
    if (!reader.next(tokens)) throw ParseError("model file is empty");
    if (tokens.size() != 2) reader.fail("expected header `n Q`");
    const std::uint64_t n = parse_uint(tokens[0], reader, "vertex count");
    const std::uint64_t q = parse_uint(tokens[1], reader, "class count");
    if (n == 0 || q == 0) reader.fail("n and Q must be positive");

    ModelFile out;
    out.model.n = std::uint32_t(n);
    out.model.q = std::uint32_t(q);
    out.model.allow_loops = allow_loops;
    out.model.z.reserve(n);
    out.labels.reserve(n);
    std::unordered_set<std::string> seen;
    for (std::uint64_t i = 0; i < n; ++i) {
        if (!reader.next(tokens)) throw ParseError("model file ends inside the membership block");
        if (tokens.size() != 2) reader.fail("expected `vertex_id class`");
        if (!seen.insert(tokens[0]).second)
            reader.fail("vertex '" + tokens[0] + "' listed twice");
        const std::uint64_t c = parse_uint(tokens[1], reader, "class index");
        if (c >= q) reader.fail("class index " + tokens[1] + " out of range (Q = " +
                                std::to_string(q) + ")");
        out.labels.push_back(tokens[0]);
        out.model.z.push_back(std::uint32_t(c));
    }

    out.model.pi.reserve(q * q);
    for (std::uint64_t row = 0; row < q; ++row) {
        if (!reader.next(tokens)) throw ParseError("model file ends inside the Pi block");
        if (tokens.size() != q)
            reader.fail("expected " + std::to_string(q) + " Pi entries, got " +
                        std::to_string(tokens.size()));
        for (const auto& tok : tokens) {
            const double v = parse_double(tok, reader, "probability");
            if (!(v >= 0.0 && v <= 1.0)) reader.fail("Pi entry " + tok + " outside [0,1]");
            out.model.pi.push_back(v);
        }
    }
    if (reader.next(tokens)) reader.fail("trailing content after the Pi block");
    out.model.validate();
    return out;
}

ModelFile load_model_file(const std::string& path, bool allow_loops) {
    auto in = open_or_throw(path);
    return parse_model_file(in, allow_loops);
}

Memberships parse_classes_file(std::istream& in) {
    LineReader reader{in};
    std::vector<std::string> tokens;
    Memberships out;
    std::unordered_map<std::string, std::uint32_t> class_ids;
    std::unordered_set<std::string> seen;
    while (reader.next(tokens)) {
        if (tokens.size() != 2) reader.fail("expected `vertex_id class`");
        if (!seen.insert(tokens[0]).second)
            reader.fail("vertex '" + tokens[0] + "' listed twice");
        auto [it, fresh] = class_ids.try_emplace(tokens[1], std::uint32_t(out.class_names.size()));
        if (fresh) out.class_names.push_back(tokens[1]);
        out.labels.push_back(tokens[0]);
        out.z.push_back(it->second);
    }
    if (out.labels.empty()) throw ParseError("membership file has no entries");
    return out;
}

Memberships load_classes_file(const std::string& path) {
    auto in = open_or_throw(path);
    return parse_classes_file(in);
}

AlignedGraph align_memberships(const DirectedGraph& g, const std::vector<std::string>& labels,
                               const std::vector<std::uint32_t>& z) {
    if (labels.size() != z.size()) throw Error("memberships: label/class count mismatch");
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (!index.try_emplace(labels[i], i).second)
            throw Error("memberships: vertex '" + labels[i] + "' listed twice");

    const VertexId n = g.vertex_count();
    std::vector<std::uint32_t> aligned(n);
    std::vector<bool> used(labels.size(), false);
    for (VertexId v = 0; v < n; ++v) {
        const auto it = index.find(g.label(v));
        if (it == index.end())
            throw Error("no membership for graph vertex '" + g.label(v) + "'");
        aligned[v] = z[it->second];
        used[it->second] = true;
    }

    std::vector<std::string> all_labels;
    all_labels.reserve(labels.size());
    for (VertexId v = 0; v < n; ++v) all_labels.push_back(g.label(v));
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (used[i]) continue;  // membership entries may add isolated vertices
        all_labels.push_back(labels[i]);
        aligned.push_back(z[i]);
    }

    if (all_labels.size() == n) return {g, std::move(aligned)};
    DirectedGraph extended(VertexId(all_labels.size()), g.edges(), g.loops_allowed());
    extended.set_labels(std::move(all_labels));
    return {std::move(extended), std::move(aligned)};
}

std::string render_study_table(const StudyResult& study) {
    std::ostringstream os;
    os << "# replicates=" << study.replicates << " expected_sub=" << std::setprecision(12)
       << study.expected_sub << " positive_scores=" << study.positive_scores
       << " max_score=" << study.max_score << '\n';
    os << "t\tempirical\tci_lo\tci_hi\tbound\tratio\n";
    os << std::setprecision(9);
    for (const auto& row : study.rows)
        os << row.t << '\t' << row.empirical << '\t' << row.ci_lo << '\t' << row.ci_hi << '\t'
           << row.bound << '\t' << row.ratio << '\n';
    return os.str();
}

}  // namespace lmotif
