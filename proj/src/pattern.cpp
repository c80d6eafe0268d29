#include "lmotif/pattern.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

namespace lmotif {

namespace {

// Minimize (or match) the row-major code over all k! placements.
// p[slot] = original vertex placed at canonical slot. Rows are compared
// progressively so most placements die after one or two rows.
struct CanonResult {
    std::uint64_t bits = 0;
    Perm placement{};  // argmin p
};

std::uint64_t apply_placement(const std::uint64_t m[kMaxPatternSize], int k, const Perm& p) {
    std::uint64_t code = 0;
    for (int s = 0; s < k; ++s) {
        const std::uint64_t row = m[p[s]];
        for (int t = 0; t < k; ++t) code = (code << 1) | ((row >> p[t]) & 1u);
    }
    return code;
}

CanonResult canonical_min(const std::uint64_t rows[kMaxPatternSize], int k) {
    Perm p{};
    std::iota(p.begin(), p.begin() + k, std::uint8_t{0});
    CanonResult best;
    best.bits = ~std::uint64_t{0};
    if (k < 8) best.bits >>= (64 - k * k);
    best.placement = p;
    bool first = true;
    do {
        std::uint64_t code = 0;
        bool worse = false;
        for (int s = 0; s < k && !worse; ++s) {
            const std::uint64_t row = rows[p[s]];
            std::uint64_t rbits = 0;
            for (int t = 0; t < k; ++t) rbits = (rbits << 1) | ((row >> p[t]) & 1u);
            code = (code << k) | rbits;
            if (!first) {
                const std::uint64_t best_prefix = best.bits >> ((k - s - 1) * k);
                if (code > best_prefix) worse = true;
            }
        }
        if (!worse && (first || code < best.bits)) {
            best.bits = code;
            best.placement = p;
            first = false;
        }
    } while (std::next_permutation(p.begin(), p.begin() + k));
    return best;
}

std::vector<Perm> all_automorphisms(const std::uint64_t rows[kMaxPatternSize], int k,
                                    std::uint64_t bits) {
    std::vector<Perm> result;
    Perm p{};
    std::iota(p.begin(), p.begin() + k, std::uint8_t{0});
    do {
        std::uint64_t code = 0;
        bool mismatch = false;
        for (int s = 0; s < k && !mismatch; ++s) {
            const std::uint64_t row = rows[p[s]];
            std::uint64_t rbits = 0;
            for (int t = 0; t < k; ++t) rbits = (rbits << 1) | ((row >> p[t]) & 1u);
            code = (code << k) | rbits;
            const std::uint64_t want = bits >> ((k - s - 1) * k);
            if (code != want) mismatch = true;
        }
        if (!mismatch) {
            Perm phi{};
            for (int s = 0; s < k; ++s) phi[p[s]] = static_cast<std::uint8_t>(s);
            result.push_back(phi);
        }
    } while (std::next_permutation(p.begin(), p.begin() + k));
    return result;
}

void split_rows(std::uint64_t bits, int k, std::uint64_t rows[kMaxPatternSize]) {
    // rows[i] has bit j set iff edge i->j; note the row-major code stores cell
    // (s,t) at bit (k-1-s)*k + (k-1-t), so unpack accordingly.
    for (int i = 0; i < k; ++i) {
        rows[i] = 0;
        for (int j = 0; j < k; ++j)
            rows[i] |= ((bits >> ((k - 1 - i) * k + (k - 1 - j))) & 1u) << j;
    }
}

std::uint64_t pack_rows(const std::uint64_t rows[kMaxPatternSize], int k) {
    std::uint64_t bits = 0;
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) bits = (bits << 1) | ((rows[i] >> j) & 1u);
    return bits;
}

}  // namespace

std::string PatternCode::to_string() const {
    std::ostringstream os;
    os << int(k) << ":0x" << std::hex << bits;
    return os.str();
}

Pattern::Pattern(int k, const std::vector<std::pair<int, int>>& edges, bool allow_loops)
    : k_(static_cast<std::uint8_t>(k)), allow_loops_(allow_loops) {
    if (k < 1 || k > kMaxPatternSize)
        throw Error("pattern size must be between 1 and 8, got " + std::to_string(k));
    for (auto [u, v] : edges) {
        if (u < 0 || v < 0 || u >= k || v >= k)
            throw Error("pattern edge endpoint out of range: " + std::to_string(u) + "->" +
                        std::to_string(v));
        if (u == v && !allow_loops)
            throw Error("pattern self-loop requires loop mode: " + std::to_string(u) + "->" +
                        std::to_string(u));
        const std::uint64_t bit = std::uint64_t{1} << ((k - 1 - u) * k + (k - 1 - v));
        if (bits_ & bit)
            throw Error("duplicate pattern edge " + std::to_string(u) + "->" + std::to_string(v));
        bits_ |= bit;
    }
}

Pattern Pattern::from_bits(int k, std::uint64_t bits, bool allow_loops) {
    if (k < 1 || k > kMaxPatternSize) throw Error("pattern size out of range");
    Pattern p;
    p.k_ = static_cast<std::uint8_t>(k);
    p.bits_ = bits;
    p.allow_loops_ = allow_loops;
    if (!allow_loops)
        for (int i = 0; i < k; ++i)
            if (p.edge(i, i)) throw Error("pattern has a loop but loop mode is off");
    return p;
}

Pattern Pattern::parse(std::string_view literal, bool allow_loops) {
    std::string s(literal);
    s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }),
            s.end());
    const auto semi = s.find(';');
    if (semi == std::string::npos) throw ParseError("pattern literal missing ';': " + s);
    int k = 0;
    try {
        std::size_t pos = 0;
        k = std::stoi(s.substr(0, semi), &pos);
        if (pos != semi) throw ParseError("bad size");
    } catch (...) {
        throw ParseError("pattern literal has malformed size: " + s);
    }
    std::vector<std::pair<int, int>> edges;
    std::string rest = s.substr(semi + 1);
    std::size_t start = 0;
    while (start < rest.size()) {
        auto end = rest.find(',', start);
        if (end == std::string::npos) end = rest.size();
        const std::string tok = rest.substr(start, end - start);
        const auto arrow = tok.find("->");
        if (arrow == std::string::npos)
            throw ParseError("pattern edge missing '->': " + tok);
        try {
            std::size_t p1 = 0, p2 = 0;
            int u = std::stoi(tok.substr(0, arrow), &p1);
            int v = std::stoi(tok.substr(arrow + 2), &p2);
            if (p1 != arrow || p2 != tok.size() - arrow - 2) throw ParseError("bad edge");
            edges.emplace_back(u, v);
        } catch (const ParseError&) {
            throw;
        } catch (...) {
            throw ParseError("pattern edge has malformed endpoints: " + tok);
        }
        start = end + 1;
    }
    try {
        return Pattern(k, edges, allow_loops);
    } catch (const Error& e) {
        throw ParseError(std::string("invalid pattern literal: ") + e.what());
    }
}

int Pattern::edge_count() const {
    int c = 0;
    for (int i = 0; i < k_; ++i)
        for (int j = 0; j < k_; ++j) c += edge(i, j);
    return c;
}

bool Pattern::connected() const {
    if (k_ == 0) return false;
    std::uint32_t seen = 1;
    std::uint32_t frontier = 1;
    while (frontier) {
        std::uint32_t next = 0;
        for (int i = 0; i < k_; ++i) {
            if (!((frontier >> i) & 1u)) continue;
            for (int j = 0; j < k_; ++j)
                if (i != j && (edge(i, j) || edge(j, i)) && !((seen >> j) & 1u)) {
                    seen |= 1u << j;
                    next |= 1u << j;
                }
        }
        frontier = next;
    }
    return seen == (k_ >= 32 ? ~0u : ((1u << k_) - 1));
}

std::string Pattern::literal() const {
    std::ostringstream os;
    os << int(k_) << ";";
    bool sep = false;
    for (int i = 0; i < k_; ++i)
        for (int j = 0; j < k_; ++j)
            if (edge(i, j)) {
                if (sep) os << ",";
                os << i << "->" << j;
                sep = true;
            }
    return os.str();
}

PatternCode Pattern::canonical_code() const {
    std::uint64_t rows[kMaxPatternSize];
    split_rows(bits_, k_, rows);
    return PatternCode{k_, canonical_min(rows, k_).bits};
}

Perm Pattern::canonical_placement() const {
    std::uint64_t rows[kMaxPatternSize];
    split_rows(bits_, k_, rows);
    const auto res = canonical_min(rows, k_);
    Perm to_canonical{};
    for (int s = 0; s < k_; ++s) to_canonical[res.placement[s]] = static_cast<std::uint8_t>(s);
    return to_canonical;
}

Pattern Pattern::permuted(const Perm& to_new) const {
    std::uint64_t rows[kMaxPatternSize];
    split_rows(bits_, k_, rows);
    std::uint64_t new_rows[kMaxPatternSize] = {};
    for (int i = 0; i < k_; ++i)
        for (int j = 0; j < k_; ++j)
            if ((rows[i] >> j) & 1u) new_rows[to_new[i]] |= std::uint64_t{1} << to_new[j];
    Pattern p;
    p.k_ = k_;
    p.allow_loops_ = allow_loops_;
    p.bits_ = pack_rows(new_rows, k_);
    return p;
}

Pattern Pattern::delete_vertex(int v) const {
    if (k_ <= 1) throw Error("cannot delete from a single-vertex pattern");
    if (v < 0 || v >= k_) throw Error("delete_vertex: index out of range");
    std::uint64_t rows[kMaxPatternSize];
    split_rows(bits_, k_, rows);
    std::uint64_t sub_rows[kMaxPatternSize] = {};
    int ri = 0;
    for (int i = 0; i < k_; ++i) {
        if (i == v) continue;
        int rj = 0;
        for (int j = 0; j < k_; ++j) {
            if (j == v) continue;
            if ((rows[i] >> j) & 1u) sub_rows[ri] |= std::uint64_t{1} << rj;
            ++rj;
        }
        ++ri;
    }
    Pattern p;
    p.k_ = static_cast<std::uint8_t>(k_ - 1);
    p.allow_loops_ = allow_loops_;
    p.bits_ = pack_rows(sub_rows, k_ - 1);
    return p;
}

std::vector<Perm> Pattern::automorphisms() const {
    std::uint64_t rows[kMaxPatternSize];
    split_rows(bits_, k_, rows);
    return all_automorphisms(rows, k_, bits_);
}

std::vector<DeletionClass> deletion_classes(const Pattern& pattern) {
    const int k = pattern.k();
    if (k < 2) throw Error("deletion classes require at least 2 vertices");
    const auto auts = pattern.automorphisms();

    std::vector<DeletionClass> classes;
    std::array<bool, kMaxPatternSize> visited{};
    for (int v = 0; v < k; ++v) {
        if (visited[v]) continue;
        DeletionClass dc;
        for (const auto& phi : auts) {
            const int img = phi[v];
            if (!visited[img]) {
                visited[img] = true;
                dc.members.push_back(static_cast<std::uint8_t>(img));
            }
        }
        std::sort(dc.members.begin(), dc.members.end());
        dc.representative = dc.members.front();
        classes.push_back(std::move(dc));
    }

    for (auto& dc : classes) {
        const int r = dc.representative;
        // Remaining vertices in ascending order become constructed subpattern
        // vertices 0..k-2; the config bits below are in that ordering first,
        // then remapped to canonical coordinates.
        Pattern constructed = pattern.delete_vertex(r);
        std::uint32_t config = 0;
        int j = 0;
        for (int w = 0; w < k; ++w) {
            if (w == r) continue;
            if (pattern.edge(w, r)) config |= 1u << (2 * j);
            if (pattern.edge(r, w)) config |= 1u << (2 * j + 1);
            ++j;
        }
        const int slots = 2 * (k - 1);
        if (pattern.allow_loops() && pattern.edge(r, r)) config |= 1u << slots;

        const Perm to_canon = constructed.canonical_placement();
        dc.subpattern = constructed.permuted(to_canon);
        dc.subpattern_code = PatternCode{static_cast<std::uint8_t>(k - 1), dc.subpattern.bits()};

        std::uint32_t canon_config = config & (1u << slots);  // keep loop bit in place
        for (int jj = 0; jj < k - 1; ++jj) {
            canon_config |= ((config >> (2 * jj)) & 1u) << (2 * to_canon[jj]);
            canon_config |= ((config >> (2 * jj + 1)) & 1u) << (2 * to_canon[jj] + 1);
        }

        std::vector<std::uint32_t> orbit;
        for (const auto& psi : dc.subpattern.automorphisms()) {
            std::uint32_t c = canon_config & (1u << slots);
            for (int jj = 0; jj < k - 1; ++jj) {
                c |= ((canon_config >> (2 * jj)) & 1u) << (2 * psi[jj]);
                c |= ((canon_config >> (2 * jj + 1)) & 1u) << (2 * psi[jj] + 1);
            }
            orbit.push_back(c);
        }
        std::sort(orbit.begin(), orbit.end());
        orbit.erase(std::unique(orbit.begin(), orbit.end()), orbit.end());
        dc.extension_configs = std::move(orbit);
    }
    return classes;
}

const Classified& PatternCatalog::classify(int k, std::uint64_t bits) {
    auto& memo = classify_memo_[k];
    auto it = memo.find(bits);
    if (it != memo.end()) return it->second;
    std::uint64_t rows[kMaxPatternSize];
    split_rows(bits, k, rows);
    const auto res = canonical_min(rows, k);
    Classified c;
    c.code = PatternCode{static_cast<std::uint8_t>(k), res.bits};
    for (int s = 0; s < k; ++s) c.to_canonical[res.placement[s]] = static_cast<std::uint8_t>(s);
    return memo.emplace(bits, c).first->second;
}

const PatternInfo& PatternCatalog::info(const PatternCode& code) {
    auto& memo = info_memo_[code.k];
    auto it = memo.find(code.bits);
    if (it != memo.end()) return it->second;

    PatternInfo pi;
    pi.canonical = Pattern::from_bits(code.k, code.bits, allow_loops_);
    if (pi.canonical.canonical_code().bits != code.bits)
        throw Error("pattern code is not in canonical form: " + code.to_string());
    pi.automorphism_count = pi.canonical.automorphisms().size();
    pi.classes = deletion_classes(pi.canonical);
    pi.class_of_vertex.assign(code.k, 0);
    for (std::size_t ci = 0; ci < pi.classes.size(); ++ci)
        for (auto m : pi.classes[ci].members) pi.class_of_vertex[m] = static_cast<std::uint8_t>(ci);
    return memo.emplace(code.bits, std::move(pi)).first->second;
}

const PatternInfo& PatternCatalog::info_for(const Pattern& pattern) {
    return info(pattern.canonical_code());
}

}  // namespace lmotif
