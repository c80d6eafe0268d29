#pragma once

// Small directed patterns (3..8 vertices; 2 supported for subpatterns) stored
// as a row-major adjacency bitmask. Canonical codes, automorphism groups,
// deletion classes and their extension configurations all live here.
//
// Conventions that the rest of the library relies on:
//  * adjacency bit for i->j is bits & (1 << ((k-1-i)*k + (k-1-j))); the
//    canonical code is the k*k-bit string read row-major with cell (0,0) most
//    significant, and the code value is the MINIMUM over all k! placements.
//  * deletion classes are the orbits of the automorphism group, listed in
//    increasing order of their smallest member (the representative).
//  * a deletion class stores its subpattern in CANONICAL form, and its
//    extension configurations are edge-vectors expressed in canonical
//    subpattern coordinates: bit 2j   = edge (subpattern vertex j -> new vertex),
//                             bit 2j+1 = edge (new vertex -> subpattern vertex j),
//    plus, in loop mode only, one trailing bit for the new vertex's own loop.
//    The set is closed under the subpattern's automorphism group, so testing
//    "does v extend this occurrence" is independent of the chosen embedding.

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lmotif/common.hpp"

namespace lmotif {

inline constexpr int kMaxPatternSize = 8;

struct PatternCode {
    std::uint8_t k = 0;
    std::uint64_t bits = 0;

    friend bool operator==(const PatternCode& a, const PatternCode& b) {
        return a.k == b.k && a.bits == b.bits;
    }
    friend bool operator!=(const PatternCode& a, const PatternCode& b) { return !(a == b); }
    friend bool operator<(const PatternCode& a, const PatternCode& b) {
        return a.k != b.k ? a.k < b.k : a.bits < b.bits;
    }
    std::string to_string() const;
};

using Perm = std::array<std::uint8_t, kMaxPatternSize>;  // entries [0,k) are meaningful

class Pattern {
  public:
    Pattern() = default;
    Pattern(int k, const std::vector<std::pair<int, int>>& edges, bool allow_loops = false);
    static Pattern from_bits(int k, std::uint64_t bits, bool allow_loops = false);
    // Literal form "k;u->v,u->v,...". An edgeless pattern is "k;".
    static Pattern parse(std::string_view literal, bool allow_loops = false);

    int k() const { return k_; }
    std::uint64_t bits() const { return bits_; }
    bool allow_loops() const { return allow_loops_; }
    bool edge(int i, int j) const {
        return (bits_ >> ((k_ - 1 - i) * k_ + (k_ - 1 - j))) & 1u;
    }
    int edge_count() const;
    bool connected() const;  // weak connectivity
    std::string literal() const;

    PatternCode canonical_code() const;
    // Placement minimizing the code: canonical vertex of original vertex i is
    // to_canonical[i].
    Perm canonical_placement() const;
    Pattern permuted(const Perm& to_new) const;
    Pattern delete_vertex(int v) const;

    // All automorphisms as maps phi with phi[i] = image of i. Identity first.
    std::vector<Perm> automorphisms() const;

  private:
    std::uint8_t k_ = 0;
    bool allow_loops_ = false;
    std::uint64_t bits_ = 0;
};

struct DeletionClass {
    std::vector<std::uint8_t> members;  // sorted pattern vertex indices
    std::uint8_t representative = 0;    // == members.front()
    Pattern subpattern;                 // canonical form, k-1 vertices
    PatternCode subpattern_code;
    std::vector<std::uint32_t> extension_configs;  // sorted, canonical coordinates
};

// Orbits of the automorphism group, ordered by representative.
std::vector<DeletionClass> deletion_classes(const Pattern& pattern);

struct PatternInfo {
    Pattern canonical;
    std::size_t automorphism_count = 0;
    std::vector<DeletionClass> classes;
    std::vector<std::uint8_t> class_of_vertex;  // canonical vertex -> class index
};

// Classification of one induced adjacency bitmask: its canonical code plus the
// placement that realizes it (slot i of the sorted vertex set plays canonical
// vertex to_canonical[i]).
struct Classified {
    PatternCode code;
    Perm to_canonical;
};

// Memoizing classifier/catalog. Not thread-safe; give each worker its own.
class PatternCatalog {
  public:
    explicit PatternCatalog(bool allow_loops = false) : allow_loops_(allow_loops) {}

    const Classified& classify(int k, std::uint64_t bits);
    const PatternInfo& info(const PatternCode& code);
    const PatternInfo& info_for(const Pattern& pattern);

  private:
    bool allow_loops_;
    std::array<std::unordered_map<std::uint64_t, Classified>, kMaxPatternSize + 1> classify_memo_;
    std::unordered_map<std::uint64_t, PatternInfo> info_memo_[kMaxPatternSize + 1];
};

}  // namespace lmotif
