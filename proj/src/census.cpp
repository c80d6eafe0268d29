#include "lmotif/census.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <sstream>
#include <unordered_map>

#include "lmotif/bounds.hpp"
#include "lmotif/parallel.hpp"

namespace lmotif {

std::uint64_t induced_bits(const DirectedGraph& g, const VertexSet& verts) {
    const int k = static_cast<int>(verts.size());
    std::uint64_t bits = 0;
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            if (i == j && !g.loops_allowed()) continue;
            if (g.has_edge(verts[i], verts[j]))
                bits |= std::uint64_t{1} << ((k - 1 - i) * k + (k - 1 - j));
        }
    return bits;
}

namespace {

// Classic ESU. `claimed` marks V_sub ∪ N(V_sub) ∪ {vertices <= root already
// offered}: a vertex enters the extension set at most once across the whole
// subtree, which is exactly what makes each k-set appear once.
struct EsuRunner {
    const DirectedGraph& g;
    int k;
    VertexId root;
    const std::function<void(const VertexSet&)>& emit;
    std::vector<std::uint8_t>& claimed;
    VertexSet sub;
    VertexSet sorted;

    void extend(std::vector<VertexId> ext) {
        if (static_cast<int>(sub.size()) == k) {
            sorted = sub;
            std::sort(sorted.begin(), sorted.end());
            emit(sorted);
            return;
        }
        while (!ext.empty()) {
            const VertexId w = ext.back();
            ext.pop_back();
            std::vector<VertexId> ext2 = ext;
            std::vector<VertexId> newly;
            for (VertexId u : g.und_neighbors(w))
                if (u > root && !claimed[u]) {
                    claimed[u] = 1;
                    ext2.push_back(u);
                    newly.push_back(u);
                }
            sub.push_back(w);
            extend(std::move(ext2));
            sub.pop_back();
            for (VertexId u : newly) claimed[u] = 0;
        }
    }
};

}  // namespace

void esu_scan(const DirectedGraph& g, int k, VertexId root_begin, VertexId root_end,
              const std::function<void(const VertexSet&)>& emit) {
    if (k < 1 || k > kMaxPatternSize) throw Error("census size must be between 1 and 8");
    std::vector<std::uint8_t> claimed(g.vertex_count(), 0);
    for (VertexId root = root_begin; root < root_end; ++root) {
        EsuRunner runner{g, k, root, emit, claimed, {}, {}};
        runner.sub.reserve(k);
        claimed[root] = 1;
        std::vector<VertexId> ext;
        std::vector<VertexId> newly;
        for (VertexId u : g.und_neighbors(root))
            if (u > root) {
                claimed[u] = 1;
                ext.push_back(u);
                newly.push_back(u);
            }
        runner.sub.push_back(root);
        runner.extend(std::move(ext));
        for (VertexId u : newly) claimed[u] = 0;
        claimed[root] = 0;
    }
}

CensusMap enumerate_subgraphs(const DirectedGraph& g, int k, const CensusOptions& opts) {
    const std::size_t n = g.vertex_count();
    const std::size_t block_count =
        opts.threads > 1 ? std::min<std::size_t>(n, std::size_t(opts.threads) * 8) : 1;

    std::vector<CensusMap> partial(std::max<std::size_t>(block_count, 1));
    std::atomic<std::size_t> roots_done{0};
    std::mutex progress_mutex;

    run_blocks(n, block_count, opts.threads, [&](std::size_t b, std::size_t lo, std::size_t hi) {
        PatternCatalog local_catalog(g.loops_allowed());
        PatternCatalog* catalog =
            (opts.catalog && opts.threads <= 1) ? opts.catalog : &local_catalog;
        CensusMap& out = partial[b];
        esu_scan(g, k, VertexId(lo), VertexId(hi), [&](const VertexSet& verts) {
            const auto& cls = catalog->classify(k, induced_bits(g, verts));
            out[cls.code].push_back(verts);
        });
        if (opts.progress) {
            const std::size_t done = roots_done.fetch_add(hi - lo) + (hi - lo);
            std::lock_guard<std::mutex> lock(progress_mutex);
            opts.progress(done, n);
        }
    });

    CensusMap merged = std::move(partial[0]);
    for (std::size_t b = 1; b < partial.size(); ++b)
        for (auto& [code, sets] : partial[b]) {
            auto& dst = merged[code];
            dst.insert(dst.end(), std::make_move_iterator(sets.begin()),
                       std::make_move_iterator(sets.end()));
        }
    return merged;
}

std::string Position::to_string(const DirectedGraph* g) const {
    std::ostringstream os;
    os << "(";
    for (std::size_t c = 0; c < sets.size(); ++c) {
        if (c) os << ",";
        os << "{";
        for (std::size_t i = 0; i < sets[c].size(); ++i) {
            if (i) os << ",";
            if (g)
                os << g->label(sets[c][i]);
            else
                os << sets[c][i];
        }
        os << "}";
    }
    os << ")";
    return os.str();
}

Position position_of(const VertexSet& verts, const Classified& cls, const PatternInfo& info) {
    Position pos;
    pos.sets.resize(info.classes.size());
    for (std::size_t i = 0; i < verts.size(); ++i)
        pos.sets[info.class_of_vertex[cls.to_canonical[i]]].push_back(verts[i]);
    return pos;
}

namespace {

struct VertexSetHash {
    std::size_t operator()(const VertexSet& v) const {
        std::size_t h = 0x9e3779b97f4a7c15ull;
        for (auto x : v) h = (h ^ x) * 0x100000001b3ull;
        return h;
    }
};

struct ZvecHash {
    std::size_t operator()(const std::vector<std::uint32_t>& v) const {
        std::size_t h = 14695981039346656037ull;
        for (auto x : v) h = (h ^ x) * 1099511628211ull;
        return h;
    }
};

}  // namespace

std::vector<ThemeRecord> theme_orders(const DirectedGraph& g, const BlockModel& model,
                                      const PatternInfo& pinfo, std::size_t class_index,
                                      const std::vector<VertexSet>& occurrences_k,
                                      const ThemeOptions& opts) {
    if (class_index >= pinfo.classes.size())
        throw Error("theme_orders: class index does not belong to the pattern");
    if (model.z.size() != g.vertex_count())
        throw Error("theme_orders: model does not cover the graph");
    const int k = pinfo.canonical.k();
    const DeletionClass& dc = pinfo.classes[class_index];

    PatternCatalog local_catalog(g.loops_allowed());
    PatternCatalog& catalog = opts.catalog ? *opts.catalog : local_catalog;

    const PatternCode target = PatternCode{std::uint8_t(k), pinfo.canonical.bits()};
    std::unordered_map<VertexSet, std::uint32_t, VertexSetHash> orders;
    for (const auto& verts : occurrences_k) {
        const auto& cls = catalog.classify(k, induced_bits(g, verts));
        if (cls.code != target)
            throw Error("theme_orders: occurrence does not realize the pattern");
        for (int i = 0; i < k; ++i) {
            if (pinfo.class_of_vertex[cls.to_canonical[i]] != class_index) continue;
            VertexSet subset;
            subset.reserve(k - 1);
            for (int j = 0; j < k; ++j)
                if (j != i) subset.push_back(verts[j]);
            ++orders[subset];
        }
    }
    if (opts.subpattern_occurrences)
        for (const auto& verts : *opts.subpattern_occurrences)
            orders.emplace(verts, 0);  // keeps existing counts

    std::vector<const VertexSet*> keys;
    keys.reserve(orders.size());
    for (const auto& [subset, count] : orders) keys.push_back(&subset);
    std::sort(keys.begin(), keys.end(),
              [](const VertexSet* a, const VertexSet* b) { return *a < *b; });

    const PatternInfo& sub_info = catalog.info(dc.subpattern_code);
    const auto class_counts = model.class_counts();
    std::unordered_map<std::vector<std::uint32_t>, std::pair<double, double>, ZvecHash>
        lambda_memo;

    std::vector<ThemeRecord> records;
    records.reserve(keys.size());
    std::vector<std::uint32_t> zvec(k - 1), avail;
    for (const VertexSet* key : keys) {
        const VertexSet& subset = *key;
        const std::uint32_t order = orders[subset];
        const auto& cls = catalog.classify(k - 1, induced_bits(g, subset));
        if (cls.code != dc.subpattern_code)
            throw Error("theme_orders: subpattern occurrence list does not match the class");
        for (std::size_t i = 0; i < subset.size(); ++i)
            zvec[cls.to_canonical[i]] = model.z[subset[i]];

        auto memo_it = lambda_memo.find(zvec);
        if (memo_it == lambda_memo.end()) {
            avail = class_counts;
            for (auto zc : zvec) --avail[zc];
            memo_it = lambda_memo.emplace(zvec, lambda_pair(model, dc, zvec, avail)).first;
        }
        const auto [lambda, lambda2] = memo_it->second;

        ThemeRecord rec;
        rec.position = position_of(subset, cls, sub_info);
        rec.subset = subset;
        rec.stats.lambda = lambda;
        rec.stats.lambda2 = lambda2;
        rec.stats.n_u = order;
        if (lambda > 0) {
            rec.stats.delta = (double(order) - lambda) / lambda;
            rec.score = rec.stats.delta > 0 ? bounds::g_score(lambda, rec.stats.delta) : 0.0;
        } else if (order > 0) {
            rec.stats.delta = kInf;
            rec.score = kInf;
            rec.misfit = true;
        } else {
            rec.stats.delta = 0.0;
            rec.score = 0.0;
        }
        records.push_back(std::move(rec));
    }
    return records;
}

}  // namespace lmotif
