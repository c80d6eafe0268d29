#include "lmotif/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>

#include "lmotif/census.hpp"
#include "lmotif/parallel.hpp"

namespace lmotif {

std::mt19937_64 replicate_engine(std::uint64_t master_seed, std::uint64_t index) {
    std::seed_seq seq{std::uint32_t(master_seed), std::uint32_t(master_seed >> 32),
                      std::uint32_t(index), std::uint32_t(index >> 32)};
    return std::mt19937_64(seq);
}

WilsonInterval wilson_interval(std::uint64_t count, std::uint64_t n, double z) {
    if (count > n) throw Error("wilson interval: count exceeds sample size");
    if (n == 0) return {0.0, 1.0};
    const double nn = double(n);
    const double phat = double(count) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double center = phat + z2 / (2.0 * nn);
    const double radius = z * std::sqrt(phat * (1.0 - phat) / nn + z2 / (4.0 * nn * nn));
    return {std::max(0.0, (center - radius) / denom), std::min(1.0, (center + radius) / denom)};
}

std::vector<double> default_t_grid(double expected_log, std::size_t replicates) {
    if (replicates < 2) throw Error("t grid needs at least 2 replicates");
    const double lo = std::max(expected_log, 1e-6);
    double hi = expected_log + std::log(double(replicates));
    if (hi <= lo) hi = lo + 1.0;
    constexpr int kPoints = 40;
    std::vector<double> grid(kPoints);
    for (int i = 0; i < kPoints; ++i) grid[i] = lo + (hi - lo) * double(i) / double(kPoints - 1);
    return grid;
}

StudyResult empirical_tail(const BlockModel& model, const StudyConfig& cfg) {
    model.validate();
    if (!cfg.pattern.connected()) throw Error("tail study: pattern must be connected");
    const int k = cfg.pattern.k();
    if (k < 3 || k > kMaxPatternSize) throw Error("tail study: pattern size must lie in [3, 8]");
    if (cfg.replicates == 0) throw Error("tail study: no replicates requested");

    PatternCatalog setup(model.allow_loops);
    const PatternInfo& ref_info = setup.info_for(cfg.pattern);
    if (cfg.class_index >= ref_info.classes.size())
        throw Error("tail study: class index out of range");
    const ExpectedCount esub =
        expected_count(model, ref_info.classes[cfg.class_index].subpattern);

    const std::vector<double> grid =
        cfg.grid.empty() ? default_t_grid(esub.log_value, cfg.replicates) : cfg.grid;
    if (grid.empty() || grid.front() <= 0 ||
        std::adjacent_find(grid.begin(), grid.end(), std::greater_equal<double>()) != grid.end())
        throw Error("tail study: t grid must be positive and strictly increasing");

    const unsigned threads = std::max(1u, cfg.threads);
    const std::size_t blocks = threads;
    std::vector<std::vector<std::uint64_t>> counts(blocks,
                                                   std::vector<std::uint64_t>(grid.size(), 0));
    std::vector<double> block_max(blocks, 0.0);
    std::vector<std::uint64_t> block_positive(blocks, 0);
    std::atomic<std::size_t> done{0};
    std::mutex progress_mutex;

    run_blocks(cfg.replicates, blocks, threads,
               [&](std::size_t b, std::size_t lo, std::size_t hi) {
                   PatternCatalog catalog(model.allow_loops);
                   const PatternInfo& info = catalog.info_for(cfg.pattern);
                   const PatternCode target{std::uint8_t(k), info.canonical.bits()};
                   ThemeOptions topts;
                   topts.catalog = &catalog;
                   std::vector<VertexSet> matches;
                   for (std::size_t rep = lo; rep < hi; ++rep) {
                       auto eng = replicate_engine(cfg.master_seed, rep);
                       const DirectedGraph g = generate(model, eng);
                       matches.clear();
                       esu_scan(g, k, 0, g.vertex_count(), [&](const VertexSet& verts) {
                           if (catalog.classify(k, induced_bits(g, verts)).code == target)
                               matches.push_back(verts);
                       });
                       double score = 0;
                       if (!matches.empty()) {
                           for (const auto& rec :
                                theme_orders(g, model, info, cfg.class_index, matches, topts))
                               score = std::max(score, rec.score);
                       }
                       if (score > 0) ++block_positive[b];
                       block_max[b] = std::max(block_max[b], score);
                       for (std::size_t i = 0; i < grid.size() && grid[i] <= score; ++i)
                           ++counts[b][i];
                       if (cfg.progress) {
                           const std::size_t d = done.fetch_add(1) + 1;
                           if (d % 1024 == 0 || d == cfg.replicates) {
                               std::lock_guard<std::mutex> lock(progress_mutex);
                               cfg.progress(d, cfg.replicates);
                           }
                       }
                   }
               });

    StudyResult out;
    out.expected_sub = esub.value;
    out.expected_sub_log = esub.log_value;
    out.replicates = cfg.replicates;
    for (std::size_t b = 0; b < blocks; ++b) {
        out.max_score = std::max(out.max_score, block_max[b]);
        out.positive_scores += block_positive[b];
    }
    out.rows.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        TailRow row;
        row.t = grid[i];
        for (std::size_t b = 0; b < blocks; ++b) row.exceedances += counts[b][i];
        row.empirical = double(row.exceedances) / double(cfg.replicates);
        const auto ci = wilson_interval(row.exceedances, cfg.replicates);
        row.ci_lo = ci.lo;
        row.ci_hi = ci.hi;
        const double log_bound = esub.log_value - grid[i];
        row.bound = log_bound >= 0 ? 1.0 : std::exp(log_bound);
        row.ratio = row.bound > 0 ? row.empirical / row.bound
                                  : (row.empirical > 0 ? kInf : 0.0);
        out.rows.push_back(row);
    }
    return out;
}

ConditionalSample conditional_theme_moments(const BlockModel& model, const Pattern& pattern,
                                            std::size_t class_index,
                                            const std::vector<VertexId>& embedding,
                                            std::size_t replicates, std::uint64_t seed) {
    model.validate();
    if (replicates < 2) throw Error("conditional moments: need at least 2 replicates");
    PatternCatalog catalog(model.allow_loops);
    const PatternInfo& info = catalog.info_for(pattern);
    if (class_index >= info.classes.size())
        throw Error("conditional moments: class index out of range");
    const DeletionClass& dc = info.classes[class_index];
    const int ks = pattern.k() - 1;
    if (int(embedding.size()) != ks)
        throw Error("conditional moments: embedding size does not match the subpattern");

    std::vector<std::uint32_t> zvec(ks);
    for (int j = 0; j < ks; ++j) {
        if (embedding[j] >= model.n) throw Error("conditional moments: vertex out of range");
        zvec[j] = model.z[embedding[j]];
    }
    {
        auto distinct = embedding;
        std::sort(distinct.begin(), distinct.end());
        if (std::adjacent_find(distinct.begin(), distinct.end()) != distinct.end())
            throw Error("conditional moments: embedding repeats a vertex");
    }
    std::vector<std::uint32_t> avail = model.class_counts();
    for (std::uint32_t c : zvec) --avail[c];
    const auto [lambda, lambda2] = lambda_pair(model, dc, zvec, avail);

    ConditionalSample out;
    out.lambda = lambda;
    out.lambda2 = lambda2;
    if (position_probability(model, embedding, dc.subpattern) == 0) {
        out.estimable = false;  // conditioning event cannot happen under this model
        return out;
    }

    std::vector<VertexId> outside;
    outside.reserve(model.n - embedding.size());
    for (VertexId v = 0; v < model.n; ++v)
        if (std::find(embedding.begin(), embedding.end(), v) == embedding.end())
            outside.push_back(v);

    double sum = 0, sum_sq = 0;
    for (std::size_t rep = 0; rep < replicates; ++rep) {
        auto eng = replicate_engine(seed, rep);
        std::uint32_t order = 0;
        for (VertexId v : outside) {
            const std::uint32_t zv = model.z[v];
            std::uint32_t config = 0;
            for (int j = 0; j < ks; ++j) {
                if (next_unit_double(eng) < model.p(zvec[j], zv)) config |= 1u << (2 * j);
                if (next_unit_double(eng) < model.p(zv, zvec[j])) config |= 1u << (2 * j + 1);
            }
            if (model.allow_loops && next_unit_double(eng) < model.p(zv, zv))
                config |= 1u << (2 * ks);
            if (std::binary_search(dc.extension_configs.begin(), dc.extension_configs.end(),
                                   config))
                ++order;
        }
        sum += order;
        sum_sq += double(order) * order;
    }

    out.replicates = replicates;
    out.mean = sum / double(replicates);
    out.variance = std::max(0.0, (sum_sq - sum * out.mean) / double(replicates - 1));
    out.se = std::sqrt(out.variance / double(replicates));
    return out;
}

SampleMean monte_carlo_count(const BlockModel& model, const Pattern& pattern,
                             std::size_t replicates, std::uint64_t seed, unsigned threads) {
    model.validate();
    if (replicates < 2) throw Error("count sampling: need at least 2 replicates");
    if (!pattern.connected()) throw Error("count sampling: pattern must be connected");
    const int k = pattern.k();

    const unsigned workers = std::max(1u, threads);
    std::vector<double> block_sum(workers, 0.0), block_sq(workers, 0.0);
    run_blocks(replicates, workers, workers, [&](std::size_t b, std::size_t lo, std::size_t hi) {
        PatternCatalog catalog(model.allow_loops);
        const PatternInfo& info = catalog.info_for(pattern);
        const PatternCode target{std::uint8_t(k), info.canonical.bits()};
        for (std::size_t rep = lo; rep < hi; ++rep) {
            auto eng = replicate_engine(seed, rep);
            const DirectedGraph g = generate(model, eng);
            std::uint64_t count = 0;
            esu_scan(g, k, 0, g.vertex_count(), [&](const VertexSet& verts) {
                if (catalog.classify(k, induced_bits(g, verts)).code == target) ++count;
            });
            block_sum[b] += double(count);
            block_sq[b] += double(count) * double(count);
        }
    });

    double sum = 0, sum_sq = 0;
    for (unsigned b = 0; b < workers; ++b) {
        sum += block_sum[b];
        sum_sq += block_sq[b];
    }
    SampleMean out;
    out.replicates = replicates;
    out.mean = sum / double(replicates);
    out.se = std::sqrt(std::max(0.0, (sum_sq - sum * out.mean) / double(replicates - 1)) /
                       double(replicates));
    return out;
}

}  // namespace lmotif
