#include "lmotif/block_model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "lmotif/common.hpp"

namespace lmotif {

double BlockModel::max_p() const {
    double m = 0;
    for (double v : pi) m = std::max(m, v);
    return m;
}

std::vector<std::uint32_t> BlockModel::class_counts() const {
    std::vector<std::uint32_t> counts(q, 0);
    for (auto c : z) ++counts[c];
    return counts;
}

void BlockModel::validate() const {
    if (z.size() != n) throw Error("blockmodel: membership size != n");
    if (q == 0) throw Error("blockmodel: no classes");
    if (pi.size() != std::size_t(q) * q) throw Error("blockmodel: Pi is not Q x Q");
    for (auto c : z)
        if (c >= q) throw Error("blockmodel: class index " + std::to_string(c) + " out of range");
    for (double v : pi)
        if (!(v >= 0.0 && v <= 1.0)) throw Error("blockmodel: Pi entry outside [0,1]");
}

EstimateResult estimate_pi(const DirectedGraph& g, const std::vector<std::uint32_t>& z,
                           std::uint32_t q) {
    if (z.size() != g.vertex_count()) throw Error("estimate_pi: membership size != n");
    if (q == 0) throw Error("estimate_pi: Q must be positive");
    std::vector<std::uint64_t> counts(q, 0);
    for (auto c : z) {
        if (c >= q) throw Error("estimate_pi: class index out of range");
        ++counts[c];
    }
    for (std::uint32_t c = 0; c < q; ++c)
        if (counts[c] == 0)
            throw Error("estimate_pi: class " + std::to_string(c) + " has no vertices");

    std::vector<std::uint64_t> edges(std::size_t(q) * q, 0);
    for (auto [u, v] : g.edges()) {
        if (u == v) continue;  // loops are never part of the pair counts
        ++edges[z[u] * q + z[v]];
    }

    EstimateResult res;
    res.model.n = g.vertex_count();
    res.model.q = q;
    res.model.z = z;
    res.model.allow_loops = g.loops_allowed();
    res.model.pi.assign(std::size_t(q) * q, 0.0);
    for (std::uint32_t a = 0; a < q; ++a)
        for (std::uint32_t b = 0; b < q; ++b) {
            const std::uint64_t pairs =
                (a == b) ? counts[a] * (counts[a] - 1) : counts[a] * counts[b];
            if (pairs == 0) {
                res.warnings.push_back("block (" + std::to_string(a) + "," + std::to_string(b) +
                                       ") has no ordered pairs; Pi entry set to 0");
                continue;
            }
            res.model.pi[a * q + b] = double(edges[a * q + b]) / double(pairs);
        }
    return res;
}

BlockModel expected_degree_model(const DirectedGraph& g) {
    const VertexId n = g.vertex_count();
    std::uint64_t m = 0;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> deg(n);
    for (VertexId v = 0; v < n; ++v) {
        deg[v] = {static_cast<std::uint32_t>(g.in_degree(v)),
                  static_cast<std::uint32_t>(g.out_degree(v))};
        m += g.out_degree(v);
    }
    if (m == 0) throw Error("expected-degree model requires at least one (non-loop) edge");

    auto uniq = deg;
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());

    BlockModel model;
    model.n = n;
    model.q = static_cast<std::uint32_t>(uniq.size());
    model.allow_loops = g.loops_allowed();
    model.z.resize(n);
    for (VertexId v = 0; v < n; ++v)
        model.z[v] = static_cast<std::uint32_t>(
            std::lower_bound(uniq.begin(), uniq.end(), deg[v]) - uniq.begin());
    model.pi.assign(std::size_t(model.q) * model.q, 0.0);
    for (std::uint32_t a = 0; a < model.q; ++a)
        for (std::uint32_t b = 0; b < model.q; ++b)
            model.pi[a * model.q + b] =
                std::min(1.0, double(uniq[a].second) * double(uniq[b].first) / double(m));
    return model;
}

BlockModel erdos_renyi_model(const DirectedGraph& g) {
    const double n = g.vertex_count();
    if (n < 2) throw Error("Erdos-Renyi model requires at least 2 vertices");
    const double pairs = g.loops_allowed() ? n * n : n * (n - 1);
    BlockModel model;
    model.n = g.vertex_count();
    model.q = 1;
    model.z.assign(g.vertex_count(), 0);
    model.pi = {double(g.edge_count()) / pairs};
    model.allow_loops = g.loops_allowed();
    return model;
}

DirectedGraph generate(const BlockModel& model, std::mt19937_64& rng) {
    std::vector<Edge> edges;
    for (VertexId u = 0; u < model.n; ++u) {
        const std::uint32_t zu = model.z[u];
        for (VertexId v = 0; v < model.n; ++v) {
            if (u == v && !model.allow_loops) continue;
            if (next_unit_double(rng) < model.p(zu, model.z[v])) edges.emplace_back(u, v);
        }
    }
    return DirectedGraph(model.n, std::move(edges), model.allow_loops);
}

double config_probability(const BlockModel& model, const std::vector<std::uint32_t>& zvec,
                          std::uint32_t q_new, std::uint32_t config) {
    double prob = 1.0;
    for (std::size_t j = 0; j < zvec.size(); ++j) {
        const double in_p = model.p(zvec[j], q_new);   // subpattern vertex -> new vertex
        const double out_p = model.p(q_new, zvec[j]);  // new vertex -> subpattern vertex
        prob *= ((config >> (2 * j)) & 1u) ? in_p : 1.0 - in_p;
        prob *= ((config >> (2 * j + 1)) & 1u) ? out_p : 1.0 - out_p;
    }
    if (model.allow_loops) {
        const double lp = model.p(q_new, q_new);
        prob *= ((config >> (2 * zvec.size())) & 1u) ? lp : 1.0 - lp;
    }
    return prob;
}

double extension_prob(const BlockModel& model, const DeletionClass& dc,
                      const std::vector<std::uint32_t>& zvec, std::uint32_t q_new) {
    if (zvec.size() != std::size_t(dc.subpattern.k()))
        throw Error("extension_prob: embedding size does not match subpattern");
    double total = 0.0;
    for (auto config : dc.extension_configs)
        total += config_probability(model, zvec, q_new, config);
    return total;
}

std::pair<double, double> lambda_pair(const BlockModel& model, const DeletionClass& dc,
                                      const std::vector<std::uint32_t>& zvec,
                                      const std::vector<std::uint32_t>& avail) {
    double lambda = 0, lambda2 = 0;
    for (std::uint32_t q_new = 0; q_new < model.q; ++q_new) {
        if (avail[q_new] == 0) continue;
        const double p = extension_prob(model, dc, zvec, q_new);
        lambda += double(avail[q_new]) * p;
        lambda2 += double(avail[q_new]) * p * p;
    }
    return {lambda, lambda2};
}

ExpectedCount expected_count(const BlockModel& model, const Pattern& pattern) {
    const int k = pattern.k();
    if (k > int(model.n)) return {};
    if (!model.allow_loops)
        for (int i = 0; i < k; ++i)
            if (pattern.edge(i, i)) return {};  // loop pattern impossible in loop-free model

    const auto counts = model.class_counts();
    const std::uint32_t q = model.q;

    // Lookup tables so the inner loop is pure adds.
    std::vector<double> log_p(std::size_t(q) * q), log_np(std::size_t(q) * q);
    for (std::size_t i = 0; i < log_p.size(); ++i) {
        log_p[i] = model.pi[i] > 0 ? std::log(model.pi[i]) : kNegInf;
        log_np[i] = model.pi[i] < 1 ? std::log1p(-model.pi[i]) : kNegInf;
    }
    // log falling factorial (n_q)_(c) for c = 0..k
    std::vector<std::array<double, kMaxPatternSize + 1>> log_fall(q);
    for (std::uint32_t c = 0; c < q; ++c) {
        log_fall[c][0] = 0;
        for (int t = 1; t <= k; ++t)
            log_fall[c][t] = (t <= int(counts[c]))
                                 ? log_fall[c][t - 1] + std::log(double(counts[c]) - (t - 1))
                                 : kNegInf;
    }

    LogSumExp lse;
    std::vector<std::uint32_t> sigma(k, 0);
    while (true) {
        double log_term = 0;
        bool alive = true;
        for (int i = 0; i < k && alive; ++i) {
            for (int j = 0; j < k; ++j) {
                if (i == j && !model.allow_loops) continue;
                const std::size_t cell = sigma[i] * q + sigma[j];
                const double f = pattern.edge(i, j) ? log_p[cell] : log_np[cell];
                if (f == kNegInf) {
                    alive = false;
                    break;
                }
                log_term += f;
            }
        }
        if (alive) {
            // multiplicity of each distinct class in sigma -> falling factorials
            std::array<std::uint32_t, kMaxPatternSize> cls{};
            std::array<std::uint8_t, kMaxPatternSize> cnt{};
            int ndistinct = 0;
            for (int i = 0; i < k; ++i) {
                int found = -1;
                for (int d = 0; d < ndistinct; ++d)
                    if (cls[d] == sigma[i]) found = d;
                if (found < 0) {
                    cls[ndistinct] = sigma[i];
                    cnt[ndistinct] = 1;
                    ++ndistinct;
                } else {
                    ++cnt[found];
                }
            }
            double log_f = 0;
            for (int d = 0; d < ndistinct && log_f != kNegInf; ++d)
                log_f += log_fall[cls[d]][cnt[d]];
            if (log_f != kNegInf) lse.add(log_term + log_f);
        }
        // odometer
        int pos = k - 1;
        while (pos >= 0 && sigma[pos] + 1 == q) sigma[pos--] = 0;
        if (pos < 0) break;
        ++sigma[pos];
    }

    const double log_aut = std::log(double(pattern.automorphisms().size()));
    ExpectedCount res;
    res.log_value = lse.empty() ? kNegInf : lse.value() - log_aut;
    res.value = res.log_value == kNegInf ? 0.0 : std::exp(res.log_value);
    return res;
}

namespace {

double copy_probability(const BlockModel& model, const std::vector<VertexId>& verts, int k,
                        std::uint64_t copy_bits) {
    double prob = 1.0;
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            if (i == j && !model.allow_loops) continue;
            const double p = model.p(model.z[verts[i]], model.z[verts[j]]);
            prob *= ((copy_bits >> (i * k + j)) & 1u) ? p : 1.0 - p;
        }
    return prob;
}

double copies_probability(const BlockModel& model, const std::vector<VertexId>& verts,
                          const Pattern& pattern, const std::vector<std::uint8_t>* slot_class) {
    const int k = pattern.k();
    if (int(verts.size()) != k) throw Error("copy probability: vertex count != pattern size");
    if (!model.allow_loops)
        for (int i = 0; i < k; ++i)
            if (pattern.edge(i, i)) return 0.0;

    Perm asg{};
    std::iota(asg.begin(), asg.begin() + k, std::uint8_t{0});
    std::set<std::uint64_t> copies;
    do {
        if (slot_class) {
            bool ok = true;
            for (int s = 0; s < k && ok; ++s)
                if ((*slot_class)[s] != (*slot_class)[asg[s]]) ok = false;
            if (!ok) continue;
        }
        std::uint64_t bits = 0;
        for (int a = 0; a < k; ++a)
            for (int b = 0; b < k; ++b)
                if ((a != b || model.allow_loops) && pattern.edge(a, b))
                    bits |= std::uint64_t{1} << (asg[a] * k + asg[b]);
        copies.insert(bits);
    } while (std::next_permutation(asg.begin(), asg.begin() + k));

    double total = 0;
    for (auto bits : copies) total += copy_probability(model, verts, k, bits);
    return total;
}

}  // namespace

double set_probability(const BlockModel& model, const std::vector<VertexId>& verts,
                       const Pattern& pattern) {
    return copies_probability(model, verts, pattern, nullptr);
}

double position_probability(const BlockModel& model, const std::vector<VertexId>& verts,
                            const Pattern& pattern) {
    const auto classes = deletion_classes(pattern);
    std::vector<std::uint8_t> slot_class(pattern.k(), 0);
    for (std::size_t ci = 0; ci < classes.size(); ++ci)
        for (auto m : classes[ci].members) slot_class[m] = static_cast<std::uint8_t>(ci);
    return copies_probability(model, verts, pattern, &slot_class);
}

}  // namespace lmotif
