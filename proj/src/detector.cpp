#include "lmotif/detector.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "lmotif/bounds.hpp"

namespace lmotif {

namespace {

// Induced adjacency bits of the pattern on a sorted subset of its vertices.
std::uint64_t restrict_bits(const Pattern& p, const std::vector<std::uint8_t>& keep) {
    const int m = int(keep.size());
    std::uint64_t bits = 0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (p.edge(keep[i], keep[j]))
                bits |= std::uint64_t(1) << ((m - 1 - i) * m + (m - 1 - j));
    return bits;
}

std::string index_set(const std::vector<std::uint8_t>& members) {
    std::string s = "{";
    for (std::size_t i = 0; i < members.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(int(members[i]));
    }
    return s + "}";
}

std::string fmt(double v, int precision = 4) {
    std::ostringstream os;
    os << std::setprecision(precision) << v;
    return os.str();
}

}  // namespace

const char* to_string(MotifStatus status) {
    switch (status) {
        case MotifStatus::NotSignificant: return "not-significant";
        case MotifStatus::Potential: return "potential";
        case MotifStatus::Motif: return "motif";
        case MotifStatus::Filtered: return "filtered";
    }
    return "?";
}

std::optional<Witness> find_redundancy_witness(const Pattern& canonical_pattern,
                                               std::uint32_t class_index,
                                               const std::set<MotifKey>& declared,
                                               PatternCatalog& catalog,
                                               std::vector<Witness>* all) {
    if (declared.empty()) return std::nullopt;
    const int k = canonical_pattern.k();
    const auto& info = catalog.info_for(canonical_pattern);
    if (class_index >= info.classes.size())
        throw Error("redundancy witness: class index out of range");
    const std::uint8_t a = info.classes[class_index].representative;

    std::vector<std::uint8_t> others;
    others.reserve(k - 1);
    for (int v = 0; v < k; ++v)
        if (v != int(a)) others.push_back(std::uint8_t(v));

    std::optional<Witness> first;
    // Subsets of the non-representative vertices in ascending bitmask order,
    // so the reported witness is deterministic.
    for (std::uint32_t mask = 1; mask < (1u << others.size()); ++mask) {
        if (k - std::popcount(mask) < 3) continue;
        bool touches_rep = false;
        std::vector<std::uint8_t> removed;
        for (std::size_t j = 0; j < others.size(); ++j) {
            if (!(mask >> j & 1u)) continue;
            const std::uint8_t v = others[j];
            if (canonical_pattern.edge(a, v) || canonical_pattern.edge(v, a)) {
                touches_rep = true;
                break;
            }
            removed.push_back(v);
        }
        if (touches_rep) continue;

        std::vector<std::uint8_t> keep;
        keep.reserve(k - removed.size());
        int rep_slot = -1;
        std::size_t r = 0;
        for (int v = 0; v < k; ++v) {
            if (r < removed.size() && removed[r] == std::uint8_t(v)) {
                ++r;
                continue;
            }
            if (v == int(a)) rep_slot = int(keep.size());
            keep.push_back(std::uint8_t(v));
        }

        const std::uint64_t bits = restrict_bits(canonical_pattern, keep);
        if (!Pattern::from_bits(int(keep.size()), bits, canonical_pattern.allow_loops())
                 .connected())
            continue;  // declared motifs are connected, so this cannot match
        const Classified& cls = catalog.classify(int(keep.size()), bits);
        const PatternInfo& sub_info = catalog.info(cls.code);
        const std::uint32_t sub_class = sub_info.class_of_vertex[cls.to_canonical[rep_slot]];
        if (!declared.count({cls.code, sub_class})) continue;

        Witness w;
        w.removed = removed;
        w.smaller_code = cls.code;
        w.smaller_class = sub_class;
        w.smaller_literal = sub_info.canonical.literal();
        if (all) all->push_back(w);
        if (!first) {
            first = std::move(w);
            if (!all) return first;
        }
    }
    return first;
}

std::vector<MotifResult> detect(const DirectedGraph& g, const BlockModel& model,
                                const DetectOptions& opts) {
    model.validate();
    if (model.n != g.vertex_count()) throw Error("detect: model size does not match the graph");
    if (model.allow_loops != g.loops_allowed())
        throw Error("detect: model and graph disagree on loop handling");
    if (opts.k_max < 3 || opts.k_max > kMaxPatternSize)
        throw Error("detect: maximum pattern size must lie in [3, 8]");
    if (!(opts.alpha > 0 && opts.alpha <= 1)) throw Error("detect: alpha must lie in (0, 1]");

    PatternCatalog catalog(model.allow_loops);
    std::set<MotifKey> declared;
    std::vector<MotifResult> results;
    std::map<PatternCode, ExpectedCount> expected_memo;
    const double rho = model.max_p();

    CensusOptions copts;
    copts.threads = opts.threads;
    if (opts.threads <= 1) copts.catalog = &catalog;

    // Census of the previous size: source of zero-extension theme records
    // (diagnostics only, and only for connected subpatterns).
    CensusMap prev_census;
    if (opts.diagnostics) prev_census = enumerate_subgraphs(g, 2, copts);

    for (int k = 3; k <= opts.k_max; ++k) {
        CensusMap census = enumerate_subgraphs(g, k, copts);
        if (opts.log) {
            std::size_t total = 0;
            for (const auto& [code, occ] : census) total += occ.size();
            opts.log("size " + std::to_string(k) + ": " + std::to_string(total) +
                     " occurrences across " + std::to_string(census.size()) + " patterns");
        }

        std::vector<MotifResult> batch;
        for (const auto& [code, occurrences] : census) {
            const PatternInfo& info = catalog.info(code);
            for (std::size_t ci = 0; ci < info.classes.size(); ++ci) {
                const DeletionClass& dc = info.classes[ci];

                MotifResult r;
                r.code = code;
                r.pattern_literal = info.canonical.literal();
                r.class_index = std::uint32_t(ci);
                r.class_members = dc.members;
                r.representative = dc.representative;
                r.subpattern_code = dc.subpattern_code;
                r.subpattern_literal = dc.subpattern.literal();
                r.occurrence_count = occurrences.size();
                r.rho = rho;

                auto [e_it, fresh] = expected_memo.try_emplace(dc.subpattern_code);
                if (fresh) e_it->second = expected_count(model, dc.subpattern);
                r.expected_sub = e_it->second.value;
                r.expected_sub_log = e_it->second.log_value;

                ThemeOptions topts;
                topts.catalog = &catalog;
                if (opts.diagnostics && dc.subpattern.connected()) {
                    auto it = prev_census.find(dc.subpattern_code);
                    if (it != prev_census.end()) topts.subpattern_occurrences = &it->second;
                }
                const auto records = theme_orders(g, model, info, ci, occurrences, topts);

                const ThemeRecord* best = nullptr;
                for (const auto& rec : records) {
                    if (rec.misfit) ++r.misfit_positions;
                    if (rec.stats.n_u > 0) ++r.position_count;
                    if (!best || rec.score > best->score ||
                        (rec.score == best->score && rec.stats.n_u > best->stats.n_u))
                        best = &rec;
                }
                r.s_star = best ? best->score : 0.0;
                r.n_u_star = best ? best->stats.n_u : 0;
                if (best && r.s_star > 0 && best->stats.lambda > 0) {
                    r.tv_bound =
                        bounds::tv_distance_bound(best->stats.lambda, best->stats.lambda2);
                    r.prop1_ratio = bounds::lower_bound_ratio(
                        best->stats.lambda, best->stats.lambda2, best->stats.delta);
                }

                const double lp = r.expected_sub_log - r.s_star;
                r.p_bound = lp >= 0 ? 1.0 : std::exp(lp);
                r.log10_p = bounds::global_pvalue_log10(r.expected_sub_log, r.s_star);
                r.status = r.p_bound <= opts.alpha ? MotifStatus::Potential
                                                   : MotifStatus::NotSignificant;

                if (opts.theme_cap > 0 && !records.empty()) {
                    std::vector<const ThemeRecord*> order;
                    order.reserve(records.size());
                    for (const auto& rec : records) order.push_back(&rec);
                    std::stable_sort(order.begin(), order.end(),
                                     [](const ThemeRecord* x, const ThemeRecord* y) {
                                         if (x->score != y->score) return x->score > y->score;
                                         return x->stats.n_u > y->stats.n_u;
                                     });
                    const std::size_t take = std::min(opts.theme_cap, order.size());
                    r.top_themes.reserve(take);
                    for (std::size_t i = 0; i < take; ++i)
                        r.top_themes.push_back({order[i]->position, order[i]->stats,
                                                order[i]->score, order[i]->misfit});
                }
                batch.push_back(std::move(r));
            }
        }

        // Filter against smaller declared motifs; size-k motifs only enter
        // `declared` once the whole size has been processed.
        for (auto& r : batch) {
            if (r.status != MotifStatus::Potential) continue;
            std::vector<Witness> all;
            auto w = find_redundancy_witness(catalog.info(r.code).canonical, r.class_index,
                                             declared, catalog,
                                             opts.collect_all_witnesses ? &all : nullptr);
            if (w) {
                r.status = MotifStatus::Filtered;
                r.witness = std::move(w);
                r.witnesses_all = std::move(all);
            } else {
                r.status = MotifStatus::Motif;
            }
        }
        for (const auto& r : batch)
            if (r.status == MotifStatus::Motif) declared.insert({r.code, r.class_index});
        std::move(batch.begin(), batch.end(), std::back_inserter(results));

        if (opts.diagnostics && k < opts.k_max) prev_census = std::move(census);
    }

    rank_results(results);
    return results;
}

void rank_results(std::vector<MotifResult>& results) {
    std::sort(results.begin(), results.end(), [](const MotifResult& x, const MotifResult& y) {
        if (x.log10_p != y.log10_p) return x.log10_p < y.log10_p;
        if (x.s_star != y.s_star) return x.s_star > y.s_star;
        if (x.code != y.code) return x.code < y.code;
        return x.class_index < y.class_index;
    });
}

std::string format_pvalue(double log10_p) {
    if (log10_p < -300) return "< 1e-300";
    return fmt(std::pow(10.0, log10_p), 3);
}

std::string render_table(const std::vector<MotifResult>& results, const DirectedGraph& g) {
    (void)g;
    struct Col {
        std::string header;
        std::vector<std::string> cells;
        bool left;
    };
    std::vector<Col> cols = {
        {"#", {}, false},      {"pattern", {}, true}, {"class", {}, false},
        {"occ", {}, false},    {"N*", {}, false},     {"E[sub]", {}, false},
        {"s*", {}, false},     {"p-bound", {}, false}, {"status", {}, true},
        {"note", {}, true},
    };
    std::size_t rank = 0;
    for (const auto& r : results) {
        ++rank;
        cols[0].cells.push_back(std::to_string(rank));
        cols[1].cells.push_back(r.pattern_literal);
        cols[2].cells.push_back(index_set(r.class_members));
        cols[3].cells.push_back(std::to_string(r.occurrence_count));
        cols[4].cells.push_back(std::to_string(r.n_u_star));
        cols[5].cells.push_back(fmt(r.expected_sub));
        cols[6].cells.push_back(fmt(r.s_star));
        cols[7].cells.push_back(format_pvalue(r.log10_p));
        cols[8].cells.push_back(to_string(r.status));
        std::string note;
        if (r.witness) {
            note = "covered by " + r.witness->smaller_literal + " class " +
                   std::to_string(r.witness->smaller_class) + " (drop " +
                   index_set(r.witness->removed) + ")";
        } else if (r.misfit_positions > 0) {
            note = std::to_string(r.misfit_positions) + " position(s) impossible under null";
        }
        cols[9].cells.push_back(note);
    }

    std::ostringstream os;
    std::vector<std::size_t> width(cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c) {
        width[c] = cols[c].header.size();
        for (const auto& cell : cols[c].cells) width[c] = std::max(width[c], cell.size());
    }
    auto emit_row = [&](const std::function<const std::string&(std::size_t)>& cell) {
        std::ostringstream row;
        for (std::size_t c = 0; c < cols.size(); ++c) {
            if (c) row << "  ";
            row << (cols[c].left ? std::left : std::right) << std::setw(int(width[c])) << cell(c);
        }
        std::string line = row.str();
        while (!line.empty() && line.back() == ' ') line.pop_back();
        os << line << '\n';
    };
    emit_row([&](std::size_t c) -> const std::string& { return cols[c].header; });
    for (std::size_t i = 0; i < results.size(); ++i)
        emit_row([&](std::size_t c) -> const std::string& { return cols[c].cells[i]; });
    return os.str();
}

void write_records(std::ostream& out, const std::vector<MotifResult>& results,
                   const DirectedGraph& g) {
    using nlohmann::json;
    for (const auto& r : results) {
        json j;
        j["pattern"] = r.pattern_literal;
        j["code"] = r.code.to_string();
        j["k"] = int(r.code.k);
        j["class"] = r.class_index;
        j["class_members"] = r.class_members;
        j["representative"] = int(r.representative);
        j["subpattern"] = r.subpattern_literal;
        j["occurrences"] = r.occurrence_count;
        j["positions"] = r.position_count;
        j["expected_subpattern"] = r.expected_sub;
        j["s_star"] = r.s_star;  // non-finite values serialize as null
        j["n_u_star"] = r.n_u_star;
        j["p_bound"] = r.p_bound;
        j["p_display"] = format_pvalue(r.log10_p);
        j["log10_p"] = r.log10_p;
        j["status"] = to_string(r.status);
        j["misfit_positions"] = r.misfit_positions;
        j["rho"] = r.rho;
        if (r.tv_bound) j["tv_bound"] = *r.tv_bound;
        if (r.prop1_ratio) j["tightness_ratio_lower"] = *r.prop1_ratio;
        if (r.witness) {
            json w;
            w["removed"] = r.witness->removed;
            w["pattern"] = r.witness->smaller_literal;
            w["class"] = r.witness->smaller_class;
            j["witness"] = w;
        }
        if (!r.top_themes.empty()) {
            json themes = json::array();
            for (const auto& t : r.top_themes) {
                json tj;
                json sets = json::array();
                for (const auto& set : t.position.sets) {
                    json labels = json::array();
                    for (VertexId v : set) labels.push_back(g.label(v));
                    sets.push_back(std::move(labels));
                }
                tj["position"] = std::move(sets);
                tj["order"] = t.stats.n_u;
                tj["lambda"] = t.stats.lambda;
                tj["lambda2"] = t.stats.lambda2;
                tj["delta"] = t.stats.delta;
                tj["score"] = t.score;
                tj["misfit"] = t.misfit;
                themes.push_back(std::move(tj));
            }
            j["themes"] = std::move(themes);
        }
        out << j.dump() << '\n';
    }
}

}  // namespace lmotif
