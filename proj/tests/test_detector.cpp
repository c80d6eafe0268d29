#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "json.hpp"
#include "lmotif/detector.hpp"
#include "lmotif/simulate.hpp"

using namespace lmotif;

namespace {

BlockModel er(std::uint32_t n, double p) {
    return BlockModel{n, 1, std::vector<std::uint32_t>(n, 0), {p}, false};
}

DirectedGraph coregulation_graph(std::uint32_t targets) {
    std::vector<Edge> edges;
    for (std::uint32_t t = 0; t < targets; ++t) {
        edges.emplace_back(0, 2 + t);
        edges.emplace_back(1, 2 + t);
    }
    return DirectedGraph(2 + targets, std::move(edges));
}

std::uint32_t class_with_config(const PatternInfo& info, std::uint32_t config) {
    for (std::size_t ci = 0; ci < info.classes.size(); ++ci)
        for (auto c : info.classes[ci].extension_configs)
            if (c == config) return std::uint32_t(ci);
    REQUIRE(false);
    return 0;
}

// class of the literal's vertex `v` inside the canonical form
std::uint32_t class_of_literal_vertex(PatternCatalog& catalog, const Pattern& literal, int v) {
    const auto& cls = catalog.classify(literal.k(), literal.bits());
    return catalog.info(cls.code).class_of_vertex[cls.to_canonical[v]];
}

const MotifResult* find_result(const std::vector<MotifResult>& results, const PatternCode& code,
                               std::uint32_t class_index) {
    for (const auto& r : results)
        if (r.code == code && r.class_index == class_index) return &r;
    return nullptr;
}

}  // namespace

TEST_CASE("redundancy witness: pendant regulator is covered by the declared loop") {
    PatternCatalog catalog;
    const auto& ffl = catalog.info_for(Pattern::parse("3;0->1,0->2,1->2"));
    const auto ffl_code = ffl.canonical.canonical_code();
    const auto ffl_sink = class_with_config(ffl, 0b0101u);
    const std::set<MotifKey> declared{{ffl_code, ffl_sink}};

    // a=0 closes a feed-forward loop c->d->a, c->a; b=1 regulates only d
    const auto left = Pattern::parse("4;2->3,2->0,3->0,1->3");
    const auto& lcls = catalog.classify(4, left.bits());
    const auto& linfo = catalog.info(lcls.code);
    const auto a_class = linfo.class_of_vertex[lcls.to_canonical[0]];

    std::vector<Witness> all;
    const auto w = find_redundancy_witness(linfo.canonical, a_class, declared, catalog, &all);
    REQUIRE(w.has_value());
    CHECK(w->removed == std::vector<std::uint8_t>{lcls.to_canonical[1]});
    CHECK(w->smaller_code == ffl_code);
    CHECK(w->smaller_class == ffl_sink);
    CHECK(w->smaller_literal == ffl.canonical.literal());
    CHECK(all.size() == 1);

    // the extra edge b->a makes every candidate set touch a's neighborhood
    const auto right = Pattern::parse("4;2->3,2->0,3->0,1->3,1->0");
    const auto& rcls = catalog.classify(4, right.bits());
    const auto& rinfo = catalog.info(rcls.code);
    const auto ra_class = rinfo.class_of_vertex[rcls.to_canonical[0]];
    CHECK_FALSE(find_redundancy_witness(rinfo.canonical, ra_class, declared, catalog).has_value());
}

TEST_CASE("redundancy witness requires the declared class to match") {
    PatternCatalog catalog;
    const auto& ffl = catalog.info_for(Pattern::parse("3;0->1,0->2,1->2"));
    const auto ffl_code = ffl.canonical.canonical_code();
    const auto ffl_sink = class_with_config(ffl, 0b0101u);

    const auto left = Pattern::parse("4;2->3,2->0,3->0,1->3");
    const auto& lcls = catalog.classify(4, left.bits());
    const auto& linfo = catalog.info(lcls.code);
    const auto a_class = linfo.class_of_vertex[lcls.to_canonical[0]];

    for (std::uint32_t other = 0; other < ffl.classes.size(); ++other) {
        if (other == ffl_sink) continue;
        const std::set<MotifKey> declared{{ffl_code, other}};
        CHECK_FALSE(
            find_redundancy_witness(linfo.canonical, a_class, declared, catalog).has_value());
    }
    CHECK_FALSE(find_redundancy_witness(linfo.canonical, a_class, {}, catalog).has_value());
}

TEST_CASE("three-cycle graph under its own density: a single weak candidate") {
    const DirectedGraph g(3, {{0, 1}, {1, 2}, {2, 0}});
    const auto model = erdos_renyi_model(g);
    REQUIRE(model.p(0, 0) == doctest::Approx(0.5));

    DetectOptions opts;
    opts.k_max = 3;
    const auto results = detect(g, model, opts);
    REQUIRE(results.size() == 1);
    const auto& r = results[0];
    PatternCatalog catalog;
    CHECK(r.code == catalog.info_for(Pattern::parse("3;0->1,1->2,2->0")).canonical.canonical_code());
    CHECK(r.occurrence_count == 1);
    CHECK(r.position_count == 3);
    CHECK(r.n_u_star == 1);
    CHECK(r.class_members.size() == 3);
    CHECK(r.expected_sub == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(r.s_star == doctest::Approx(2.6204958628199314).epsilon(1e-12));
    CHECK(r.p_bound == doctest::Approx(0.109150157315216).epsilon(1e-12));
    CHECK(r.log10_p == doctest::Approx(-0.9619756340173157).epsilon(1e-12));
    CHECK(r.status == MotifStatus::NotSignificant);
    CHECK(r.rho == doctest::Approx(0.5));
    CHECK_FALSE(r.witness.has_value());
    REQUIRE(r.tv_bound.has_value());
    CHECK(*r.tv_bound == doctest::Approx(0.0625 * 0.0625).epsilon(1e-12));
    CHECK_FALSE(r.prop1_ratio.has_value());  // delta = 15 is outside the ratio window
    CHECK(r.top_themes.size() == 3);
    for (const auto& t : r.top_themes) {
        CHECK(t.stats.lambda == doctest::Approx(0.0625).epsilon(1e-12));
        CHECK(t.stats.n_u == 1);
    }
}

TEST_CASE("planted co-regulation: motif declared, bi-fan filtered against it") {
    const auto g = coregulation_graph(12);  // n = 14
    const auto model = er(14, 0.05);
    PatternCatalog catalog;
    const auto& coreg = catalog.info_for(Pattern::parse("3;0->2,1->2"));
    const auto coreg_code = coreg.canonical.canonical_code();
    const auto coreg_sink = class_with_config(coreg, 0b0101u);
    const auto bifan = Pattern::parse("4;0->2,0->3,1->2,1->3");
    const auto bifan_code = bifan.canonical_code();
    const auto bifan_sink = class_of_literal_vertex(catalog, bifan, 2);

    DetectOptions opts;
    opts.k_max = 4;
    const auto results = detect(g, model, opts);

    const auto* motif = find_result(results, coreg_code, coreg_sink);
    REQUIRE(motif != nullptr);
    CHECK(motif->status == MotifStatus::Motif);
    CHECK(motif->occurrence_count == 12);
    CHECK(motif->position_count == 1);
    CHECK(motif->n_u_star == 12);
    CHECK_FALSE(motif->witness.has_value());

    const auto* covered = find_result(results, bifan_code, bifan_sink);
    REQUIRE(covered != nullptr);
    CHECK(covered->status == MotifStatus::Filtered);
    CHECK(covered->occurrence_count == 66);  // C(12,2) target pairs
    REQUIRE(covered->witness.has_value());
    CHECK(covered->witness->removed.size() == 1);
    CHECK(covered->witness->smaller_code == coreg_code);
    CHECK(covered->witness->smaller_class == coreg_sink);

    for (const auto& r : results)
        CHECK(r.status != MotifStatus::Potential);  // transitional only
}

TEST_CASE("a null-model replicate produces no declarations") {
    const auto model = er(40, 0.08);
    auto eng = replicate_engine(2024, 0);
    const auto g = generate(model, eng);
    DetectOptions opts;
    opts.k_max = 3;
    const auto results = detect(g, model, opts);
    CHECK(!results.empty());
    for (const auto& r : results) {
        CHECK(r.status == MotifStatus::NotSignificant);
        CHECK(r.p_bound > opts.alpha);
    }
}

TEST_CASE("detection is invariant under vertex relabeling") {
    const auto model = er(16, 0.25);
    auto eng = replicate_engine(99, 3);
    const auto g = generate(model, eng);

    std::vector<VertexId> perm(16);
    for (VertexId v = 0; v < 16; ++v) perm[v] = 15 - v;
    std::vector<Edge> mapped;
    for (auto [u, v] : g.edges()) mapped.emplace_back(perm[u], perm[v]);
    const DirectedGraph h(16, std::move(mapped));

    DetectOptions opts;
    opts.k_max = 4;
    const auto ra = detect(g, model, opts);
    const auto rb = detect(h, model, opts);
    REQUIRE(ra.size() == rb.size());

    using Key = std::pair<PatternCode, std::uint32_t>;
    std::map<Key, const MotifResult*> bm;
    for (const auto& r : rb) bm[{r.code, r.class_index}] = &r;
    for (const auto& r : ra) {
        auto it = bm.find({r.code, r.class_index});
        REQUIRE(it != bm.end());
        const auto& o = *it->second;
        CHECK(r.occurrence_count == o.occurrence_count);
        CHECK(r.position_count == o.position_count);
        CHECK(r.n_u_star == o.n_u_star);
        CHECK(r.status == o.status);
        CHECK(r.s_star == doctest::Approx(o.s_star).epsilon(1e-12));
        CHECK(r.p_bound == doctest::Approx(o.p_bound).epsilon(1e-12));
    }
}

TEST_CASE("results rank by p-value then score") {
    const auto g = coregulation_graph(12);
    const auto model = er(14, 0.05);
    DetectOptions opts;
    opts.k_max = 4;
    auto results = detect(g, model, opts);
    rank_results(results);
    for (std::size_t i = 1; i < results.size(); ++i) {
        CHECK(results[i - 1].log10_p <= results[i].log10_p + 1e-15);
        if (results[i - 1].log10_p == results[i].log10_p)
            CHECK(results[i - 1].s_star >= results[i].s_star);
    }
}

TEST_CASE("table rendering names the winner and the coverage note") {
    const auto g = coregulation_graph(12);
    const auto model = er(14, 0.05);
    DetectOptions opts;
    opts.k_max = 4;
    auto results = detect(g, model, opts);
    rank_results(results);
    const auto table = render_table(results, g);
    CHECK(table.find("motif") != std::string::npos);
    CHECK(table.find("filtered") != std::string::npos);
    CHECK(table.find("covered by") != std::string::npos);
    CHECK(table.find("p-bound") != std::string::npos);
}

TEST_CASE("record stream round-trips through json") {
    const auto g = coregulation_graph(12);
    const auto model = er(14, 0.05);
    DetectOptions opts;
    opts.k_max = 4;
    opts.diagnostics = true;
    auto results = detect(g, model, opts);
    rank_results(results);

    std::ostringstream out;
    write_records(out, results, g);
    std::istringstream in(out.str());
    std::string line;
    std::size_t rows = 0, motifs = 0, filtered = 0;
    while (std::getline(in, line)) {
        REQUIRE_FALSE(line.empty());
        const auto j = nlohmann::json::parse(line);
        for (const char* key :
             {"pattern", "code", "k", "class", "occurrences", "positions", "s_star", "p_bound",
              "status", "subpattern", "expected_subpattern"})
            REQUIRE(j.contains(key));
        const std::string status = j["status"];
        if (status == "motif") ++motifs;
        if (status == "filtered") {
            ++filtered;
            REQUIRE(j.contains("witness"));
            CHECK(j["witness"].contains("removed"));
            CHECK(j["witness"].contains("pattern"));
        }
        CHECK(status != "potential");
        ++rows;
    }
    CHECK(rows == results.size());
    CHECK(motifs >= 1);
    CHECK(filtered >= 1);
}

TEST_CASE("p-value formatting") {
    CHECK(format_pvalue(-400.0) == "< 1e-300");
    CHECK(format_pvalue(0.0) == "1");
    const auto two = format_pvalue(-2.0);
    CHECK(two.find("0.01") != std::string::npos);
}

TEST_CASE("detect validates its inputs") {
    const DirectedGraph g(3, {{0, 1}, {1, 2}, {2, 0}});
    DetectOptions opts;
    opts.k_max = 2;
    CHECK_THROWS_AS(detect(g, er(3, 0.5), opts), Error);
    opts.k_max = 9;
    CHECK_THROWS_AS(detect(g, er(3, 0.5), opts), Error);
    opts.k_max = 3;
    opts.alpha = 0.0;
    CHECK_THROWS_AS(detect(g, er(3, 0.5), opts), Error);
    opts.alpha = 1e-3;
    CHECK_THROWS_AS(detect(g, er(4, 0.5), opts), Error);  // model size mismatch
}
