// localmotif: detect local network motifs in directed graphs against
// blockmodel-style null models, run census/inspection utilities, and drive
// Monte Carlo tail studies.
//
//   localmotif detect --edges net.tsv --null er --k-max 3
//   localmotif census --edges net.tsv --k 4
//   localmotif simulate --preset reference --pattern ffl --replicates 50000
//   localmotif inspect-pattern "3;0->1,0->2,1->2"
//
// Exit codes: 0 success, 1 domain/input error, 2 usage error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "lmotif/block_model.hpp"
#include "lmotif/census.hpp"
#include "lmotif/detector.hpp"
#include "lmotif/graph.hpp"
#include "lmotif/io.hpp"
#include "lmotif/pattern.hpp"
#include "lmotif/simulate.hpp"

namespace {

unsigned default_threads() {
    if (const char* env = std::getenv("LOCALMOTIF_THREADS")) {
        try {
            const unsigned long v = std::stoul(env);
            if (v >= 1 && v <= 1024) return unsigned(v);
        } catch (const std::exception&) {
        }
        std::cerr << "warning: ignoring invalid LOCALMOTIF_THREADS='" << env << "'\n";
    }
    return 1;
}

std::string resolve_alias(const std::string& name) {
    if (name == "ffl") return "3;0->1,0->2,1->2";
    if (name == "bifan") return "4;0->2,0->3,1->2,1->3";
    if (name == "3cycle") return "3;0->1,1->2,2->0";
    return name;
}

// Writes to --out when given, else stdout.
class Output {
  public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw lmotif::Error("cannot write '" + path + "'");
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

  private:
    std::ofstream file_;
};

void print_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

lmotif::BlockModel preset_model(const std::string& name) {
    auto block_partition = [](std::uint32_t n, std::uint32_t q) {
        std::vector<std::uint32_t> z(n);
        const std::uint32_t per = n / q;
        for (std::uint32_t v = 0; v < n; ++v) z[v] = std::min(v / per, q - 1);
        return z;
    };
    auto two_level_pi = [](std::uint32_t q, double within, double between) {
        std::vector<double> pi(std::size_t(q) * q, between);
        for (std::uint32_t c = 0; c < q; ++c) pi[std::size_t(c) * q + c] = within;
        return pi;
    };
    lmotif::BlockModel m;
    m.q = 3;
    if (name == "reference") {
        m.n = 90;
        m.pi = two_level_pi(3, 0.04, 0.01);
    } else if (name == "dense") {
        m.n = 90;
        m.pi = two_level_pi(3, 0.20, 0.05);
    } else if (name == "large") {
        m.n = 360;
        m.pi = two_level_pi(3, 0.01, 0.0025);
    } else {
        throw lmotif::Error("unknown preset '" + name + "' (reference, dense, large)");
    }
    m.z = block_partition(m.n, m.q);
    return m;
}

// Default study class: the deletion class of the canonical vertex with the
// largest in-degree (the "target" end of regulatory patterns), smallest class
// index on ties.
std::size_t default_class_index(const lmotif::PatternInfo& info) {
    const auto& p = info.canonical;
    int best_deg = -1;
    std::size_t best_class = 0;
    for (int v = 0; v < p.k(); ++v) {
        int deg = 0;
        for (int u = 0; u < p.k(); ++u)
            if (u != v && p.edge(u, v)) ++deg;
        if (deg > best_deg) {
            best_deg = deg;
            best_class = info.class_of_vertex[v];
        }
    }
    return best_class;
}

std::string render_extension_config(std::uint32_t config, int subpattern_size, bool loops) {
    std::string s = "{";
    bool any = false;
    for (int j = 0; j < subpattern_size; ++j) {
        if (config >> (2 * j) & 1u) {
            if (any) s += ',';
            s += std::to_string(j) + "->*";
            any = true;
        }
        if (config >> (2 * j + 1) & 1u) {
            if (any) s += ',';
            s += "*->" + std::to_string(j);
            any = true;
        }
    }
    if (loops && (config >> (2 * subpattern_size) & 1u)) {
        if (any) s += ',';
        s += "*->*";
    }
    return s + "}";
}

struct CommonArgs {
    std::string out_path;
    unsigned threads = default_threads();
    bool allow_loops = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--out", args.out_path, "Write output to this path instead of stdout");
    cmd->add_option("--threads", args.threads, "Worker thread count")
        ->check(CLI::Range(1u, 1024u))
        ->capture_default_str();
    cmd->add_flag("--allow-loops", args.allow_loops, "Keep self-loops instead of skipping them");
}

int run_detect(const CommonArgs& common, const std::string& edges_path,
               const std::string& null_kind, const std::string& classes_path,
               const std::string& model_path, int k_max, double alpha, bool diagnostics,
               std::size_t theme_cap, bool all_witnesses, bool full,
               const std::string& format) {
    auto parsed = lmotif::load_edge_list(edges_path, common.allow_loops);
    print_warnings(parsed.warnings);
    lmotif::DirectedGraph graph = std::move(parsed.graph);

    lmotif::BlockModel model;
    if (null_kind == "er") {
        model = lmotif::erdos_renyi_model(graph);
    } else if (null_kind == "expected-degree") {
        model = lmotif::expected_degree_model(graph);
    } else if (null_kind == "blockmodel") {
        if (!model_path.empty()) {
            const auto file = lmotif::load_model_file(model_path, common.allow_loops);
            auto aligned = lmotif::align_memberships(graph, file.labels, file.model.z);
            graph = std::move(aligned.graph);
            model = file.model;
            model.n = graph.vertex_count();
            model.z = std::move(aligned.z);
        } else if (!classes_path.empty()) {
            const auto members = lmotif::load_classes_file(classes_path);
            auto aligned = lmotif::align_memberships(graph, members.labels, members.z);
            graph = std::move(aligned.graph);
            auto est = lmotif::estimate_pi(graph, aligned.z,
                                           std::uint32_t(members.class_names.size()));
            print_warnings(est.warnings);
            model = std::move(est.model);
        } else {
            throw lmotif::Error("--null blockmodel needs --classes or --model");
        }
    } else {
        throw lmotif::Error("unknown null model '" + null_kind + "'");
    }

    lmotif::DetectOptions opts;
    opts.k_max = k_max;
    opts.alpha = alpha;
    opts.threads = common.threads;
    opts.diagnostics = diagnostics;
    opts.theme_cap = theme_cap;
    opts.collect_all_witnesses = all_witnesses;
    const auto results = lmotif::detect(graph, model, opts);

    Output out(common.out_path);
    if (format == "records") {
        lmotif::write_records(out.stream(), results, graph);
        return 0;
    }

    std::size_t motifs = 0, filtered = 0;
    std::vector<lmotif::MotifResult> shown;
    for (const auto& r : results) {
        if (r.status == lmotif::MotifStatus::Motif) ++motifs;
        if (r.status == lmotif::MotifStatus::Filtered) ++filtered;
        if (full || r.status != lmotif::MotifStatus::NotSignificant) shown.push_back(r);
    }
    out.stream() << "# n=" << graph.vertex_count() << " edges=" << graph.edge_count()
                 << " null=" << null_kind << " alpha=" << alpha << " k-max=" << k_max << '\n';
    out.stream() << "# candidates=" << results.size() << " motifs=" << motifs
                 << " filtered=" << filtered << '\n';
    if (motifs == 0) out.stream() << "# no local motifs at this threshold\n";
    if (!shown.empty()) out.stream() << lmotif::render_table(shown, graph);
    return 0;
}

int run_census(const CommonArgs& common, const std::string& edges_path, int k) {
    auto parsed = lmotif::load_edge_list(edges_path, common.allow_loops);
    print_warnings(parsed.warnings);

    lmotif::CensusOptions opts;
    opts.threads = common.threads;
    const auto census = lmotif::enumerate_subgraphs(parsed.graph, k, opts);

    Output out(common.out_path);
    std::size_t total = 0;
    out.stream() << "code\tpattern\toccurrences\n";
    lmotif::PatternCatalog catalog(common.allow_loops);
    for (const auto& [code, occ] : census) {
        out.stream() << code.to_string() << '\t' << catalog.info(code).canonical.literal()
                     << '\t' << occ.size() << '\n';
        total += occ.size();
    }
    out.stream() << "# total\t" << total << '\n';
    return 0;
}

int run_simulate(const CommonArgs& common, const std::string& preset,
                 const std::string& model_path, const std::string& pattern_text,
                 int class_index, std::size_t replicates, std::uint64_t seed) {
    lmotif::BlockModel model;
    if (!preset.empty() && !model_path.empty())
        throw lmotif::Error("give either --preset or --model, not both");
    if (!preset.empty())
        model = preset_model(preset);
    else if (!model_path.empty())
        model = lmotif::load_model_file(model_path, common.allow_loops).model;
    else
        throw lmotif::Error("simulate needs --preset or --model");

    lmotif::StudyConfig cfg;
    cfg.pattern = lmotif::Pattern::parse(resolve_alias(pattern_text), common.allow_loops);
    lmotif::PatternCatalog catalog(common.allow_loops);
    const auto& info = catalog.info_for(cfg.pattern);
    cfg.class_index =
        class_index >= 0 ? std::size_t(class_index) : default_class_index(info);
    cfg.replicates = replicates;
    cfg.master_seed = seed;
    cfg.threads = common.threads;

    const auto study = lmotif::empirical_tail(model, cfg);

    Output out(common.out_path);
    const auto& members = info.classes[cfg.class_index].members;
    out.stream() << "# pattern=" << info.canonical.literal() << " class=" << cfg.class_index
                 << " members={";
    for (std::size_t i = 0; i < members.size(); ++i)
        out.stream() << (i ? "," : "") << int(members[i]);
    out.stream() << "} seed=" << seed << '\n';
    out.stream() << lmotif::render_study_table(study);
    return 0;
}

int run_inspect(const CommonArgs& common, const std::string& pattern_text) {
    const auto pattern =
        lmotif::Pattern::parse(resolve_alias(pattern_text), common.allow_loops);
    lmotif::PatternCatalog catalog(common.allow_loops);
    const auto& info = catalog.info_for(pattern);

    Output out(common.out_path);
    auto& os = out.stream();
    os << "pattern:       " << pattern.literal() << '\n';
    os << "canonical:     " << info.canonical.literal() << '\n';
    os << "code:          " << info.canonical.canonical_code().to_string() << '\n';
    os << "connected:     " << (pattern.connected() ? "yes" : "no") << '\n';
    os << "automorphisms: " << info.automorphism_count << '\n';
    for (std::size_t ci = 0; ci < info.classes.size(); ++ci) {
        const auto& dc = info.classes[ci];
        os << "class " << ci << ": members {";
        for (std::size_t i = 0; i < dc.members.size(); ++i)
            os << (i ? "," : "") << int(dc.members[i]);
        os << "} subpattern " << dc.subpattern.literal() << " extensions";
        for (const auto config : dc.extension_configs)
            os << ' ' << render_extension_config(config, pattern.k() - 1, pattern.allow_loops());
        os << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Local network motif detection under blockmodel nulls"};
    app.require_subcommand(1);

    CommonArgs common;

    auto* detect = app.add_subcommand("detect", "Find local motifs in an edge list");
    std::string edges_path, null_kind = "er", classes_path, model_path, format = "table";
    int k_max = 3;
    double alpha = 1e-3;
    bool diagnostics = false, all_witnesses = false, full = false;
    std::size_t theme_cap = 5;
    detect->add_option("--edges", edges_path, "Edge list: one `src dst` pair per line")
        ->required();
    detect->add_option("--null", null_kind, "Null model")
        ->check(CLI::IsMember({"er", "expected-degree", "blockmodel"}))
        ->capture_default_str();
    detect->add_option("--classes", classes_path,
                       "Vertex memberships (`vertex class` lines); Pi is then estimated");
    detect->add_option("--model", model_path, "Full model file (`n Q` header, memberships, Pi)");
    detect->add_option("--k-max", k_max, "Largest pattern size to test")
        ->check(CLI::Range(3, 8))
        ->capture_default_str();
    detect->add_option("--alpha", alpha, "Per-(pattern, class) p-value threshold")
        ->capture_default_str();
    detect->add_flag("--diagnostics", diagnostics, "Keep zero-extension positions in themes");
    detect->add_option("--theme-cap", theme_cap, "Top theme positions kept per result")
        ->capture_default_str();
    detect->add_flag("--all-witnesses", all_witnesses, "List every redundancy witness");
    detect->add_flag("--full", full, "Show not-significant rows in the table too");
    detect->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"table", "records"}))
        ->capture_default_str();
    add_common(detect, common);

    auto* census = app.add_subcommand("census", "Count induced connected k-subgraphs");
    std::string census_edges;
    int census_k = 3;
    census->add_option("--edges", census_edges, "Edge list path")->required();
    census->add_option("--k", census_k, "Subgraph size")
        ->check(CLI::Range(3, 8))
        ->capture_default_str();
    add_common(census, common);

    auto* simulate = app.add_subcommand("simulate", "Empirical tail of the max-score statistic");
    std::string preset, sim_model_path, sim_pattern = "ffl";
    int sim_class = -1;
    std::size_t replicates = 50000;
    std::uint64_t seed = 1;
    simulate->add_option("--preset", preset, "Built-in model: reference, dense, large");
    simulate->add_option("--model", sim_model_path, "Model file to sample from");
    simulate->add_option("--pattern", sim_pattern, "Pattern literal or alias (ffl, bifan, 3cycle)")
        ->capture_default_str();
    simulate->add_option("--class", sim_class,
                         "Deletion class index (default: class of the max in-degree vertex)");
    simulate->add_option("--replicates", replicates, "Sampled graphs")->capture_default_str();
    simulate->add_option("--seed", seed, "Master seed")->capture_default_str();
    add_common(simulate, common);

    auto* inspect = app.add_subcommand("inspect-pattern",
                                       "Show canonical form, classes and extension configs");
    std::string inspect_pattern;
    inspect->add_option("pattern", inspect_pattern, "Pattern literal or alias")->required();
    add_common(inspect, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;  // help/version exit 0, usage problems exit 2
    }

    try {
        if (detect->parsed())
            return run_detect(common, edges_path, null_kind, classes_path, model_path, k_max,
                              alpha, diagnostics, theme_cap, all_witnesses, full, format);
        if (census->parsed()) return run_census(common, census_edges, census_k);
        if (simulate->parsed())
            return run_simulate(common, preset, sim_model_path, sim_pattern, sim_class,
                                replicates, seed);
        if (inspect->parsed()) return run_inspect(common, inspect_pattern);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
