// mfd-safe: maximal safe paths for minimum flow decompositions on DAGs.
//
// Subcommands: safe (pipeline run), eval (quality metrics), oracle (brute
// force at desk scale), bench (per-variant call counts). Logs go to stderr,
// data to files or stdout.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "mfdsafe/metrics.hpp"
#include "mfdsafe/oracle.hpp"
#include "mfdsafe/pipeline.hpp"

namespace {

using namespace mfdsafe;

int write_output(const std::string& path, const std::string& data) {
    if (path.empty() || path == "-") {
        std::cout << data;
        return 0;
    }
    std::ofstream f(path);
    if (!f) {
        std::cerr << "error: cannot write " << path << "\n";
        return 1;
    }
    f << data;
    return 0;
}

std::map<std::string, Variant> variant_map() {
    return {{"topdown", Variant::topdown},
            {"bottomup", Variant::bottomup},
            {"twopointer", Variant::twopointer},
            {"twopointerbin", Variant::twopointerbin}};
}

struct CommonFlags {
    RunConfig cfg;
    std::string backend_name = "builtin";
    bool no_prefilter = false;
    bool no_symmetry = false;

    void attach(CLI::App* app) {
        app->add_option("--variant", cfg.variant, "enumeration strategy")
            ->transform(CLI::CheckedTransformer(variant_map(), CLI::ignore_case))
            ->default_str("topdown");
        app->add_option("--timeout", cfg.budget_sec, "per-graph time budget in seconds")
            ->default_val(120.0);
        app->add_option("--backend", backend_name, "solver backend")
            ->check(CLI::IsMember({"builtin", "external"}))
            ->default_str("builtin");
        app->add_option("--solver-cmd", cfg.external_cmd,
                        "external solver command (solver.external_cmd); "
                        "MFD_SAFE_SOLVER overrides");
        app->add_flag("--no-prefilter", no_prefilter, "disable the excess-flow prefilter");
        app->add_flag("--no-symmetry", no_symmetry, "disable weight-ordering symmetry breaking");
        app->add_option("--bin-threshold", cfg.bin_threshold,
                        "minimum span before twopointerbin switches to binary search")
            ->default_val(4);
        app->add_option("--workers", cfg.workers, "parallel graph workers")->default_val(1);
        app->add_option("--seed", cfg.seed, "seed forwarded to the external solver")->default_val(0);
    }

    RunConfig resolve() {
        cfg.backend = backend_name == "external" ? BackendKind::external : BackendKind::builtin;
        cfg.prefilter = !no_prefilter;
        cfg.symmetry_breaking = !no_symmetry;
        return cfg;
    }
};

std::vector<CorpusRecord> load_corpus(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot read " + path);
    return parse_graph_corpus(f);
}

int cmd_safe(const std::string& input, const std::string& output, const std::string& stats_path,
             CommonFlags& flags) {
    RunConfig cfg = flags.resolve();
    auto records = load_corpus(input);
    CorpusStats stats;
    auto reports = run_corpus(records, cfg, &stats);
    for (const auto& r : reports)
        if (r.status == SafetyReport::Status::skipped)
            std::cerr << "skipped " << r.graph_id << ": " << r.error << "\n";
    if (int rc = write_output(output, write_safe_paths(records, reports))) return rc;
    if (!stats_path.empty())
        if (int rc = write_output(stats_path, write_stats_csv(reports, cfg))) return rc;
    std::cerr << "graphs " << stats.graphs << ", complete " << stats.complete << ", fallback "
              << stats.fallbacks << ", skipped " << stats.skipped << ", ilp calls "
              << stats.total_ilp_calls << "\n";
    return stats.skipped > 0 ? 2 : 0;
}

int cmd_eval(const std::string& safe_path, const std::string& truth_path,
             const std::string& output, bool per_path_precision) {
    std::ifstream sf(safe_path);
    if (!sf) throw std::runtime_error("cannot read " + safe_path);
    std::ifstream tf(truth_path);
    if (!tf) throw std::runtime_error("cannot read " + truth_path);
    auto safe = parse_safe_paths(sf);
    auto truth = parse_truth_corpus(tf);
    std::map<std::string, const SafePathsRecord*> by_id;
    for (const auto& r : safe) by_id[r.graph_id] = &r;

    PrecisionMode mode = per_path_precision ? PrecisionMode::per_path_mean
                                            : PrecisionMode::length_weighted;
    std::vector<GraphMetrics> per_graph;
    int unmatched = 0;
    std::set<std::string> matched;
    for (const auto& t : truth) {
        auto it = by_id.find(t.graph_id);
        if (it == by_id.end()) {
            std::cerr << "no safe-paths record for graph " << t.graph_id << "\n";
            ++unmatched;
            continue;
        }
        matched.insert(t.graph_id);
        per_graph.push_back(graph_metrics(t.graph_id, it->second->label_paths, t.label_paths, mode));
    }
    for (const auto& r : safe)
        if (!matched.count(r.graph_id)) {
            std::cerr << "no truth record for graph " << r.graph_id << "\n";
            ++unmatched;
        }

    std::ostringstream os;
    os << "graph_id,t,wprec,maxcov,fscore\n";
    os.precision(6);
    os << std::fixed;
    for (const auto& m : per_graph)
        os << m.graph_id << "," << m.t << "," << m.weighted_precision << "," << m.max_coverage
           << "," << m.f_score << (m.empty_report ? ",empty_report" : "") << "\n";
    os << "# bucket,graphs,wprec,maxcov,fscore\n";
    for (const auto& b : corpus_metrics(per_graph))
        os << "# " << b.name << "," << b.graphs << "," << b.weighted_precision << ","
           << b.max_coverage << "," << b.f_score << "\n";
    if (int rc = write_output(output, os.str())) return rc;
    return unmatched > 0 ? 2 : 0;
}

int cmd_oracle(const std::string& input, const std::string& output, const OracleLimits& lim) {
    auto records = load_corpus(input);
    std::ostringstream os;
    int partial = 0;
    for (const auto& rec : records) {
        if (!rec.graph) {
            std::cerr << "skipped " << rec.id << ": " << rec.error << "\n";
            ++partial;
            continue;
        }
        const FlowGraph& g = *rec.graph;
        try {
            auto paths = oracle_maximal_safe(g, lim);
            os << "# " << g.id << " complete\n";
            for (const auto& p : paths) {
                for (size_t j = 0; j < p.size(); ++j) os << (j ? " " : "") << g.label_of(p[j]);
                os << "\n";
            }
        } catch (const OracleLimitError& ex) {
            os << "# " << g.id << " refused\n";
            std::cerr << g.id << ": " << ex.what() << "\n";
            ++partial;
        }
    }
    if (int rc = write_output(output, os.str())) return rc;
    return partial > 0 ? 2 : 0;
}

int cmd_bench(const std::string& input, const std::string& output, CommonFlags& flags) {
    RunConfig base = flags.resolve();
    auto records = load_corpus(input);
    const Variant variants[] = {Variant::topdown, Variant::bottomup, Variant::twopointer,
                                Variant::twopointerbin};
    std::map<Variant, std::vector<SafetyReport>> all;
    for (Variant v : variants) {
        RunConfig cfg = base;
        cfg.variant = v;
        all[v] = run_corpus(records, cfg);
    }
    // Keep only graphs that finished in every variant, so no row is skewed
    // by another variant's timeouts.
    std::vector<char> keep(records.size(), 1);
    for (Variant v : variants)
        for (size_t i = 0; i < records.size(); ++i)
            if (all[v][i].status != SafetyReport::Status::complete) keep[i] = 0;
    int kept = 0;
    for (char c : keep) kept += c;

    std::ostringstream os;
    os << "variant,graphs,total_wall_ms,total_ilp_calls\n";
    for (Variant v : variants) {
        long long calls = 0;
        double ms = 0;
        for (size_t i = 0; i < records.size(); ++i) {
            if (!keep[i]) continue;
            calls += all[v][i].ilp_calls;
            ms += all[v][i].wall_ms;
        }
        os << variant_name(v) << "," << kept << "," << static_cast<long long>(ms) << "," << calls
           << "\n";
    }
    if (int rc = write_output(output, os.str())) return rc;
    return kept == static_cast<int>(records.size()) ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Maximal safe paths for minimum flow decompositions"};
    app.require_subcommand(1);

    // safe
    auto* safe = app.add_subcommand("safe", "compute maximal safe paths for a graph corpus");
    std::string safe_in, safe_out, safe_stats;
    CommonFlags safe_flags;
    safe->add_option("input", safe_in, "graph corpus file")->required();
    safe->add_option("-o,--output", safe_out, "safe-paths output file (default stdout)");
    safe->add_option("--stats", safe_stats, "per-graph stats CSV");
    safe_flags.attach(safe);

    // eval
    auto* eval = app.add_subcommand("eval", "score a safe-paths file against ground truth");
    std::string eval_safe, eval_truth, eval_out;
    bool per_path_precision = false;
    eval->add_option("safe_file", eval_safe, "safe-paths file")->required();
    eval->add_option("truth_file", eval_truth, "truth corpus file")->required();
    eval->add_option("-o,--output", eval_out, "metrics CSV (default stdout)");
    eval->add_flag("--per-path-precision", per_path_precision,
                   "unweighted per-path precision instead of length-weighted");

    // oracle
    auto* orc = app.add_subcommand("oracle", "brute-force maximal safe paths (desk scale)");
    std::string orc_in, orc_out;
    mfdsafe::OracleLimits lim;
    orc->add_option("input", orc_in, "graph corpus file")->required();
    orc->add_option("-o,--output", orc_out, "safe-paths output file (default stdout)");
    orc->add_option("--max-edges", lim.max_edges)->default_val(12);
    orc->add_option("--max-outflow", lim.max_outflow)->default_val(20);
    orc->add_option("--max-states", lim.max_states)->default_val(1000000);

    // bench
    auto* bench = app.add_subcommand("bench", "run all four variants and compare ILP calls");
    std::string bench_in, bench_out;
    CommonFlags bench_flags;
    bench->add_option("input", bench_in, "graph corpus file")->required();
    bench->add_option("-o,--output", bench_out, "stats CSV (default stdout)");
    bench_flags.attach(bench);

    CLI11_PARSE(app, argc, argv);
    try {
        if (safe->parsed()) return cmd_safe(safe_in, safe_out, safe_stats, safe_flags);
        if (eval->parsed()) return cmd_eval(eval_safe, eval_truth, eval_out, per_path_precision);
        if (orc->parsed()) return cmd_oracle(orc_in, orc_out, lim);
        if (bench->parsed()) return cmd_bench(bench_in, bench_out, bench_flags);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 1;
}
