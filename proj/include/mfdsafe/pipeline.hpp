#pragma once

#include <functional>
#include <memory>
#include <sstream>
#include <thread>
#include <vector>

#include "mfdsafe/contraction.hpp"
#include "mfdsafe/fd_safety.hpp"
#include "mfdsafe/safety_engine.hpp"
#include "mfdsafe/solver_builtin.hpp"
#include "mfdsafe/solver_external.hpp"

namespace mfdsafe {

enum class Provenance { trivial, excess_flow, ilp, fallback };

inline const char* provenance_name(Provenance p) {
    switch (p) {
        case Provenance::trivial: return "trivial";
        case Provenance::excess_flow: return "excess_flow";
        case Provenance::ilp: return "ilp";
        default: return "fallback";
    }
}

struct SafetyReport {
    enum class Status { complete, fallback, skipped };
    std::string graph_id;
    Status status = Status::complete;
    std::vector<std::vector<NodeId>> maximal_safe;  // original dense node ids
    std::vector<Provenance> provenance;             // parallel to maximal_safe
    long long ilp_calls = 0;
    double wall_ms = 0;
    std::string error;  // set when skipped
};

enum class BackendKind { builtin, external };

struct RunConfig {
    Variant variant = Variant::topdown;
    double budget_sec = 120.0;
    BackendKind backend = BackendKind::builtin;
    std::string external_cmd;  // solver.external_cmd; MFD_SAFE_SOLVER overrides
    bool prefilter = true;
    bool symmetry_breaking = true;  // plain MFD solves only; group tests run without
    int bin_threshold = 4;
    int workers = 1;
    long long seed = 0;

    std::unique_ptr<SolverBackend> make_backend() const {
        if (backend == BackendKind::external) return std::make_unique<ExternalBackend>(external_cmd, seed);
        return std::make_unique<BuiltinBackend>();
    }
};

// Per-graph orchestration: contract, peel off trivial safe paths, shortcut
// funnels, then solve the minimum k and run the chosen variant. A blown
// budget discards all ILP conclusions and falls back to the FD-safe paths.
inline SafetyReport run_graph(const FlowGraph& g, const RunConfig& cfg) {
    SafetyReport rep;
    rep.graph_id = g.id;
    auto t0 = Clock::now();
    auto finish = [&]() {
        rep.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
        return rep;
    };

    ContractionResult cr = y_to_v_contract(g);
    if (is_funnel(cr.residual)) {
        rep.maximal_safe = postprocess_paths(cr.trivial_safe);
        rep.provenance.assign(rep.maximal_safe.size(), Provenance::trivial);
        return finish();
    }

    std::unique_ptr<SolverBackend> raw = cfg.make_backend();
    CountingBackend backend(*raw);
    Deadline deadline = Deadline::after_seconds(cfg.budget_sec);
    try {
        MinKResult mk = solve_min_k(cr.residual.graph, backend, deadline, cfg.symmetry_breaking);
        std::vector<EdgePath> base;
        for (auto& wp : mk.paths) base.push_back(wp.path);
        SafetyEngine engine(cr.residual.graph, base, backend, deadline, cfg.prefilter,
                            cfg.bin_threshold, /*symmetry_breaking=*/false);
        auto refs = engine.run(cfg.variant);

        std::vector<std::vector<NodeId>> paths = cr.trivial_safe;
        for (const auto& s : refs)
            paths.push_back(expand_path_maximal(cr.residual, engine.ref_edges(s).edges));
        rep.maximal_safe = postprocess_paths(std::move(paths));
        for (const auto& p : rep.maximal_safe) {
            if (std::find(cr.trivial_safe.begin(), cr.trivial_safe.end(), p) != cr.trivial_safe.end())
                rep.provenance.push_back(Provenance::trivial);
            else if (excess_flow_nodes(g, p) > 0)
                rep.provenance.push_back(Provenance::excess_flow);
            else
                rep.provenance.push_back(Provenance::ilp);
        }
        rep.status = SafetyReport::Status::complete;
    } catch (const TimeoutError&) {
        std::vector<std::vector<NodeId>> paths = cr.trivial_safe;
        for (auto& p : safe_flow_maximal_paths(g)) paths.push_back(std::move(p));
        rep.maximal_safe = postprocess_paths(std::move(paths));
        rep.provenance.clear();
        for (const auto& p : rep.maximal_safe) {
            if (std::find(cr.trivial_safe.begin(), cr.trivial_safe.end(), p) != cr.trivial_safe.end())
                rep.provenance.push_back(Provenance::trivial);
            else
                rep.provenance.push_back(Provenance::fallback);
        }
        rep.status = SafetyReport::Status::fallback;
    }
    rep.ilp_calls = backend.calls;
    return finish();
}

struct CorpusStats {
    int graphs = 0;
    int complete = 0;
    int fallbacks = 0;
    int skipped = 0;
    long long total_ilp_calls = 0;
    double total_wall_ms = 0;
};

// Independent per-graph runs over parsed corpus records; invalid records
// become skip reports, never aborts. Reports come back in input order, so
// output files are deterministic for any worker count (timings aside).
inline std::vector<SafetyReport> run_corpus(const std::vector<CorpusRecord>& records,
                                            const RunConfig& cfg, CorpusStats* stats = nullptr) {
    std::vector<SafetyReport> reports(records.size());
    auto work = [&](size_t idx) {
        const CorpusRecord& rec = records[idx];
        if (!rec.graph) {
            reports[idx].graph_id = rec.id;
            reports[idx].status = SafetyReport::Status::skipped;
            reports[idx].error = rec.error;
            return;
        }
        try {
            reports[idx] = run_graph(*rec.graph, cfg);
        } catch (const std::exception& ex) {
            reports[idx].graph_id = rec.id;
            reports[idx].status = SafetyReport::Status::skipped;
            reports[idx].error = ex.what();
        }
    };
    int workers = std::max(1, cfg.workers);
    if (workers == 1) {
        for (size_t i = 0; i < records.size(); ++i) work(i);
    } else {
        std::vector<std::thread> pool;
        std::atomic<size_t> next{0};
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&]() {
                for (size_t i = next.fetch_add(1); i < records.size(); i = next.fetch_add(1)) work(i);
            });
        for (auto& t : pool) t.join();
    }
    if (stats) {
        *stats = CorpusStats{};
        for (const auto& r : reports) {
            ++stats->graphs;
            switch (r.status) {
                case SafetyReport::Status::complete: ++stats->complete; break;
                case SafetyReport::Status::fallback: ++stats->fallbacks; break;
                case SafetyReport::Status::skipped: ++stats->skipped; break;
            }
            stats->total_ilp_calls += r.ilp_calls;
            stats->total_wall_ms += r.wall_ms;
        }
    }
    return reports;
}

// Safe-paths file: `# <graph_id> <status>` then one path per line as
// space-separated original node labels. Skipped graphs are not emitted here;
// they appear in the stats CSV.
inline std::string write_safe_paths(const std::vector<CorpusRecord>& records,
                                    const std::vector<SafetyReport>& reports) {
    std::ostringstream os;
    for (size_t i = 0; i < reports.size(); ++i) {
        const SafetyReport& r = reports[i];
        if (r.status == SafetyReport::Status::skipped) continue;
        os << "# " << r.graph_id << " "
           << (r.status == SafetyReport::Status::complete ? "complete" : "fallback") << "\n";
        const FlowGraph& g = *records[i].graph;
        for (const auto& p : r.maximal_safe) {
            for (size_t j = 0; j < p.size(); ++j) os << (j ? " " : "") << g.label_of(p[j]);
            os << "\n";
        }
    }
    return os.str();
}

inline std::string write_stats_csv(const std::vector<SafetyReport>& reports, const RunConfig& cfg) {
    std::ostringstream os;
    os << "graph_id,variant,status,ilp_calls,wall_ms,num_safe_paths\n";
    for (const auto& r : reports) {
        const char* status = r.status == SafetyReport::Status::complete ? "complete"
                             : r.status == SafetyReport::Status::fallback ? "fallback"
                                                                         : "skipped";
        os << r.graph_id << "," << variant_name(cfg.variant) << "," << status << ","
           << r.ilp_calls << "," << static_cast<long long>(r.wall_ms) << ","
           << r.maximal_safe.size() << "\n";
    }
    return os.str();
}

struct SafePathsRecord {
    std::string graph_id;
    std::string status;
    std::vector<std::vector<long long>> label_paths;
};

inline std::vector<SafePathsRecord> parse_safe_paths(std::istream& in) {
    std::vector<SafePathsRecord> out;
    std::string line;
    int lineno = 0;
    SafePathsRecord* cur = nullptr;
    while (std::getline(in, line)) {
        ++lineno;
        std::string s = detail::strip(line);
        if (s.empty()) continue;
        if (s[0] == '#') {
            auto toks = detail::split_ws(s.substr(1));
            if (toks.empty()) throw ParseError(lineno, "record header without graph id");
            out.push_back(SafePathsRecord{});
            cur = &out.back();
            cur->graph_id = toks[0];
            if (toks.size() > 1) cur->status = toks[1];
            continue;
        }
        if (!cur) throw ParseError(lineno, "data before first '#' record header");
        std::vector<long long> nodes;
        for (const auto& t : detail::split_ws(s)) {
            long long v;
            if (!detail::parse_exact_integer(t, &v)) throw ParseError(lineno, "malformed node id");
            nodes.push_back(v);
        }
        cur->label_paths.push_back(std::move(nodes));
    }
    return out;
}

}  // namespace mfdsafe
