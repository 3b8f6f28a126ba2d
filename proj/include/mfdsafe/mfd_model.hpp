#pragma once

#include <map>
#include <string>
#include <vector>

#include "mfdsafe/common.hpp"
#include "mfdsafe/flow_graph.hpp"
#include "mfdsafe/path_utils.hpp"

namespace mfdsafe {

// A path in a (possibly contracted) graph, as edge ids.
struct EdgePath {
    std::vector<int> edges;
    bool operator==(const EdgePath& o) const { return edges == o.edges; }
    bool operator<(const EdgePath& o) const { return edges < o.edges; }
};

struct WeightedEdgePath {
    EdgePath path;
    long long weight = 0;
};

// Abstract integer program for decomposing the flow of `g` into exactly `k`
// weighted s-t paths: binary x_uvi select one path per index (per-index flow
// conservation), integer weights w_i >= 1, and the superposition constraint
// linearized with products pi_uvi bounded by w_max. When `tested` is
// nonempty, one binary avoidance indicator per tested path is attached and
// the objective maximizes how many tested paths are avoided; otherwise the
// model is a pure feasibility problem.
struct MfdModelSpec {
    const FlowGraph* g = nullptr;
    int k = 0;
    long long w_max = 0;
    bool symmetry_breaking = false;  // w_1 >= w_2 >= ... >= w_k
    std::vector<EdgePath> tested;
};

enum class SolveStatus { optimal, infeasible, timeout };

struct SolverOutcome {
    SolveStatus status = SolveStatus::infeasible;
    std::vector<WeightedEdgePath> paths;  // k paths when optimal
    std::vector<bool> avoided;            // per tested path when optimal
    long long objective = 0;              // number of avoided paths
};

class SolverBackend {
  public:
    virtual ~SolverBackend() = default;
    // Optimal outcomes are exact; deadline overruns yield status timeout.
    // Backend-internal failures throw SolverError.
    virtual SolverOutcome solve(const MfdModelSpec& spec, const Deadline& deadline) = 0;
};

// Counts every solve issued through it; used for the per-graph ILP counters.
class CountingBackend : public SolverBackend {
  public:
    explicit CountingBackend(SolverBackend& inner) : inner_(inner) {}
    SolverOutcome solve(const MfdModelSpec& spec, const Deadline& deadline) override {
        ++calls;
        return inner_.solve(spec, deadline);
    }
    long long calls = 0;

  private:
    SolverBackend& inner_;
};

inline MfdModelSpec build_mfd_model(const FlowGraph& g, int k, bool symmetry_breaking = true) {
    MfdModelSpec spec;
    spec.g = &g;
    spec.k = k;
    spec.w_max = total_flow(g);
    spec.symmetry_breaking = symmetry_breaking;
    return spec;
}

// Max over topological cuts of the number of positive-flow edges crossing;
// every s-t path crosses each cut at most once. At least 1.
inline int lower_bound_k(const FlowGraph& g) {
    auto order = topological_order(g);
    std::vector<int> pos(g.num_nodes);
    for (int p = 0; p < static_cast<int>(order.size()); ++p) pos[order[p]] = p;
    int best = 1;
    for (int p = 0; p + 1 < g.num_nodes; ++p) {
        int crossing = 0;
        for (const Edge& e : g.edges)
            if (e.flow > 0 && pos[e.u] <= p && pos[e.v] > p) ++crossing;
        best = std::max(best, crossing);
    }
    return best;
}

// Post-hoc check of a claimed optimal outcome against the model: each index
// is a node-simple s-t path, weights are in [1, w_max], the weighted
// superposition matches every edge flow exactly, and each avoidance flag
// agrees with whether the tested path occurs inside some solution path.
inline bool check_outcome(const MfdModelSpec& spec, const SolverOutcome& out,
                          std::string* why = nullptr) {
    auto fail = [&](const std::string& m) {
        if (why) *why = m;
        return false;
    };
    const FlowGraph& g = *spec.g;
    if (out.status != SolveStatus::optimal) return fail("outcome not optimal");
    if (static_cast<int>(out.paths.size()) != spec.k) return fail("wrong number of paths");
    std::vector<long long> covered(g.edges.size(), 0);
    for (const auto& wp : out.paths) {
        if (wp.weight < 1 || wp.weight > spec.w_max) return fail("weight out of range");
        auto nodes = edge_path_nodes(g, wp.path.edges);
        if (nodes.empty() || nodes.front() != g.source || nodes.back() != g.sink)
            return fail("index support is not an s-t path");
        std::set<NodeId> uniq(nodes.begin(), nodes.end());
        if (uniq.size() != nodes.size()) return fail("path repeats a node");
        for (int e : wp.path.edges) covered[e] += wp.weight;
    }
    for (size_t e = 0; e < g.edges.size(); ++e)
        if (covered[e] != g.edges[e].flow) return fail("superposition mismatch");
    if (out.avoided.size() != spec.tested.size()) return fail("avoidance flags missing");
    for (size_t t = 0; t < spec.tested.size(); ++t) {
        bool present = false;
        for (const auto& wp : out.paths)
            if (is_contiguous_subseq(spec.tested[t].edges, wp.path.edges)) present = true;
        if (out.avoided[t] && present) return fail("avoided path present in a solution path");
        if (!out.avoided[t] && !present && spec.tested[t].edges.size() > 0) {
            // gamma could have been 1; objective would not be maximal.
            return fail("absent tested path not flagged avoided");
        }
    }
    long long obj = 0;
    for (bool b : out.avoided) obj += b;
    if (obj != out.objective) return fail("objective does not match flags");
    if (spec.symmetry_breaking)
        for (size_t i = 0; i + 1 < out.paths.size(); ++i)
            if (out.paths[i].weight < out.paths[i + 1].weight) return fail("weights not ordered");
    return true;
}

struct MinKResult {
    int k = 0;
    std::vector<WeightedEdgePath> paths;
};

// Smallest k with a feasible model, scanning upward from the cut bound.
// Throws TimeoutError when the deadline is hit.
inline MinKResult solve_min_k(const FlowGraph& g, SolverBackend& backend, const Deadline& deadline,
                              bool symmetry_breaking = true) {
    long long upper = total_flow(g);
    for (int k = lower_bound_k(g); k <= upper; ++k) {
        MfdModelSpec spec = build_mfd_model(g, k, symmetry_breaking);
        SolverOutcome out = backend.solve(spec, deadline);
        if (out.status == SolveStatus::timeout) throw TimeoutError();
        if (out.status == SolveStatus::optimal) {
            std::string why;
            if (!check_outcome(spec, out, &why)) throw SolverError("bad solver outcome: " + why);
            return {k, out.paths};
        }
    }
    throw SolverError("no flow decomposition found up to the weight bound");
}

inline Decomposition to_decomposition(const FlowGraph& g, const std::vector<WeightedEdgePath>& paths) {
    Decomposition d;
    for (const auto& wp : paths) d.paths.push_back({edge_path_nodes(g, wp.path.edges), wp.weight});
    return d;
}

}  // namespace mfdsafe
