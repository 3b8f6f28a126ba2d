#pragma once

#include <algorithm>
#include <vector>

#include "mfdsafe/mfd_model.hpp"

namespace mfdsafe {

// Exact, dependency-free backend: depth-first branch-and-bound over
// (path, weight) choices. Picks the smallest uncovered positive-flow edge,
// branches on s-t paths through it and on integer weights up to the residual
// bottleneck, and prunes when the residual cut bound exceeds the remaining
// path budget. With tested paths attached it enumerates all decompositions
// of size k and maximizes the number of simultaneously avoided paths.
class BuiltinBackend : public SolverBackend {
  public:
    SolverOutcome solve(const MfdModelSpec& spec, const Deadline& deadline) override {
        if (deadline.expired()) {
            SolverOutcome out;
            out.status = SolveStatus::timeout;
            return out;
        }
        Search s(spec, deadline);
        try {
            s.run();
        } catch (const TimeoutError&) {
            SolverOutcome out;
            out.status = SolveStatus::timeout;
            return out;
        }
        SolverOutcome out;
        if (!s.found) {
            out.status = SolveStatus::infeasible;
            return out;
        }
        out.status = SolveStatus::optimal;
        out.paths = s.best_paths;
        if (spec.symmetry_breaking)
            std::stable_sort(out.paths.begin(), out.paths.end(),
                             [](const auto& a, const auto& b) { return a.weight > b.weight; });
        out.avoided.resize(spec.tested.size());
        for (size_t t = 0; t < spec.tested.size(); ++t) {
            bool present = false;
            for (const auto& wp : out.paths)
                if (is_contiguous_subseq(spec.tested[t].edges, wp.path.edges)) present = true;
            out.avoided[t] = !present;
            if (out.avoided[t]) ++out.objective;
        }
        return out;
    }

  private:
    struct Search {
        const MfdModelSpec& spec;
        const FlowGraph& g;
        const Deadline& deadline;
        Adjacency adj;
        std::vector<int> pos;  // topological position per node
        std::vector<long long> res;
        std::vector<WeightedEdgePath> chosen;

        bool found = false;
        long long best_obj = -1;
        std::vector<WeightedEdgePath> best_paths;
        bool optimize;  // maximize avoided count vs first feasible
        long long tick = 0;

        Search(const MfdModelSpec& sp, const Deadline& dl)
            : spec(sp), g(*sp.g), deadline(dl), adj(make_adjacency(g)) {
            auto order = topological_order(g);
            pos.resize(g.num_nodes);
            for (int p = 0; p < static_cast<int>(order.size()); ++p) pos[order[p]] = p;
            res.resize(g.edges.size());
            for (size_t e = 0; e < g.edges.size(); ++e) res[e] = g.edges[e].flow;
            optimize = !spec.tested.empty();
        }

        void run() { dfs(); }

        void check_time() {
            if ((++tick & 255) == 0 && deadline.expired()) throw TimeoutError();
        }

        int residual_cut_bound() const {
            int best = 0;
            for (int p = 0; p + 1 < g.num_nodes; ++p) {
                int c = 0;
                for (size_t e = 0; e < g.edges.size(); ++e)
                    if (res[e] > 0 && pos[g.edges[e].u] <= p && pos[g.edges[e].v] > p) ++c;
                best = std::max(best, c);
            }
            return best;
        }

        // Upper bound on the final avoided count: tested paths already inside
        // some chosen path can never be avoided again.
        long long avoid_upper_bound() const {
            long long ub = 0;
            for (const auto& t : spec.tested) {
                bool hit = false;
                for (const auto& wp : chosen)
                    if (is_contiguous_subseq(t.edges, wp.path.edges)) hit = true;
                if (!hit) ++ub;
            }
            return ub;
        }

        bool done() const {
            if (!optimize) return found;
            return found && best_obj == static_cast<long long>(spec.tested.size());
        }

        void complete() {
            long long obj = 0;
            if (optimize) {
                for (const auto& t : spec.tested) {
                    bool present = false;
                    for (const auto& wp : chosen)
                        if (is_contiguous_subseq(t.edges, wp.path.edges)) present = true;
                    if (!present) ++obj;
                }
            }
            if (!found || obj > best_obj) {
                found = true;
                best_obj = obj;
                best_paths = chosen;
            }
        }

        void dfs() {
            check_time();
            if (done()) return;
            int first = -1;
            for (size_t e = 0; e < g.edges.size(); ++e)
                if (res[e] > 0) {
                    first = static_cast<int>(e);
                    break;
                }
            if (first < 0) {
                if (static_cast<int>(chosen.size()) == spec.k) complete();
                return;
            }
            int budget = spec.k - static_cast<int>(chosen.size());
            if (budget <= 0) return;
            if (residual_cut_bound() > budget) return;
            if (optimize && found && avoid_upper_bound() <= best_obj) return;

            std::vector<int> prefix;  // s -> edge.u
            extend_prefix(g.source, first, prefix);
        }

        void extend_prefix(NodeId at, int pivot, std::vector<int>& prefix) {
            NodeId a = g.edges[pivot].u;
            if (at == a) {
                std::vector<int> path = prefix;
                path.push_back(pivot);
                extend_suffix(g.edges[pivot].v, path);
                return;
            }
            for (int e : adj.out[at]) {
                if (res[e] <= 0 || pos[g.edges[e].v] > pos[a]) continue;
                prefix.push_back(e);
                extend_prefix(g.edges[e].v, pivot, prefix);
                prefix.pop_back();
                if (done()) return;
            }
        }

        void extend_suffix(NodeId at, std::vector<int>& path) {
            if (at == g.sink) {
                branch_weights(path);
                return;
            }
            for (int e : adj.out[at]) {
                if (res[e] <= 0) continue;
                path.push_back(e);
                extend_suffix(g.edges[e].v, path);
                path.pop_back();
                if (done()) return;
            }
        }

        void branch_weights(const std::vector<int>& path) {
            long long bottleneck = res[path[0]];
            for (int e : path) bottleneck = std::min(bottleneck, res[e]);
            for (long long w = bottleneck; w >= 1 && !done(); --w) {
                for (int e : path) res[e] -= w;
                chosen.push_back({EdgePath{path}, w});
                dfs();
                chosen.pop_back();
                for (int e : path) res[e] += w;
            }
        }
    };
};

}  // namespace mfdsafe
