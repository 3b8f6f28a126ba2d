#pragma once

#include <limits>
#include <vector>

#include "mfdsafe/flow_graph.hpp"
#include "mfdsafe/path_utils.hpp"

namespace mfdsafe {

// O(1) excess-flow queries over subpaths of a fixed base path, from prefix
// sums of the flow diverted out of each internal node. Works on graphs with
// parallel edges since the path is given as edge ids.
class ExcessIndex {
  public:
    ExcessIndex(const FlowGraph& g, const std::vector<int>& edge_path)
        : edge_flow_(edge_path.size() + 1, 0), div_prefix_(edge_path.size() + 2, 0) {
        auto outflow = node_outflow(g);
        int m = static_cast<int>(edge_path.size());
        for (int j = 1; j <= m; ++j) edge_flow_[j] = g.edges[edge_path[j - 1]].flow;
        // Node position j (2..m) is internal when l < j < r; its path edge out
        // is e_j. div(j) = everything else leaving it.
        for (int j = 2; j <= m; ++j) {
            NodeId vj = g.edges[edge_path[j - 1]].u;
            div_prefix_[j] = div_prefix_[j - 1] + (outflow[vj] - edge_flow_[j]);
        }
        div_prefix_[m + 1] = div_prefix_[m];
        if (m >= 1) div_prefix_[1] = 0;
    }

    int num_nodes() const { return static_cast<int>(edge_flow_.size()); }  // m + 1

    // Node positions 1-based inclusive; requires l < r (at least one edge).
    long long excess(int l, int r) const {
        return edge_flow_[l] - (div_prefix_[r - 1] - div_prefix_[l]);
    }

  private:
    std::vector<long long> edge_flow_;
    std::vector<long long> div_prefix_;
};

inline long long excess_flow(const FlowGraph& g, const std::vector<int>& edge_path) {
    if (edge_path.empty()) throw std::invalid_argument("excess flow needs at least one edge");
    ExcessIndex ix(g, edge_path);
    return ix.excess(1, static_cast<int>(edge_path.size()) + 1);
}

inline long long excess_flow_nodes(const FlowGraph& g, const std::vector<NodeId>& nodes) {
    return excess_flow(g, node_path_edges(g, nodes));
}

inline bool is_fd_safe(const FlowGraph& g, const std::vector<int>& edge_path) {
    return excess_flow(g, edge_path) > 0;
}

inline bool is_fd_safe_nodes(const FlowGraph& g, const std::vector<NodeId>& nodes) {
    return excess_flow_nodes(g, nodes) > 0;
}

// Maximal positive-excess subpaths (l,r node positions) of a base path,
// via the two-pointer sweep with O(1) incremental excess.
inline std::vector<std::pair<int, int>> max_fd_safe_subpaths(const FlowGraph& g,
                                                             const std::vector<int>& edge_path) {
    std::vector<std::pair<int, int>> out;
    if (edge_path.empty()) return out;
    ExcessIndex ix(g, edge_path);
    int m = static_cast<int>(edge_path.size()) + 1;
    int l = 1, r = 2;
    while (true) {
        while (r < m && ix.excess(l, r + 1) > 0) ++r;
        out.push_back({l, r});
        if (r == m) break;
        // Single edges have positive excess, so a valid l always exists.
        ++r;
        while (ix.excess(l, r) <= 0) ++l;
    }
    return out;
}

// Greedy flow peeling: repeatedly remove the widest (maximum bottleneck)
// s-t path. Deterministic; yields some flow decomposition as edge-id paths.
inline std::vector<std::pair<std::vector<int>, long long>> greedy_peel(const FlowGraph& g) {
    std::vector<long long> res(g.edges.size());
    for (size_t e = 0; e < g.edges.size(); ++e) res[e] = g.edges[e].flow;
    Adjacency adj = make_adjacency(g);
    auto order = topological_order(g);

    std::vector<std::pair<std::vector<int>, long long>> paths;
    while (true) {
        bool any = false;
        for (long long f : res)
            if (f > 0) any = true;
        if (!any) break;
        const long long INF = std::numeric_limits<long long>::max();
        std::vector<long long> best(g.num_nodes, 0);
        std::vector<int> via(g.num_nodes, -1);
        best[g.source] = INF;
        for (NodeId v : order) {
            if (best[v] == 0) continue;
            for (int e : adj.out[v]) {
                if (res[e] <= 0) continue;
                long long w = std::min(best[v], res[e]);
                NodeId to = g.edges[e].v;
                if (w > best[to]) {
                    best[to] = w;
                    via[to] = e;
                }
            }
        }
        if (best[g.sink] <= 0) throw std::runtime_error("greedy_peel: no augmenting path");
        std::vector<int> path;
        for (NodeId v = g.sink; v != g.source; v = g.edges[via[v]].u) path.push_back(via[v]);
        std::reverse(path.begin(), path.end());
        long long w = best[g.sink];
        for (int e : path) res[e] -= w;
        paths.push_back({std::move(path), w});
    }
    return paths;
}

// All maximal paths safe for every flow decomposition, computed by the
// two-pointer excess sweep over the paths of one (greedy) decomposition.
// Output in original node ids, duplicate- and containment-free.
inline std::vector<std::vector<NodeId>> safe_flow_maximal_paths(const FlowGraph& g) {
    std::vector<std::vector<NodeId>> found;
    for (const auto& [edges, w] : greedy_peel(g)) {
        auto nodes = edge_path_nodes(g, edges);
        for (auto [l, r] : max_fd_safe_subpaths(g, edges))
            found.emplace_back(nodes.begin() + (l - 1), nodes.begin() + r);
    }
    return postprocess_paths(std::move(found));
}

}  // namespace mfdsafe
