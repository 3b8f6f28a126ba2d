#pragma once

#include <algorithm>
#include <vector>

#include "mfdsafe/flow_graph.hpp"

namespace mfdsafe {

inline std::vector<NodeId> edge_path_nodes(const FlowGraph& g, const std::vector<int>& edges) {
    std::vector<NodeId> nodes;
    if (edges.empty()) return nodes;
    nodes.push_back(g.edges[edges[0]].u);
    for (int e : edges) {
        if (g.edges[e].u != nodes.back())
            throw std::runtime_error("edge_path_nodes: edges do not chain");
        nodes.push_back(g.edges[e].v);
    }
    return nodes;
}

// Resolves a node sequence to edge ids; only valid without parallel edges.
inline std::vector<int> node_path_edges(const FlowGraph& g, const std::vector<NodeId>& nodes) {
    std::vector<int> edges;
    for (size_t j = 0; j + 1 < nodes.size(); ++j) {
        int e = find_edge(g, nodes[j], nodes[j + 1]);
        if (e < 0) throw std::runtime_error("node_path_edges: not a path of the graph");
        edges.push_back(e);
    }
    return edges;
}

// True iff `inner` occurs as a contiguous subsequence of `outer`.
template <typename T>
bool is_contiguous_subseq(const std::vector<T>& inner, const std::vector<T>& outer) {
    if (inner.empty()) return true;
    if (inner.size() > outer.size()) return false;
    for (size_t s = 0; s + inner.size() <= outer.size(); ++s)
        if (std::equal(inner.begin(), inner.end(), outer.begin() + s)) return true;
    return false;
}

// Removes duplicates and paths contained in another path; stable deterministic
// order: first node ascending, then length descending, then lexicographic.
inline std::vector<std::vector<NodeId>> postprocess_paths(std::vector<std::vector<NodeId>> paths) {
    std::sort(paths.begin(), paths.end(), [](const auto& a, const auto& b) {
        if (a.front() != b.front()) return a.front() < b.front();
        if (a.size() != b.size()) return a.size() > b.size();
        return a < b;
    });
    paths.erase(std::unique(paths.begin(), paths.end()), paths.end());
    std::vector<std::vector<NodeId>> kept;
    for (const auto& p : paths) {
        bool contained = false;
        for (const auto& q : paths) {
            if (&p == &q || p.size() > q.size()) continue;
            if (p == q) continue;  // duplicates already removed; equal pointers differ
            if (is_contiguous_subseq(p, q)) {
                contained = true;
                break;
            }
        }
        if (!contained) kept.push_back(p);
    }
    return kept;
}

}  // namespace mfdsafe
