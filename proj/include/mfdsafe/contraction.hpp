#pragma once

#include <vector>

#include "mfdsafe/flow_graph.hpp"

namespace mfdsafe {

// Residual graph after Y-to-V contraction. Parallel edges are allowed here;
// `expansion[e]` is the original node sequence the contracted edge replaces
// (an extended unitig). Node ids are shared with the original graph; nodes
// swallowed by the contraction simply have no incident edges left.
struct ContractedGraph {
    FlowGraph graph;
    std::vector<std::vector<NodeId>> expansion;  // per edge id
};

struct ContractionResult {
    ContractedGraph residual;
    std::vector<std::vector<NodeId>> trivial_safe;  // expansions of removed s-t edges
};

// Iterated Y-to-V contraction to fixpoint: an internal node with in-degree 1
// is merged into its predecessor, one with out-degree 1 into its successor.
// Source-to-sink edges of the fixpoint are then removed and their expansions
// reported as trivially safe.
inline ContractionResult y_to_v_contract(const FlowGraph& g) {
    struct CEdge {
        NodeId u, v;
        long long flow;
        std::vector<NodeId> exp;
        bool alive = true;
    };
    std::vector<CEdge> es;
    es.reserve(g.edges.size());
    for (const Edge& e : g.edges) es.push_back({e.u, e.v, e.flow, {e.u, e.v}, true});

    auto join = [](const std::vector<NodeId>& a, const std::vector<NodeId>& b) {
        std::vector<NodeId> r = a;
        r.insert(r.end(), b.begin() + 1, b.end());
        return r;
    };

    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<std::vector<int>> in(g.num_nodes), out(g.num_nodes);
        for (int i = 0; i < static_cast<int>(es.size()); ++i) {
            if (!es[i].alive) continue;
            out[es[i].u].push_back(i);
            in[es[i].v].push_back(i);
        }
        for (NodeId v = 0; v < g.num_nodes && !changed; ++v) {
            if (v == g.source || v == g.sink) continue;
            if (in[v].size() == 1 && !out[v].empty()) {
                int ein = in[v][0];
                for (int eo : out[v]) {
                    es.push_back({es[ein].u, es[eo].v, es[eo].flow,
                                  join(es[ein].exp, es[eo].exp), true});
                    es[eo].alive = false;
                }
                es[ein].alive = false;
                changed = true;
            } else if (out[v].size() == 1 && !in[v].empty()) {
                int eo = out[v][0];
                for (int ein : in[v]) {
                    es.push_back({es[ein].u, es[eo].v, es[ein].flow,
                                  join(es[ein].exp, es[eo].exp), true});
                    es[ein].alive = false;
                }
                es[eo].alive = false;
                changed = true;
            }
        }
    }

    ContractionResult res;
    res.residual.graph.id = g.id;
    res.residual.graph.num_nodes = g.num_nodes;
    res.residual.graph.source = g.source;
    res.residual.graph.sink = g.sink;
    res.residual.graph.labels = g.labels;
    for (const CEdge& e : es) {
        if (!e.alive) continue;
        if (e.u == g.source && e.v == g.sink) {
            res.trivial_safe.push_back(e.exp);
        } else {
            res.residual.graph.edges.push_back({e.u, e.v, e.flow});
            res.residual.expansion.push_back(e.exp);
        }
    }
    // Deterministic edge order regardless of rewrite order.
    std::vector<int> idx(res.residual.graph.edges.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
        return res.residual.expansion[a] < res.residual.expansion[b];
    });
    std::vector<Edge> edges2;
    std::vector<std::vector<NodeId>> exp2;
    for (int i : idx) {
        edges2.push_back(res.residual.graph.edges[i]);
        exp2.push_back(res.residual.expansion[i]);
    }
    res.residual.graph.edges = std::move(edges2);
    res.residual.expansion = std::move(exp2);
    std::sort(res.trivial_safe.begin(), res.trivial_safe.end());
    return res;
}

// Unique flow decomposition: nothing left once the trivial s-t edges are gone.
inline bool is_funnel(const ContractedGraph& cg) { return cg.graph.edges.empty(); }

// Expands a path given as contracted edge ids into an original node sequence,
// deduplicating the shared junction nodes.
inline std::vector<NodeId> expand_path(const ContractedGraph& cg, const std::vector<int>& edge_path) {
    std::vector<NodeId> out;
    for (size_t j = 0; j < edge_path.size(); ++j) {
        const auto& exp = cg.expansion[edge_path[j]];
        if (j == 0)
            out = exp;
        else {
            if (out.back() != exp.front())
                throw std::runtime_error("expand_path: not a path of the contracted graph");
            out.insert(out.end(), exp.begin() + 1, exp.end());
        }
    }
    return out;
}

// Single-node convenience: contracted node ids are original node ids.
inline std::vector<NodeId> expand_node(const ContractedGraph&, NodeId v) { return {v}; }

// Expansion plus the junction affixes forced by the contraction: every path
// reaching the first junction ends with the common suffix of the incoming
// expansions, and every path leaving the last junction starts with the common
// prefix of the outgoing ones, so a safe path keeps those stretches in
// original coordinates even though they sit inside neighboring contracted
// edges.
inline std::vector<NodeId> expand_path_maximal(const ContractedGraph& cg,
                                               const std::vector<int>& edge_path) {
    std::vector<NodeId> core = expand_path(cg, edge_path);
    if (core.empty()) return core;

    std::vector<NodeId> prefix;  // reversed common suffix of incoming expansions
    bool first = true;
    for (size_t e = 0; e < cg.graph.edges.size(); ++e) {
        if (cg.graph.edges[e].v != core.front()) continue;
        const auto& exp = cg.expansion[e];
        std::vector<NodeId> rev(exp.rbegin() + 1, exp.rend());
        if (first) {
            prefix = rev;
            first = false;
        } else {
            size_t n = 0;
            while (n < prefix.size() && n < rev.size() && prefix[n] == rev[n]) ++n;
            prefix.resize(n);
        }
    }
    if (first) prefix.clear();

    std::vector<NodeId> suffix;  // common prefix of outgoing expansions
    first = true;
    for (size_t e = 0; e < cg.graph.edges.size(); ++e) {
        if (cg.graph.edges[e].u != core.back()) continue;
        const auto& exp = cg.expansion[e];
        std::vector<NodeId> fwd(exp.begin() + 1, exp.end());
        if (first) {
            suffix = fwd;
            first = false;
        } else {
            size_t n = 0;
            while (n < suffix.size() && n < fwd.size() && suffix[n] == fwd[n]) ++n;
            suffix.resize(n);
        }
    }
    if (first) suffix.clear();

    std::vector<NodeId> out(prefix.rbegin(), prefix.rend());
    out.insert(out.end(), core.begin(), core.end());
    out.insert(out.end(), suffix.begin(), suffix.end());
    return out;
}

}  // namespace mfdsafe
