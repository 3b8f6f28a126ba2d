#pragma once

#include <algorithm>
#include <set>
#include <vector>

#include "mfdsafe/flow_graph.hpp"
#include "mfdsafe/mfd_model.hpp"
#include "mfdsafe/path_utils.hpp"

namespace mfdsafe {

// Desk-scale brute force straight from the definitions. Deliberately
// structured unlike the solver backend: it lists every s-t path up front and
// searches over weight assignments, so it shares no search machinery with
// the implementation it checks.

struct OracleLimits {
    int max_edges = 12;
    long long max_outflow = 20;
    long long max_states = 1000000;
};

struct OracleLimitError : std::runtime_error {
    explicit OracleLimitError(const std::string& m) : std::runtime_error("oracle refusal: " + m) {}
};

struct DecompositionSet {
    int k = 0;  // minimum size
    std::vector<std::vector<WeightedEdgePath>> decompositions;  // all of size k
};

namespace oracle_detail {

inline std::vector<EdgePath> all_st_paths(const FlowGraph& g) {
    Adjacency adj = make_adjacency(g);
    std::vector<EdgePath> out;
    std::vector<int> cur;
    auto rec = [&](auto&& self, NodeId v) -> void {
        if (v == g.sink) {
            out.push_back(EdgePath{cur});
            return;
        }
        for (int e : adj.out[v]) {
            cur.push_back(e);
            self(self, g.edges[e].v);
            cur.pop_back();
        }
    };
    rec(rec, g.source);
    return out;
}

// Every flow decomposition with distinct support paths, as a weight
// assignment path -> positive weight. Decompositions that repeat a path are
// mergers of these and add no new support sets.
struct FdEnumeration {
    std::vector<EdgePath> paths;
    std::vector<std::vector<std::pair<int, long long>>> fds;  // (path index, weight)
};

inline FdEnumeration enumerate_fds(const FlowGraph& g, const OracleLimits& lim) {
    if (static_cast<int>(g.edges.size()) > lim.max_edges)
        throw OracleLimitError("more than " + std::to_string(lim.max_edges) + " edges");
    if (total_flow(g) > lim.max_outflow)
        throw OracleLimitError("source outflow above " + std::to_string(lim.max_outflow));

    FdEnumeration en;
    en.paths = all_st_paths(g);
    std::vector<long long> res(g.edges.size());
    for (size_t e = 0; e < g.edges.size(); ++e) res[e] = g.edges[e].flow;
    long long states = 0;

    auto covered_by_rest = [&](int from) {
        // Prune: some positive-residual edge on no remaining path.
        std::vector<char> reach(g.edges.size(), 0);
        for (size_t p = from; p < en.paths.size(); ++p)
            for (int e : en.paths[p].edges) reach[e] = 1;
        for (size_t e = 0; e < g.edges.size(); ++e)
            if (res[e] > 0 && !reach[e]) return false;
        return true;
    };

    std::vector<long long> assigned(en.paths.size(), 0);
    auto rec2 = [&](auto&& self, int idx) -> void {
        if (++states > lim.max_states) throw OracleLimitError("state cap exceeded");
        if (std::all_of(res.begin(), res.end(), [](long long f) { return f == 0; })) {
            std::vector<std::pair<int, long long>> fd;
            for (size_t p = 0; p < en.paths.size(); ++p)
                if (assigned[p] > 0) fd.push_back({static_cast<int>(p), assigned[p]});
            en.fds.push_back(std::move(fd));
            return;
        }
        if (idx >= static_cast<int>(en.paths.size())) return;
        if (!covered_by_rest(idx)) return;
        long long bottleneck = res[en.paths[idx].edges.front()];
        for (int e : en.paths[idx].edges) bottleneck = std::min(bottleneck, res[e]);
        for (long long w = 0; w <= bottleneck; ++w) {
            assigned[idx] = w;
            if (w > 0)
                for (int e : en.paths[idx].edges) res[e] -= w;
            self(self, idx + 1);
            if (w > 0)
                for (int e : en.paths[idx].edges) res[e] += w;
            assigned[idx] = 0;
        }
    };
    rec2(rec2, 0);
    return en;
}

inline bool subpath_of_fd(const FlowGraph&, const FdEnumeration& en, const std::vector<int>& edges,
                          const std::vector<std::pair<int, long long>>& fd) {
    for (const auto& [p, w] : fd)
        if (is_contiguous_subseq(edges, en.paths[p].edges)) return true;
    return false;
}

}  // namespace oracle_detail

// All flow decompositions (any size, distinct support paths).
inline oracle_detail::FdEnumeration oracle_enumerate_fds(const FlowGraph& g,
                                                         const OracleLimits& lim = {}) {
    return oracle_detail::enumerate_fds(g, lim);
}

// Exhaustive set of all minimum flow decompositions.
inline DecompositionSet enumerate_all_mfds(const FlowGraph& g, const OracleLimits& lim = {}) {
    auto en = oracle_detail::enumerate_fds(g, lim);
    if (en.fds.empty()) throw OracleLimitError("graph admits no decomposition");
    size_t kmin = en.fds.front().size();
    for (const auto& fd : en.fds) kmin = std::min(kmin, fd.size());
    DecompositionSet out;
    out.k = static_cast<int>(kmin);
    for (const auto& fd : en.fds) {
        if (fd.size() != kmin) continue;
        std::vector<WeightedEdgePath> d;
        for (const auto& [p, w] : fd) d.push_back({en.paths[p], w});
        std::sort(d.begin(), d.end(), [](const auto& a, const auto& b) {
            return std::tie(a.path.edges, a.weight) < std::tie(b.path.edges, b.weight);
        });
        out.decompositions.push_back(std::move(d));
    }
    std::sort(out.decompositions.begin(), out.decompositions.end(),
              [](const auto& a, const auto& b) {
                  return std::lexicographical_compare(
                      a.begin(), a.end(), b.begin(), b.end(), [](const auto& x, const auto& y) {
                          return std::tie(x.path.edges, x.weight) < std::tie(y.path.edges, y.weight);
                      });
              });
    out.decompositions.erase(std::unique(out.decompositions.begin(), out.decompositions.end(),
                                         [](const auto& a, const auto& b) {
                                             if (a.size() != b.size()) return false;
                                             for (size_t i = 0; i < a.size(); ++i)
                                                 if (!(a[i].path == b[i].path) ||
                                                     a[i].weight != b[i].weight)
                                                     return false;
                                             return true;
                                         }),
                             out.decompositions.end());
    return out;
}

// True iff the path occurs inside some member path of every MFD.
inline bool oracle_safe(const FlowGraph& g, const DecompositionSet& ds,
                        const std::vector<int>& edge_path) {
    for (const auto& d : ds.decompositions) {
        bool in = false;
        for (const auto& wp : d)
            if (is_contiguous_subseq(edge_path, wp.path.edges)) in = true;
        if (!in) return false;
    }
    return !edge_path.empty();
}

inline bool oracle_safe(const FlowGraph& g, const std::vector<NodeId>& nodes,
                        const OracleLimits& lim = {}) {
    auto ds = enumerate_all_mfds(g, lim);
    return oracle_safe(g, ds, node_path_edges(g, nodes));
}

// True iff the path occurs in every flow decomposition of any size.
inline bool oracle_fd_safe(const FlowGraph& g, const std::vector<NodeId>& nodes,
                           const OracleLimits& lim = {}) {
    auto en = oracle_detail::enumerate_fds(g, lim);
    auto edges = node_path_edges(g, nodes);
    for (const auto& fd : en.fds)
        if (!oracle_detail::subpath_of_fd(g, en, edges, fd)) return false;
    return !edges.empty();
}

// All maximal safe paths, scanning the subpaths of one witness decomposition
// (every safe path occurs in every decomposition, so one witness suffices).
inline std::vector<std::vector<NodeId>> oracle_maximal_safe(const FlowGraph& g,
                                                            const OracleLimits& lim = {}) {
    auto ds = enumerate_all_mfds(g, lim);
    const auto& witness = ds.decompositions.front();
    std::vector<std::vector<NodeId>> safe;
    for (const auto& wp : witness) {
        int m = static_cast<int>(wp.path.edges.size());
        for (int l = 0; l < m; ++l)
            for (int r = l + 1; r <= m; ++r) {
                std::vector<int> sub(wp.path.edges.begin() + l, wp.path.edges.begin() + r);
                if (oracle_safe(g, ds, sub)) safe.push_back(edge_path_nodes(g, sub));
            }
    }
    return postprocess_paths(std::move(safe));
}

}  // namespace mfdsafe
