#pragma once

#include <random>
#include <sstream>
#include <string>

#include "mfdsafe/flow_graph.hpp"
#include "mfdsafe/solver_builtin.hpp"

namespace testutil {

using namespace mfdsafe;

// Builds a graph from corpus text; throws if it fails validation.
inline FlowGraph make_graph(const std::string& id, const std::string& edge_lines) {
    std::ostringstream os;
    os << "# " << id << "\n0\n" << edge_lines;
    return parse_graphs_or_throw(os.str()).front();
}

// s -> a -> t funnel: contracts to nothing.
inline FlowGraph funnel() { return make_graph("funnel", "0 1 5\n1 2 5\n"); }

// Diamond s->{a,b}->t with flows 3/4: k = 2, every edge in every MFD.
inline FlowGraph diamond() {
    return make_graph("diamond", "0 1 3\n0 2 4\n1 3 3\n2 3 4\n");
}

// Two-in two-out crossing node: four s-t paths, k = 2, middle edges unsafe
// across MFD choices when flows permit both pairings.
inline FlowGraph crossing() {
    return make_graph("crossing",
                      "0 1 2\n0 2 2\n1 3 2\n2 3 2\n3 4 4\n4 5 2\n4 6 2\n5 7 2\n6 7 2\n");
}

// Crossing with skewed flows 1/2: the unique MFD keeps the weight-1 path
// intact, but a size-3 FD avoids its middle, so MFD-safety is strictly
// stronger than FD-safety here.
inline FlowGraph skew_crossing() {
    return make_graph("skew",
                      "0 1 1\n0 2 2\n1 3 1\n2 3 2\n3 4 3\n4 5 1\n4 6 2\n5 7 1\n6 7 2\n");
}

// `m` crossing gadgets in series, total flow 4; long base paths with many
// unsafe middle subpaths, so enumeration strategies separate in call counts.
inline FlowGraph crossing_chain(int m) {
    std::ostringstream os;
    for (int i = 0; i < m; ++i) {
        int b = 7 * i;  // gadget occupies nodes b..b+7, sharing b+7 with the next
        os << b << " " << b + 1 << " 2\n" << b << " " << b + 2 << " 2\n"
           << b + 1 << " " << b + 3 << " 2\n" << b + 2 << " " << b + 3 << " 2\n"
           << b + 3 << " " << b + 4 << " 4\n"
           << b + 4 << " " << b + 5 << " 2\n" << b + 4 << " " << b + 6 << " 2\n"
           << b + 5 << " " << b + 7 << " 2\n" << b + 6 << " " << b + 7 << " 2\n";
    }
    return make_graph("chain" + std::to_string(m), os.str());
}

// Skewed crossing gadgets in series, flows 1/2: unique MFD whose full
// solution paths are safe while the FD-safe windows stay short, so safety
// must be certified by extension well past the excess-flow evidence.
inline FlowGraph skew_chain(int m) {
    std::ostringstream os;
    for (int i = 0; i < m; ++i) {
        int b = 7 * i;
        os << b << " " << b + 1 << " 1\n" << b << " " << b + 2 << " 2\n"
           << b + 1 << " " << b + 3 << " 1\n" << b + 2 << " " << b + 3 << " 2\n"
           << b + 3 << " " << b + 4 << " 3\n"
           << b + 4 << " " << b + 5 << " 1\n" << b + 4 << " " << b + 6 << " 2\n"
           << b + 5 << " " << b + 7 << " 1\n" << b + 6 << " " << b + 7 << " 2\n";
    }
    return make_graph("skewchain" + std::to_string(m), os.str());
}

// Excess-flow worked example: s->a 5, a->t 3, a->b 2, b->t 2.
inline FlowGraph excess_example() {
    return make_graph("excess", "0 1 5\n1 3 3\n1 2 2\n2 3 2\n");
}

// Superposes `npaths` random s-t paths over an ordered node set, so flows
// conserve by construction and the DAG has one source and one sink.
inline FlowGraph random_graph(std::mt19937& rng, const std::string& id, int max_nodes = 8,
                              int max_paths = 4, int max_weight = 4) {
    std::uniform_int_distribution<int> nd(4, max_nodes);
    int n = nd(rng);
    std::uniform_int_distribution<int> pd(1, max_paths);
    std::uniform_int_distribution<int> wd(1, max_weight);
    int npaths = pd(rng);
    std::map<std::pair<int, int>, long long> flow;
    for (int p = 0; p < npaths; ++p) {
        std::vector<int> nodes{0};
        for (int v = 1; v < n - 1; ++v)
            if (std::uniform_int_distribution<int>(0, 1)(rng)) nodes.push_back(v);
        nodes.push_back(n - 1);
        long long w = wd(rng);
        for (size_t j = 0; j + 1 < nodes.size(); ++j) flow[{nodes[j], nodes[j + 1]}] += w;
    }
    std::ostringstream os;
    for (auto& [e, f] : flow) os << e.first << " " << e.second << " " << f << "\n";
    return make_graph(id, os.str());
}

// Random graph within the oracle's desk-scale limits.
inline FlowGraph random_small_graph(std::mt19937& rng, const std::string& id) {
    for (;;) {
        FlowGraph g = random_graph(rng, id, 7, 3, 3);
        if (g.edges.size() <= 12 && total_flow(g) <= 20) return g;
    }
}

inline std::vector<std::vector<NodeId>> label_to_dense(const FlowGraph& g,
                                                       const std::vector<std::vector<long long>>& lp) {
    std::map<long long, NodeId> dense;
    for (int i = 0; i < g.num_nodes; ++i) dense[g.labels[i]] = i;
    std::vector<std::vector<NodeId>> out;
    for (auto& p : lp) {
        std::vector<NodeId> q;
        for (long long v : p) q.push_back(dense.at(v));
        out.push_back(std::move(q));
    }
    return out;
}

inline std::vector<std::vector<long long>> dense_to_label(const FlowGraph& g,
                                                          const std::vector<std::vector<NodeId>>& dp) {
    std::vector<std::vector<long long>> out;
    for (auto& p : dp) {
        std::vector<long long> q;
        for (NodeId v : p) q.push_back(g.label_of(v));
        out.push_back(std::move(q));
    }
    return out;
}

}  // namespace testutil
