#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mfdsafe/common.hpp"

namespace mfdsafe {

using NodeId = int;

struct Edge {
    NodeId u;
    NodeId v;
    long long flow;
};

// A DAG with unique source/sink and positive integer edge flows obeying
// conservation at internal nodes. Node ids are dense 0..num_nodes-1;
// `labels` maps them back to the ids used in the input file.
// Immutable after construction.
struct FlowGraph {
    std::string id;
    int num_nodes = 0;
    std::vector<Edge> edges;
    NodeId source = -1;
    NodeId sink = -1;
    std::vector<long long> labels;  // dense id -> original label

    long long label_of(NodeId v) const {
        return v >= 0 && v < static_cast<int>(labels.size()) ? labels[v] : v;
    }
};

struct WeightedPath {
    std::vector<NodeId> nodes;
    long long weight = 0;
};

struct Decomposition {
    std::vector<WeightedPath> paths;
    int size() const { return static_cast<int>(paths.size()); }
};

// Ground-truth paths keep the labels from the truth file; they are matched
// against a graph (and remapped) only when evaluated.
struct GroundTruth {
    std::string graph_id;
    std::vector<long long> weights;
    std::vector<std::vector<long long>> label_paths;
};

struct Adjacency {
    std::vector<std::vector<int>> out;  // node -> edge ids
    std::vector<std::vector<int>> in;
};

inline Adjacency make_adjacency(const FlowGraph& g) {
    Adjacency a;
    a.out.resize(g.num_nodes);
    a.in.resize(g.num_nodes);
    for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
        a.out[g.edges[e].u].push_back(e);
        a.in[g.edges[e].v].push_back(e);
    }
    return a;
}

inline std::vector<long long> node_outflow(const FlowGraph& g) {
    std::vector<long long> out(g.num_nodes, 0);
    for (const Edge& e : g.edges) out[e.u] += e.flow;
    return out;
}

inline std::vector<long long> node_inflow(const FlowGraph& g) {
    std::vector<long long> in(g.num_nodes, 0);
    for (const Edge& e : g.edges) in[e.v] += e.flow;
    return in;
}

inline long long total_flow(const FlowGraph& g) {
    long long t = 0;
    for (const Edge& e : g.edges)
        if (e.u == g.source) t += e.flow;
    return t;
}

// Finds the unique edge (u,v); -1 if absent. Only meaningful on graphs
// without parallel edges (all parsed inputs).
inline int find_edge(const FlowGraph& g, NodeId u, NodeId v) {
    for (int e = 0; e < static_cast<int>(g.edges.size()); ++e)
        if (g.edges[e].u == u && g.edges[e].v == v) return e;
    return -1;
}

// All invariant violations of `g`, as human-readable strings. Empty iff valid.
// When `allow_parallel` is set (contracted residual graphs) the
// no-parallel-edge rule is skipped.
inline std::vector<std::string> validate(const FlowGraph& g, bool allow_parallel = false) {
    std::vector<std::string> bad;
    if (g.num_nodes < 2) {
        bad.push_back("graph has fewer than 2 nodes");
        return bad;
    }
    std::set<std::pair<NodeId, NodeId>> seen;
    for (const Edge& e : g.edges) {
        if (e.u < 0 || e.u >= g.num_nodes || e.v < 0 || e.v >= g.num_nodes) {
            bad.push_back("edge endpoint out of range");
            return bad;
        }
        if (e.u == e.v) bad.push_back("self-loop at node " + std::to_string(g.label_of(e.u)));
        if (e.flow <= 0)
            bad.push_back("non-positive flow on edge (" + std::to_string(g.label_of(e.u)) +
                          "," + std::to_string(g.label_of(e.v)) + ")");
        if (!allow_parallel && !seen.insert({e.u, e.v}).second)
            bad.push_back("parallel edge (" + std::to_string(g.label_of(e.u)) + "," +
                          std::to_string(g.label_of(e.v)) + ")");
    }
    std::vector<int> indeg(g.num_nodes, 0), outdeg(g.num_nodes, 0);
    for (const Edge& e : g.edges) {
        ++outdeg[e.u];
        ++indeg[e.v];
    }
    std::vector<NodeId> sources, sinks;
    for (NodeId v = 0; v < g.num_nodes; ++v) {
        if (indeg[v] == 0 && outdeg[v] > 0) sources.push_back(v);
        if (outdeg[v] == 0 && indeg[v] > 0) sinks.push_back(v);
        // Contracted residuals legitimately keep swallowed (isolated) nodes.
        if (indeg[v] == 0 && outdeg[v] == 0 && !allow_parallel)
            bad.push_back("isolated node " + std::to_string(g.label_of(v)));
    }
    if (sources.size() != 1)
        bad.push_back("expected exactly one source, found " + std::to_string(sources.size()));
    if (sinks.size() != 1)
        bad.push_back("expected exactly one sink, found " + std::to_string(sinks.size()));
    if (sources.size() == 1 && g.source != sources[0])
        bad.push_back("source field does not match in-degree-0 node");
    if (sinks.size() == 1 && g.sink != sinks[0]) bad.push_back("sink field does not match out-degree-0 node");

    // Acyclicity via Kahn.
    {
        std::vector<int> deg = indeg;
        std::queue<NodeId> q;
        for (NodeId v = 0; v < g.num_nodes; ++v)
            if (deg[v] == 0) q.push(v);
        Adjacency adj = make_adjacency(g);
        int seen_nodes = 0;
        while (!q.empty()) {
            NodeId v = q.front();
            q.pop();
            ++seen_nodes;
            for (int e : adj.out[v])
                if (--deg[g.edges[e].v] == 0) q.push(g.edges[e].v);
        }
        if (seen_nodes != g.num_nodes) bad.push_back("graph contains a cycle");
    }
    if (sources.size() == 1 && sinks.size() == 1) {
        auto in = node_inflow(g);
        auto out = node_outflow(g);
        for (NodeId v = 0; v < g.num_nodes; ++v) {
            if (v == sources[0] || v == sinks[0]) continue;
            if (in[v] != out[v])
                bad.push_back("flow conservation violated at node " +
                              std::to_string(g.label_of(v)) + " (" + std::to_string(in[v]) +
                              " in vs " + std::to_string(out[v]) + " out)");
        }
    }
    return bad;
}

// Topological order; ties broken by ascending node id.
inline std::vector<NodeId> topological_order(const FlowGraph& g) {
    std::vector<int> indeg(g.num_nodes, 0);
    Adjacency adj = make_adjacency(g);
    for (const Edge& e : g.edges) ++indeg[e.v];
    std::priority_queue<NodeId, std::vector<NodeId>, std::greater<NodeId>> q;
    for (NodeId v = 0; v < g.num_nodes; ++v)
        if (indeg[v] == 0) q.push(v);
    std::vector<NodeId> order;
    order.reserve(g.num_nodes);
    while (!q.empty()) {
        NodeId v = q.top();
        q.pop();
        order.push_back(v);
        for (int e : adj.out[v])
            if (--indeg[g.edges[e].v] == 0) q.push(g.edges[e].v);
    }
    if (static_cast<int>(order.size()) != g.num_nodes)
        throw std::runtime_error("topological_order: graph contains a cycle");
    return order;
}

// True iff the weighted paths superpose exactly to the edge flows and every
// path is a node-simple s-t path of g.
inline bool verify_decomposition(const FlowGraph& g, const Decomposition& d,
                                 std::string* why = nullptr) {
    auto fail = [&](const std::string& m) {
        if (why) *why = m;
        return false;
    };
    std::map<std::pair<NodeId, NodeId>, long long> covered;
    for (const WeightedPath& p : d.paths) {
        if (p.weight <= 0) return fail("non-positive path weight");
        if (p.nodes.size() < 2) return fail("path with fewer than 2 nodes");
        if (p.nodes.front() != g.source || p.nodes.back() != g.sink)
            return fail("path endpoints are not source/sink");
        std::set<NodeId> seen(p.nodes.begin(), p.nodes.end());
        if (seen.size() != p.nodes.size()) return fail("path repeats a node");
        for (size_t j = 0; j + 1 < p.nodes.size(); ++j) {
            if (find_edge(g, p.nodes[j], p.nodes[j + 1]) < 0) return fail("path uses a missing edge");
            covered[{p.nodes[j], p.nodes[j + 1]}] += p.weight;
        }
    }
    for (const Edge& e : g.edges)
        if (covered[{e.u, e.v}] != e.flow)
            return fail("superposition mismatch on edge (" + std::to_string(g.label_of(e.u)) +
                        "," + std::to_string(g.label_of(e.v)) + ")");
    if (covered.size() != g.edges.size()) return fail("path uses a missing edge");
    return true;
}

namespace detail {

inline bool parse_exact_integer(const std::string& tok, long long* out) {
    try {
        size_t pos = 0;
        if (tok.find_first_of(".eE") != std::string::npos) {
            double d = std::stod(tok, &pos);
            if (pos != tok.size()) return false;
            double r = std::round(d);
            if (std::abs(d - r) > 1e-9 || std::abs(r) > 9e15) return false;
            *out = static_cast<long long>(r);
            return true;
        }
        long long v = std::stoll(tok, &pos);
        if (pos != tok.size()) return false;
        *out = v;
        return true;
    } catch (...) {
        return false;
    }
}

inline std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> toks;
    std::istringstream is(s);
    std::string t;
    while (is >> t) toks.push_back(t);
    return toks;
}

inline std::string strip(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace detail

// One record of a corpus file; `graph` is absent when the record failed to
// parse or validate, with the reason in `error`.
struct CorpusRecord {
    std::string id;
    std::optional<FlowGraph> graph;
    std::string error;
    int line = 0;  // line of the record header
};

// Catfish-style corpus: `# <graph_id>` / `<num_nodes>` / `<u> <v> <flow>`*.
inline std::vector<CorpusRecord> parse_graph_corpus(std::istream& in) {
    std::vector<CorpusRecord> records;
    std::string line;
    int lineno = 0;

    struct Raw {
        std::string id;
        int header_line = 0;
        bool have_count = false;
        long long declared_nodes = 0;
        std::vector<std::array<long long, 3>> edges;  // label u, label v, flow
        std::string error;
        int error_line = 0;
    };
    std::vector<Raw> raws;
    Raw* cur = nullptr;

    while (std::getline(in, line)) {
        ++lineno;
        std::string s = detail::strip(line);
        if (s.empty()) continue;
        if (s[0] == '#') {
            raws.push_back(Raw{});
            cur = &raws.back();
            cur->id = detail::strip(s.substr(1));
            cur->header_line = lineno;
            continue;
        }
        if (!cur) {
            records.push_back({"", std::nullopt, "line " + std::to_string(lineno) +
                                                     ": data before first '#' record header",
                               lineno});
            return records;
        }
        if (!cur->error.empty()) continue;
        auto toks = detail::split_ws(s);
        if (!cur->have_count) {
            long long n;
            if (toks.size() != 1 || !detail::parse_exact_integer(toks[0], &n) || n < 0) {
                cur->error = "line " + std::to_string(lineno) + ": expected node count";
                continue;
            }
            cur->declared_nodes = n;
            cur->have_count = true;
            continue;
        }
        long long u, v, f;
        if (toks.size() != 3 || !detail::parse_exact_integer(toks[0], &u) ||
            !detail::parse_exact_integer(toks[1], &v) || !detail::parse_exact_integer(toks[2], &f)) {
            cur->error = "line " + std::to_string(lineno) + ": malformed edge line";
            continue;
        }
        if (u < 0 || v < 0) {
            cur->error = "line " + std::to_string(lineno) + ": negative node id";
            continue;
        }
        cur->edges.push_back({u, v, f});
    }

    for (const Raw& r : raws) {
        CorpusRecord rec;
        rec.id = r.id;
        rec.line = r.header_line;
        if (!r.error.empty()) {
            rec.error = r.error;
            records.push_back(std::move(rec));
            continue;
        }
        // Dense remap, ascending label order.
        std::set<long long> labels;
        for (auto& e : r.edges) {
            labels.insert(e[0]);
            labels.insert(e[1]);
        }
        FlowGraph g;
        g.id = r.id;
        g.labels.assign(labels.begin(), labels.end());
        g.num_nodes = static_cast<int>(g.labels.size());
        std::map<long long, NodeId> dense;
        for (int i = 0; i < g.num_nodes; ++i) dense[g.labels[i]] = i;
        for (auto& e : r.edges) g.edges.push_back({dense[e[0]], dense[e[1]], e[2]});
        std::vector<int> indeg(g.num_nodes, 0), outdeg(g.num_nodes, 0);
        for (const Edge& e : g.edges) {
            ++outdeg[e.u];
            ++indeg[e.v];
        }
        for (NodeId v = 0; v < g.num_nodes; ++v) {
            if (indeg[v] == 0 && outdeg[v] > 0) g.source = v;
            if (outdeg[v] == 0 && indeg[v] > 0) g.sink = v;
        }
        auto bad = validate(g);
        if (!bad.empty()) {
            rec.error = bad.front();
            records.push_back(std::move(rec));
            continue;
        }
        rec.graph = std::move(g);
        records.push_back(std::move(rec));
    }
    return records;
}

// Parses a corpus, throwing on the first bad record. Convenience for tests
// and hand-built inputs; batch runs use parse_graph_corpus and skip.
inline std::vector<FlowGraph> parse_graphs_or_throw(std::istream& in) {
    std::vector<FlowGraph> out;
    for (auto& rec : parse_graph_corpus(in)) {
        if (!rec.graph) throw ParseError(rec.line, "record '" + rec.id + "': " + rec.error);
        out.push_back(std::move(*rec.graph));
    }
    return out;
}

inline std::vector<FlowGraph> parse_graphs_or_throw(const std::string& text) {
    std::istringstream is(text);
    return parse_graphs_or_throw(is);
}

// Truth corpus: records headed by `# <graph_id>`, lines
// `<weight>: <v1> ... <vm>` (the colon is optional).
inline std::vector<GroundTruth> parse_truth_corpus(std::istream& in) {
    std::vector<GroundTruth> out;
    std::string line;
    int lineno = 0;
    GroundTruth* cur = nullptr;
    while (std::getline(in, line)) {
        ++lineno;
        std::string s = detail::strip(line);
        if (s.empty()) continue;
        if (s[0] == '#') {
            out.push_back(GroundTruth{});
            cur = &out.back();
            cur->graph_id = detail::strip(s.substr(1));
            continue;
        }
        if (!cur) throw ParseError(lineno, "data before first '#' record header");
        for (char& c : s)
            if (c == ':') c = ' ';
        auto toks = detail::split_ws(s);
        if (toks.size() < 3) throw ParseError(lineno, "expected weight and at least two nodes");
        std::vector<long long> vals;
        for (auto& t : toks) {
            long long v;
            if (!detail::parse_exact_integer(t, &v)) throw ParseError(lineno, "malformed number '" + t + "'");
            vals.push_back(v);
        }
        if (vals[0] <= 0) throw ParseError(lineno, "non-positive path weight");
        cur->weights.push_back(vals[0]);
        cur->label_paths.emplace_back(vals.begin() + 1, vals.end());
    }
    return out;
}

inline std::vector<GroundTruth> parse_truth_corpus(const std::string& text) {
    std::istringstream is(text);
    return parse_truth_corpus(is);
}

// Remaps a ground-truth record onto its graph and checks it forms a valid
// decomposition. Throws on unknown labels or a superposition mismatch.
inline Decomposition truth_as_decomposition(const FlowGraph& g, const GroundTruth& t) {
    std::map<long long, NodeId> dense;
    for (int i = 0; i < g.num_nodes; ++i) dense[g.labels[i]] = i;
    Decomposition d;
    for (size_t i = 0; i < t.label_paths.size(); ++i) {
        WeightedPath p;
        p.weight = t.weights[i];
        for (long long lab : t.label_paths[i]) {
            auto it = dense.find(lab);
            if (it == dense.end())
                throw std::runtime_error("truth path node " + std::to_string(lab) +
                                         " not in graph " + g.id);
            p.nodes.push_back(it->second);
        }
        for (size_t j = 0; j + 1 < p.nodes.size(); ++j)
            if (find_edge(g, p.nodes[j], p.nodes[j + 1]) < 0)
                throw std::runtime_error("truth path edge not in graph " + g.id);
        d.paths.push_back(std::move(p));
    }
    std::string why;
    if (!verify_decomposition(g, d, &why))
        throw std::runtime_error("truth for " + g.id + " is not a decomposition: " + why);
    return d;
}

// Canonical text form: header, node count, edges sorted by dense (u,v),
// printed with original labels.
inline std::string serialize(const FlowGraph& g) {
    std::ostringstream os;
    os << "# " << g.id << "\n" << g.num_nodes << "\n";
    std::vector<Edge> es = g.edges;
    std::sort(es.begin(), es.end(), [](const Edge& a, const Edge& b) {
        return std::tie(a.u, a.v, a.flow) < std::tie(b.u, b.v, b.flow);
    });
    for (const Edge& e : es)
        os << g.label_of(e.u) << " " << g.label_of(e.v) << " " << e.flow << "\n";
    return os.str();
}

}  // namespace mfdsafe
