#pragma once

#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "mfdsafe/mfd_model.hpp"

namespace mfdsafe {

// Explicit variable/constraint materialization of an MfdModelSpec, shared by
// the LP writer and the assignment checker.
struct LinTerm {
    std::string var;
    double coef;
};

struct LinRow {
    std::string name;
    std::vector<LinTerm> terms;
    char sense;  // 'L' (<=), 'G' (>=), 'E' (=)
    double rhs;
};

struct LinVar {
    std::string name;
    double lo;
    double hi;
    bool binary;
};

struct LinearModel {
    bool maximize = false;
    std::vector<LinTerm> objective;
    std::vector<LinVar> vars;
    std::vector<LinRow> rows;
};

inline std::string x_name(int e, int i) {
    return "x_e" + std::to_string(e) + "_p" + std::to_string(i);
}
inline std::string w_name(int i) { return "w_p" + std::to_string(i); }
inline std::string pi_name(int e, int i) {
    return "pi_e" + std::to_string(e) + "_p" + std::to_string(i);
}
inline std::string gamma_name(int t) { return "gamma_t" + std::to_string(t); }

inline LinearModel materialize(const MfdModelSpec& spec) {
    const FlowGraph& g = *spec.g;
    const double W = static_cast<double>(spec.w_max);
    LinearModel m;
    for (int i = 1; i <= spec.k; ++i) {
        for (size_t e = 0; e < g.edges.size(); ++e)
            m.vars.push_back({x_name(static_cast<int>(e), i), 0, 1, true});
        m.vars.push_back({w_name(i), 1, W, false});
        for (size_t e = 0; e < g.edges.size(); ++e)
            m.vars.push_back({pi_name(static_cast<int>(e), i), 0, W, false});
    }
    for (size_t t = 0; t < spec.tested.size(); ++t)
        m.vars.push_back({gamma_name(static_cast<int>(t)), 0, 1, true});

    Adjacency adj = make_adjacency(g);
    int c = 0;
    auto row_name = [&]() { return "c" + std::to_string(c++); };

    // Per-index unit path flow: in - out is 1 at the sink, -1 at the source.
    for (int i = 1; i <= spec.k; ++i) {
        for (NodeId v = 0; v < g.num_nodes; ++v) {
            if (adj.in[v].empty() && adj.out[v].empty()) continue;
            LinRow r;
            r.name = row_name();
            r.sense = 'E';
            r.rhs = v == g.sink ? 1 : (v == g.source ? -1 : 0);
            for (int e : adj.in[v]) r.terms.push_back({x_name(e, i), 1});
            for (int e : adj.out[v]) r.terms.push_back({x_name(e, i), -1});
            m.rows.push_back(std::move(r));
        }
    }
    // Superposition via linearized products: pi_uvi = x_uvi * w_i.
    for (size_t e = 0; e < g.edges.size(); ++e) {
        LinRow r;
        r.name = row_name();
        r.sense = 'E';
        r.rhs = static_cast<double>(g.edges[e].flow);
        for (int i = 1; i <= spec.k; ++i) r.terms.push_back({pi_name(static_cast<int>(e), i), 1});
        m.rows.push_back(std::move(r));
    }
    for (int i = 1; i <= spec.k; ++i) {
        for (size_t ez = 0; ez < g.edges.size(); ++ez) {
            int e = static_cast<int>(ez);
            m.rows.push_back({row_name(), {{pi_name(e, i), 1}, {x_name(e, i), -W}}, 'L', 0});
            m.rows.push_back({row_name(), {{pi_name(e, i), 1}, {w_name(i), -1}}, 'L', 0});
            m.rows.push_back({row_name(), {{pi_name(e, i), 1}, {w_name(i), -1}, {x_name(e, i), -W}}, 'G', -W});
        }
    }
    if (spec.symmetry_breaking)
        for (int i = 1; i < spec.k; ++i)
            m.rows.push_back({row_name(), {{w_name(i), 1}, {w_name(i + 1), -1}}, 'G', 0});

    // Avoidance: a tested path with edges e_1..e_{l-1} is present in path i
    // only when all of them are selected together.
    for (size_t t = 0; t < spec.tested.size(); ++t) {
        const auto& edges = spec.tested[t].edges;
        for (int i = 1; i <= spec.k; ++i) {
            LinRow r;
            r.name = row_name();
            r.sense = 'L';
            r.rhs = static_cast<double>(edges.size());  // l - 1, with l path nodes
            for (int e : edges) r.terms.push_back({x_name(e, i), 1});
            r.terms.push_back({gamma_name(static_cast<int>(t)), 1});
            m.rows.push_back(std::move(r));
        }
        m.maximize = true;
        m.objective.push_back({gamma_name(static_cast<int>(t)), 1});
    }
    return m;
}

inline std::string write_lp(const LinearModel& m, const std::string& comment = "") {
    std::ostringstream os;
    if (!comment.empty()) os << "\\ " << comment << "\n";
    auto put_terms = [&](const std::vector<LinTerm>& terms) {
        bool first = true;
        for (const auto& t : terms) {
            double c = t.coef;
            if (first) {
                if (c < 0) os << "- ";
                first = false;
            } else {
                os << (c < 0 ? " - " : " + ");
            }
            double a = std::abs(c);
            if (a != 1.0) os << a << " ";
            os << t.var;
        }
        if (first) os << "0 " << (terms.empty() ? "" : terms.front().var);
    };
    os << (m.maximize ? "Maximize" : "Minimize") << "\n obj: ";
    if (m.objective.empty())
        os << "0 " << m.vars.front().name;
    else
        put_terms(m.objective);
    os << "\nSubject To\n";
    for (const auto& r : m.rows) {
        os << " " << r.name << ": ";
        put_terms(r.terms);
        os << (r.sense == 'L' ? " <= " : r.sense == 'G' ? " >= " : " = ") << r.rhs << "\n";
    }
    os << "Bounds\n";
    for (const auto& v : m.vars)
        if (!v.binary) os << " " << v.lo << " <= " << v.name << " <= " << v.hi << "\n";
    os << "Binaries\n";
    for (const auto& v : m.vars)
        if (v.binary) os << " " << v.name << "\n";
    os << "Generals\n";
    for (const auto& v : m.vars)
        if (!v.binary) os << " " << v.name << "\n";
    os << "End\n";
    return os.str();
}

// Violated rows/bounds of an assignment, within an integer tolerance.
inline std::vector<std::string> check_assignment(const LinearModel& m,
                                                 const std::map<std::string, double>& values) {
    std::vector<std::string> bad;
    const double eps = 1e-6;
    auto value = [&](const std::string& name) {
        auto it = values.find(name);
        return it == values.end() ? 0.0 : it->second;
    };
    for (const auto& v : m.vars) {
        double x = value(v.name);
        if (x < v.lo - eps || x > v.hi + eps) bad.push_back("bound violated: " + v.name);
        if (std::abs(x - std::round(x)) > eps) bad.push_back("non-integral: " + v.name);
    }
    for (const auto& r : m.rows) {
        double lhs = 0;
        for (const auto& t : r.terms) lhs += t.coef * value(t.var);
        bool ok = r.sense == 'L' ? lhs <= r.rhs + eps
                                 : r.sense == 'G' ? lhs >= r.rhs - eps
                                                  : std::abs(lhs - r.rhs) <= eps;
        if (!ok) bad.push_back("row violated: " + r.name);
    }
    return bad;
}

// Full variable assignment implied by a structured outcome (x from the path
// supports, pi as the exact products). Lets tests assert linearization
// fidelity through the same rows the LP writer emits.
inline std::map<std::string, double> assignment_from_outcome(const MfdModelSpec& spec,
                                                             const SolverOutcome& out) {
    std::map<std::string, double> v;
    for (int i = 1; i <= spec.k; ++i) {
        const auto& wp = out.paths[i - 1];
        v[w_name(i)] = static_cast<double>(wp.weight);
        for (int e : wp.path.edges) {
            v[x_name(e, i)] = 1;
            v[pi_name(e, i)] = static_cast<double>(wp.weight);
        }
    }
    for (size_t t = 0; t < out.avoided.size(); ++t)
        v[gamma_name(static_cast<int>(t))] = out.avoided[t] ? 1 : 0;
    return v;
}

// Decodes a named assignment (e.g. parsed from a solver solution file) back
// into paths, weights and avoidance flags.
inline SolverOutcome decode_assignment(const MfdModelSpec& spec,
                                       const std::map<std::string, double>& values) {
    const FlowGraph& g = *spec.g;
    auto value = [&](const std::string& name) {
        auto it = values.find(name);
        return it == values.end() ? 0.0 : it->second;
    };
    auto order = topological_order(g);
    std::vector<int> pos(g.num_nodes);
    for (int p = 0; p < static_cast<int>(order.size()); ++p) pos[order[p]] = p;

    SolverOutcome out;
    out.status = SolveStatus::optimal;
    for (int i = 1; i <= spec.k; ++i) {
        std::vector<int> sel;
        for (size_t e = 0; e < g.edges.size(); ++e)
            if (value(x_name(static_cast<int>(e), i)) > 0.5) sel.push_back(static_cast<int>(e));
        std::sort(sel.begin(), sel.end(),
                  [&](int a, int b) { return pos[g.edges[a].u] < pos[g.edges[b].u]; });
        WeightedEdgePath wp;
        wp.path.edges = sel;
        wp.weight = static_cast<long long>(std::llround(value(w_name(i))));
        edge_path_nodes(g, sel);  // throws if the support does not chain
        out.paths.push_back(std::move(wp));
    }
    for (size_t t = 0; t < spec.tested.size(); ++t) {
        bool av = value(gamma_name(static_cast<int>(t))) > 0.5;
        out.avoided.push_back(av);
        if (av) ++out.objective;
    }
    return out;
}

}  // namespace mfdsafe
