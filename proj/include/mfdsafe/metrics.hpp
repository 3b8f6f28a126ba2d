#pragma once

#include <string>
#include <vector>

#include "mfdsafe/path_utils.hpp"

namespace mfdsafe {

// Node/exon-based quality metrics. Paths here are node-label sequences as
// they appear in the safe-paths and truth files; lengths count nodes.

using LabelPath = std::vector<long long>;

enum class PrecisionMode {
    length_weighted,  // total correct length over total reported length
    per_path_mean     // unweighted mean of per-path 0/1 correctness
};

inline bool reported_path_correct(const LabelPath& reported, const std::vector<LabelPath>& truth) {
    for (const auto& t : truth)
        if (is_contiguous_subseq(reported, t)) return true;
    return false;
}

// Empty reported set scores 1 by convention (flagged by the caller via
// num_reported); coverage carries the penalty.
inline double weighted_precision(const std::vector<LabelPath>& reported,
                                 const std::vector<LabelPath>& truth,
                                 PrecisionMode mode = PrecisionMode::length_weighted) {
    if (reported.empty()) return 1.0;
    if (mode == PrecisionMode::per_path_mean) {
        double correct = 0;
        for (const auto& r : reported)
            if (reported_path_correct(r, truth)) correct += 1;
        return correct / static_cast<double>(reported.size());
    }
    long long total = 0, correct = 0;
    for (const auto& r : reported) {
        total += static_cast<long long>(r.size());
        if (reported_path_correct(r, truth)) correct += static_cast<long long>(r.size());
    }
    return total == 0 ? 1.0 : static_cast<double>(correct) / static_cast<double>(total);
}

// Longest segment of the truth path matching a contiguous segment of some
// reported path, divided by the truth path length (in nodes).
inline double max_coverage(const LabelPath& truth_path, const std::vector<LabelPath>& reported) {
    if (truth_path.empty()) return 0.0;
    size_t best = 0;
    int n = static_cast<int>(truth_path.size());
    for (int l = 0; l < n; ++l)
        for (int r = n; r - l > static_cast<int>(best); --r) {
            LabelPath seg(truth_path.begin() + l, truth_path.begin() + r);
            for (const auto& rep : reported)
                if (is_contiguous_subseq(seg, rep)) {
                    best = std::max(best, seg.size());
                    break;
                }
        }
    return static_cast<double>(best) / static_cast<double>(n);
}

struct GraphMetrics {
    std::string graph_id;
    double weighted_precision = 0;
    double max_coverage = 0;
    double f_score = 0;
    int t = 0;                   // number of ground-truth paths
    bool empty_report = false;   // precision-by-convention flag
};

inline double harmonic_mean(double a, double b) { return a + b == 0 ? 0.0 : 2 * a * b / (a + b); }

inline GraphMetrics graph_metrics(const std::string& graph_id,
                                  const std::vector<LabelPath>& reported,
                                  const std::vector<LabelPath>& truth,
                                  PrecisionMode mode = PrecisionMode::length_weighted) {
    GraphMetrics m;
    m.graph_id = graph_id;
    m.t = static_cast<int>(truth.size());
    m.empty_report = reported.empty();
    m.weighted_precision = weighted_precision(reported, truth, mode);
    double cov = 0;
    for (const auto& t : truth) cov += max_coverage(t, reported);
    m.max_coverage = truth.empty() ? 0.0 : cov / static_cast<double>(truth.size());
    m.f_score = harmonic_mean(m.weighted_precision, m.max_coverage);
    return m;
}

struct MetricsBucket {
    std::string name;
    int graphs = 0;
    double weighted_precision = 0;
    double max_coverage = 0;
    double f_score = 0;
};

// Arithmetic means, overall and grouped by ground-truth size t.
inline std::vector<MetricsBucket> corpus_metrics(const std::vector<GraphMetrics>& per_graph) {
    auto mean_of = [&](const std::string& name, auto pred) {
        MetricsBucket b;
        b.name = name;
        for (const auto& m : per_graph) {
            if (!pred(m)) continue;
            ++b.graphs;
            b.weighted_precision += m.weighted_precision;
            b.max_coverage += m.max_coverage;
            b.f_score += m.f_score;
        }
        if (b.graphs > 0) {
            b.weighted_precision /= b.graphs;
            b.max_coverage /= b.graphs;
            b.f_score /= b.graphs;
        }
        return b;
    };
    return {
        mean_of("t<=10", [](const GraphMetrics& m) { return m.t <= 10; }),
        mean_of("t<=15", [](const GraphMetrics& m) { return m.t <= 15; }),
        mean_of("all", [](const GraphMetrics&) { return true; }),
    };
}

}  // namespace mfdsafe
