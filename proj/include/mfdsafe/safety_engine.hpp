#pragma once

#include <map>
#include <set>
#include <vector>

#include "mfdsafe/fd_safety.hpp"
#include "mfdsafe/mfd_model.hpp"

namespace mfdsafe {

// Subpath (nodes l..r, 1-based inclusive) of base solution path `path`.
struct SubpathRef {
    int path;
    int l;
    int r;
    auto operator<=>(const SubpathRef&) const = default;
};

enum class Variant { topdown, bottomup, twopointer, twopointerbin };

inline const char* variant_name(Variant v) {
    switch (v) {
        case Variant::topdown: return "topdown";
        case Variant::bottomup: return "bottomup";
        case Variant::twopointer: return "twopointer";
        default: return "twopointerbin";
    }
}

// One engine per graph: owns the base MFD witness, issues group tests against
// the backend, and runs one of the four maximal-safe-path strategies. All ILP
// work shares one deadline; ILP calls are counted by the backend wrapper the
// caller supplies.
class SafetyEngine {
  public:
    SafetyEngine(const FlowGraph& g, std::vector<EdgePath> base, SolverBackend& backend,
                 Deadline deadline, bool prefilter = true, int bin_threshold = 4,
                 bool symmetry_breaking = false)
        : g_(g),
          base_(std::move(base)),
          backend_(backend),
          deadline_(deadline),
          prefilter_(prefilter),
          bin_threshold_(bin_threshold),
          symmetry_breaking_(symmetry_breaking) {
        for (const auto& p : base_) excess_.emplace_back(g_, p.edges);
    }

    int path_length(int i) const { return static_cast<int>(base_[i].edges.size()) + 1; }

    EdgePath ref_edges(const SubpathRef& s) const {
        EdgePath p;
        p.edges.assign(base_[s.path].edges.begin() + (s.l - 1),
                       base_[s.path].edges.begin() + (s.r - 1));
        return p;
    }

    std::vector<SubpathRef> run(Variant v) {
        reported_.clear();
        switch (v) {
            case Variant::topdown: top_down(); break;
            case Variant::bottomup: bottom_up(); break;
            case Variant::twopointer: two_pointer(false); break;
            case Variant::twopointerbin: two_pointer(true); break;
        }
        return reported_;
    }

    // Group test: one solve maximizing the number of simultaneously
    // avoided subpaths; returns the unsafe set N.
    std::set<SubpathRef> group_test(const std::set<SubpathRef>& refs) {
        MfdModelSpec spec = build_mfd_model(g_, static_cast<int>(base_.size()), symmetry_breaking_);
        std::vector<SubpathRef> order(refs.begin(), refs.end());
        for (const auto& s : order) spec.tested.push_back(ref_edges(s));
        SolverOutcome out = backend_.solve(spec, deadline_);
        if (out.status == SolveStatus::timeout) throw TimeoutError();
        if (out.status != SolveStatus::optimal)
            throw SolverError("group test model unexpectedly infeasible");
        std::set<SubpathRef> unsafe;
        for (size_t t = 0; t < order.size(); ++t)
            if (out.avoided[t]) unsafe.insert(order[t]);
        return unsafe;
    }

    // GetSafe recursion; an empty input returns empty without a solver call.
    std::set<SubpathRef> get_safe(const std::set<SubpathRef>& refs) {
        if (refs.empty()) return {};
        std::set<SubpathRef> unsafe = group_test(refs);
        if (unsafe.empty()) return refs;
        std::set<SubpathRef> rest;
        for (const auto& s : refs)
            if (!unsafe.count(s)) rest.insert(s);
        return get_safe(rest);
    }

    // Excess-flow prefilter in front of GetSafe: positive-excess members are
    // safe for all decompositions and skip the ILP entirely.
    std::set<SubpathRef> query_safe(const std::set<SubpathRef>& refs) {
        if (!prefilter_) return get_safe(refs);
        std::set<SubpathRef> certain, rest;
        for (const auto& s : refs)
            (ref_excess(s) > 0 ? certain : rest).insert(s);
        std::set<SubpathRef> safe = get_safe(rest);
        safe.insert(certain.begin(), certain.end());
        return safe;
    }

    bool is_safe(const SubpathRef& s) {
        auto it = safe_cache_.find(s);
        if (it != safe_cache_.end()) return it->second;
        bool ok;
        if (prefilter_ && ref_excess(s) > 0)
            ok = true;
        else
            ok = !query_safe({s}).empty();
        safe_cache_[s] = ok;
        return ok;
    }

    long long ref_excess(const SubpathRef& s) const { return excess_[s.path].excess(s.l, s.r); }

  private:
    void report(const SubpathRef& s) { reported_.push_back(s); }

    bool contained_in_reported(const SubpathRef& s) const {
        EdgePath p = ref_edges(s);
        for (const auto& r : reported_)
            if (is_contiguous_subseq(p.edges, ref_edges(r).edges)) return true;
        return false;
    }

    void top_down() {
        std::set<SubpathRef> core;
        for (int i = 0; i < static_cast<int>(base_.size()); ++i)
            core.insert({i, 1, path_length(i)});
        top_down_rec(core);
    }

    void top_down_rec(const std::set<SubpathRef>& core) {
        std::set<SubpathRef> safe = query_safe(core);
        for (const auto& s : safe) report(s);
        std::set<SubpathRef> unsafe;
        for (const auto& s : core)
            if (!safe.count(s)) unsafe.insert(s);
        std::set<SubpathRef> next;
        for (const auto& s : unsafe) {
            if (s.r - s.l >= 2 && (s.r == path_length(s.path) || unsafe.count({s.path, s.l + 1, s.r + 1})))
                next.insert({s.path, s.l + 1, s.r});
            if (s.r - s.l >= 2 && (s.l == 1 || unsafe.count({s.path, s.l - 1, s.r - 1})))
                next.insert({s.path, s.l, s.r - 1});
        }
        // A trim already inside a reported safe path is not maximal.
        std::set<SubpathRef> filtered;
        for (const auto& s : next)
            if (!contained_in_reported(s)) filtered.insert(s);
        if (!filtered.empty()) top_down_rec(filtered);
    }

    void bottom_up() {
        std::set<SubpathRef> core;
        for (int i = 0; i < static_cast<int>(base_.size()); ++i)
            for (auto [l, r] : max_fd_safe_subpaths(g_, base_[i].edges)) core.insert({i, l, r});
        bottom_up_rec(core);
    }

    void bottom_up_rec(const std::set<SubpathRef>& core) {
        std::set<SubpathRef> ext;
        for (const auto& s : core) {
            if (s.l > 1) ext.insert({s.path, s.l - 1, s.r});
            if (s.r < path_length(s.path)) ext.insert({s.path, s.l, s.r + 1});
        }
        std::set<SubpathRef> safe = query_safe(ext);
        for (const auto& s : core) {
            bool left_safe = s.l > 1 && safe.count({s.path, s.l - 1, s.r});
            bool right_safe = s.r < path_length(s.path) && safe.count({s.path, s.l, s.r + 1});
            if (!left_safe && !right_safe) report(s);
        }
        if (!safe.empty()) bottom_up_rec(safe);
    }

    void two_pointer(bool binary) {
        for (int i = 0; i < static_cast<int>(base_.size()); ++i) {
            int m = path_length(i);
            int l = 1, r = 2;
            while (true) {
                if (binary && m - r + 1 > bin_threshold_) {
                    // Largest safe right end; safety is prefix-monotone for
                    // a fixed left end.
                    int lo = r - 1, hi = m;  // (l, lo) known safe or empty
                    while (lo < hi) {
                        int mid = (lo + hi + 1) / 2;
                        if (is_safe({i, l, mid}))
                            lo = mid;
                        else
                            hi = mid - 1;
                    }
                    r = lo + 1;
                } else {
                    while (r <= m && is_safe({i, l, r})) ++r;
                }
                report({i, l, r - 1});
                if (r > m) break;
                if (binary && r - 1 - l > bin_threshold_) {
                    int lo = l + 1, hi = r - 1;  // (r-1, r) is a safe single edge
                    while (lo < hi) {
                        int mid = (lo + hi) / 2;
                        if (is_safe({i, mid, r}))
                            hi = mid;
                        else
                            lo = mid + 1;
                    }
                    l = lo;
                } else {
                    ++l;
                    while (!is_safe({i, l, r})) ++l;
                }
            }
        }
    }

    const FlowGraph& g_;
    std::vector<EdgePath> base_;
    SolverBackend& backend_;
    Deadline deadline_;
    bool prefilter_;
    int bin_threshold_;
    bool symmetry_breaking_;
    std::vector<ExcessIndex> excess_;
    std::vector<SubpathRef> reported_;
    std::map<SubpathRef, bool> safe_cache_;
};

}  // namespace mfdsafe
