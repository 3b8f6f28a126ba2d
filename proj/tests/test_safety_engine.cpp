#include <catch2/catch_amalgamated.hpp>

#include "mfdsafe/oracle.hpp"
#include "mfdsafe/safety_engine.hpp"
#include "mfdsafe/solver_builtin.hpp"
#include "testutil.hpp"

using namespace mfdsafe;

namespace {

std::vector<EdgePath> base_of(const FlowGraph& g, SolverBackend& backend) {
    auto mk = solve_min_k(g, backend, Deadline::never());
    std::vector<EdgePath> base;
    for (auto& wp : mk.paths) base.push_back(wp.path);
    return base;
}

std::vector<std::vector<NodeId>> run_variant(const FlowGraph& g, Variant v, bool prefilter = true,
                                             long long* calls = nullptr) {
    BuiltinBackend raw;
    CountingBackend backend(raw);
    auto base = base_of(g, backend);
    long long base_calls = backend.calls;
    SafetyEngine engine(g, base, backend, Deadline::never(), prefilter);
    auto refs = engine.run(v);
    if (calls) *calls = backend.calls - base_calls;
    std::vector<std::vector<NodeId>> paths;
    for (const auto& s : refs) paths.push_back(edge_path_nodes(g, engine.ref_edges(s).edges));
    return postprocess_paths(std::move(paths));
}

}  // namespace

TEST_CASE("group test empty guard issues no solver call") {
    FlowGraph g = testutil::crossing();
    BuiltinBackend raw;
    CountingBackend backend(raw);
    auto base = base_of(g, backend);
    long long before = backend.calls;
    SafetyEngine engine(g, base, backend, Deadline::never());
    CHECK(engine.get_safe({}).empty());
    CHECK(backend.calls == before);
}

TEST_CASE("group test flags exactly the avoidable subpaths") {
    FlowGraph g = testutil::crossing();
    BuiltinBackend raw;
    CountingBackend backend(raw);
    auto base = base_of(g, backend);
    SafetyEngine engine(g, base, backend, Deadline::never(), /*prefilter=*/false);
    // Full base paths cross the unsafe middle, so neither is safe.
    std::set<SubpathRef> whole{{0, 1, engine.path_length(0)}, {1, 1, engine.path_length(1)}};
    auto unsafe = engine.group_test(whole);
    CHECK(unsafe.size() == 2);
    CHECK(engine.get_safe(whole).empty());
}

TEST_CASE("all variants agree with the oracle on the witnesses") {
    for (const FlowGraph& g : {testutil::diamond(), testutil::crossing()}) {
        auto want = oracle_maximal_safe(g);
        for (Variant v : {Variant::topdown, Variant::bottomup, Variant::twopointer,
                          Variant::twopointerbin})
            CHECK(run_variant(g, v) == want);
    }
}

TEST_CASE("all variants agree with the oracle on random graphs") {
    std::mt19937 rng(83);
    for (int t = 0; t < 30; ++t) {
        FlowGraph g = testutil::random_small_graph(rng, "v" + std::to_string(t));
        auto want = oracle_maximal_safe(g);
        CAPTURE(serialize(g));
        for (Variant v : {Variant::topdown, Variant::bottomup, Variant::twopointer,
                          Variant::twopointerbin})
            CHECK(run_variant(g, v) == want);
    }
}

TEST_CASE("prefilter changes call counts, never answers") {
    std::mt19937 rng(89);
    bool reduced = false;
    for (int t = 0; t < 15; ++t) {
        FlowGraph g = testutil::random_small_graph(rng, "pf" + std::to_string(t));
        long long with = 0, without = 0;
        auto a = run_variant(g, Variant::topdown, true, &with);
        auto b = run_variant(g, Variant::topdown, false, &without);
        CHECK(a == b);
        CHECK(with <= without);
        if (with < without) reduced = true;
    }
    CHECK(reduced);
}

TEST_CASE("binary search threshold does not change twopointer answers") {
    std::mt19937 rng(97);
    for (int t = 0; t < 10; ++t) {
        FlowGraph g = testutil::random_small_graph(rng, "bt" + std::to_string(t));
        BuiltinBackend raw;
        CountingBackend backend(raw);
        auto base = base_of(g, backend);
        for (int thr : {0, 1, 2, 8}) {
            SafetyEngine engine(g, base, backend, Deadline::never(), true, thr);
            auto refs = engine.run(Variant::twopointerbin);
            std::vector<std::vector<NodeId>> paths;
            for (const auto& s : refs) paths.push_back(edge_path_nodes(g, engine.ref_edges(s).edges));
            CHECK(postprocess_paths(std::move(paths)) == run_variant(g, Variant::twopointer));
        }
    }
}
