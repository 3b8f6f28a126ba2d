#include <catch2/catch_amalgamated.hpp>

#include "mfdsafe/oracle.hpp"
#include "testutil.hpp"

using namespace mfdsafe;

TEST_CASE("funnel has a unique decomposition of size 1") {
    auto ds = enumerate_all_mfds(testutil::funnel());
    CHECK(ds.k == 1);
    REQUIRE(ds.decompositions.size() == 1);
    CHECK(ds.decompositions[0][0].weight == 5);
}

TEST_CASE("diamond has a unique MFD of size 2") {
    auto ds = enumerate_all_mfds(testutil::diamond());
    CHECK(ds.k == 2);
    CHECK(ds.decompositions.size() == 1);
}

TEST_CASE("crossing has two MFDs and an unsafe middle") {
    FlowGraph g = testutil::crossing();
    auto ds = enumerate_all_mfds(g);
    CHECK(ds.k == 2);
    CHECK(ds.decompositions.size() == 2);
    CHECK(oracle_safe(g, ds, node_path_edges(g, {1, 3, 4})));
    CHECK(oracle_safe(g, ds, node_path_edges(g, {3, 4, 5})));
    CHECK_FALSE(oracle_safe(g, ds, node_path_edges(g, {1, 3, 4, 5})));
}

TEST_CASE("every enumerated FD superposes to the flow") {
    std::mt19937 rng(73);
    for (int t = 0; t < 15; ++t) {
        FlowGraph g = testutil::random_small_graph(rng, "o" + std::to_string(t));
        auto en = oracle_enumerate_fds(g);
        REQUIRE_FALSE(en.fds.empty());
        for (const auto& fd : en.fds) {
            std::vector<long long> covered(g.edges.size(), 0);
            for (const auto& [p, w] : fd) {
                CHECK(w > 0);
                for (int e : en.paths[p].edges) covered[e] += w;
            }
            for (size_t e = 0; e < g.edges.size(); ++e) CHECK(covered[e] == g.edges[e].flow);
        }
    }
}

TEST_CASE("oracle_maximal_safe output is safe, maximal and complete") {
    std::mt19937 rng(79);
    for (int t = 0; t < 15; ++t) {
        FlowGraph g = testutil::random_small_graph(rng, "ms" + std::to_string(t));
        auto ds = enumerate_all_mfds(g);
        auto maximal = oracle_maximal_safe(g);
        REQUIRE_FALSE(maximal.empty());
        for (const auto& p : maximal) CHECK(oracle_safe(g, ds, node_path_edges(g, p)));
        // Every safe subpath of the witness is inside some reported path.
        const auto& witness = ds.decompositions.front();
        for (const auto& wp : witness) {
            int m = static_cast<int>(wp.path.edges.size());
            for (int l = 0; l < m; ++l)
                for (int r = l + 1; r <= m; ++r) {
                    std::vector<int> sub(wp.path.edges.begin() + l, wp.path.edges.begin() + r);
                    if (!oracle_safe(g, ds, sub)) continue;
                    auto nodes = edge_path_nodes(g, sub);
                    bool inside = false;
                    for (const auto& p : maximal)
                        if (is_contiguous_subseq(nodes, p)) inside = true;
                    CHECK(inside);
                }
        }
    }
}

TEST_CASE("limits are enforced with explicit refusals") {
    FlowGraph g = testutil::crossing();
    OracleLimits lim;
    lim.max_edges = 3;
    CHECK_THROWS_AS(enumerate_all_mfds(g, lim), OracleLimitError);
    lim = OracleLimits{};
    lim.max_outflow = 2;
    CHECK_THROWS_AS(enumerate_all_mfds(g, lim), OracleLimitError);
    lim = OracleLimits{};
    lim.max_states = 3;
    CHECK_THROWS_AS(enumerate_all_mfds(g, lim), OracleLimitError);
}
