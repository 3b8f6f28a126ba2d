#include <catch2/catch_amalgamated.hpp>

#include "mfdsafe/contraction.hpp"
#include "mfdsafe/oracle.hpp"
#include "mfdsafe/solver_builtin.hpp"
#include "testutil.hpp"

using namespace mfdsafe;

TEST_CASE("funnel contracts to nothing") {
    auto cr = y_to_v_contract(testutil::funnel());
    CHECK(is_funnel(cr.residual));
    REQUIRE(cr.trivial_safe.size() == 1);
    CHECK(cr.trivial_safe[0] == std::vector<NodeId>{0, 1, 2});
}

TEST_CASE("excess example is a funnel with two trivial paths") {
    auto cr = y_to_v_contract(testutil::excess_example());
    CHECK(is_funnel(cr.residual));
    REQUIRE(cr.trivial_safe.size() == 2);
    CHECK(cr.trivial_safe[0] == std::vector<NodeId>{0, 1, 2, 3});
    CHECK(cr.trivial_safe[1] == std::vector<NodeId>{0, 1, 3});
}

TEST_CASE("diamond is a funnel: both branches become trivial s-t edges") {
    auto cr = y_to_v_contract(testutil::diamond());
    CHECK(is_funnel(cr.residual));
    REQUIRE(cr.trivial_safe.size() == 2);
    CHECK(cr.trivial_safe[0] == std::vector<NodeId>{0, 1, 3});
    CHECK(cr.trivial_safe[1] == std::vector<NodeId>{0, 2, 3});
}

TEST_CASE("crossing contracts to parallel edges around the shared middle") {
    auto cr = y_to_v_contract(testutil::crossing());
    CHECK_FALSE(is_funnel(cr.residual));
    REQUIRE(cr.residual.graph.edges.size() == 4);
    // 3->4 collapses into every contracted edge touching the middle.
    for (const auto& exp : cr.residual.expansion)
        CHECK(exp.size() >= 3);
    CHECK(validate(cr.residual.graph, true).empty());
}

TEST_CASE("contraction is idempotent and flow-conserving") {
    std::mt19937 rng(23);
    for (int t = 0; t < 60; ++t) {
        FlowGraph g = testutil::random_graph(rng, "c" + std::to_string(t));
        auto cr = y_to_v_contract(g);
        const FlowGraph& r = cr.residual.graph;
        if (!r.edges.empty()) {
            auto in = node_inflow(r), out = node_outflow(r);
            for (NodeId v = 0; v < r.num_nodes; ++v) {
                if (v == r.source || v == r.sink) continue;
                CHECK(in[v] == out[v]);
            }
            // Fixpoint: no internal node left with in- or out-degree 1.
            for (NodeId v = 0; v < r.num_nodes; ++v) {
                if (v == r.source || v == r.sink) continue;
                int di = 0, dout = 0;
                for (const Edge& e : r.edges) {
                    if (e.v == v) ++di;
                    if (e.u == v) ++dout;
                }
                if (di + dout > 0) {
                    CHECK(di >= 2);
                    CHECK(dout >= 2);
                }
            }
        }
        // Every expansion is a real path of g carrying its edge's flow on
        // the first original edge.
        for (size_t e = 0; e < cr.residual.expansion.size(); ++e) {
            auto edges = node_path_edges(g, cr.residual.expansion[e]);
            REQUIRE_FALSE(edges.empty());
        }
        for (const auto& p : cr.trivial_safe) CHECK_FALSE(node_path_edges(g, p).empty());
    }
}

TEST_CASE("contraction preserves the minimum decomposition size") {
    std::mt19937 rng(29);
    BuiltinBackend backend;
    int nontrivial = 0;
    for (int t = 0; t < 40; ++t) {
        FlowGraph g = testutil::random_small_graph(rng, "k" + std::to_string(t));
        int k_orig = enumerate_all_mfds(g).k;
        auto cr = y_to_v_contract(g);
        if (is_funnel(cr.residual)) {
            CHECK(k_orig == static_cast<int>(cr.trivial_safe.size()));
            continue;
        }
        ++nontrivial;
        auto mk = solve_min_k(cr.residual.graph, backend, Deadline::never());
        CHECK(mk.k + static_cast<int>(cr.trivial_safe.size()) == k_orig);
    }
    CHECK(nontrivial > 0);
}

TEST_CASE("expand_path joins expansions at junctions") {
    auto cr = y_to_v_contract(testutil::crossing());
    REQUIRE(cr.residual.expansion[0] == std::vector<NodeId>{0, 1, 3, 4});
    REQUIRE(cr.residual.expansion[2] == std::vector<NodeId>{4, 5, 7});
    CHECK(expand_path(cr.residual, {0, 2}) == std::vector<NodeId>{0, 1, 3, 4, 5, 7});
    CHECK_THROWS(expand_path(cr.residual, {2, 0}));
}
