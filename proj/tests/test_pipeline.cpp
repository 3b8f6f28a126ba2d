#include <catch2/catch_amalgamated.hpp>

#include "mfdsafe/oracle.hpp"
#include "mfdsafe/pipeline.hpp"
#include "testutil.hpp"

using namespace mfdsafe;

TEST_CASE("funnels are resolved without any solver call") {
    RunConfig cfg;
    auto rep = run_graph(testutil::funnel(), cfg);
    CHECK(rep.status == SafetyReport::Status::complete);
    CHECK(rep.ilp_calls == 0);
    REQUIRE(rep.maximal_safe.size() == 1);
    CHECK(rep.maximal_safe[0] == std::vector<NodeId>{0, 1, 2});
    CHECK(rep.provenance == std::vector<Provenance>{Provenance::trivial});

    rep = run_graph(testutil::excess_example(), cfg);
    CHECK(rep.ilp_calls == 0);
    CHECK(rep.maximal_safe == oracle_maximal_safe(testutil::excess_example()));
}

TEST_CASE("diamond and crossing match the oracle through the full pipeline") {
    RunConfig cfg;
    for (const FlowGraph& g : {testutil::diamond(), testutil::crossing()}) {
        for (Variant v : {Variant::topdown, Variant::bottomup, Variant::twopointer,
                          Variant::twopointerbin}) {
            cfg.variant = v;
            auto rep = run_graph(g, cfg);
            CHECK(rep.status == SafetyReport::Status::complete);
            CHECK(rep.maximal_safe == oracle_maximal_safe(g));
        }
    }
}

TEST_CASE("provenance marks trivial, excess and ilp paths") {
    RunConfig cfg;
    auto rep = run_graph(testutil::crossing(), cfg);
    REQUIRE(rep.provenance.size() == rep.maximal_safe.size());
    for (size_t i = 0; i < rep.maximal_safe.size(); ++i)
        CHECK((rep.provenance[i] == Provenance::excess_flow || rep.provenance[i] == Provenance::ilp ||
               rep.provenance[i] == Provenance::trivial));
}

TEST_CASE("a zero budget forces the fallback") {
    RunConfig cfg;
    cfg.budget_sec = 0;
    FlowGraph g = testutil::crossing();
    auto rep = run_graph(g, cfg);
    CHECK(rep.status == SafetyReport::Status::fallback);
    CHECK(rep.maximal_safe == safe_flow_maximal_paths(g));
    for (auto p : rep.provenance)
        CHECK((p == Provenance::fallback || p == Provenance::trivial));
}

TEST_CASE("run_corpus skips invalid records and keeps input order") {
    std::istringstream is(
        "# a\n3\n0 1 2\n1 2 2\n"
        "# broken\n3\n0 1\n"
        "# b\n4\n0 1 3\n0 2 4\n1 3 3\n2 3 4\n");
    auto records = parse_graph_corpus(is);
    RunConfig cfg;
    CorpusStats stats;
    auto reports = run_corpus(records, cfg, &stats);
    REQUIRE(reports.size() == 3);
    CHECK(reports[0].graph_id == "a");
    CHECK(reports[1].status == SafetyReport::Status::skipped);
    CHECK(reports[2].graph_id == "b");
    CHECK(stats.graphs == 3);
    CHECK(stats.skipped == 1);
    CHECK(stats.complete == 2);

    std::string text = write_safe_paths(records, reports);
    CHECK(text.find("# broken") == std::string::npos);
    std::istringstream back(text);
    auto parsed = parse_safe_paths(back);
    REQUIRE(parsed.size() == 2);
    CHECK(parsed[0].graph_id == "a");
    CHECK(parsed[0].status == "complete");
    CHECK(parsed[1].label_paths.size() == reports[2].maximal_safe.size());

    std::string csv = write_stats_csv(reports, cfg);
    CHECK(csv.find("graph_id,variant,status,ilp_calls,wall_ms,num_safe_paths") == 0);
    CHECK(csv.find("broken,topdown,skipped") != std::string::npos);
}

TEST_CASE("worker count does not change results") {
    std::mt19937 rng(101);
    std::ostringstream corpus;
    for (int t = 0; t < 12; ++t) corpus << serialize(testutil::random_graph(rng, "g" + std::to_string(t)));
    std::istringstream is1(corpus.str()), is2(corpus.str());
    auto r1 = parse_graph_corpus(is1);
    auto r2 = parse_graph_corpus(is2);
    RunConfig cfg;
    auto a = run_corpus(r1, cfg);
    cfg.workers = 3;
    auto b = run_corpus(r2, cfg);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].maximal_safe == b[i].maximal_safe);
        CHECK(a[i].status == b[i].status);
    }
    CHECK(write_safe_paths(r1, a) == write_safe_paths(r2, b));
}

TEST_CASE("original node labels survive the round trip") {
    auto records = [] {
        std::istringstream is("# lab\n4\n10 20 3\n10 30 4\n20 40 3\n30 40 4\n");
        return parse_graph_corpus(is);
    }();
    RunConfig cfg;
    auto reports = run_corpus(records, cfg);
    std::string text = write_safe_paths(records, reports);
    CHECK(text.find("10 20 40") != std::string::npos);
    CHECK(text.find("10 30 40") != std::string::npos);
}
