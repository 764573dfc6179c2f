#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <string>
#include <vector>

#include "flowcast/errors.hpp"
#include "flowcast/metrics.hpp"
#include "flowcast/rng.hpp"
#include "reference_impl.hpp"

using namespace flowcast;

namespace {

WorkflowLabels row(std::string id, std::vector<int> predicted, std::vector<int> actual) {
    return {std::move(id), std::move(predicted), std::move(actual)};
}

std::vector<WorkflowLabels> random_table(Rng& rng) {
    int workflows = rng.next_int(1, 10);
    std::vector<WorkflowLabels> table;
    for (int w = 0; w < workflows; ++w) {
        int tasks = rng.next_int(1, 20);
        WorkflowLabels wl;
        wl.workflow = "wf-" + std::to_string(w);
        for (int t = 0; t < tasks; ++t) {
            wl.predicted.push_back(rng.next_bool(0.5) ? 1 : 0);
            wl.actual.push_back(rng.next_bool(0.5) ? 1 : 0);
        }
        table.push_back(std::move(wl));
    }
    return table;
}

} // namespace

TEST_CASE("accuracy counts matching positions") {
    CHECK(accuracy({1, 0, 1, 1}, {1, 1, 1, 0}) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(accuracy({0, 0}, {0, 0}) == 1.0);
    CHECK(accuracy({1}, {0}) == 0.0);
    CHECK(accuracy({1, 1, 0}, {1, 1, 0}) == 1.0);
}

TEST_CASE("accuracy validates its inputs") {
    CHECK_THROWS_AS(accuracy({1, 0}, {1}), LengthMismatchError);
    CHECK_THROWS_AS(accuracy({}, {}), EmptyInputError);
}

TEST_CASE("accuracy equals a direct recount on random vectors") {
    Rng rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        int n = rng.next_int(1, 50);
        std::vector<int> p, a;
        int same = 0;
        for (int i = 0; i < n; ++i) {
            p.push_back(rng.next_bool(0.5) ? 1 : 0);
            a.push_back(rng.next_bool(0.5) ? 1 : 0);
            same += (p.back() == a.back()) ? 1 : 0;
        }
        CHECK(accuracy(p, a) == static_cast<double>(same) / n);
    }
}

TEST_CASE("ranking puts higher success rates first and breaks ties by id") {
    std::vector<WorkflowLabels> table = {
        row("wf-c", {1, 1}, {1, 1}),       // rate 1.0
        row("wf-a", {1, 0}, {1, 0}),       // rate 0.5
        row("wf-b", {1, 0, 1, 0}, {0, 1, 1, 0}), // rate 0.5, larger denominator
        row("wf-d", {0, 0}, {0, 0}),       // rate 0.0
    };
    RankingResult r = utility_at_k(table, 2);
    CHECK(r.k == 2);
    // 1/2 and 2/4 are the same rate; wf-a precedes wf-b by id.
    CHECK(r.top_true == std::vector<std::string>{"wf-c", "wf-a"});
    CHECK(r.top_predicted == std::vector<std::string>{"wf-c", "wf-a"});
    CHECK(r.utility == 1.0);

    RankingResult r3 = utility_at_k(table, 3);
    CHECK(r3.top_true == std::vector<std::string>{"wf-c", "wf-a", "wf-b"});
}

TEST_CASE("predicted and actual rankings are computed independently") {
    std::vector<WorkflowLabels> table = {
        row("wf-a", {1, 1}, {0, 0}),
        row("wf-b", {0, 0}, {1, 1}),
        row("wf-c", {1, 1}, {1, 1}),
    };
    RankingResult r = utility_at_k(table, 1);
    CHECK(r.top_true == std::vector<std::string>{"wf-b"});
    CHECK(r.top_predicted == std::vector<std::string>{"wf-a"});
    CHECK(r.utility == 0.0);

    RankingResult r2 = utility_at_k(table, 2);
    // true top-2 {wf-b, wf-c}, predicted top-2 {wf-a, wf-c}: overlap 1
    CHECK(r2.utility == 0.5);
}

TEST_CASE("utility matches the brute-force oracle on random tables") {
    Rng rng(20240818);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<WorkflowLabels> table = random_table(rng);
        int k = rng.next_int(1, static_cast<int>(table.size()));
        RankingResult got = utility_at_k(table, k);

        std::vector<refimpl::LabelRow> actual, predicted;
        for (const WorkflowLabels& wl : table) {
            actual.push_back({wl.workflow, wl.actual});
            predicted.push_back({wl.workflow, wl.predicted});
        }
        CHECK(got.top_true == refimpl::top_k(actual, k));
        CHECK(got.top_predicted == refimpl::top_k(predicted, k));
        CHECK(got.utility == refimpl::utility(actual, predicted, k));
    }
}

TEST_CASE("utility is one when k covers every workflow or predictions are exact") {
    Rng rng(77);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<WorkflowLabels> table = random_table(rng);
        CHECK(utility_at_k(table, static_cast<int>(table.size())).utility == 1.0);

        for (WorkflowLabels& wl : table) wl.predicted = wl.actual;
        int k = rng.next_int(1, static_cast<int>(table.size()));
        CHECK(utility_at_k(table, k).utility == 1.0);
    }
}

TEST_CASE("ranking validates table and k") {
    std::vector<WorkflowLabels> table = {row("wf-a", {1}, {0}), row("wf-b", {0}, {1})};
    CHECK_THROWS_AS(utility_at_k(table, 0), KOutOfRangeError);
    CHECK_THROWS_AS(utility_at_k(table, 3), KOutOfRangeError);
    CHECK_THROWS_AS(utility_at_k({}, 1), EmptyInputError);

    std::vector<WorkflowLabels> ragged = {row("wf-a", {1, 0}, {0})};
    CHECK_THROWS_AS(utility_at_k(ragged, 1), LengthMismatchError);

    std::vector<WorkflowLabels> empty_row = {row("wf-a", {}, {})};
    CHECK_THROWS_AS(utility_at_k(empty_row, 1), MissingWorkflowError);

    std::vector<WorkflowLabels> dup = {row("wf-a", {1}, {0}), row("wf-a", {0}, {1})};
    CHECK_THROWS_AS(utility_at_k(dup, 1), DataError);
}

TEST_CASE("default ranking depth is a tenth of the universe, rounded up") {
    CHECK(default_k(0) == 1);
    CHECK(default_k(1) == 1);
    CHECK(default_k(9) == 1);
    CHECK(default_k(10) == 1);
    CHECK(default_k(11) == 2);
    CHECK(default_k(95) == 10);
    CHECK(default_k(100) == 10);
    CHECK(default_k(101) == 11);
    CHECK(default_k(200) == 20);
}

TEST_CASE("success by node count buckets labels through graph sizes") {
    WorkflowGraph g2, g3a, g3b;
    g2.id = "two";
    g2.nodes = {{1, "plan"}, {2, "code"}};
    g3a.id = "three-a";
    g3a.nodes = {{1, "plan"}, {2, "code"}, {3, "test"}};
    g3b.id = "three-b";
    g3b.nodes = {{1, "fix"}, {2, "review"}, {3, "verify"}};

    std::vector<LabeledSample> labels = {
        {"two", "t1", 1},     {"two", "t2", 0},
        {"three-a", "t1", 1}, {"three-a", "t2", 1},
        {"three-b", "t1", 0}, {"three-b", "t2", 1},
    };
    std::map<int, double> got = success_by_node_count({g2, g3a, g3b}, labels);
    CHECK(got.size() == 2);
    CHECK(got.at(2) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(got.at(3) == doctest::Approx(0.75).epsilon(1e-15));

    std::vector<LabeledSample> stray = {{"unknown", "t1", 1}};
    CHECK_THROWS_AS(success_by_node_count({g2}, stray), DataError);
}

TEST_CASE("metrics csv serializes six-decimal rows under a header") {
    std::vector<MetricRow> rows = {
        {"accuracy", "synthetic", "gcn", 0.9125},
        {"utility_at_k", "synthetic", "gcn", 2.0 / 3.0},
    };
    CHECK(metrics_csv(rows) ==
          "metric,domain,model,value\n"
          "accuracy,synthetic,gcn,0.912500\n"
          "utility_at_k,synthetic,gcn,0.666667\n");
    CHECK(metrics_csv({}) == "metric,domain,model,value\n");
}
