#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "flowcast/dataset.hpp"
#include "flowcast/encode.hpp"
#include "flowcast/errors.hpp"
#include "flowcast/executor.hpp"
#include "flowcast/graph.hpp"
#include "flowcast/optimize.hpp"
#include "flowcast/rng.hpp"

using namespace flowcast;

namespace {

WorkflowGraph random_dag(Rng& rng, int n, double p,
                         const std::vector<std::string>& vocab) {
    WorkflowGraph g;
    g.id = "wf";
    for (int i = 0; i < n; ++i)
        g.nodes.push_back({i + 1, vocab[rng.next_below(vocab.size())]});
    for (int a = 1; a <= n; ++a)
        for (int b = a + 1; b <= n; ++b)
            if (rng.next_bool(p)) g.edges.emplace_back(a, b);
    return g;
}

TaskInstance make_task(const std::string& id, std::vector<std::string> seq,
                       int max_nodes = 12) {
    TaskInstance t;
    t.id = id;
    t.text = "synthetic goal: reach " + id;
    t.domain = "synthetic";
    t.eval.required_sequence = std::move(seq);
    t.eval.max_nodes = max_nodes;
    return t;
}

bool same_graph(const WorkflowGraph& a, const WorkflowGraph& b) {
    if (a.nodes.size() != b.nodes.size() || a.edges.size() != b.edges.size()) return false;
    for (size_t i = 0; i < a.nodes.size(); ++i)
        if (a.nodes[i].id != b.nodes[i].id || a.nodes[i].prompt != b.nodes[i].prompt)
            return false;
    return a.edges == b.edges;
}

std::set<std::string> prompt_set(const WorkflowGraph& g) {
    std::set<std::string> out;
    for (const auto& n : g.nodes) out.insert(n.prompt);
    return out;
}

} // namespace

TEST_CASE("every mutation yields a valid graph that differs from its parent") {
    Rng rng(2101);
    const std::vector<std::string> vocab = default_prompt_vocabulary();
    int node_adds = 0, node_dels = 0, edge_moves = 0, prompt_swaps = 0;

    for (int trial = 0; trial < 200; ++trial) {
        WorkflowGraph g = random_dag(rng, rng.next_int(1, 8), 0.4, vocab);
        REQUIRE(validate(g).ok());
        for (int m = 0; m < 10; ++m) {
            WorkflowGraph mutated = mutate(g, rng, vocab);
            CHECK(validate(mutated).ok());
            CHECK(!same_graph(mutated, g));

            int dn = mutated.node_count() - g.node_count();
            CHECK(dn >= -1);
            CHECK(dn <= 1);
            if (dn == 1)
                ++node_adds;
            else if (dn == -1)
                ++node_dels;
            else if (prompt_set(mutated) != prompt_set(g))
                ++prompt_swaps;
            else
                ++edge_moves;

            // New prompts can only come from the vocabulary.
            for (const auto& n : mutated.nodes) {
                bool from_vocab =
                    std::find(vocab.begin(), vocab.end(), n.prompt) != vocab.end();
                bool from_parent = g.index_of(n.id) != -1 &&
                                   g.nodes[g.index_of(n.id)].prompt == n.prompt;
                CHECK((from_vocab || from_parent));
            }
        }
    }
    // All move kinds occur across the sweep.
    CHECK(node_adds > 0);
    CHECK(node_dels > 0);
    CHECK(edge_moves > 0);
    CHECK(prompt_swaps > 0);

    WorkflowGraph g = random_dag(rng, 3, 0.5, vocab);
    CHECK_THROWS_AS(mutate(g, rng, {}), ConfigError);
}

TEST_CASE("node deletion never disconnects the remaining graph") {
    Rng rng(777);
    const std::vector<std::string> vocab = default_prompt_vocabulary();
    int deletions = 0;
    for (int trial = 0; trial < 300; ++trial) {
        WorkflowGraph g = random_dag(rng, rng.next_int(2, 7), 0.5, vocab);
        WorkflowGraph mutated = mutate(g, rng, vocab);
        if (mutated.node_count() != g.node_count() - 1) continue;
        ++deletions;
        // weak connectivity: every node reachable from node 0 ignoring direction
        int n = mutated.node_count();
        std::vector<std::vector<int>> adj(n);
        for (const auto& [src, dst] : mutated.edges) {
            int si = mutated.index_of(src), di = mutated.index_of(dst);
            adj[si].push_back(di);
            adj[di].push_back(si);
        }
        std::vector<char> seen(n, 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        int visited = 1;
        while (!stack.empty()) {
            int cur = stack.back();
            stack.pop_back();
            for (int nxt : adj[cur])
                if (!seen[nxt]) {
                    seen[nxt] = 1;
                    ++visited;
                    stack.push_back(nxt);
                }
        }
        CHECK(visited == n);
    }
    CHECK(deletions > 10);
}

TEST_CASE("search ledgers count exactly the scoring calls of the search phase") {
    const std::vector<std::string> vocab = default_prompt_vocabulary();
    Rng rng(5);
    WorkflowGraph seed_graph = random_dag(rng, 3, 0.5, vocab);

    SearchConfig cfg;
    cfg.budget = 10;
    cfg.beam = 1;
    cfg.seed = 7;
    cfg.train_tasks = {make_task("tr-0", {"code"}), make_task("tr-1", {"review"}),
                       make_task("tr-2", {"plan", "test"})};
    cfg.test_tasks = {make_task("te-0", {"code"}), make_task("te-1", {"fix"})};

    SUBCASE("ground truth charges the executor per candidate per train task") {
        RewardSource reward;
        reward.kind = RewardSource::Kind::ground_truth;
        SearchReport rep = optimize(seed_graph, reward, cfg);
        CHECK(rep.executor_calls == 10 * 3);
        CHECK(rep.predictor_calls == 0);
        CHECK(rep.trace.back().evals == 10);
    }

    SUBCASE("gnn charges the predictor and never the executor") {
        PredictorConfig mc;
        mc.layers = 1;
        mc.hidden = 8;
        mc.embed_dim = 12;
        mc.seed = 11;
        PredictorModel model(mc);
        EmbeddingConfig ec;
        ec.dim = 12;
        TextEncoder enc(ec);

        RewardSource reward;
        reward.kind = RewardSource::Kind::gnn;
        reward.model = &model;
        reward.encoder = &enc;
        SearchReport rep = optimize(seed_graph, reward, cfg);
        CHECK(rep.executor_calls == 0);
        CHECK(rep.predictor_calls == 10 * 3);
    }

    SUBCASE("random scoring touches neither ledger") {
        RewardSource reward;
        reward.kind = RewardSource::Kind::random;
        reward.seed = 3;
        SearchReport rep = optimize(seed_graph, reward, cfg);
        CHECK(rep.executor_calls == 0);
        CHECK(rep.predictor_calls == 0);
    }
}

TEST_CASE("trace is stepwise monotone and scores stay inside [0, 1]") {
    const std::vector<std::string> vocab = default_prompt_vocabulary();
    Rng rng(31);
    WorkflowGraph seed_graph = random_dag(rng, 4, 0.4, vocab);

    SearchConfig cfg;
    cfg.budget = 37; // not a multiple of beam*4: the last step is short
    cfg.beam = 2;
    cfg.seed = 13;
    cfg.train_tasks = {make_task("tr-0", {"code"}), make_task("tr-1", {"review", "test"})};
    cfg.test_tasks = {make_task("te-0", {"solve"})};

    RewardSource reward;
    reward.kind = RewardSource::Kind::ground_truth;
    SearchReport rep = optimize(seed_graph, reward, cfg);

    REQUIRE(!rep.trace.empty());
    CHECK(rep.trace.back().evals == 37);
    long prev_evals = 0;
    double prev_best = -1.0;
    for (size_t i = 0; i < rep.trace.size(); ++i) {
        const TraceRow& row = rep.trace[i];
        CHECK(row.step == static_cast<int>(i) + 1);
        CHECK(row.evals > prev_evals);
        CHECK(row.evals - prev_evals <= 8); // beam * 4
        CHECK(row.best_reward >= prev_best);
        CHECK(row.best_reward >= 0.0);
        CHECK(row.best_reward <= 1.0);
        CHECK(row.test_score >= 0.0);
        CHECK(row.test_score <= 1.0);
        prev_evals = row.evals;
        prev_best = row.best_reward;
    }
    CHECK(rep.score == rep.trace.back().test_score);
    CHECK(validate(rep.best).ok());
    CHECK(rep.wall_time_s >= 0.0);
}

TEST_CASE("identical seeds reproduce a search run exactly") {
    const std::vector<std::string> vocab = default_prompt_vocabulary();
    Rng rng(41);
    WorkflowGraph seed_graph = random_dag(rng, 3, 0.5, vocab);

    SearchConfig cfg;
    cfg.budget = 24;
    cfg.beam = 1;
    cfg.seed = 99;
    cfg.train_tasks = {make_task("tr-0", {"code", "test"}), make_task("tr-1", {"plan"})};
    cfg.test_tasks = {make_task("te-0", {"code"})};

    RewardSource reward;
    reward.kind = RewardSource::Kind::ground_truth;

    SearchReport a = optimize(seed_graph, reward, cfg);
    SearchReport b = optimize(seed_graph, reward, cfg);
    REQUIRE(a.trace.size() == b.trace.size());
    for (size_t i = 0; i < a.trace.size(); ++i) {
        CHECK(a.trace[i].evals == b.trace[i].evals);
        CHECK(a.trace[i].best_reward == b.trace[i].best_reward);
        CHECK(a.trace[i].test_score == b.trace[i].test_score);
    }
    CHECK(same_graph(a.best, b.best));
    CHECK(a.score == b.score);

    cfg.seed = 100;
    SearchReport c = optimize(seed_graph, reward, cfg);
    bool any_diff = !same_graph(a.best, c.best);
    for (size_t i = 0; i < std::min(a.trace.size(), c.trace.size()) && !any_diff; ++i)
        any_diff = a.trace[i].best_reward != c.trace[i].best_reward;
    CHECK(any_diff);
}

TEST_CASE("ground-truth search lifts a skill-less seed to a passing workflow") {
    // Single skill-less node; the train tasks each need one skill that the
    // vocabulary can introduce via add-node or prompt replacement.
    WorkflowGraph seed_graph;
    seed_graph.id = "seed";
    seed_graph.nodes = {{1, "aggregate the partial results"}};

    SearchConfig cfg;
    cfg.budget = 60;
    cfg.beam = 1;
    cfg.seed = 4;
    cfg.train_tasks = {make_task("tr-0", {"code"}), make_task("tr-1", {"review"})};
    cfg.test_tasks = {make_task("te-0", {"code"}), make_task("te-1", {"review"})};

    RewardSource reward;
    reward.kind = RewardSource::Kind::ground_truth;
    SearchReport rep = optimize(seed_graph, reward, cfg);

    CHECK(rep.trace.front().best_reward <= rep.trace.back().best_reward);
    CHECK(rep.trace.back().best_reward == 1.0);
    CHECK(rep.score == 1.0);
    CHECK(success_rate(rep.best, cfg.test_tasks) == 1.0);
}

TEST_CASE("search validates its configuration") {
    const std::vector<std::string> vocab = default_prompt_vocabulary();
    Rng rng(3);
    WorkflowGraph seed_graph = random_dag(rng, 3, 0.5, vocab);
    std::vector<TaskInstance> train = {make_task("tr-0", {"code"})};
    std::vector<TaskInstance> test = {make_task("te-0", {"code"})};

    RewardSource gt;
    gt.kind = RewardSource::Kind::ground_truth;

    auto run_with = [&](auto mutate_cfg) {
        SearchConfig cfg;
        cfg.budget = 4;
        cfg.train_tasks = train;
        cfg.test_tasks = test;
        mutate_cfg(cfg);
        return optimize(seed_graph, gt, cfg);
    };

    CHECK_THROWS_AS(run_with([](SearchConfig& c) { c.budget = 0; }), ConfigError);
    CHECK_THROWS_AS(run_with([](SearchConfig& c) { c.beam = 0; }), ConfigError);
    CHECK_THROWS_AS(run_with([](SearchConfig& c) { c.train_tasks.clear(); }), ConfigError);
    CHECK_THROWS_AS(run_with([](SearchConfig& c) { c.test_tasks.clear(); }), ConfigError);
    CHECK_THROWS_AS(
        run_with([&](SearchConfig& c) { c.test_tasks.push_back(train[0]); }),
        ConfigError);

    SUBCASE("gnn reward requires a model and an encoder") {
        SearchConfig cfg;
        cfg.budget = 4;
        cfg.train_tasks = train;
        cfg.test_tasks = test;
        RewardSource bad;
        bad.kind = RewardSource::Kind::gnn;
        CHECK_THROWS_AS(optimize(seed_graph, bad, cfg), ConfigError);
    }

    SUBCASE("an invalid seed graph is refused") {
        WorkflowGraph broken = seed_graph;
        broken.nodes.push_back({broken.nodes[0].id, "duplicate id"});
        SearchConfig cfg;
        cfg.budget = 4;
        cfg.train_tasks = train;
        cfg.test_tasks = test;
        CHECK_THROWS_AS(optimize(broken, gt, cfg), DataError);
    }

    CHECK(reward_kind_from_string("gnn") == RewardSource::Kind::gnn);
    CHECK(reward_kind_from_string("ground_truth") == RewardSource::Kind::ground_truth);
    CHECK(reward_kind_from_string("random") == RewardSource::Kind::random);
    CHECK(reward_kind_to_string(RewardSource::Kind::random) == "random");
    CHECK_THROWS_AS(reward_kind_from_string("oracle"), ConfigError);
}

TEST_CASE("trace_csv renders the header and fixed-precision rows") {
    std::vector<TraceRow> trace = {{1, 4, 0.25, 0.5}, {2, 8, 0.75, 1.0}};
    CHECK(trace_csv(trace) ==
          "step,evals,best_reward,test_score\n"
          "1,4,0.250000,0.500000\n"
          "2,8,0.750000,1.000000\n");
    CHECK(trace_csv({}) == "step,evals,best_reward,test_score\n");
}
