#include "flowcast/optimize.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <limits>
#include <numeric>
#include <set>

#include "flowcast/dataset.hpp"
#include "flowcast/errors.hpp"
#include "flowcast/executor.hpp"

namespace flowcast {

void RewardSource::check() const {
    if (kind == Kind::gnn && (model == nullptr || encoder == nullptr))
        throw ConfigError("gnn reward needs a trained model and an encoder");
}

RewardSource::Kind reward_kind_from_string(const std::string& s) {
    if (s == "gnn") return RewardSource::Kind::gnn;
    if (s == "ground_truth") return RewardSource::Kind::ground_truth;
    if (s == "random") return RewardSource::Kind::random;
    throw ConfigError("unknown reward '" + s + "' (expected gnn, ground_truth, random)");
}

std::string reward_kind_to_string(RewardSource::Kind k) {
    switch (k) {
        case RewardSource::Kind::gnn: return "gnn";
        case RewardSource::Kind::ground_truth: return "ground_truth";
        default: return "random";
    }
}

void SearchConfig::check() const {
    if (budget < 1) throw ConfigError("budget must be >= 1");
    if (beam < 1) throw ConfigError("beam must be >= 1");
    if (train_tasks.empty()) throw ConfigError("search needs train tasks");
    if (test_tasks.empty()) throw ConfigError("search needs test tasks");
    std::set<std::string> train_ids;
    for (const auto& t : train_tasks) train_ids.insert(t.id);
    for (const auto& t : test_tasks)
        if (train_ids.count(t.id))
            throw ConfigError("train and test task sets must be disjoint; both hold '" +
                              t.id + "'");
}

namespace {

enum class Move { add_node, delete_node, add_edge, remove_edge, replace_prompt };

// Node indices whose removal keeps the rest weakly connected (single-node
// graphs have none: the result would be empty).
std::vector<int> deletable_nodes(const WorkflowGraph& g) {
    int n = g.node_count();
    std::vector<int> out;
    if (n < 2) return out;
    // undirected adjacency over node indices
    std::vector<std::vector<int>> adj(n);
    for (const auto& [src, dst] : g.edges) {
        int si = g.index_of(src), di = g.index_of(dst);
        adj[si].push_back(di);
        adj[di].push_back(si);
    }
    for (int skip = 0; skip < n; ++skip) {
        std::vector<char> seen(n, 0);
        seen[skip] = 1;
        int start = skip == 0 ? 1 : 0;
        seen[start] = 1;
        std::vector<int> stack{start};
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
        if (visited == n - 1) out.push_back(skip);
    }
    return out;
}

// Ordered pairs (u, v) of node ids where adding u->v keeps the graph a
// simple DAG: edge absent, u != v, and no existing path v ->* u.
std::vector<std::pair<int, int>> addable_edges(const WorkflowGraph& g) {
    int n = g.node_count();
    std::vector<std::vector<int>> out_adj(n);
    std::set<std::pair<int, int>> present;
    for (const auto& [src, dst] : g.edges) {
        out_adj[g.index_of(src)].push_back(g.index_of(dst));
        present.insert({src, dst});
    }
    // reach[i] = set of indices reachable from i (DFS per node; graphs are tiny)
    std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
    for (int i = 0; i < n; ++i) {
        std::vector<int> stack{i};
        reach[i][i] = 1;
        while (!stack.empty()) {
            int cur = stack.back();
            stack.pop_back();
            for (int nxt : out_adj[cur])
                if (!reach[i][nxt]) {
                    reach[i][nxt] = 1;
                    stack.push_back(nxt);
                }
        }
    }
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            int u = g.nodes[i].id, v = g.nodes[j].id;
            if (present.count({u, v})) continue;
            if (reach[j][i]) continue; // v already reaches u; adding u->v would cycle
            pairs.emplace_back(u, v);
        }
    return pairs;
}

double score_candidate(const WorkflowGraph& g, const RewardSource& reward,
                       const SearchConfig& config,
                       const std::vector<std::vector<double>>& task_vecs, Rng& reward_rng,
                       long& executor_calls, long& predictor_calls) {
    switch (reward.kind) {
        case RewardSource::Kind::ground_truth: {
            executor_calls += static_cast<long>(config.train_tasks.size());
            return success_rate(g, config.train_tasks);
        }
        case RewardSource::Kind::gnn: {
            predictor_calls += static_cast<long>(config.train_tasks.size());
            GraphInput input =
                compile_graph(g, *reward.encoder, reward.model->config().bidirectional);
            double sum = 0.0;
            for (const auto& vec : task_vecs)
                sum += reward.model->predict_probability(input, vec);
            return sum / static_cast<double>(task_vecs.size());
        }
        default:
            return reward_rng.next_unit();
    }
}

} // namespace

WorkflowGraph mutate(const WorkflowGraph& g, Rng& rng,
                     const std::vector<std::string>& vocab) {
    if (vocab.empty()) throw ConfigError("mutation needs a prompt vocabulary");

    std::vector<int> deletable = deletable_nodes(g);
    std::vector<std::pair<int, int>> new_edges = addable_edges(g);
    // nodes for which the vocabulary offers a different prompt
    std::vector<int> swappable;
    for (int i = 0; i < g.node_count(); ++i)
        for (const std::string& p : vocab)
            if (p != g.nodes[i].prompt) {
                swappable.push_back(i);
                break;
            }

    std::vector<Move> applicable{Move::add_node};
    if (!deletable.empty()) applicable.push_back(Move::delete_node);
    if (!new_edges.empty()) applicable.push_back(Move::add_edge);
    if (!g.edges.empty()) applicable.push_back(Move::remove_edge);
    if (!swappable.empty()) applicable.push_back(Move::replace_prompt);
    if (applicable.empty()) throw NoApplicableMoveError();

    WorkflowGraph out = g;
    switch (applicable[rng.next_below(applicable.size())]) {
        case Move::add_node: {
            int max_id = 0;
            for (const auto& node : g.nodes) max_id = std::max(max_id, node.id);
            int id = max_id + 1;
            out.nodes.push_back({id, vocab[rng.next_below(vocab.size())]});
            if (!g.nodes.empty()) {
                int src = g.nodes[rng.next_below(g.nodes.size())].id;
                out.edges.emplace_back(src, id);
            }
            break;
        }
        case Move::delete_node: {
            int idx = deletable[rng.next_below(deletable.size())];
            int id = g.nodes[idx].id;
            out.nodes.erase(out.nodes.begin() + idx);
            out.edges.erase(std::remove_if(out.edges.begin(), out.edges.end(),
                                           [id](const std::pair<int, int>& e) {
                                               return e.first == id || e.second == id;
                                           }),
                            out.edges.end());
            break;
        }
        case Move::add_edge:
            out.edges.push_back(new_edges[rng.next_below(new_edges.size())]);
            break;
        case Move::remove_edge:
            out.edges.erase(out.edges.begin() +
                            static_cast<long>(rng.next_below(out.edges.size())));
            break;
        case Move::replace_prompt: {
            AgentNode& node = out.nodes[swappable[rng.next_below(swappable.size())]];
            std::vector<const std::string*> alternatives;
            for (const std::string& p : vocab)
                if (p != node.prompt) alternatives.push_back(&p);
            node.prompt = *alternatives[rng.next_below(alternatives.size())];
            break;
        }
    }
    return out;
}

SearchReport optimize(const WorkflowGraph& seed_graph, const RewardSource& reward,
                      const SearchConfig& config) {
    reward.check();
    config.check();
    if (!validate(seed_graph).ok()) throw DataError("search seed graph is invalid");

    auto t0 = std::chrono::steady_clock::now();
    const std::vector<std::string> vocab =
        config.prompt_vocab.empty() ? default_prompt_vocabulary() : config.prompt_vocab;
    Rng mut_rng(sub_seed(config.seed, "search"));
    Rng reward_rng(sub_seed(reward.seed, "random-reward"));

    // Task encodings are shared across every gnn-scored candidate.
    std::vector<std::vector<double>> task_vecs;
    if (reward.kind == RewardSource::Kind::gnn)
        for (const auto& t : config.train_tasks)
            task_vecs.push_back(reward.encoder->encode_text(t.text));

    constexpr double kUnscored = std::numeric_limits<double>::lowest();
    struct Entry {
        WorkflowGraph graph;
        double reward;
    };
    std::vector<Entry> frontier{{seed_graph, kUnscored}};
    Entry best{seed_graph, kUnscored};
    std::vector<WorkflowGraph> best_at_step;

    SearchReport report;
    long evals = 0;
    int step = 0;
    while (evals < config.budget) {
        ++step;
        int want = std::min(config.beam * 4, config.budget - static_cast<int>(evals));
        std::vector<Entry> pool = frontier;
        for (int i = 0; i < want; ++i) {
            const WorkflowGraph& parent = frontier[i % frontier.size()].graph;
            WorkflowGraph cand = mutate(parent, mut_rng, vocab);
            if (!validate(cand).ok()) throw DataError("mutation produced an invalid graph");
            double r = score_candidate(cand, reward, config, task_vecs, reward_rng,
                                       report.executor_calls, report.predictor_calls);
            ++evals;
            pool.push_back({std::move(cand), r});
        }
        // Highest reward first; stable, so incumbents win ties and the
        // trajectory is reproducible.
        std::stable_sort(pool.begin(), pool.end(),
                         [](const Entry& a, const Entry& b) { return a.reward > b.reward; });
        pool.resize(std::min<size_t>(pool.size(), static_cast<size_t>(config.beam)));
        frontier = std::move(pool);
        if (frontier.front().reward > best.reward) best = frontier.front();
        best_at_step.push_back(best.graph);
        report.trace.push_back({step, evals, best.reward, 0.0});
    }

    // Test-side scores are always the executor's, kept out of the ledgers.
    for (size_t i = 0; i < best_at_step.size(); ++i)
        report.trace[i].test_score = success_rate(best_at_step[i], config.test_tasks);
    report.best = best.graph;
    report.score = report.trace.back().test_score;
    report.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

std::string trace_csv(const std::vector<TraceRow>& trace) {
    std::string out = "step,evals,best_reward,test_score\n";
    char buf[96];
    for (const TraceRow& row : trace) {
        std::snprintf(buf, sizeof(buf), "%d,%ld,%.6f,%.6f\n", row.step, row.evals,
                      row.best_reward, row.test_score);
        out += buf;
    }
    return out;
}

} // namespace flowcast
