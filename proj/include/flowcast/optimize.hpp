#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "flowcast/graph.hpp"
#include "flowcast/model.hpp"

namespace flowcast {

// Scorer used inside the search. gnn reads the trained predictor;
// ground_truth runs the executor on the train tasks; random draws a seeded
// uniform value once per candidate.
struct RewardSource {
    enum class Kind { gnn, ground_truth, random };

    Kind kind = Kind::gnn;
    const PredictorModel* model = nullptr;   // gnn
    const TextEncoder* encoder = nullptr;    // gnn
    uint64_t seed = 0;                       // random

    void check() const;
};

RewardSource::Kind reward_kind_from_string(const std::string& s);
std::string reward_kind_to_string(RewardSource::Kind k);

struct SearchConfig {
    int budget = 50; // number of candidate evaluations
    int beam = 1;    // 1 = greedy hill climbing
    uint64_t seed = 0;
    std::vector<TaskInstance> train_tasks; // scored during search
    std::vector<TaskInstance> test_tasks;  // final report only
    std::vector<std::string> prompt_vocab; // empty -> default vocabulary

    void check() const;
};

struct TraceRow {
    int step = 0;
    long evals = 0;          // cumulative candidates scored
    double best_reward = 0.0; // running best per the reward source
    double test_score = 0.0;  // executor rate of the running best, filled post-search
};

struct SearchReport {
    WorkflowGraph best;
    double score = 0.0;       // executor success rate of best on test tasks
    long executor_calls = 0;  // search phase only; final scoring excluded
    long predictor_calls = 0;
    double wall_time_s = 0.0;
    std::vector<TraceRow> trace;
};

// One random structural edit: add node (+ incoming edge), delete a node
// whose removal keeps the graph weakly connected, add a DAG-safe edge,
// remove an edge, or replace a prompt — uniform over the applicable move
// kinds, then uniform within the chosen kind. Output is always valid.
WorkflowGraph mutate(const WorkflowGraph& g, Rng& rng,
                     const std::vector<std::string>& vocab);

// Beam search (greedy when beam = 1): each step scores up to beam*4
// mutations of the frontier, keeps the best `beam` of frontier ∪
// candidates, and stops when `budget` candidates have been scored. The
// reported score is always the executor rate on the test tasks.
SearchReport optimize(const WorkflowGraph& seed_graph, const RewardSource& reward,
                      const SearchConfig& config);

// "step,evals,best_reward,test_score" rows for the trace plot.
std::string trace_csv(const std::vector<TraceRow>& trace);

} // namespace flowcast
