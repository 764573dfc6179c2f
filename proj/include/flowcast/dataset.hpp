#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "flowcast/graph.hpp"

namespace flowcast {

struct LabeledSample {
    std::string workflow;
    std::string task;
    int label = 0; // e in {0, 1}
};

// Synthetic-domain generator knobs. Workflows are random DAGs over a
// prompt vocabulary; tasks pair an ordered skill requirement with a node
// budget, both spelled out in the task text so the encoder can see them.
//
// Each workflow draws its prompts from a per-workflow palette (a random
// subset of the vocabulary) rather than the full vocabulary. That spreads
// workflow quality: small-palette graphs fail most tasks, broad dense ones
// succeed often, and the per-workflow success rates cover a wide range
// instead of clustering.
struct GenSpec {
    int workflows = 200;
    int node_min = 5;
    int node_max = 8;
    double edge_extra = 0.55; // probability of each optional forward edge
    int palette_min = 2;      // per-workflow prompt palette size range,
    int palette_max = 8;      // clamped to the vocabulary size
    int tasks = 300;          // candidates drawn before filtering
    int seq_max = 2;          // required-sequence length drawn from [1, seq_max]
    int budget_min = 8;       // >= node_max: budgets bind mutated search
    int budget_max = 12;      // graphs, not freshly generated ones
    double noise_rate = 0.0;
    uint64_t seed = 0;
    std::vector<std::string> prompt_vocab; // empty -> default vocabulary

    void check() const;
};

std::vector<std::string> default_prompt_vocabulary();

std::vector<WorkflowGraph> generate_workflows(const GenSpec& spec);
std::vector<TaskInstance> generate_tasks(const GenSpec& spec);

struct FilterSpec {
    double low = 0.25;
    double high = 0.75;
    int probe_count = 26;

    void check() const;
};

// Success-rate band per task domain; probe_count everywhere matches the
// smallest probe subset used for the coding band.
FilterSpec default_filter_for_domain(const std::string& domain);

struct FilterResult {
    std::vector<TaskInstance> retained;
    std::vector<double> rates; // success rate per input task, for audit
};

// Keeps tasks whose success rate over the probe workflows lies in
// [low, high], bounds inclusive.
FilterResult filter_tasks(const std::vector<TaskInstance>& tasks,
                          const std::vector<WorkflowGraph>& probes,
                          const FilterSpec& spec);

// One sample per (workflow, task) pair, workflow-major order. Labeling
// fans out over pairs when threads > 1; the output order is fixed either
// way.
std::vector<LabeledSample> label_dataset(const std::vector<WorkflowGraph>& graphs,
                                         const std::vector<TaskInstance>& tasks,
                                         int threads = 1);

struct SplitSpec {
    double train = 0.8;
    double val = 0.1;
    double test = 0.1;
    uint64_t seed = 0;

    void check() const;
};

struct SplitResult {
    std::vector<LabeledSample> train, val, test;
};

// Sample-level split: seeded shuffle, then floor-sized val/test with the
// remainder going to train.
SplitResult split(const std::vector<LabeledSample>& samples, const SplitSpec& spec);

// JSONL {"workflow": ..., "task": ..., "label": 0|1}; every id must
// resolve against the supplied graphs/tasks.
std::vector<LabeledSample> load_labels(const std::string& path,
                                       const std::vector<WorkflowGraph>& graphs,
                                       const std::vector<TaskInstance>& tasks);
void save_labels(const std::string& path, const std::vector<LabeledSample>& samples);

// Reduces k label files over the same pairs to one sample per pair by
// strict majority (ties resolve to 0). Pair sets must agree.
std::vector<LabeledSample> majority_labels(
    const std::vector<std::vector<LabeledSample>>& runs);

} // namespace flowcast
