#pragma once

#include <map>
#include <string>
#include <vector>

#include "flowcast/dataset.hpp"
#include "flowcast/graph.hpp"

namespace flowcast {

// Fraction of positions where predicted == actual.
double accuracy(const std::vector<int>& predicted, const std::vector<int>& actual);

// Predicted and actual labels of one workflow over its test tasks,
// position-aligned.
struct WorkflowLabels {
    std::string workflow;
    std::vector<int> predicted;
    std::vector<int> actual;
};

struct RankingResult {
    std::vector<std::string> top_true;      // top-k ids by actual success rate
    std::vector<std::string> top_predicted; // top-k ids by predicted success rate
    int k = 0;
    double utility = 0.0; // |top_true ∩ top_predicted| / k
};

// Ranks workflows by per-workflow mean label, descending, ties broken by
// ascending workflow id; rate comparisons use integer cross products, so
// the ordering is exact. k must lie in [1, #workflows].
RankingResult utility_at_k(const std::vector<WorkflowLabels>& table, int k);

// Default ranking depth: 10% of the workflow universe, at least 1.
int default_k(size_t workflow_count);

// node count -> mean label over all samples of graphs with that many
// nodes; buckets without samples are absent.
std::map<int, double> success_by_node_count(const std::vector<WorkflowGraph>& graphs,
                                            const std::vector<LabeledSample>& labels);

struct MetricRow {
    std::string metric;
    std::string domain;
    std::string model;
    double value = 0.0;
};

// "metric,domain,model,value" with a header row; values printed with six
// decimals so identical inputs serialize identically.
std::string metrics_csv(const std::vector<MetricRow>& rows);

} // namespace flowcast
