#include "flowcast/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <unordered_map>
#include <unordered_set>

#include "flowcast/errors.hpp"

namespace flowcast {

double accuracy(const std::vector<int>& predicted, const std::vector<int>& actual) {
    if (predicted.size() != actual.size())
        throw LengthMismatchError(predicted.size(), actual.size());
    if (predicted.empty()) throw EmptyInputError("label lists");
    long hits = 0;
    for (size_t i = 0; i < predicted.size(); ++i)
        if (predicted[i] == actual[i]) ++hits;
    return static_cast<double>(hits) / static_cast<double>(predicted.size());
}

namespace {

// (sum/n) ordering without division: a.sum * b.n vs b.sum * a.n.
struct RateEntry {
    const std::string* id;
    long sum;
    long n;
};

bool rate_before(const RateEntry& a, const RateEntry& b) {
    long lhs = a.sum * b.n;
    long rhs = b.sum * a.n;
    if (lhs != rhs) return lhs > rhs; // higher rate first
    return *a.id < *b.id;            // ties: ascending workflow id
}

std::vector<std::string> top_ids(std::vector<RateEntry> entries, int k) {
    std::sort(entries.begin(), entries.end(), rate_before);
    std::vector<std::string> out;
    out.reserve(k);
    for (int i = 0; i < k; ++i) out.push_back(*entries[i].id);
    return out;
}

} // namespace

RankingResult utility_at_k(const std::vector<WorkflowLabels>& table, int k) {
    if (table.empty()) throw EmptyInputError("workflow label table");
    if (k < 1 || k > static_cast<int>(table.size()))
        throw KOutOfRangeError(k, table.size());

    std::vector<RateEntry> pred, truth;
    std::unordered_set<std::string> seen;
    pred.reserve(table.size());
    truth.reserve(table.size());
    for (const WorkflowLabels& row : table) {
        if (row.actual.empty() || row.predicted.empty())
            throw MissingWorkflowError(row.workflow);
        if (row.predicted.size() != row.actual.size())
            throw LengthMismatchError(row.predicted.size(), row.actual.size());
        if (!seen.insert(row.workflow).second)
            throw DataError("workflow '" + row.workflow + "' appears twice in the table");
        long n = static_cast<long>(row.actual.size());
        long psum = 0, tsum = 0;
        for (int v : row.predicted) psum += v;
        for (int v : row.actual) tsum += v;
        pred.push_back({&row.workflow, psum, n});
        truth.push_back({&row.workflow, tsum, n});
    }

    RankingResult out;
    out.k = k;
    out.top_predicted = top_ids(std::move(pred), k);
    out.top_true = top_ids(std::move(truth), k);
    std::unordered_set<std::string> in_true(out.top_true.begin(), out.top_true.end());
    long overlap = 0;
    for (const std::string& id : out.top_predicted)
        if (in_true.count(id)) ++overlap;
    out.utility = static_cast<double>(overlap) / static_cast<double>(k);
    return out;
}

int default_k(size_t workflow_count) {
    size_t k = (workflow_count + 9) / 10; // ceil(0.1 * n)
    return static_cast<int>(k > 0 ? k : 1);
}

std::map<int, double> success_by_node_count(const std::vector<WorkflowGraph>& graphs,
                                            const std::vector<LabeledSample>& labels) {
    std::unordered_map<std::string, int> nodes_of;
    for (const WorkflowGraph& g : graphs) nodes_of[g.id] = g.node_count();
    std::map<int, std::pair<long, long>> buckets; // node count -> (hits, total)
    for (const LabeledSample& s : labels) {
        auto it = nodes_of.find(s.workflow);
        if (it == nodes_of.end())
            throw DataError("label references unknown workflow '" + s.workflow + "'");
        auto& [hits, total] = buckets[it->second];
        hits += s.label;
        ++total;
    }
    std::map<int, double> out;
    for (const auto& [count, tally] : buckets)
        out[count] = static_cast<double>(tally.first) / static_cast<double>(tally.second);
    return out;
}

std::string metrics_csv(const std::vector<MetricRow>& rows) {
    std::string out = "metric,domain,model,value\n";
    char buf[64];
    for (const MetricRow& r : rows) {
        std::snprintf(buf, sizeof(buf), "%.6f", r.value);
        out += r.metric + "," + r.domain + "," + r.model + "," + buf + "\n";
    }
    return out;
}

} // namespace flowcast
