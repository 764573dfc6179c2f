#include "flowcast/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "flowcast/errors.hpp"
#include "flowcast/executor.hpp"
#include "flowcast/io.hpp"
#include "flowcast/parallel.hpp"
#include "flowcast/rng.hpp"

namespace flowcast {

void GenSpec::check() const {
    if (workflows < 1) throw ConfigError("workflows must be >= 1");
    if (node_min < 1 || node_max > 12 || node_min > node_max)
        throw ConfigError("node range must satisfy 1 <= min <= max <= 12");
    if (!(edge_extra >= 0.0 && edge_extra <= 1.0))
        throw ConfigError("edge_extra must lie in [0, 1]");
    if (palette_min < 1 || palette_min > palette_max)
        throw ConfigError("palette range must satisfy 1 <= min <= max");
    if (tasks < 1) throw ConfigError("tasks must be >= 1");
    if (seq_max < 1) throw ConfigError("seq_max must be >= 1");
    if (budget_min < 1 || budget_min > budget_max)
        throw ConfigError("budget range must satisfy 1 <= min <= max");
    if (!(noise_rate >= 0.0 && noise_rate <= 1.0))
        throw ConfigError("noise_rate must lie in [0, 1]");
}

void FilterSpec::check() const {
    if (!(low >= 0.0 && low < high && high <= 1.0))
        throw ConfigError("filter bounds must satisfy 0 <= low < high <= 1");
    if (probe_count < 1) throw ConfigError("probe_count must be >= 1");
}

void SplitSpec::check() const {
    if (!(train > 0.0 && val > 0.0 && test > 0.0))
        throw ConfigError("split ratios must be positive");
    if (std::fabs(train + val + test - 1.0) > 1e-9)
        throw ConfigError("split ratios must sum to 1");
}

std::vector<std::string> default_prompt_vocabulary() {
    // One prompt per skill; each prompt mentions exactly one skill token.
    // Keeping the map one-to-one makes a workflow's skill coverage equal to
    // its palette, which spreads per-workflow success rates evenly instead
    // of compressing them toward zero.
    return {
        "plan the overall approach",
        "write code for the current step",
        "review the proposed work",
        "test the produced artifact",
        "fix any defects found",
        "solve the core problem",
        "verify the final answer",
        "aggregate the partial results",
    };
}

FilterSpec default_filter_for_domain(const std::string& domain) {
    FilterSpec spec;
    spec.probe_count = 26;
    if (domain == "coding") {
        spec.low = 0.1;
        spec.high = 0.9;
    } else if (domain == "math") {
        spec.low = 0.2;
        spec.high = 0.8;
    } else if (domain == "reason") {
        spec.low = 0.3;
        spec.high = 0.9;
    } else if (domain == "synthetic") {
        spec.low = 0.25;
        spec.high = 0.75;
    } else {
        throw ConfigError("unknown task domain '" + domain + "'");
    }
    return spec;
}

namespace {

std::string counted_id(const char* prefix, int i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s-%05d", prefix, i);
    return buf;
}

std::string ordinal(int i) {
    if (i == 1) return "1st";
    if (i == 2) return "2nd";
    if (i == 3) return "3rd";
    return std::to_string(i) + "th";
}

// Spells the requirement out token by token: the skill fused with its
// position ("code1st") and the budget fused with "limit", so a bag-of-words
// encoder still sees order and budget as distinct features.
std::string task_text(const std::vector<std::string>& seq, int budget) {
    std::string text = "synthetic goal: apply";
    for (size_t i = 0; i < seq.size(); ++i) {
        if (i > 0) text += " then";
        text += " " + seq[i] + ordinal(static_cast<int>(i) + 1);
    }
    text += " within limit" + std::to_string(budget);
    return text;
}

} // namespace

std::vector<WorkflowGraph> generate_workflows(const GenSpec& spec) {
    spec.check();
    const std::vector<std::string> vocab =
        spec.prompt_vocab.empty() ? default_prompt_vocabulary() : spec.prompt_vocab;
    Rng rng(sub_seed(spec.seed, "workflows"));
    std::vector<WorkflowGraph> graphs;
    graphs.reserve(spec.workflows);
    for (int w = 0; w < spec.workflows; ++w) {
        WorkflowGraph g;
        g.id = counted_id("wf", w);
        int n = rng.next_int(spec.node_min, spec.node_max);

        int v = static_cast<int>(vocab.size());
        int psize = rng.next_int(std::min(spec.palette_min, v), std::min(spec.palette_max, v));
        std::vector<size_t> palette = rng.sample_indices(vocab.size(), psize);

        g.nodes.reserve(n);
        for (int id = 1; id <= n; ++id)
            g.nodes.push_back({id, vocab[palette[rng.next_below(palette.size())]]});

        // Edges only run from earlier to later positions of a random
        // permutation, so the result is a DAG by construction. One backbone
        // edge per non-first position keeps the graph weakly connected.
        std::vector<int> perm(n);
        std::iota(perm.begin(), perm.end(), 1);
        rng.shuffle(perm);
        std::set<std::pair<int, int>> present;
        for (int j = 1; j < n; ++j) {
            int i = rng.next_int(0, j - 1);
            g.edges.emplace_back(perm[i], perm[j]);
            present.insert({perm[i], perm[j]});
        }
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (!present.count({perm[i], perm[j]}) && rng.next_bool(spec.edge_extra))
                    g.edges.emplace_back(perm[i], perm[j]);
        graphs.push_back(std::move(g));
    }
    return graphs;
}

std::vector<TaskInstance> generate_tasks(const GenSpec& spec) {
    spec.check();
    const std::vector<std::string> skills = skill_vocabulary();
    Rng rng(sub_seed(spec.seed, "tasks"));
    uint64_t noise_seed = sub_seed(spec.seed, "noise");
    std::vector<TaskInstance> tasks;
    std::unordered_set<std::string> seen;
    long attempts = 200L * spec.tasks;
    while (static_cast<int>(tasks.size()) < spec.tasks && attempts-- > 0) {
        int len = rng.next_int(1, spec.seq_max);
        std::vector<std::string> seq;
        seq.reserve(len);
        for (int i = 0; i < len; ++i) seq.push_back(skills[rng.next_below(skills.size())]);
        int budget = rng.next_int(spec.budget_min, spec.budget_max);
        std::string text = task_text(seq, budget);
        if (!seen.insert(text).second) continue;
        TaskInstance t;
        t.id = counted_id("task", static_cast<int>(tasks.size()));
        t.text = text;
        t.domain = "synthetic";
        t.eval.required_sequence = std::move(seq);
        t.eval.max_nodes = budget;
        t.eval.noise_rate = spec.noise_rate;
        t.eval.noise_seed = noise_seed;
        tasks.push_back(std::move(t));
    }
    if (static_cast<int>(tasks.size()) < spec.tasks)
        throw DataError("task space exhausted: only " + std::to_string(tasks.size()) +
                        " distinct tasks for the requested " + std::to_string(spec.tasks));
    return tasks;
}

FilterResult filter_tasks(const std::vector<TaskInstance>& tasks,
                          const std::vector<WorkflowGraph>& probes,
                          const FilterSpec& spec) {
    spec.check();
    if (probes.empty()) throw EmptyProbeSetError();
    FilterResult out;
    out.rates.reserve(tasks.size());
    for (const TaskInstance& t : tasks) {
        long hits = 0;
        for (const WorkflowGraph& g : probes) hits += execute_workflow(g, t);
        double rate = static_cast<double>(hits) / static_cast<double>(probes.size());
        out.rates.push_back(rate);
        if (rate >= spec.low && rate <= spec.high) out.retained.push_back(t);
    }
    return out;
}

std::vector<LabeledSample> label_dataset(const std::vector<WorkflowGraph>& graphs,
                                         const std::vector<TaskInstance>& tasks,
                                         int threads) {
    std::vector<LabeledSample> samples(graphs.size() * tasks.size());
    parallel_for(samples.size(), threads, [&](size_t i) {
        const WorkflowGraph& g = graphs[i / tasks.size()];
        const TaskInstance& t = tasks[i % tasks.size()];
        samples[i] = {g.id, t.id, execute_workflow(g, t)};
    });
    return samples;
}

SplitResult split(const std::vector<LabeledSample>& samples, const SplitSpec& spec) {
    spec.check();
    if (samples.size() < 10) throw TooFewSamplesError(samples.size());
    std::vector<LabeledSample> shuffled = samples;
    Rng rng(spec.seed);
    rng.shuffle(shuffled);
    size_t n = shuffled.size();
    size_t n_val = static_cast<size_t>(std::floor(spec.val * static_cast<double>(n)));
    size_t n_test = static_cast<size_t>(std::floor(spec.test * static_cast<double>(n)));
    size_t n_train = n - n_val - n_test; // remainder goes to train
    SplitResult out;
    out.train.assign(shuffled.begin(), shuffled.begin() + n_train);
    out.val.assign(shuffled.begin() + n_train, shuffled.begin() + n_train + n_val);
    out.test.assign(shuffled.begin() + n_train + n_val, shuffled.end());
    return out;
}

std::vector<LabeledSample> load_labels(const std::string& path,
                                       const std::vector<WorkflowGraph>& graphs,
                                       const std::vector<TaskInstance>& tasks) {
    std::unordered_set<std::string> graph_ids, task_ids;
    for (const auto& g : graphs) graph_ids.insert(g.id);
    for (const auto& t : tasks) task_ids.insert(t.id);

    std::vector<LabeledSample> samples;
    int line_no = 0;
    for (const std::string& line : read_lines(path)) {
        ++line_no;
        if (line.empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded()) throw FormatError(line_no, "not valid JSON");
        if (!j.is_object() || !j.contains("workflow") || !j.contains("task") ||
            !j.contains("label"))
            throw FormatError(line_no, "expected keys workflow, task, label");
        if (!j["workflow"].is_string() || !j["task"].is_string())
            throw FormatError(line_no, "workflow and task must be strings");
        if (!j["label"].is_number_integer())
            throw FormatError(line_no, "label must be the integer 0 or 1");
        int label = j["label"].get<int>();
        if (label != 0 && label != 1)
            throw FormatError(line_no, "label must be 0 or 1, got " + std::to_string(label));
        LabeledSample s{j["workflow"].get<std::string>(), j["task"].get<std::string>(), label};
        if (!graph_ids.count(s.workflow)) throw UnresolvedIdError(line_no, "workflow", s.workflow);
        if (!task_ids.count(s.task)) throw UnresolvedIdError(line_no, "task", s.task);
        samples.push_back(std::move(s));
    }
    return samples;
}

void save_labels(const std::string& path, const std::vector<LabeledSample>& samples) {
    std::string out;
    for (const LabeledSample& s : samples) {
        json j;
        j["workflow"] = s.workflow;
        j["task"] = s.task;
        j["label"] = s.label;
        out += j.dump();
        out += '\n';
    }
    write_file(path, out);
}

std::vector<LabeledSample> majority_labels(
    const std::vector<std::vector<LabeledSample>>& runs) {
    if (runs.empty()) throw DataError("majority vote needs at least one label run");
    const size_t k = runs.size();
    std::unordered_map<std::string, long> votes;
    auto key = [](const LabeledSample& s) { return s.workflow + '\x1f' + s.task; };
    for (const auto& run : runs) {
        if (run.size() != runs.front().size())
            throw DataError("label runs cover different numbers of pairs");
        for (const LabeledSample& s : run) votes[key(s)] += s.label;
    }
    if (votes.size() != runs.front().size())
        throw DataError("label runs disagree on the set of (workflow, task) pairs");
    std::vector<LabeledSample> out;
    out.reserve(runs.front().size());
    for (const LabeledSample& s : runs.front()) {
        long sum = votes.at(key(s));
        out.push_back({s.workflow, s.task, 2 * sum > static_cast<long>(k) ? 1 : 0});
    }
    return out;
}

} // namespace flowcast
