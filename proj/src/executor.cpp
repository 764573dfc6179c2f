#include "flowcast/executor.hpp"

#include <algorithm>
#include <unordered_map>

#include "flowcast/encode.hpp"
#include "flowcast/errors.hpp"
#include "flowcast/rng.hpp"

namespace flowcast {

const std::vector<std::string>& skill_vocabulary() {
    static const std::vector<std::string> vocab = {
        "plan", "code", "review", "test", "fix", "solve", "verify", "aggregate"};
    return vocab;
}

std::vector<std::string> skill_tags(const std::string& prompt) {
    const std::vector<std::string>& vocab = skill_vocabulary();
    std::vector<std::string> tags;
    for (const std::string& tok : tokenize(prompt)) {
        if (std::find(vocab.begin(), vocab.end(), tok) == vocab.end()) continue;
        if (std::find(tags.begin(), tags.end(), tok) == tags.end()) tags.push_back(tok);
    }
    return tags;
}

namespace {

bool path_satisfies(const WorkflowGraph& g, const std::vector<std::string>& seq) {
    int n = g.node_count();
    if (n == 0 || seq.empty()) return false;

    // tag sets per node index
    std::vector<std::vector<std::string>> tags(n);
    std::unordered_map<int, int> index;
    for (int i = 0; i < n; ++i) {
        tags[i] = skill_tags(g.nodes[i].prompt);
        index[g.nodes[i].id] = i;
    }

    std::vector<std::vector<int>> in = in_neighbor_indices(g);

    // Longest required-sequence prefix realizable on any path ending at
    // each node, in topological order. Greedy advance is optimal because
    // matching an element earlier never blocks a later one, and the
    // advance is monotone in the incoming prefix length.
    std::vector<int> matched(n, 0);
    int want = static_cast<int>(seq.size());
    for (int id : topo_order(g)) {
        int i = index[id];
        int best = 0;
        for (int p : in[i]) best = std::max(best, matched[p]);
        if (best < want &&
            std::find(tags[i].begin(), tags[i].end(), seq[best]) != tags[i].end())
            ++best;
        matched[i] = best;
        if (best == want) return true;
    }
    return false;
}

} // namespace

int execute_workflow(const WorkflowGraph& g, const TaskInstance& task) {
    const EvalSpec& spec = task.eval;
    int e = (path_satisfies(g, spec.required_sequence) &&
             g.node_count() <= spec.max_nodes)
                ? 1
                : 0;
    if (spec.noise_rate > 0.0) {
        uint64_t h = fnv1a64(g.id + "\x1f" + task.id) ^ spec.noise_seed;
        // splitmix64 finalizer decorrelates adjacent ids
        h += 0x9e3779b97f4a7c15ULL;
        h = (h ^ (h >> 30)) * 0xbf58476d1ce4e5b9ULL;
        h = (h ^ (h >> 27)) * 0x94d049bb133111ebULL;
        h ^= h >> 31;
        double u = (h >> 11) * 0x1.0p-53;
        if (u < spec.noise_rate) e = 1 - e;
    }
    return e;
}

double success_rate(const WorkflowGraph& g, const std::vector<TaskInstance>& tasks) {
    if (tasks.empty()) throw DataError("success_rate over an empty task set");
    int hits = 0;
    for (const TaskInstance& t : tasks) hits += execute_workflow(g, t);
    return static_cast<double>(hits) / static_cast<double>(tasks.size());
}

} // namespace flowcast
