#pragma once

#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace flowcast {

// One agent in a workflow. The prompt is the node attribute everything
// downstream (feature encoding, skill extraction) is derived from.
struct AgentNode {
    int id = 0;
    std::string prompt;
};

// Attributed workflow DAG. Nodes and edges keep file order; ids are
// arbitrary ints, unique within the graph. Immutable by convention after
// construction -- all operations on graphs are pure.
struct WorkflowGraph {
    std::string id;
    std::vector<AgentNode> nodes;
    std::vector<std::pair<int, int>> edges; // (src id, dst id)

    int node_count() const { return static_cast<int>(nodes.size()); }

    // index into nodes[] for a node id, or -1
    int index_of(int node_id) const {
        for (size_t i = 0; i < nodes.size(); ++i)
            if (nodes[i].id == node_id) return static_cast<int>(i);
        return -1;
    }
};

// Criterion descriptor consumed by the executor. Serialized under "eval"
// in the task JSONL.
struct EvalSpec {
    std::vector<std::string> required_sequence;
    int max_nodes = 12;
    double noise_rate = 0.0;
    uint64_t noise_seed = 0;
};

struct TaskInstance {
    std::string id;
    std::string text;
    std::string domain; // coding | math | reason | synthetic
    EvalSpec eval;
};

struct Violation {
    enum class Kind {
        DuplicateNodeId,
        EmptyPrompt,
        SelfLoop,
        DuplicateEdge,
        UnknownEndpoint,
        Cycle,
    };
    Kind kind;
    std::string message;
    std::vector<int> cycle; // populated for Kind::Cycle only
};

// Violations are data, not failures: validate never throws.
struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

ValidationReport validate(const WorkflowGraph& g);

// Node ids such that every edge (u,v) has u before v; ties broken by
// ascending node id so executor traversal and tests are reproducible.
// Throws CyclicGraphError when no such order exists.
std::vector<int> topo_order(const WorkflowGraph& g);

// {u : (u, node_id) in edges}, sorted ascending. Throws UnknownNodeError.
std::vector<int> in_neighbors(const WorkflowGraph& g, int node_id);

// Positional adjacency used by the GNN and the executor: for node index i,
// the indices of its in-neighbors (edge direction respected; reversed
// edges appended when bidirectional is set).
std::vector<std::vector<int>> in_neighbor_indices(const WorkflowGraph& g,
                                                  bool bidirectional = false);

} // namespace flowcast
