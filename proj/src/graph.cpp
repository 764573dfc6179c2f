#include "flowcast/graph.hpp"

#include <algorithm>
#include <queue>
#include <set>

#include "flowcast/errors.hpp"

namespace flowcast {

namespace {

// DFS looking for a directed cycle over node indices; returns one cycle as
// node ids when found.
bool find_cycle(const std::vector<std::vector<int>>& out, int n,
                std::vector<int>& stack_ids, const std::vector<int>& ids) {
    std::vector<int> state(n, 0); // 0 unvisited, 1 on stack, 2 done
    std::vector<int> stack;
    for (int start = 0; start < n; ++start) {
        if (state[start] != 0) continue;
        // iterative DFS with explicit edge cursors
        std::vector<std::pair<int, size_t>> frames{{start, 0}};
        state[start] = 1;
        stack.push_back(start);
        while (!frames.empty()) {
            auto& [v, cursor] = frames.back();
            if (cursor < out[v].size()) {
                int w = out[v][cursor++];
                if (state[w] == 1) {
                    // unwind stack to w
                    auto it = std::find(stack.begin(), stack.end(), w);
                    for (; it != stack.end(); ++it) stack_ids.push_back(ids[*it]);
                    return true;
                }
                if (state[w] == 0) {
                    state[w] = 1;
                    stack.push_back(w);
                    frames.emplace_back(w, 0);
                }
            } else {
                state[v] = 2;
                stack.pop_back();
                frames.pop_back();
            }
        }
    }
    return false;
}

} // namespace

ValidationReport validate(const WorkflowGraph& g) {
    ValidationReport report;
    auto add = [&](Violation::Kind kind, std::string msg) {
        report.violations.push_back({kind, std::move(msg), {}});
    };

    std::unordered_map<int, int> index;
    for (size_t i = 0; i < g.nodes.size(); ++i) {
        const AgentNode& node = g.nodes[i];
        if (!index.emplace(node.id, static_cast<int>(i)).second)
            add(Violation::Kind::DuplicateNodeId,
                "duplicate node id " + std::to_string(node.id));
        if (node.prompt.empty())
            add(Violation::Kind::EmptyPrompt,
                "node " + std::to_string(node.id) + " has an empty prompt");
    }

    std::set<std::pair<int, int>> seen;
    bool endpoints_ok = true;
    for (const auto& [src, dst] : g.edges) {
        if (src == dst)
            add(Violation::Kind::SelfLoop, "self-loop on node " + std::to_string(src));
        if (!seen.insert({src, dst}).second)
            add(Violation::Kind::DuplicateEdge,
                "duplicate edge (" + std::to_string(src) + "," + std::to_string(dst) + ")");
        for (int endpoint : {src, dst}) {
            if (!index.count(endpoint)) {
                add(Violation::Kind::UnknownEndpoint,
                    "edge endpoint " + std::to_string(endpoint) + " is not a node");
                endpoints_ok = false;
            }
        }
    }

    // Cycle detection only makes sense once endpoints resolve.
    if (endpoints_ok && !g.nodes.empty()) {
        int n = g.node_count();
        std::vector<std::vector<int>> out(n);
        std::vector<int> ids(n);
        for (int i = 0; i < n; ++i) ids[i] = g.nodes[i].id;
        for (const auto& [src, dst] : g.edges) {
            if (src == dst) continue;
            out[index[src]].push_back(index[dst]);
        }
        std::vector<int> cycle;
        if (find_cycle(out, n, cycle, ids)) {
            Violation v{Violation::Kind::Cycle, "cycle: ", cycle};
            for (size_t i = 0; i < cycle.size(); ++i)
                v.message += (i ? "->" : "") + std::to_string(cycle[i]);
            report.violations.push_back(std::move(v));
        }
    }
    return report;
}

std::vector<int> topo_order(const WorkflowGraph& g) {
    std::unordered_map<int, int> index;
    for (size_t i = 0; i < g.nodes.size(); ++i) index[g.nodes[i].id] = static_cast<int>(i);

    int n = g.node_count();
    std::vector<int> indeg(n, 0);
    std::vector<std::vector<int>> out(n);
    for (const auto& [src, dst] : g.edges) {
        auto si = index.find(src);
        auto di = index.find(dst);
        if (si == index.end() || di == index.end())
            throw UnknownNodeError(si == index.end() ? src : dst);
        out[si->second].push_back(di->second);
        ++indeg[di->second];
    }

    // Kahn's algorithm; the min-heap over ids gives the deterministic
    // tie-break among ready nodes.
    std::priority_queue<std::pair<int, int>, std::vector<std::pair<int, int>>,
                        std::greater<>> ready; // (id, index)
    for (int i = 0; i < n; ++i)
        if (indeg[i] == 0) ready.push({g.nodes[i].id, i});

    std::vector<int> order;
    order.reserve(n);
    while (!ready.empty()) {
        auto [id, i] = ready.top();
        ready.pop();
        order.push_back(id);
        for (int j : out[i])
            if (--indeg[j] == 0) ready.push({g.nodes[j].id, j});
    }
    if (static_cast<int>(order.size()) != n) {
        std::vector<int> cycle;
        for (const Violation& v : validate(g).violations)
            if (v.kind == Violation::Kind::Cycle) cycle = v.cycle;
        throw CyclicGraphError(std::move(cycle));
    }
    return order;
}

std::vector<int> in_neighbors(const WorkflowGraph& g, int node_id) {
    if (g.index_of(node_id) < 0) throw UnknownNodeError(node_id);
    std::vector<int> preds;
    for (const auto& [src, dst] : g.edges)
        if (dst == node_id) preds.push_back(src);
    std::sort(preds.begin(), preds.end());
    return preds;
}

std::vector<std::vector<int>> in_neighbor_indices(const WorkflowGraph& g,
                                                  bool bidirectional) {
    std::unordered_map<int, int> index;
    for (size_t i = 0; i < g.nodes.size(); ++i) index[g.nodes[i].id] = static_cast<int>(i);
    std::vector<std::vector<int>> nbr(g.nodes.size());
    for (const auto& [src, dst] : g.edges) {
        auto si = index.find(src);
        auto di = index.find(dst);
        if (si == index.end() || di == index.end())
            throw UnknownNodeError(si == index.end() ? src : dst);
        nbr[di->second].push_back(si->second);
        if (bidirectional) nbr[si->second].push_back(di->second);
    }
    return nbr;
}

} // namespace flowcast
