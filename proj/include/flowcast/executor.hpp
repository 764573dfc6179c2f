#pragma once

#include <string>
#include <vector>

#include "flowcast/graph.hpp"

namespace flowcast {

// Capability keywords recognized in prompts.
const std::vector<std::string>& skill_vocabulary();

// Lowercased prompt tokens intersected with the skill vocabulary.
std::vector<std::string> skill_tags(const std::string& prompt);

// Deterministic stand-in for LLM-driven execution + evaluation. Agents run
// in topological order; the run succeeds (e = 1) iff
//   (a) some directed path visits nodes whose tags spell out the task's
//       required sequence as an in-order subsequence (each node on the
//       path may account for at most one element), and
//   (b) the node count stays within the task's budget.
// A positive noise_rate flips the label with that probability, keyed by a
// hash of (graph id, task id, noise seed) so every pair is stable across
// runs and platforms.
int execute_workflow(const WorkflowGraph& g, const TaskInstance& task);

// Mean label of g over a non-empty task set.
double success_rate(const WorkflowGraph& g, const std::vector<TaskInstance>& tasks);

} // namespace flowcast
