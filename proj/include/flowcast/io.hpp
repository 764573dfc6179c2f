#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "flowcast/graph.hpp"

namespace flowcast {

using json = nlohmann::ordered_json;

json graph_to_json(const WorkflowGraph& g);
WorkflowGraph graph_from_json(const json& j);
json task_to_json(const TaskInstance& t);
TaskInstance task_from_json(const json& j);

// JSONL readers/writers. Loaders validate every record and attach the
// 1-based line number to any error. One record per line.
std::vector<WorkflowGraph> load_graphs(const std::string& path);
std::vector<TaskInstance> load_tasks(const std::string& path);
void save_graphs(const std::string& path, const std::vector<WorkflowGraph>& graphs);
void save_tasks(const std::string& path, const std::vector<TaskInstance>& tasks);

// Shared plumbing.
std::vector<std::string> read_lines(const std::string& path);
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

} // namespace flowcast
