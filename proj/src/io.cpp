#include "flowcast/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "flowcast/errors.hpp"

namespace flowcast {

namespace {

const std::set<std::string> kDomains = {"coding", "math", "reason", "synthetic"};

[[noreturn]] void format_fail(int line, const std::string& msg) {
    throw FormatError(line, msg);
}

} // namespace

json graph_to_json(const WorkflowGraph& g) {
    json nodes = json::array();
    for (const AgentNode& n : g.nodes)
        nodes.push_back({{"id", n.id}, {"prompt", n.prompt}});
    json edges = json::array();
    for (const auto& [src, dst] : g.edges) edges.push_back({src, dst});
    return {{"id", g.id}, {"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

WorkflowGraph graph_from_json(const json& j) {
    WorkflowGraph g;
    g.id = j.at("id").get<std::string>();
    for (const json& n : j.at("nodes"))
        g.nodes.push_back({n.at("id").get<int>(), n.at("prompt").get<std::string>()});
    for (const json& e : j.at("edges")) {
        if (!e.is_array() || e.size() != 2)
            throw DataError("edge must be a [src,dst] pair");
        g.edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
    return g;
}

json task_to_json(const TaskInstance& t) {
    return {{"id", t.id},
            {"text", t.text},
            {"domain", t.domain},
            {"eval",
             {{"seq", t.eval.required_sequence},
              {"max_nodes", t.eval.max_nodes},
              {"noise", t.eval.noise_rate},
              {"noise_seed", t.eval.noise_seed}}}};
}

TaskInstance task_from_json(const json& j) {
    TaskInstance t;
    t.id = j.at("id").get<std::string>();
    t.text = j.at("text").get<std::string>();
    t.domain = j.at("domain").get<std::string>();
    if (!kDomains.count(t.domain))
        throw DataError("unknown domain '" + t.domain + "'");
    if (t.text.empty()) throw DataError("task text is empty");
    const json& ev = j.at("eval");
    t.eval.required_sequence = ev.at("seq").get<std::vector<std::string>>();
    t.eval.max_nodes = ev.value("max_nodes", 12);
    t.eval.noise_rate = ev.value("noise", 0.0);
    t.eval.noise_seed = ev.value("noise_seed", uint64_t{0});
    return t;
}

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << content;
    if (!out) throw IoError("write failed for " + path);
}

std::vector<WorkflowGraph> load_graphs(const std::string& path) {
    std::vector<WorkflowGraph> graphs;
    std::set<std::string> ids;
    int line_no = 0;
    for (const std::string& line : read_lines(path)) {
        ++line_no;
        if (line.empty()) continue;
        WorkflowGraph g;
        try {
            g = graph_from_json(json::parse(line));
        } catch (const json::exception& e) {
            format_fail(line_no, e.what());
        } catch (const DataError& e) {
            format_fail(line_no, e.what());
        }
        ValidationReport report = validate(g);
        if (!report.ok())
            format_fail(line_no, "invalid graph '" + g.id + "': " +
                                     report.violations.front().message);
        if (!ids.insert(g.id).second)
            format_fail(line_no, "duplicate graph id '" + g.id + "'");
        graphs.push_back(std::move(g));
    }
    return graphs;
}

std::vector<TaskInstance> load_tasks(const std::string& path) {
    std::vector<TaskInstance> tasks;
    std::set<std::string> ids;
    int line_no = 0;
    for (const std::string& line : read_lines(path)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            tasks.push_back(task_from_json(json::parse(line)));
        } catch (const json::exception& e) {
            format_fail(line_no, e.what());
        } catch (const DataError& e) {
            format_fail(line_no, e.what());
        }
        if (!ids.insert(tasks.back().id).second)
            format_fail(line_no, "duplicate task id '" + tasks.back().id + "'");
    }
    return tasks;
}

void save_graphs(const std::string& path, const std::vector<WorkflowGraph>& graphs) {
    std::string out;
    for (const WorkflowGraph& g : graphs) {
        out += graph_to_json(g).dump();
        out += '\n';
    }
    write_file(path, out);
}

void save_tasks(const std::string& path, const std::vector<TaskInstance>& tasks) {
    std::string out;
    for (const TaskInstance& t : tasks) {
        out += task_to_json(t).dump();
        out += '\n';
    }
    write_file(path, out);
}

} // namespace flowcast
