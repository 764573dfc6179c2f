#include "flowcast/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <unordered_map>

#include <CLI11.hpp>

#include "flowcast/checkpoint.hpp"
#include "flowcast/config.hpp"
#include "flowcast/dataset.hpp"
#include "flowcast/errors.hpp"
#include "flowcast/executor.hpp"
#include "flowcast/manifest.hpp"
#include "flowcast/metrics.hpp"
#include "flowcast/model.hpp"
#include "flowcast/optimize.hpp"
#include "flowcast/parallel.hpp"
#include "flowcast/script.hpp"
#include "flowcast/svg.hpp"

namespace flowcast {

namespace fs = std::filesystem;

namespace {

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

// Values collected from the command line; *_set marks flags that were
// actually given and therefore override the config file.
struct Flags {
    std::string config_path;
    std::string out_dir;
    uint64_t seed = 0;
    bool seed_set = false;
    std::string arch;
    std::string reward;
    int k = 0;
    bool k_set = false;
    int threads = 0;
    bool threads_set = false;
};

RunConfig resolve_config(const Flags& flags, const std::string& data_dir) {
    RunConfig cfg;
    if (!flags.config_path.empty()) {
        cfg = load_run_config(flags.config_path);
    } else if (!data_dir.empty() && fs::exists(fs::path(data_dir) / "config.json")) {
        cfg = load_run_config((fs::path(data_dir) / "config.json").string());
    } else {
        cfg = default_run_config();
    }
    if (flags.seed_set) cfg.seed = flags.seed;
    if (!flags.out_dir.empty()) cfg.out_dir = flags.out_dir;
    if (!flags.arch.empty()) cfg.predictor.arch = arch_from_string(flags.arch);
    if (!flags.reward.empty()) cfg.optimize.reward = flags.reward;
    if (flags.threads_set) cfg.threads = flags.threads;
    apply_root_seed(cfg);
    cfg.check();
    return cfg;
}

std::string join(const std::string& dir, const std::string& name) {
    return (fs::path(dir) / name).string();
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory " + dir + ": " + ec.message());
}

void add_common_seeds(RunManifest& m, const RunConfig& cfg) {
    m.add_seed("generation", cfg.build.gen.seed);
    m.add_seed("split", cfg.build.split.seed);
    m.add_seed("encoder", cfg.embedding.seed);
    m.add_seed("model", cfg.predictor.seed);
}

struct LoadedData {
    std::vector<WorkflowGraph> graphs;
    std::vector<TaskInstance> tasks;
};

LoadedData load_data_dir(const std::string& data_dir) {
    LoadedData d;
    d.graphs = load_graphs(join(data_dir, "graphs.jsonl"));
    d.tasks = load_tasks(join(data_dir, "tasks.jsonl"));
    return d;
}

std::string dataset_domain(const std::vector<TaskInstance>& tasks) {
    if (tasks.empty()) return "none";
    for (const TaskInstance& t : tasks)
        if (t.domain != tasks.front().domain) return "mixed";
    return tasks.front().domain;
}

// Pre-encoded dataset plus the id -> index maps used to resolve samples.
struct EncodedData {
    TrainingData data;
    std::unordered_map<std::string, int> wf_index, task_index;
};

EncodedData encode_data(const LoadedData& d, const TextEncoder& encoder,
                        const PredictorConfig& pcfg, int threads) {
    EncodedData e;
    e.data.workflows.resize(d.graphs.size());
    parallel_for(d.graphs.size(), threads, [&](size_t i) {
        e.data.workflows[i] = compile_graph(d.graphs[i], encoder, pcfg.bidirectional);
    });
    e.data.tasks.resize(d.tasks.size());
    parallel_for(d.tasks.size(), threads, [&](size_t i) {
        e.data.tasks[i] = encoder.encode_text(d.tasks[i].text);
    });
    for (size_t i = 0; i < d.graphs.size(); ++i)
        e.wf_index[d.graphs[i].id] = static_cast<int>(i);
    for (size_t i = 0; i < d.tasks.size(); ++i)
        e.task_index[d.tasks[i].id] = static_cast<int>(i);
    return e;
}

std::vector<Sample> to_samples(const std::vector<LabeledSample>& raw, const EncodedData& e) {
    std::vector<Sample> out;
    out.reserve(raw.size());
    for (const LabeledSample& s : raw)
        out.push_back({e.wf_index.at(s.workflow), e.task_index.at(s.task), s.label});
    return out;
}

// ---------------------------------------------------------------- extract

int cmd_extract(const RunConfig& cfg, const std::string& script_path,
                const std::string& graphs_path) {
    Timer timer;
    ensure_dir(cfg.out_dir);
    std::vector<WorkflowGraph> graphs;
    if (!script_path.empty()) {
        WorkflowGraph g = extract_graph(parse_script(read_file(script_path)));
        g.id = fs::path(script_path).stem().string();
        ValidationReport report = validate(g);
        if (!report.ok())
            throw DataError("extracted graph is invalid: " + report.violations.front().message);
        graphs.push_back(std::move(g));
    } else {
        graphs = load_graphs(graphs_path);
    }
    std::string out_path = join(cfg.out_dir, "graphs.jsonl");
    save_graphs(out_path, graphs);

    RunManifest m("extract", run_config_to_json(cfg), cfg.seed);
    m.add_input("source", script_path.empty() ? graphs_path : script_path);
    m.add_output("graphs", out_path);
    m.add_note("graph_count", graphs.size());
    m.set_wall_time(timer.seconds());
    m.write(join(cfg.out_dir, "manifest.json"));
    std::printf("extract: wrote %zu graph(s) to %s\n", graphs.size(), out_path.c_str());
    return 0;
}

// ------------------------------------------------------------------ build

int cmd_build(const RunConfig& cfg) {
    Timer timer;
    ensure_dir(cfg.out_dir);

    std::vector<WorkflowGraph> graphs = generate_workflows(cfg.build.gen);
    std::vector<TaskInstance> candidates = generate_tasks(cfg.build.gen);

    Rng probe_rng(sub_seed(cfg.seed, "probe"));
    size_t probe_n = std::min<size_t>(cfg.build.filter.probe_count, graphs.size());
    std::vector<size_t> probe_idx = probe_rng.sample_indices(graphs.size(), probe_n);
    std::sort(probe_idx.begin(), probe_idx.end());
    std::vector<WorkflowGraph> probes;
    std::vector<std::string> probe_ids;
    for (size_t i : probe_idx) {
        probes.push_back(graphs[i]);
        probe_ids.push_back(graphs[i].id);
    }

    FilterResult filtered = filter_tasks(candidates, probes, cfg.build.filter);
    std::vector<TaskInstance> tasks = filtered.retained;
    if (cfg.build.keep_tasks > 0 &&
        tasks.size() > static_cast<size_t>(cfg.build.keep_tasks))
        tasks.resize(cfg.build.keep_tasks);

    std::vector<LabeledSample> samples = label_dataset(graphs, tasks, cfg.threads);
    SplitResult sp = split(samples, cfg.build.split);

    save_graphs(join(cfg.out_dir, "graphs.jsonl"), graphs);
    save_tasks(join(cfg.out_dir, "tasks.jsonl"), tasks);
    save_labels(join(cfg.out_dir, "labels.train.jsonl"), sp.train);
    save_labels(join(cfg.out_dir, "labels.val.jsonl"), sp.val);
    save_labels(join(cfg.out_dir, "labels.test.jsonl"), sp.test);
    write_file(join(cfg.out_dir, "config.json"), run_config_to_json(cfg).dump(2) + "\n");

    long positives = 0;
    for (const LabeledSample& s : samples) positives += s.label;

    RunManifest m("build", run_config_to_json(cfg), cfg.seed);
    add_common_seeds(m, cfg);
    m.add_seed("probe", sub_seed(cfg.seed, "probe"));
    m.add_output("graphs", join(cfg.out_dir, "graphs.jsonl"));
    m.add_output("tasks", join(cfg.out_dir, "tasks.jsonl"));
    m.add_output("labels_train", join(cfg.out_dir, "labels.train.jsonl"));
    m.add_output("labels_val", join(cfg.out_dir, "labels.val.jsonl"));
    m.add_output("labels_test", join(cfg.out_dir, "labels.test.jsonl"));
    m.add_output("config", join(cfg.out_dir, "config.json"));
    m.add_note("workflows", graphs.size());
    m.add_note("candidate_tasks", candidates.size());
    m.add_note("retained_tasks", filtered.retained.size());
    m.add_note("kept_tasks", tasks.size());
    m.add_note("samples", samples.size());
    m.add_note("split_sizes",
               json{{"train", sp.train.size()}, {"val", sp.val.size()}, {"test", sp.test.size()}});
    m.add_note("positive_rate",
               static_cast<double>(positives) / static_cast<double>(samples.size()));
    m.add_note("probe_ids", probe_ids);
    m.add_note("task_rates", filtered.rates);
    m.set_wall_time(timer.seconds());
    m.write(join(cfg.out_dir, "manifest.json"));
    std::printf("build: %zu workflows x %zu tasks -> %zu samples (%.3f positive) in %s\n",
                graphs.size(), tasks.size(), samples.size(),
                static_cast<double>(positives) / static_cast<double>(samples.size()),
                cfg.out_dir.c_str());
    return 0;
}

// ------------------------------------------------------------------ train

int cmd_train(const RunConfig& cfg, const std::string& data_dir) {
    Timer timer;
    ensure_dir(cfg.out_dir);
    LoadedData d = load_data_dir(data_dir);
    std::vector<LabeledSample> train_raw =
        load_labels(join(data_dir, "labels.train.jsonl"), d.graphs, d.tasks);
    std::vector<LabeledSample> val_raw =
        load_labels(join(data_dir, "labels.val.jsonl"), d.graphs, d.tasks);

    TextEncoder encoder(cfg.embedding);
    EncodedData e = encode_data(d, encoder, cfg.predictor, cfg.threads);

    PredictorModel model(cfg.predictor);
    TrainResult result = model.train(e.data, to_samples(train_raw, e), to_samples(val_raw, e));

    std::string ckpt_path = join(cfg.out_dir, "model.ckpt");
    save_checkpoint(ckpt_path, model);
    std::string history = "epoch,train_loss,val_accuracy\n";
    char buf[96];
    for (const EpochStats& s : result.history) {
        std::snprintf(buf, sizeof(buf), "%d,%.6f,%.6f\n", s.epoch, s.train_loss,
                      s.val_accuracy);
        history += buf;
    }
    std::string history_path = join(cfg.out_dir, "history.csv");
    write_file(history_path, history);

    RunManifest m("train", run_config_to_json(cfg), cfg.seed);
    add_common_seeds(m, cfg);
    m.add_input("graphs", join(data_dir, "graphs.jsonl"));
    m.add_input("tasks", join(data_dir, "tasks.jsonl"));
    m.add_input("labels_train", join(data_dir, "labels.train.jsonl"));
    m.add_input("labels_val", join(data_dir, "labels.val.jsonl"));
    m.add_output("checkpoint", ckpt_path);
    m.add_output("history", history_path);
    m.add_note("best_epoch", result.best_epoch);
    m.add_note("best_val_accuracy", result.best_val_accuracy);
    m.add_note("parameters", model.param_count());
    m.set_wall_time(timer.seconds());
    m.write(join(cfg.out_dir, "manifest.json"));
    std::printf("train: best val accuracy %.4f at epoch %d; checkpoint %s\n",
                result.best_val_accuracy, result.best_epoch, ckpt_path.c_str());
    return 0;
}

// ------------------------------------------------------------------- eval

int cmd_eval(const RunConfig& cfg, const std::string& ckpt_path,
             const std::string& data_dir, int k_flag) {
    Timer timer;
    ensure_dir(cfg.out_dir);
    PredictorModel model = load_checkpoint(ckpt_path);
    if (model.config().embed_dim != cfg.embedding.dim)
        throw ConfigError("checkpoint embed_dim " +
                          std::to_string(model.config().embed_dim) +
                          " != embedding dim " + std::to_string(cfg.embedding.dim));

    LoadedData d = load_data_dir(data_dir);
    std::vector<LabeledSample> test_raw =
        load_labels(join(data_dir, "labels.test.jsonl"), d.graphs, d.tasks);
    if (test_raw.empty()) throw EmptySplitError("test");

    TextEncoder encoder(cfg.embedding);
    EncodedData e = encode_data(d, encoder, model.config(), cfg.threads);
    std::vector<Sample> test_set = to_samples(test_raw, e);

    // Embeddings once per distinct workflow/task, fanned out when asked.
    std::vector<char> wf_used(d.graphs.size(), 0), task_used(d.tasks.size(), 0);
    for (const Sample& s : test_set) {
        wf_used[s.workflow] = 1;
        task_used[s.task] = 1;
    }
    std::vector<std::vector<double>> gvec(d.graphs.size()), tvec(d.tasks.size());
    parallel_for(d.graphs.size(), cfg.threads, [&](size_t i) {
        if (wf_used[i]) gvec[i] = model.encode_workflow(e.data.workflows[i]).g;
    });
    parallel_for(d.tasks.size(), cfg.threads, [&](size_t i) {
        if (task_used[i]) tvec[i] = model.encode_task(e.data.tasks[i]).t;
    });

    std::vector<int> preds, actuals;
    preds.reserve(test_set.size());
    actuals.reserve(test_set.size());
    std::unordered_map<int, WorkflowLabels> by_workflow;
    HeadCache hc;
    for (const Sample& s : test_set) {
        double p = sigmoid(model.head_forward(gvec[s.workflow].data(), tvec[s.task].data(), hc));
        int pred = p >= model.config().threshold ? 1 : 0;
        preds.push_back(pred);
        actuals.push_back(s.label);
        WorkflowLabels& row = by_workflow[s.workflow];
        row.workflow = d.graphs[s.workflow].id;
        row.predicted.push_back(pred);
        row.actual.push_back(s.label);
    }
    double acc = accuracy(preds, actuals);

    // Ranking universe: workflows with at least one test sample, id order.
    std::vector<WorkflowLabels> table;
    table.reserve(by_workflow.size());
    for (size_t i = 0; i < d.graphs.size(); ++i) {
        auto it = by_workflow.find(static_cast<int>(i));
        if (it != by_workflow.end()) table.push_back(std::move(it->second));
    }
    int k = k_flag > 0 ? k_flag : default_k(table.size());
    RankingResult ranking = utility_at_k(table, k);

    std::string domain = dataset_domain(d.tasks);
    std::string arch = arch_to_string(model.config().arch);
    std::vector<MetricRow> rows{{"accuracy", domain, arch, acc},
                                {"utility_at_k", domain, arch, ranking.utility},
                                {"k", domain, arch, static_cast<double>(k)}};
    std::string metrics_path = join(cfg.out_dir, "metrics.csv");
    write_file(metrics_path, metrics_csv(rows));

    RunManifest m("eval", run_config_to_json(cfg), cfg.seed);
    m.add_input("checkpoint", ckpt_path);
    m.add_input("graphs", join(data_dir, "graphs.jsonl"));
    m.add_input("tasks", join(data_dir, "tasks.jsonl"));
    m.add_input("labels_test", join(data_dir, "labels.test.jsonl"));
    m.add_output("metrics", metrics_path);
    m.add_note("test_samples", test_set.size());
    m.add_note("ranked_workflows", table.size());
    m.add_note("k", k);
    m.add_note("top_true", ranking.top_true);
    m.add_note("top_predicted", ranking.top_predicted);
    m.set_wall_time(timer.seconds());
    m.write(join(cfg.out_dir, "manifest.json"));
    std::printf("eval: accuracy %.4f, utility@%d %.4f over %zu test samples\n", acc, k,
                ranking.utility, test_set.size());
    return 0;
}

// --------------------------------------------------------------- optimize

int cmd_optimize(const RunConfig& cfg, const std::string& ckpt_path,
                 const std::string& data_dir) {
    Timer timer;
    ensure_dir(cfg.out_dir);
    RewardSource::Kind kind = reward_kind_from_string(cfg.optimize.reward);

    LoadedData d = load_data_dir(data_dir);
    size_t need = static_cast<size_t>(cfg.optimize.train_tasks) + cfg.optimize.test_tasks;
    if (d.tasks.size() < need)
        throw ConfigError("dataset has " + std::to_string(d.tasks.size()) +
                          " tasks; search needs " + std::to_string(need));

    SearchConfig sc;
    sc.budget = cfg.optimize.budget;
    sc.beam = cfg.optimize.beam;
    sc.train_tasks.assign(d.tasks.begin(), d.tasks.begin() + cfg.optimize.train_tasks);
    sc.test_tasks.assign(d.tasks.begin() + cfg.optimize.train_tasks,
                         d.tasks.begin() + need);
    sc.prompt_vocab = cfg.build.gen.prompt_vocab;

    // The starting workflow is a small random graph from the same family.
    GenSpec seed_spec = cfg.build.gen;
    seed_spec.workflows = 1;
    seed_spec.node_min = cfg.optimize.seed_nodes;
    seed_spec.node_max = cfg.optimize.seed_nodes;
    seed_spec.seed = sub_seed(cfg.seed, "seed-graph");
    WorkflowGraph seed_graph = generate_workflows(seed_spec).front();
    seed_graph.id = "seed";

    PredictorModel model(PredictorConfig{}); // replaced when the gnn reward loads
    TextEncoder encoder(cfg.embedding);
    RewardSource reward;
    reward.kind = kind;
    if (kind == RewardSource::Kind::gnn) {
        if (ckpt_path.empty())
            throw ConfigError("gnn reward needs --checkpoint with a trained model");
        model = load_checkpoint(ckpt_path);
        if (model.config().embed_dim != cfg.embedding.dim)
            throw ConfigError("checkpoint embed_dim " +
                              std::to_string(model.config().embed_dim) +
                              " != embedding dim " + std::to_string(cfg.embedding.dim));
        reward.model = &model;
        reward.encoder = &encoder;
    }

    json runs = json::array();
    double score_sum = 0.0;
    RunManifest m("optimize", run_config_to_json(cfg), cfg.seed);
    for (int rep = 0; rep < cfg.optimize.repeats; ++rep) {
        std::string tag = std::to_string(rep);
        sc.seed = sub_seed(cfg.seed, "search-" + tag);
        reward.seed = sub_seed(cfg.seed, "reward-" + tag);
        SearchReport report = optimize(seed_graph, reward, sc);
        score_sum += report.score;

        std::string trace_path = join(cfg.out_dir, "trace-" + tag + ".csv");
        write_file(trace_path, trace_csv(report.trace));
        std::string best_path = join(cfg.out_dir, "best-" + tag + ".jsonl");
        report.best.id = "optimized-" + tag;
        save_graphs(best_path, {report.best});
        m.add_output("trace_" + tag, trace_path);
        m.add_output("best_" + tag, best_path);

        runs.push_back({{"score", report.score},
                        {"executor_calls", report.executor_calls},
                        {"predictor_calls", report.predictor_calls},
                        {"wall_time_s", report.wall_time_s},
                        {"best_nodes", report.best.node_count()},
                        {"steps", report.trace.size()}});
    }
    json summary{{"reward", cfg.optimize.reward},
                 {"repeats", cfg.optimize.repeats},
                 {"mean_score", score_sum / cfg.optimize.repeats},
                 {"runs", runs}};
    std::string report_path = join(cfg.out_dir, "report.json");
    write_file(report_path, summary.dump(2) + "\n");

    m.add_input("graphs", join(data_dir, "graphs.jsonl"));
    m.add_input("tasks", join(data_dir, "tasks.jsonl"));
    if (!ckpt_path.empty()) m.add_input("checkpoint", ckpt_path);
    m.add_output("report", report_path);
    m.set_wall_time(timer.seconds());
    m.write(join(cfg.out_dir, "manifest.json"));
    std::printf("optimize: reward %s, mean score %.4f over %d run(s); report %s\n",
                cfg.optimize.reward.c_str(), score_sum / cfg.optimize.repeats,
                cfg.optimize.repeats, report_path.c_str());
    return 0;
}

// ----------------------------------------------------------------- report

int cmd_report(const RunConfig& cfg, const std::string& data_dir,
               const std::string& trace_path) {
    Timer timer;
    ensure_dir(cfg.out_dir);
    LoadedData d = load_data_dir(data_dir);
    std::vector<LabeledSample> labels;
    for (const char* name : {"labels.train.jsonl", "labels.val.jsonl", "labels.test.jsonl"}) {
        std::string path = join(data_dir, name);
        if (!fs::exists(path)) continue;
        std::vector<LabeledSample> part = load_labels(path, d.graphs, d.tasks);
        labels.insert(labels.end(), part.begin(), part.end());
    }
    if (labels.empty()) throw DataError("no label files found in " + data_dir);

    std::map<int, double> buckets = success_by_node_count(d.graphs, labels);
    std::string csv = "node_count,success_rate\n";
    std::vector<std::pair<std::string, double>> bars;
    char buf[64];
    for (const auto& [count, rate] : buckets) {
        std::snprintf(buf, sizeof(buf), "%d,%.6f\n", count, rate);
        csv += buf;
        bars.emplace_back(std::to_string(count), rate);
    }
    std::string nodes_csv_path = join(cfg.out_dir, "nodes.csv");
    write_file(nodes_csv_path, csv);
    std::string nodes_svg_path = join(cfg.out_dir, "nodes.svg");
    write_file(nodes_svg_path, svg_bar_chart("success rate by workflow size", bars));

    RunManifest m("report", run_config_to_json(cfg), cfg.seed);
    m.add_input("graphs", join(data_dir, "graphs.jsonl"));
    m.add_output("nodes_csv", nodes_csv_path);
    m.add_output("nodes_svg", nodes_svg_path);

    if (!trace_path.empty()) {
        std::vector<std::string> lines = read_lines(trace_path);
        if (lines.empty() || lines.front() != "step,evals,best_reward,test_score")
            throw DataError("unrecognized trace file " + trace_path);
        LineSeries reward_series{"reward of best", {}};
        LineSeries score_series{"test score of best", {}};
        for (size_t i = 1; i < lines.size(); ++i) {
            if (lines[i].empty()) continue;
            int step = 0;
            long evals = 0;
            double best_reward = 0.0, test_score = 0.0;
            if (std::sscanf(lines[i].c_str(), "%d,%ld,%lf,%lf", &step, &evals, &best_reward,
                            &test_score) != 4)
                throw FormatError(static_cast<int>(i) + 1, "bad trace row");
            reward_series.points.emplace_back(static_cast<double>(evals), best_reward);
            score_series.points.emplace_back(static_cast<double>(evals), test_score);
        }
        std::string trace_svg_path = join(cfg.out_dir, "trace.svg");
        write_file(trace_svg_path,
                   svg_line_chart("search progress", "candidates scored", "score",
                                  {score_series, reward_series}));
        m.add_input("trace", trace_path);
        m.add_output("trace_svg", trace_svg_path);
    }

    m.set_wall_time(timer.seconds());
    m.write(join(cfg.out_dir, "manifest.json"));
    std::printf("report: %zu node-count buckets -> %s\n", buckets.size(),
                cfg.out_dir.c_str());
    return 0;
}

} // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"workflow success prediction and search over agent DAGs"};
    app.require_subcommand(1);

    Flags flags;
    std::string script_path, graphs_path, data_dir, ckpt_path, trace_path;

    auto add_common = [&](CLI::App* cmd, bool with_out = true) {
        cmd->add_option("--config", flags.config_path, "JSON config file");
        cmd->add_option("--seed", flags.seed, "root seed")->each([&](const std::string&) {
            flags.seed_set = true;
        });
        if (with_out) cmd->add_option("--out", flags.out_dir, "output directory");
        cmd->add_option("--threads", flags.threads, "worker cap for labeling/eval")
            ->each([&](const std::string&) { flags.threads_set = true; });
    };

    CLI::App* extract = app.add_subcommand("extract", "script or graph file -> graphs.jsonl");
    add_common(extract);
    extract->add_option("--script", script_path, "workflow script to parse");
    extract->add_option("--graphs", graphs_path, "graph JSONL to validate and re-emit");

    CLI::App* build = app.add_subcommand("build", "generate, filter, label, split a dataset");
    add_common(build);

    CLI::App* train = app.add_subcommand("train", "train the predictor on a dataset");
    add_common(train);
    train->add_option("--data", data_dir, "dataset directory")->required();
    train->add_option("--arch", flags.arch, "gcn or gat");

    CLI::App* eval = app.add_subcommand("eval", "accuracy and utility@k on the test split");
    add_common(eval);
    eval->add_option("--data", data_dir, "dataset directory")->required();
    eval->add_option("--checkpoint", ckpt_path, "trained model")->required();
    eval->add_option("--k", flags.k, "ranking depth")->each([&](const std::string&) {
        flags.k_set = true;
    });

    CLI::App* optimize = app.add_subcommand("optimize", "search workflows under a reward");
    add_common(optimize);
    optimize->add_option("--data", data_dir, "dataset directory")->required();
    optimize->add_option("--checkpoint", ckpt_path, "trained model (gnn reward)");
    optimize->add_option("--reward", flags.reward, "gnn, ground_truth, or random");

    CLI::App* report = app.add_subcommand("report", "plots and tables from run outputs");
    add_common(report);
    report->add_option("--data", data_dir, "dataset directory")->required();
    report->add_option("--trace", trace_path, "search trace CSV to plot");

    std::vector<std::string> argv_rev(args.rbegin(), args.rend());
    try {
        app.parse(argv_rev);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(extract)) {
            if (script_path.empty() == graphs_path.empty())
                throw ConfigError("extract needs exactly one of --script or --graphs");
            return cmd_extract(resolve_config(flags, ""), script_path, graphs_path);
        }
        if (app.got_subcommand(build)) return cmd_build(resolve_config(flags, ""));
        if (app.got_subcommand(train))
            return cmd_train(resolve_config(flags, data_dir), data_dir);
        if (app.got_subcommand(eval))
            return cmd_eval(resolve_config(flags, data_dir), ckpt_path, data_dir,
                            flags.k_set ? flags.k : 0);
        if (app.got_subcommand(optimize))
            return cmd_optimize(resolve_config(flags, data_dir), ckpt_path, data_dir);
        if (app.got_subcommand(report))
            return cmd_report(resolve_config(flags, data_dir), data_dir, trace_path);
        throw ConfigError("no command given");
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return e.exit_code();
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: internal: %s\n", e.what());
        return 1;
    }
}

} // namespace flowcast
