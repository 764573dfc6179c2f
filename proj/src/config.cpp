#include "flowcast/config.hpp"

#include <initializer_list>

#include "flowcast/errors.hpp"
#include "flowcast/optimize.hpp"
#include "flowcast/rng.hpp"

namespace flowcast {

namespace {

void expect_keys(const json& j, const std::string& where,
                 std::initializer_list<const char*> keys) {
    if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* k : keys)
            if (item.key() == k) {
                known = true;
                break;
            }
        if (!known) throw ConfigError("unknown key '" + item.key() + "' in " + where);
    }
}

template <typename T>
T fetch(const json& j, const char* key, const std::string& where, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("bad value for '") + key + "' in " + where);
    }
}

void parse_embedding(const json& j, EmbeddingConfig& cfg) {
    expect_keys(j, "embedding", {"dim", "mode", "file"});
    cfg.dim = fetch(j, "dim", "embedding", cfg.dim);
    std::string mode =
        fetch<std::string>(j, "mode", "embedding", cfg.mode == EmbedMode::file ? "file" : "hashing");
    if (mode == "hashing") cfg.mode = EmbedMode::hashing;
    else if (mode == "file") cfg.mode = EmbedMode::file;
    else throw ConfigError("embedding mode must be 'hashing' or 'file', got '" + mode + "'");
    cfg.file_path = fetch<std::string>(j, "file", "embedding", cfg.file_path);
}

void parse_predictor(const json& j, PredictorConfig& cfg) {
    expect_keys(j, "predictor",
                {"arch", "layers", "hidden", "epochs", "batch", "threshold", "lr",
                 "weight_decay", "decoupled_decay", "bidirectional"});
    cfg.arch = arch_from_string(
        fetch<std::string>(j, "arch", "predictor", arch_to_string(cfg.arch)));
    cfg.layers = fetch(j, "layers", "predictor", cfg.layers);
    cfg.hidden = fetch(j, "hidden", "predictor", cfg.hidden);
    cfg.epochs = fetch(j, "epochs", "predictor", cfg.epochs);
    cfg.batch = fetch(j, "batch", "predictor", cfg.batch);
    cfg.threshold = fetch(j, "threshold", "predictor", cfg.threshold);
    cfg.lr = fetch(j, "lr", "predictor", cfg.lr);
    cfg.weight_decay = fetch(j, "weight_decay", "predictor", cfg.weight_decay);
    cfg.decoupled_decay = fetch(j, "decoupled_decay", "predictor", cfg.decoupled_decay);
    cfg.bidirectional = fetch(j, "bidirectional", "predictor", cfg.bidirectional);
}

void parse_build(const json& j, BuildConfig& cfg) {
    expect_keys(j, "build",
                {"workflows", "node_min", "node_max", "edge_extra", "palette_min",
                 "palette_max", "tasks", "seq_max", "budget_min", "budget_max",
                 "noise_rate", "keep_tasks", "filter", "split"});
    cfg.gen.workflows = fetch(j, "workflows", "build", cfg.gen.workflows);
    cfg.gen.node_min = fetch(j, "node_min", "build", cfg.gen.node_min);
    cfg.gen.node_max = fetch(j, "node_max", "build", cfg.gen.node_max);
    cfg.gen.edge_extra = fetch(j, "edge_extra", "build", cfg.gen.edge_extra);
    cfg.gen.palette_min = fetch(j, "palette_min", "build", cfg.gen.palette_min);
    cfg.gen.palette_max = fetch(j, "palette_max", "build", cfg.gen.palette_max);
    cfg.gen.tasks = fetch(j, "tasks", "build", cfg.gen.tasks);
    cfg.gen.seq_max = fetch(j, "seq_max", "build", cfg.gen.seq_max);
    cfg.gen.budget_min = fetch(j, "budget_min", "build", cfg.gen.budget_min);
    cfg.gen.budget_max = fetch(j, "budget_max", "build", cfg.gen.budget_max);
    cfg.gen.noise_rate = fetch(j, "noise_rate", "build", cfg.gen.noise_rate);
    cfg.keep_tasks = fetch(j, "keep_tasks", "build", cfg.keep_tasks);
    if (j.contains("filter")) {
        const json& f = j.at("filter");
        expect_keys(f, "build.filter", {"low", "high", "probes"});
        cfg.filter.low = fetch(f, "low", "build.filter", cfg.filter.low);
        cfg.filter.high = fetch(f, "high", "build.filter", cfg.filter.high);
        cfg.filter.probe_count = fetch(f, "probes", "build.filter", cfg.filter.probe_count);
    }
    if (j.contains("split")) {
        const json& s = j.at("split");
        expect_keys(s, "build.split", {"train", "val", "test"});
        cfg.split.train = fetch(s, "train", "build.split", cfg.split.train);
        cfg.split.val = fetch(s, "val", "build.split", cfg.split.val);
        cfg.split.test = fetch(s, "test", "build.split", cfg.split.test);
    }
}

void parse_optimize(const json& j, OptimizeConfig& cfg) {
    expect_keys(j, "optimize",
                {"budget", "beam", "reward", "train_tasks", "test_tasks", "repeats",
                 "seed_nodes"});
    cfg.budget = fetch(j, "budget", "optimize", cfg.budget);
    cfg.beam = fetch(j, "beam", "optimize", cfg.beam);
    cfg.reward = fetch<std::string>(j, "reward", "optimize", cfg.reward);
    cfg.train_tasks = fetch(j, "train_tasks", "optimize", cfg.train_tasks);
    cfg.test_tasks = fetch(j, "test_tasks", "optimize", cfg.test_tasks);
    cfg.repeats = fetch(j, "repeats", "optimize", cfg.repeats);
    cfg.seed_nodes = fetch(j, "seed_nodes", "optimize", cfg.seed_nodes);
}

} // namespace

void RunConfig::check() const {
    embedding.check();
    predictor.check();
    build.gen.check();
    build.filter.check();
    build.split.check();
    if (build.keep_tasks < 0) throw ConfigError("keep_tasks must be >= 0");
    if (threads < 1) throw ConfigError("threads must be >= 1");
    if (predictor.embed_dim != embedding.dim)
        throw ConfigError("predictor embed_dim " + std::to_string(predictor.embed_dim) +
                          " != embedding dim " + std::to_string(embedding.dim));
    reward_kind_from_string(optimize.reward);
    if (optimize.budget < 1) throw ConfigError("optimize.budget must be >= 1");
    if (optimize.beam < 1) throw ConfigError("optimize.beam must be >= 1");
    if (optimize.train_tasks < 1) throw ConfigError("optimize.train_tasks must be >= 1");
    if (optimize.test_tasks < 1) throw ConfigError("optimize.test_tasks must be >= 1");
    if (optimize.repeats < 1) throw ConfigError("optimize.repeats must be >= 1");
    if (optimize.seed_nodes < 1) throw ConfigError("optimize.seed_nodes must be >= 1");
}

RunConfig default_run_config() {
    RunConfig cfg;
    cfg.embedding.dim = 128;
    cfg.predictor.embed_dim = 128;
    cfg.predictor.epochs = 150;
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    json j = json::parse(read_file(path), nullptr, false);
    if (j.is_discarded()) throw ConfigError("config file is not valid JSON: " + path);
    expect_keys(j, "config",
                {"seed", "out", "threads", "embedding", "predictor", "build", "optimize"});
    RunConfig cfg = default_run_config();
    cfg.seed = fetch<uint64_t>(j, "seed", "config", cfg.seed);
    cfg.out_dir = fetch<std::string>(j, "out", "config", cfg.out_dir);
    cfg.threads = fetch(j, "threads", "config", cfg.threads);
    if (j.contains("embedding")) parse_embedding(j.at("embedding"), cfg.embedding);
    if (j.contains("predictor")) parse_predictor(j.at("predictor"), cfg.predictor);
    if (j.contains("build")) parse_build(j.at("build"), cfg.build);
    if (j.contains("optimize")) parse_optimize(j.at("optimize"), cfg.optimize);
    // d0 is owned by the embedding section; the predictor always follows it.
    cfg.predictor.embed_dim = cfg.embedding.dim;
    return cfg;
}

void apply_root_seed(RunConfig& cfg) {
    cfg.build.gen.seed = sub_seed(cfg.seed, "generation");
    cfg.build.split.seed = sub_seed(cfg.seed, "split");
    cfg.embedding.seed = sub_seed(cfg.seed, "encoder");
    cfg.predictor.seed = sub_seed(cfg.seed, "model");
}

// Serializes everything except the output directory: where a run writes
// is a command-line concern, and datasets rebuilt into different places
// must still produce byte-identical config.json files.
json run_config_to_json(const RunConfig& cfg) {
    json j;
    j["seed"] = cfg.seed;
    j["threads"] = cfg.threads;
    j["embedding"] = {{"dim", cfg.embedding.dim},
                      {"mode", cfg.embedding.mode == EmbedMode::file ? "file" : "hashing"},
                      {"file", cfg.embedding.file_path}};
    j["predictor"] = {{"arch", arch_to_string(cfg.predictor.arch)},
                      {"layers", cfg.predictor.layers},
                      {"hidden", cfg.predictor.hidden},
                      {"epochs", cfg.predictor.epochs},
                      {"batch", cfg.predictor.batch},
                      {"threshold", cfg.predictor.threshold},
                      {"lr", cfg.predictor.lr},
                      {"weight_decay", cfg.predictor.weight_decay},
                      {"decoupled_decay", cfg.predictor.decoupled_decay},
                      {"bidirectional", cfg.predictor.bidirectional}};
    j["build"] = {{"workflows", cfg.build.gen.workflows},
                  {"node_min", cfg.build.gen.node_min},
                  {"node_max", cfg.build.gen.node_max},
                  {"edge_extra", cfg.build.gen.edge_extra},
                  {"palette_min", cfg.build.gen.palette_min},
                  {"palette_max", cfg.build.gen.palette_max},
                  {"tasks", cfg.build.gen.tasks},
                  {"seq_max", cfg.build.gen.seq_max},
                  {"budget_min", cfg.build.gen.budget_min},
                  {"budget_max", cfg.build.gen.budget_max},
                  {"noise_rate", cfg.build.gen.noise_rate},
                  {"keep_tasks", cfg.build.keep_tasks},
                  {"filter",
                   {{"low", cfg.build.filter.low},
                    {"high", cfg.build.filter.high},
                    {"probes", cfg.build.filter.probe_count}}},
                  {"split",
                   {{"train", cfg.build.split.train},
                    {"val", cfg.build.split.val},
                    {"test", cfg.build.split.test}}}};
    j["optimize"] = {{"budget", cfg.optimize.budget},
                     {"beam", cfg.optimize.beam},
                     {"reward", cfg.optimize.reward},
                     {"train_tasks", cfg.optimize.train_tasks},
                     {"test_tasks", cfg.optimize.test_tasks},
                     {"repeats", cfg.optimize.repeats},
                     {"seed_nodes", cfg.optimize.seed_nodes}};
    return j;
}

} // namespace flowcast
