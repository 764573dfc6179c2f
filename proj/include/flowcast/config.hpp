#pragma once

#include <cstdint>
#include <string>

#include "flowcast/dataset.hpp"
#include "flowcast/encode.hpp"
#include "flowcast/io.hpp"
#include "flowcast/model.hpp"

namespace flowcast {

struct BuildConfig {
    GenSpec gen;
    FilterSpec filter = default_filter_for_domain("synthetic");
    int keep_tasks = 50; // cap on retained tasks; 0 keeps all
    SplitSpec split;
};

struct OptimizeConfig {
    int budget = 50;
    int beam = 1;
    std::string reward = "gnn";
    int train_tasks = 20;
    int test_tasks = 20;
    int repeats = 1;    // independent searches with derived seeds
    int seed_nodes = 3; // node count of the random starting workflow
};

// Everything one run needs; the file is JSON with the same nesting. Flags
// override file values, file values override these defaults.
struct RunConfig {
    uint64_t seed = 0;
    std::string out_dir = "out";
    int threads = 1;
    EmbeddingConfig embedding;
    PredictorConfig predictor;
    BuildConfig build;
    OptimizeConfig optimize;

    void check() const;
};

// The synthetic-domain defaults every command starts from: 200 workflows,
// 300 candidate tasks capped to 50 after filtering, hashing encoder with
// d0 = 128 (small graphs do not need the full default width), 2-layer GCN.
RunConfig default_run_config();

RunConfig load_run_config(const std::string& path);
json run_config_to_json(const RunConfig& cfg);

// Derives every module seed from cfg.seed through named channels
// (generation, split, encoder, model), so one root value pins the run.
void apply_root_seed(RunConfig& cfg);

} // namespace flowcast
