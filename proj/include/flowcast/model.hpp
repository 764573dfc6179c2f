#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "flowcast/encode.hpp"
#include "flowcast/graph.hpp"
#include "flowcast/nn.hpp"

namespace flowcast {

enum class Arch { gcn, gat };

Arch arch_from_string(const std::string& s);
std::string arch_to_string(Arch a);

struct PredictorConfig {
    Arch arch = Arch::gcn;
    int layers = 2;
    int hidden = 512;
    int embed_dim = 384; // d0, must match the text encoder
    int epochs = 200;
    int batch = 64;
    double threshold = 0.5;
    double lr = 1e-4;
    double weight_decay = 5e-4;
    bool decoupled_decay = true;
    bool bidirectional = false; // ablation: add reversed edges to message flow
    uint64_t seed = 0;

    void check() const;
};

struct Prediction {
    double probability = 0.0;
    int label = 0;
    std::vector<double> graph_embedding; // g, for inspection
    std::vector<double> task_embedding;  // t
};

// Per-graph input compiled once: node features + message-flow adjacency.
// nbr[i] lists the aggregation set of node i -- itself first, then its
// in-neighbors (sources would otherwise receive an empty message set).
struct GraphInput {
    std::vector<std::vector<int>> nbr;
    Matrix X; // N x d0
};

GraphInput compile_graph(const WorkflowGraph& g, const TextEncoder& encoder,
                         bool bidirectional);

// Intermediate activations kept for the backward pass.
struct LayerCache {
    Matrix M;   // GCN: aggregated inputs, N x d_in
    Matrix Z;   // GAT: W h_j, N x d_out
    std::vector<std::vector<double>> e;     // GAT: post-LeakyReLU logits per (i, j)
    std::vector<std::vector<double>> alpha; // GAT: attention weights per (i, j)
    Matrix pre; // pre-activation, N x d_out
    Matrix H;   // layer output, N x d_out
};

struct WorkflowCache {
    const GraphInput* input = nullptr;
    std::vector<LayerCache> layers;
    std::vector<double> g; // pooled graph embedding
};

struct TaskCache {
    std::vector<double> u;     // raw text embedding, d0
    std::vector<double> pre_t; // proj pre-activation
    std::vector<double> t;     // task embedding
};

struct HeadCache {
    std::vector<double> g_in; // workflow input to the fusion layer, hidden
    std::vector<double> t_in; // task input to the fusion layer, hidden
    std::vector<double> pre1; // hidden
    std::vector<double> a1;   // hidden
    double logit = 0.0;
};

struct Sample {
    int workflow = 0; // index into TrainingData::workflows
    int task = 0;     // index into TrainingData::tasks
    int label = 0;
};

struct TrainingData {
    std::vector<GraphInput> workflows;
    std::vector<std::vector<double>> tasks; // raw d0 embeddings
};

struct EpochStats {
    int epoch = 0; // 1-based
    double train_loss = 0.0;
    double val_accuracy = 0.0;
};

struct TrainResult {
    std::vector<EpochStats> history;
    int best_epoch = 0;
    double best_val_accuracy = 0.0;
};

struct GnnLayer {
    LinearLayer lin;                     // W: transform, b: post-aggregation bias
    std::vector<double> attn, grad_attn; // GAT only, 2*d_out
};

// Three-stage predictor: GNN over the workflow with mean pooling, a
// one-hidden-layer projection of the task text, and an MLP head over the
// concatenated pair producing a single logit.
class PredictorModel {
public:
    explicit PredictorModel(PredictorConfig cfg);

    const PredictorConfig& config() const { return cfg_; }

    std::vector<ParamRef> params();
    size_t param_count() const;
    void zero_grads();
    bool parameters_finite() const;

    // ---- forward ----
    WorkflowCache encode_workflow(const GraphInput& input) const;
    TaskCache encode_task(const std::vector<double>& u) const;
    double head_forward(const double* g, const double* t, HeadCache& cache) const;

    Prediction predict(const TextEncoder& encoder, const WorkflowGraph& graph,
                       const TaskInstance& task) const;
    double predict_probability(const GraphInput& input,
                               const std::vector<double>& task_vec) const;

    // ---- backward (gradients accumulate into the layer buffers) ----
    void head_backward(const HeadCache& cache, double dlogit, double* dg, double* dt);
    void task_backward(const TaskCache& cache, const double* dt);
    void workflow_backward(const WorkflowCache& cache, const double* dg);

    // BCE loss of one sample plus full gradient accumulation; the FD
    // harness drives this with loss_only as the scalar function.
    double loss_and_grads(const GraphInput& input, const std::vector<double>& task_vec,
                          int label);
    double loss_only(const GraphInput& input, const std::vector<double>& task_vec,
                     int label) const;

    // Mean-scaled gradients of one minibatch accumulated into the layer
    // buffers (callers zero_grads first). Each distinct workflow and task
    // propagates once and the head runs as one batched pass, so the cost
    // scales with distinct graphs, not samples. Returns the summed loss.
    double batch_gradients(const TrainingData& data, const std::vector<Sample>& batch);

    TrainResult train(const TrainingData& data, const std::vector<Sample>& train_set,
                      const std::vector<Sample>& val_set);

    double evaluate_accuracy(const TrainingData& data,
                             const std::vector<Sample>& set) const;

    std::vector<GnnLayer> gnn;
    LinearLayer proj; // d0 -> hidden, ReLU
    // Fusion layer over concat(g, t), stored as its two column halves so a
    // batch can transform each distinct workflow and task row once instead
    // of every sample: W [g; t] = fuse_wf.W g + fuse_task.W t.
    LinearLayer fuse_wf;   // hidden -> hidden
    LinearLayer fuse_task; // hidden -> hidden
    LinearLayer head2;     // hidden -> 1

private:
    PredictorConfig cfg_;

    void layer_forward(int layer, const GraphInput& input, const Matrix& H_in,
                       LayerCache& cache) const;
    Matrix layer_backward(int layer, const GraphInput& input, const Matrix& H_in,
                          const LayerCache& cache, const Matrix& dH);
};

} // namespace flowcast
