#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "flowcast/matrix.hpp"
#include "flowcast/rng.hpp"

namespace flowcast {

inline double sigmoid(double z) {
    return z >= 0.0 ? 1.0 / (1.0 + std::exp(-z))
                    : std::exp(z) / (1.0 + std::exp(z));
}

// log(1 + e^z) without overflow for large |z|
inline double softplus(double z) {
    return (z > 0.0 ? z : 0.0) + std::log1p(std::exp(-std::fabs(z)));
}

struct BceResult {
    double loss;
    double dlogit;
};

// Binary cross-entropy on a single logit, stable form:
//   loss = softplus(logit) - label*logit,  dlogit = sigmoid(logit) - label
BceResult bce_loss(double logit, int label);

// Fully-connected layer, y = W x + b, with explicit gradient buffers.
struct LinearLayer {
    Matrix W;     // out x in
    std::vector<double> b;
    Matrix gradW;
    std::vector<double> gradb;

    int in_dim() const { return W.cols; }
    int out_dim() const { return W.rows; }

    void init(int out, int in, Rng& rng); // Xavier-uniform W, zero b
    void zero_grad();

    void forward(const double* x, double* y) const;
    // Accumulates gradW/gradb; writes dL/dx into dx when non-null.
    void backward(const double* x, const double* up, double* dx);

    Matrix forward_rows(const Matrix& X) const;
    Matrix backward_rows(const Matrix& X, const Matrix& up);
};

// Named view over a parameter buffer and its gradient. rows/cols describe
// the logical tensor shape (vectors are n x 1); the buffers stay flat.
struct ParamRef {
    std::string name;
    std::vector<double>* value;
    std::vector<double>* grad;
    int rows = 0;
    int cols = 1;
};

struct AdamConfig {
    double lr = 1e-4;
    double weight_decay = 5e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    bool decoupled = true; // AdamW-style decay; false folds decay into the gradient
};

// Adam with bias correction. Weight decay is decoupled by default:
// p <- p - lr*wd*p applied before the moment update.
class AdamState {
public:
    AdamState() = default;
    explicit AdamState(AdamConfig cfg) : cfg_(cfg) {}

    const AdamConfig& config() const { return cfg_; }
    int64_t step_count() const { return step_; }

    void step(const std::vector<ParamRef>& params);

private:
    AdamConfig cfg_;
    int64_t step_ = 0;
    std::vector<std::vector<double>> m_, v_;
};

} // namespace flowcast
