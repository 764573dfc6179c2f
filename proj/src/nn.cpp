#include "flowcast/nn.hpp"

#include "flowcast/errors.hpp"

namespace flowcast {

BceResult bce_loss(double logit, int label) {
    if (label != 0 && label != 1)
        throw NumericError("bce label must be 0 or 1");
    return {softplus(logit) - label * logit, sigmoid(logit) - label};
}

void LinearLayer::init(int out, int in, Rng& rng) {
    W = Matrix(out, in);
    gradW = Matrix(out, in);
    b.assign(out, 0.0);
    gradb.assign(out, 0.0);
    double limit = std::sqrt(6.0 / (in + out));
    for (double& w : W.data) w = rng.next_range(-limit, limit);
}

void LinearLayer::zero_grad() {
    gradW.zero();
    std::fill(gradb.begin(), gradb.end(), 0.0);
}

void LinearLayer::forward(const double* x, double* y) const {
    matvec(W, x, y);
    for (int i = 0; i < out_dim(); ++i) y[i] += b[i];
}

void LinearLayer::backward(const double* x, const double* up, double* dx) {
    rank1_acc(gradW, up, x);
    for (int i = 0; i < out_dim(); ++i) gradb[i] += up[i];
    if (dx) matvec_t_acc(W, up, dx);
}

Matrix LinearLayer::forward_rows(const Matrix& X) const {
    if (X.cols != in_dim())
        throw ShapeMismatchError("linear forward: " + std::to_string(X.cols) +
                                 " != " + std::to_string(in_dim()));
    Matrix Y(X.rows, out_dim());
    matmul_nt(X, W, Y);
    for (int i = 0; i < X.rows; ++i) axpy(1.0, b.data(), Y.row(i), out_dim());
    return Y;
}

Matrix LinearLayer::backward_rows(const Matrix& X, const Matrix& up) {
    if (up.rows != X.rows || up.cols != out_dim() || X.cols != in_dim())
        throw ShapeMismatchError("linear backward");
    matmul_tn_acc(up, X, gradW);
    for (int i = 0; i < up.rows; ++i) axpy(1.0, up.row(i), gradb.data(), out_dim());
    Matrix dX(X.rows, in_dim());
    matmul_nn_acc(up, W, dX);
    return dX;
}

void AdamState::step(const std::vector<ParamRef>& params) {
    if (m_.empty()) {
        m_.resize(params.size());
        v_.resize(params.size());
        for (size_t i = 0; i < params.size(); ++i) {
            m_[i].assign(params[i].value->size(), 0.0);
            v_[i].assign(params[i].value->size(), 0.0);
        }
    }
    if (m_.size() != params.size())
        throw ShapeMismatchError("adam: parameter group count changed");

    ++step_;
    double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(step_));
    double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(step_));

    for (size_t i = 0; i < params.size(); ++i) {
        std::vector<double>& p = *params[i].value;
        std::vector<double>& g = *params[i].grad;
        if (p.size() != g.size() || p.size() != m_[i].size())
            throw ShapeMismatchError("adam: buffer sizes for " + params[i].name);
        for (size_t k = 0; k < p.size(); ++k) {
            double grad = g[k];
            if (cfg_.decoupled) {
                p[k] -= cfg_.lr * cfg_.weight_decay * p[k];
            } else {
                grad += cfg_.weight_decay * p[k];
            }
            m_[i][k] = cfg_.beta1 * m_[i][k] + (1.0 - cfg_.beta1) * grad;
            v_[i][k] = cfg_.beta2 * v_[i][k] + (1.0 - cfg_.beta2) * grad * grad;
            double mhat = m_[i][k] / bc1;
            double vhat = v_[i][k] / bc2;
            p[k] -= cfg_.lr * mhat / (std::sqrt(vhat) + cfg_.eps);
        }
    }
}

} // namespace flowcast
