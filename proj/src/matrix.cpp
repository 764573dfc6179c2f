#include "flowcast/matrix.hpp"

#include <cmath>

namespace flowcast {

double dot(const double* a, const double* b, int n) {
    // Sixteen independent partial sums break the additive dependence chain;
    // without them the loop cannot be vectorized (FP addition is not
    // associative as far as the compiler is concerned) and every matmul in
    // the training loop runs at scalar speed. Sixteen lanes give the
    // vectorizer two independent full-width accumulators, enough to hide
    // FMA latency. The summation order is fixed, so results stay
    // deterministic run to run.
    double s[16] = {0.0};
    int i = 0;
    for (; i + 16 <= n; i += 16)
        for (int k = 0; k < 16; ++k) s[k] += a[i + k] * b[i + k];
    double total = 0.0;
    for (int k = 0; k < 16; ++k) total += s[k];
    for (; i < n; ++i) total += a[i] * b[i];
    return total;
}

void axpy(double alpha, const double* x, double* y, int n) {
    for (int i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void matvec(const Matrix& A, const double* x, double* y) {
    for (int i = 0; i < A.rows; ++i) y[i] = dot(A.row(i), x, A.cols);
}

void matvec_t_acc(const Matrix& A, const double* up, double* dx) {
    for (int i = 0; i < A.rows; ++i)
        if (up[i] != 0.0) axpy(up[i], A.row(i), dx, A.cols);
}

void rank1_acc(Matrix& G, const double* up, const double* x) {
    for (int i = 0; i < G.rows; ++i)
        if (up[i] != 0.0) axpy(up[i], x, G.row(i), G.cols);
}

void matmul_nt(const Matrix& X, const Matrix& W, Matrix& Y) {
    for (int r = 0; r < W.rows; ++r) {
        const double* wr = W.row(r);
        for (int i = 0; i < X.rows; ++i) Y.at(i, r) = dot(X.row(i), wr, X.cols);
    }
}

void matmul_tn_acc(const Matrix& UP, const Matrix& X, Matrix& G) {
    for (int r = 0; r < G.rows; ++r) {
        double* gr = G.row(r);
        for (int i = 0; i < UP.rows; ++i) {
            double u = UP.at(i, r);
            if (u != 0.0) axpy(u, X.row(i), gr, G.cols);
        }
    }
}

void matmul_nn_acc(const Matrix& UP, const Matrix& W, Matrix& D) {
    for (int r = 0; r < W.rows; ++r) {
        const double* wr = W.row(r);
        for (int i = 0; i < UP.rows; ++i) {
            double u = UP.at(i, r);
            if (u != 0.0) axpy(u, wr, D.row(i), D.cols);
        }
    }
}

bool all_finite(const double* p, size_t n) {
    for (size_t i = 0; i < n; ++i)
        if (!std::isfinite(p[i])) return false;
    return true;
}

} // namespace flowcast
