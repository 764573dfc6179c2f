#pragma once

#include <cassert>
#include <cstddef>
#include <vector>

namespace flowcast {

// Dense row-major f64 matrix. Graphs here are tiny (a dozen nodes), so a
// flat vector with hand-written kernels beats any sparse machinery.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), data(static_cast<size_t>(r) * c, 0.0) {}

    double* row(int i) { return data.data() + static_cast<size_t>(i) * cols; }
    const double* row(int i) const { return data.data() + static_cast<size_t>(i) * cols; }

    double& at(int i, int j) { return data[static_cast<size_t>(i) * cols + j]; }
    double at(int i, int j) const { return data[static_cast<size_t>(i) * cols + j]; }

    void zero() { std::fill(data.begin(), data.end(), 0.0); }

    bool same_shape(const Matrix& other) const {
        return rows == other.rows && cols == other.cols;
    }
};

// y = A x for row-major A[n x m]; y must not alias x.
void matvec(const Matrix& A, const double* x, double* y);

// dx[0..m) += A^T up for row-major A[n x m]; used for input gradients.
void matvec_t_acc(const Matrix& A, const double* up, double* dx);

// G[n x m] += up ⊗ x  (rank-1 update; parameter gradients)
void rank1_acc(Matrix& G, const double* up, const double* x);

// Batched counterparts. All loop over the weight/gradient rows in the
// outer position so the big matrix streams through cache once per call
// instead of once per input row; that is the difference between the
// training loop being memory-bound and compute-bound.

// Y = X W^T for X[n x k], W[m x k]; Y must be preallocated n x m.
void matmul_nt(const Matrix& X, const Matrix& W, Matrix& Y);

// G += UP^T X for UP[n x m], X[n x k], G[m x k]  (parameter gradients)
void matmul_tn_acc(const Matrix& UP, const Matrix& X, Matrix& G);

// D += UP W for UP[n x m], W[m x k], D[n x k]  (input gradients)
void matmul_nn_acc(const Matrix& UP, const Matrix& W, Matrix& D);

double dot(const double* a, const double* b, int n);
void axpy(double alpha, const double* x, double* y, int n); // y += alpha*x

bool all_finite(const double* p, size_t n);

} // namespace flowcast
