#pragma once

#include <cstddef>

// Data-parallel primitives behind the training and differentiation loops.
// Every kernel has a scalar reference implementation and, on x86-64, an AVX2
// variant selected once at startup (override with CHOICENET_KERNELS=scalar|avx2).
// The two backends are equivalence-tested; they may differ only in summation
// order, never in semantics.

namespace choicenet::kernels {

enum class Backend { scalar, avx2 };

Backend active_backend();
const char* backend_name();

// Force a specific backend. Throws std::runtime_error if it is not available
// on this machine. Intended for tests and benchmarking.
void select_backend(Backend b);

// y = W x + b with W row-major [rows x cols]
void affine(const double* w, const double* bias, const double* x, double* y,
            std::size_t rows, std::size_t cols);

double dot(const double* a, const double* b, std::size_t n);

// dx += W^T dy
void matvec_t_acc(const double* w, const double* dy, double* dx,
                  std::size_t rows, std::size_t cols);

// dW += dy (outer) x
void outer_acc(double* dw, const double* dy, const double* x,
               std::size_t rows, std::size_t cols);

// x[i] = max(x[i], 0)
void relu(double* x, std::size_t n);

// grad[i] = pre[i] > 0 ? grad[i] : 0   (subgradient 0 at the kink)
void relu_backward(const double* pre, double* grad, std::size_t n);

// y += a x
void axpy(double a, const double* x, double* y, std::size_t n);

void scale(double* x, std::size_t n, double a);

// l1 = sum |w|, l2 = sum w^2
void sums_l1_l2(const double* w, std::size_t n, double& l1, double& l2);

// g += gamma1 * sign(w) + 2 * gamma2 * w, with sign(0) = 0
void penalty_grad_acc(double* g, const double* w, std::size_t n,
                      double gamma1, double gamma2);

// One Adam coordinate update over n entries. bias1/bias2 are the precomputed
// correction multipliers 1/(1-beta1^t) and 1/(1-beta2^t).
void adam_update(double* w, const double* g, double* m, double* v,
                 std::size_t n, double lr, double beta1, double beta2,
                 double eps, double bias1, double bias2);

}  // namespace choicenet::kernels
