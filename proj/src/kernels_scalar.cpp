#include <cmath>
#include <cstddef>

#include "kernels_internal.hpp"

// Reference implementations. Plain loops, one accumulator, no reordering:
// this is the semantics the SIMD variants are tested against.

namespace choicenet::kernels::scalar {
namespace {

void affine(const double* w, const double* bias, const double* x, double* y,
            std::size_t rows, std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double* wr = w + r * cols;
    double acc = 0.0;
    for (std::size_t j = 0; j < cols; ++j) acc += wr[j] * x[j];
    y[r] = acc + bias[r];
  }
}

double dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void matvec_t_acc(const double* w, const double* dy, double* dx,
                  std::size_t rows, std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double* wr = w + r * cols;
    const double g = dy[r];
    for (std::size_t j = 0; j < cols; ++j) dx[j] += g * wr[j];
  }
}

void outer_acc(double* dw, const double* dy, const double* x, std::size_t rows,
               std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) {
    double* dwr = dw + r * cols;
    const double g = dy[r];
    for (std::size_t j = 0; j < cols; ++j) dwr[j] += g * x[j];
  }
}

void relu(double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] = x[i] > 0.0 ? x[i] : 0.0;
}

void relu_backward(const double* pre, double* grad, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    if (!(pre[i] > 0.0)) grad[i] = 0.0;
  }
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scale(double* x, std::size_t n, double a) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

void sums_l1_l2(const double* w, std::size_t n, double& l1, double& l2) {
  double s1 = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    s1 += std::fabs(w[i]);
    s2 += w[i] * w[i];
  }
  l1 = s1;
  l2 = s2;
}

void penalty_grad_acc(double* g, const double* w, std::size_t n, double gamma1,
                      double gamma2) {
  const double two_g2 = 2.0 * gamma2;
  for (std::size_t i = 0; i < n; ++i) {
    const double sgn = w[i] > 0.0 ? 1.0 : (w[i] < 0.0 ? -1.0 : 0.0);
    g[i] += gamma1 * sgn + two_g2 * w[i];
  }
}

void adam_update(double* w, const double* g, double* m, double* v,
                 std::size_t n, double lr, double beta1, double beta2,
                 double eps, double bias1, double bias2) {
  for (std::size_t i = 0; i < n; ++i) {
    m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
    v[i] = beta2 * v[i] + (1.0 - beta2) * g[i] * g[i];
    const double mhat = m[i] * bias1;
    const double vhat = v[i] * bias2;
    w[i] -= lr * mhat / (std::sqrt(vhat) + eps);
  }
}

}  // namespace

const Vtable& vtable() {
  static const Vtable vt = {
      affine,        dot,   matvec_t_acc, outer_acc,        relu,
      relu_backward, axpy,  scale,        sums_l1_l2,       penalty_grad_acc,
      adam_update,
  };
  return vt;
}

}  // namespace choicenet::kernels::scalar
