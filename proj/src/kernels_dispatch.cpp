#include "choicenet/kernels.hpp"

#include <cstdlib>
#include <cstring>
#include <stdexcept>

#include "kernels_internal.hpp"

namespace choicenet::kernels {
namespace {

struct Active {
  const Vtable* vt;
  Backend backend;
};

Active pick_default() {
#ifdef CHOICENET_HAVE_AVX2
  const char* env = std::getenv("CHOICENET_KERNELS");
  if (env && std::strcmp(env, "scalar") == 0) return {&scalar::vtable(), Backend::scalar};
  if (env && std::strcmp(env, "avx2") == 0) {
    if (!avx2::supported()) throw std::runtime_error("CHOICENET_KERNELS=avx2: cpu lacks avx2/fma");
    return {&avx2::vtable(), Backend::avx2};
  }
  if (avx2::supported()) return {&avx2::vtable(), Backend::avx2};
#endif
  return {&scalar::vtable(), Backend::scalar};
}

Active& active() {
  static Active a = pick_default();
  return a;
}

}  // namespace

Backend active_backend() { return active().backend; }

const char* backend_name() {
  return active().backend == Backend::avx2 ? "avx2" : "scalar";
}

void select_backend(Backend b) {
  if (b == Backend::scalar) {
    active() = {&scalar::vtable(), Backend::scalar};
    return;
  }
#ifdef CHOICENET_HAVE_AVX2
  if (avx2::supported()) {
    active() = {&avx2::vtable(), Backend::avx2};
    return;
  }
#endif
  throw std::runtime_error("requested kernel backend not available on this cpu");
}

void affine(const double* w, const double* bias, const double* x, double* y,
            std::size_t rows, std::size_t cols) {
  active().vt->affine(w, bias, x, y, rows, cols);
}

double dot(const double* a, const double* b, std::size_t n) {
  return active().vt->dot(a, b, n);
}

void matvec_t_acc(const double* w, const double* dy, double* dx,
                  std::size_t rows, std::size_t cols) {
  active().vt->matvec_t_acc(w, dy, dx, rows, cols);
}

void outer_acc(double* dw, const double* dy, const double* x, std::size_t rows,
               std::size_t cols) {
  active().vt->outer_acc(dw, dy, x, rows, cols);
}

void relu(double* x, std::size_t n) { active().vt->relu(x, n); }

void relu_backward(const double* pre, double* grad, std::size_t n) {
  active().vt->relu_backward(pre, grad, n);
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  active().vt->axpy(a, x, y, n);
}

void scale(double* x, std::size_t n, double a) { active().vt->scale(x, n, a); }

void sums_l1_l2(const double* w, std::size_t n, double& l1, double& l2) {
  active().vt->sums_l1_l2(w, n, l1, l2);
}

void penalty_grad_acc(double* g, const double* w, std::size_t n, double gamma1,
                      double gamma2) {
  active().vt->penalty_grad_acc(g, w, n, gamma1, gamma2);
}

void adam_update(double* w, const double* g, double* m, double* v,
                 std::size_t n, double lr, double beta1, double beta2,
                 double eps, double bias1, double bias2) {
  active().vt->adam_update(w, g, m, v, n, lr, beta1, beta2, eps, bias1, bias2);
}

}  // namespace choicenet::kernels
