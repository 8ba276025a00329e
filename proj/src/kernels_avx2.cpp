#ifdef CHOICENET_HAVE_AVX2

#include <immintrin.h>

#include <cmath>
#include <cstddef>

#include "kernels_internal.hpp"

namespace choicenet::kernels::avx2 {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void affine(const double* w, const double* bias, const double* x, double* y,
            std::size_t rows, std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) {
    y[r] = dot(w + r * cols, x, cols) + bias[r];
  }
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d yv = _mm256_loadu_pd(y + i);
    yv = _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), yv);
    _mm256_storeu_pd(y + i, yv);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void matvec_t_acc(const double* w, const double* dy, double* dx,
                  std::size_t rows, std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) axpy(dy[r], w + r * cols, dx, cols);
}

void outer_acc(double* dw, const double* dy, const double* x, std::size_t rows,
               std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) axpy(dy[r], x, dw + r * cols, cols);
}

void relu(double* x, std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(x + i, _mm256_max_pd(_mm256_loadu_pd(x + i), zero));
  }
  for (; i < n; ++i) x[i] = x[i] > 0.0 ? x[i] : 0.0;
}

void relu_backward(const double* pre, double* grad, std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d keep = _mm256_cmp_pd(_mm256_loadu_pd(pre + i), zero, _CMP_GT_OQ);
    _mm256_storeu_pd(grad + i, _mm256_and_pd(_mm256_loadu_pd(grad + i), keep));
  }
  for (; i < n; ++i) {
    if (!(pre[i] > 0.0)) grad[i] = 0.0;
  }
}

void scale(double* x, std::size_t n, double a) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(x + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), av));
  }
  for (; i < n; ++i) x[i] *= a;
}

void sums_l1_l2(const double* w, std::size_t n, double& l1, double& l2) {
  const __m256d absmask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
  __m256d s1 = _mm256_setzero_pd();
  __m256d s2 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d wv = _mm256_loadu_pd(w + i);
    s1 = _mm256_add_pd(s1, _mm256_and_pd(wv, absmask));
    s2 = _mm256_fmadd_pd(wv, wv, s2);
  }
  double a1 = hsum(s1), a2 = hsum(s2);
  for (; i < n; ++i) {
    a1 += std::fabs(w[i]);
    a2 += w[i] * w[i];
  }
  l1 = a1;
  l2 = a2;
}

void penalty_grad_acc(double* g, const double* w, std::size_t n, double gamma1,
                      double gamma2) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d neg_one = _mm256_set1_pd(-1.0);
  const __m256d g1 = _mm256_set1_pd(gamma1);
  const __m256d two_g2 = _mm256_set1_pd(2.0 * gamma2);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d wv = _mm256_loadu_pd(w + i);
    __m256d sgn = _mm256_or_pd(
        _mm256_and_pd(_mm256_cmp_pd(wv, zero, _CMP_GT_OQ), one),
        _mm256_and_pd(_mm256_cmp_pd(wv, zero, _CMP_LT_OQ), neg_one));
    __m256d gv = _mm256_loadu_pd(g + i);
    gv = _mm256_fmadd_pd(g1, sgn, gv);
    gv = _mm256_fmadd_pd(two_g2, wv, gv);
    _mm256_storeu_pd(g + i, gv);
  }
  const double t2 = 2.0 * gamma2;
  for (; i < n; ++i) {
    const double sgn = w[i] > 0.0 ? 1.0 : (w[i] < 0.0 ? -1.0 : 0.0);
    g[i] += gamma1 * sgn + t2 * w[i];
  }
}

void adam_update(double* w, const double* g, double* m, double* v,
                 std::size_t n, double lr, double beta1, double beta2,
                 double eps, double bias1, double bias2) {
  const __m256d b1 = _mm256_set1_pd(beta1);
  const __m256d b2 = _mm256_set1_pd(beta2);
  const __m256d omb1 = _mm256_set1_pd(1.0 - beta1);
  const __m256d omb2 = _mm256_set1_pd(1.0 - beta2);
  const __m256d c1 = _mm256_set1_pd(bias1);
  const __m256d c2 = _mm256_set1_pd(bias2);
  const __m256d epsv = _mm256_set1_pd(eps);
  const __m256d lrv = _mm256_set1_pd(lr);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d gv = _mm256_loadu_pd(g + i);
    __m256d mv = _mm256_loadu_pd(m + i);
    __m256d vv = _mm256_loadu_pd(v + i);
    mv = _mm256_fmadd_pd(b1, mv, _mm256_mul_pd(omb1, gv));
    vv = _mm256_fmadd_pd(b2, vv, _mm256_mul_pd(omb2, _mm256_mul_pd(gv, gv)));
    _mm256_storeu_pd(m + i, mv);
    _mm256_storeu_pd(v + i, vv);
    const __m256d mhat = _mm256_mul_pd(mv, c1);
    const __m256d denom = _mm256_add_pd(_mm256_sqrt_pd(_mm256_mul_pd(vv, c2)), epsv);
    __m256d wv = _mm256_loadu_pd(w + i);
    wv = _mm256_fnmadd_pd(lrv, _mm256_div_pd(mhat, denom), wv);
    _mm256_storeu_pd(w + i, wv);
  }
  for (; i < n; ++i) {
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

bool supported() { return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"); }

}  // namespace choicenet::kernels::avx2

#endif  // CHOICENET_HAVE_AVX2
