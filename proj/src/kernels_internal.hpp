#pragma once

#include <cstddef>

// Backend vtable shared between the dispatch unit and the per-backend
// translation units. Not part of the public API.

namespace choicenet::kernels {

struct Vtable {
  void (*affine)(const double*, const double*, const double*, double*,
                 std::size_t, std::size_t);
  double (*dot)(const double*, const double*, std::size_t);
  void (*matvec_t_acc)(const double*, const double*, double*, std::size_t,
                       std::size_t);
  void (*outer_acc)(double*, const double*, const double*, std::size_t,
                    std::size_t);
  void (*relu)(double*, std::size_t);
  void (*relu_backward)(const double*, double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  void (*scale)(double*, std::size_t, double);
  void (*sums_l1_l2)(const double*, std::size_t, double&, double&);
  void (*penalty_grad_acc)(double*, const double*, std::size_t, double, double);
  void (*adam_update)(double*, const double*, double*, double*, std::size_t,
                      double, double, double, double, double, double);
};

namespace scalar {
const Vtable& vtable();
}

#ifdef CHOICENET_HAVE_AVX2
namespace avx2 {
const Vtable& vtable();
bool supported();
}
#endif

}  // namespace choicenet::kernels
