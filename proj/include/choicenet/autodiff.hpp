#pragma once

#include <span>
#include <vector>

#include "choicenet/data.hpp"
#include "choicenet/network.hpp"

namespace choicenet {

struct LossValue {
  double total = 0.0;
  double data_term = 0.0;     // mean cross-entropy, computed in log space
  double penalty_term = 0.0;  // gamma1 * sum|w| + gamma2 * sum w^2, weights only
};

struct ParamGradients {
  std::vector<Layer> layers;

  static ParamGradients zeros_like(const ModelParameters& params);
  void set_zero();
};

// Standardized observations one loss/gradient evaluation runs over.
struct Batch {
  const Matrix& x;             // N x d in the model's input units
  const std::vector<int>& y;   // length N
  std::span<const std::size_t> rows;
};

LossValue loss(const ModelParameters& params, const Batch& batch, double l1, double l2);

// Reverse-mode gradient of the regularized mean cross-entropy; returns the
// loss from the same pass. The L1 subgradient at w = 0 is 0; biases carry no
// penalty. A dropout context, when given, applies to value and gradient alike.
LossValue param_gradients(const ModelParameters& params, const Batch& batch,
                          double l1, double l2, ParamGradients& out,
                          const DropoutContext* dropout = nullptr);

// K x d matrix of ds_k / dx_j, reported in ORIGINAL feature units: the
// backward pass runs in standardized coordinates and the chain rule divides
// each column by the fitted std.
struct InputJacobian {
  Matrix d;  // K x d
};

InputJacobian input_jacobian(const ModelParameters& params,
                             const Standardizer& standardizer,
                             const double* x_original);

// Closed form ds_k/dx_j = s_k (w_kj - sum_m s_m w_mj) for softmax of linear
// utilities; the oracle for depth-0 models. Optional biases enter only
// through the probabilities.
InputJacobian analytic_linear_jacobian(const Matrix& weights, const double* x,
                                       const double* biases = nullptr);

// dV_alt / dx in original units (used for the marginal utility of income).
std::vector<double> utility_input_gradient(const ModelParameters& params,
                                           const Standardizer& standardizer,
                                           const double* x_original,
                                           std::size_t alt);

}  // namespace choicenet
