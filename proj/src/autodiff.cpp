#include "choicenet/autodiff.hpp"

#include <cmath>
#include <stdexcept>

#include "choicenet/kernels.hpp"

namespace choicenet {

ParamGradients ParamGradients::zeros_like(const ModelParameters& params) {
  ParamGradients g;
  g.layers.resize(params.layers.size());
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    g.layers[l].w = Matrix(params.layers[l].w.rows, params.layers[l].w.cols);
    g.layers[l].b.assign(params.layers[l].b.size(), 0.0);
  }
  return g;
}

void ParamGradients::set_zero() {
  for (auto& layer : layers) {
    std::fill(layer.w.data.begin(), layer.w.data.end(), 0.0);
    std::fill(layer.b.begin(), layer.b.end(), 0.0);
  }
}

namespace {

double penalty_value(const ModelParameters& params, double l1, double l2) {
  if (l1 == 0.0 && l2 == 0.0) return 0.0;
  double s1 = 0.0, s2 = 0.0;
  for (const auto& layer : params.layers) {
    double a = 0.0, b = 0.0;
    kernels::sums_l1_l2(layer.w.data.data(), layer.w.size(), a, b);
    s1 += a;
    s2 += b;
  }
  return l1 * s1 + l2 * s2;
}

// Backpropagates d(loss)/d(pre[last]) through the trace. When acc is given,
// parameter gradients are accumulated; when dx is given, the gradient is
// carried through to the input.
void backprop(const ModelParameters& params, const ForwardTrace& trace,
              std::vector<double>& g, ParamGradients* acc, double* dx,
              std::vector<double>& scratch) {
  const std::size_t n_layers = params.arch.n_layers();
  for (std::size_t li = n_layers; li-- > 0;) {
    const Layer& layer = params.layers[li];
    if (acc) {
      kernels::outer_acc(acc->layers[li].w.data.data(), g.data(),
                         trace.act[li].data(), layer.w.rows, layer.w.cols);
      kernels::axpy(1.0, g.data(), acc->layers[li].b.data(), layer.b.size());
    }
    if (li == 0) {
      if (dx) {
        for (std::size_t j = 0; j < layer.w.cols; ++j) dx[j] = 0.0;
        kernels::matvec_t_acc(layer.w.data.data(), g.data(), dx, layer.w.rows,
                              layer.w.cols);
      }
      return;
    }
    scratch.assign(layer.w.cols, 0.0);
    kernels::matvec_t_acc(layer.w.data.data(), g.data(), scratch.data(),
                          layer.w.rows, layer.w.cols);
    const auto& mask = trace.mask[li - 1];
    if (!mask.empty()) {
      for (std::size_t j = 0; j < scratch.size(); ++j) scratch[j] *= mask[j];
    }
    kernels::relu_backward(trace.pre[li - 1].data(), scratch.data(), scratch.size());
    g = scratch;
  }
}

}  // namespace

LossValue loss(const ModelParameters& params, const Batch& batch, double l1, double l2) {
  if (batch.rows.empty()) throw std::runtime_error("loss: empty batch");
  const std::size_t k = params.arch.n_alts;
  std::vector<double> v(k);
  double data = 0.0;
  for (std::size_t i : batch.rows) {
    utilities(params, batch.x.row(i), v.data());
    data += logsumexp(v.data(), k) - v[batch.y[i]];
  }
  LossValue out;
  out.data_term = data / static_cast<double>(batch.rows.size());
  out.penalty_term = penalty_value(params, l1, l2);
  out.total = out.data_term + out.penalty_term;
  return out;
}

LossValue param_gradients(const ModelParameters& params, const Batch& batch,
                          double l1, double l2, ParamGradients& out,
                          const DropoutContext* dropout) {
  if (batch.rows.empty()) throw std::runtime_error("param_gradients: empty batch");
  if (out.layers.size() != params.layers.size()) out = ParamGradients::zeros_like(params);
  out.set_zero();

  const std::size_t k = params.arch.n_alts;
  const double inv_n = 1.0 / static_cast<double>(batch.rows.size());
  ForwardTrace trace;
  std::vector<double> v(k), s(k), g(k), scratch;
  double data = 0.0;

  for (std::size_t i : batch.rows) {
    utilities(params, batch.x.row(i), v.data(), &trace, dropout);
    data += logsumexp(v.data(), k) - v[batch.y[i]];
    probabilities(v.data(), s.data(), k);
    for (std::size_t j = 0; j < k; ++j) g[j] = s[j] * inv_n;
    g[batch.y[i]] -= inv_n;
    backprop(params, trace, g, &out, nullptr, scratch);
  }

  if (l1 != 0.0 || l2 != 0.0) {
    for (std::size_t li = 0; li < params.layers.size(); ++li) {
      kernels::penalty_grad_acc(out.layers[li].w.data.data(),
                                params.layers[li].w.data.data(),
                                params.layers[li].w.size(), l1, l2);
    }
  }

  LossValue value;
  value.data_term = data * inv_n;
  value.penalty_term = penalty_value(params, l1, l2);
  value.total = value.data_term + value.penalty_term;
  return value;
}

InputJacobian input_jacobian(const ModelParameters& params,
                             const Standardizer& standardizer,
                             const double* x_original) {
  const std::size_t k = params.arch.n_alts;
  const std::size_t d = params.arch.input_dim;
  if (standardizer.dim() != d) {
    throw std::runtime_error("input_jacobian: standardizer dimension mismatch");
  }

  std::vector<double> z(d);
  standardizer.transform(x_original, z.data());

  ForwardTrace trace;
  std::vector<double> v(k), s(k), g(k), dx(d), scratch;
  utilities(params, z.data(), v.data(), &trace);
  probabilities(v.data(), s.data(), k);

  InputJacobian jac;
  jac.d = Matrix(k, d);
  for (std::size_t kk = 0; kk < k; ++kk) {
    for (std::size_t j = 0; j < k; ++j) g[j] = s[kk] * ((j == kk ? 1.0 : 0.0) - s[j]);
    backprop(params, trace, g, nullptr, dx.data(), scratch);
    double* row = jac.d.row(kk);
    for (std::size_t j = 0; j < d; ++j) row[j] = dx[j] / standardizer.stds[j];
  }
  return jac;
}

InputJacobian analytic_linear_jacobian(const Matrix& weights, const double* x,
                                       const double* biases) {
  const std::size_t k = weights.rows;
  const std::size_t d = weights.cols;
  std::vector<double> v(k), s(k);
  for (std::size_t kk = 0; kk < k; ++kk) {
    v[kk] = kernels::dot(weights.row(kk), x, d) + (biases ? biases[kk] : 0.0);
  }
  probabilities(v.data(), s.data(), k);

  std::vector<double> wbar(d, 0.0);  // sum_m s_m w_mj
  for (std::size_t m = 0; m < k; ++m) kernels::axpy(s[m], weights.row(m), wbar.data(), d);

  InputJacobian jac;
  jac.d = Matrix(k, d);
  for (std::size_t kk = 0; kk < k; ++kk) {
    double* row = jac.d.row(kk);
    const double* w = weights.row(kk);
    for (std::size_t j = 0; j < d; ++j) row[j] = s[kk] * (w[j] - wbar[j]);
  }
  return jac;
}

std::vector<double> utility_input_gradient(const ModelParameters& params,
                                           const Standardizer& standardizer,
                                           const double* x_original,
                                           std::size_t alt) {
  const std::size_t k = params.arch.n_alts;
  const std::size_t d = params.arch.input_dim;
  if (alt >= k) throw std::runtime_error("utility_input_gradient: alternative out of range");

  std::vector<double> z(d);
  standardizer.transform(x_original, z.data());

  ForwardTrace trace;
  std::vector<double> v(k), g(k, 0.0), dx(d), scratch;
  utilities(params, z.data(), v.data(), &trace);
  g[alt] = 1.0;
  backprop(params, trace, g, nullptr, dx.data(), scratch);
  for (std::size_t j = 0; j < d; ++j) dx[j] /= standardizer.stds[j];
  return dx;
}

}  // namespace choicenet
