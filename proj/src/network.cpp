#include "choicenet/network.hpp"

#include <cmath>
#include <stdexcept>

#include "choicenet/kernels.hpp"

namespace choicenet {

void Architecture::validate() const {
  if (input_dim < 1) throw std::runtime_error("architecture: input_dim must be >= 1");
  if (n_alts < 2) throw std::runtime_error("architecture: n_alts must be >= 2");
  if (depth >= 1 && width < 1) throw std::runtime_error("architecture: width must be >= 1");
}

std::size_t Architecture::n_weights() const {
  std::size_t n = 0;
  for (std::size_t l = 0; l < n_layers(); ++l) n += layer_in(l) * layer_out(l);
  return n;
}

std::size_t Architecture::n_params() const {
  std::size_t n = n_weights();
  for (std::size_t l = 0; l < n_layers(); ++l) n += layer_out(l);
  return n;
}

void ModelParameters::validate() const {
  arch.validate();
  if (layers.size() != arch.n_layers()) {
    throw std::runtime_error("parameters: layer count mismatch");
  }
  for (std::size_t l = 0; l < layers.size(); ++l) {
    if (layers[l].w.rows != arch.layer_out(l) || layers[l].w.cols != arch.layer_in(l) ||
        layers[l].b.size() != arch.layer_out(l)) {
      throw std::runtime_error("parameters: shape mismatch at layer " + std::to_string(l));
    }
    for (double v : layers[l].w.data) {
      if (!std::isfinite(v)) throw std::runtime_error("parameters: non-finite weight");
    }
    for (double v : layers[l].b) {
      if (!std::isfinite(v)) throw std::runtime_error("parameters: non-finite bias");
    }
  }
}

ModelParameters init_glorot(const Architecture& arch, std::uint64_t seed) {
  arch.validate();
  ModelParameters p;
  p.arch = arch;
  p.layers.resize(arch.n_layers());
  Rng rng(seed);
  for (std::size_t l = 0; l < arch.n_layers(); ++l) {
    const std::size_t fan_in = arch.layer_in(l);
    const std::size_t fan_out = arch.layer_out(l);
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    p.layers[l].w = Matrix(fan_out, fan_in);
    for (double& w : p.layers[l].w.data) w = rng.uniform(-limit, limit);
    p.layers[l].b.assign(fan_out, 0.0);
  }
  return p;
}

void utilities(const ModelParameters& params, const double* x, double* v,
               ForwardTrace* trace, const DropoutContext* dropout) {
  const Architecture& arch = params.arch;
  const std::size_t n_layers = arch.n_layers();
  const bool training = dropout && dropout->rate > 0.0 && dropout->rng;

  ForwardTrace local;
  ForwardTrace& t = trace ? *trace : local;
  t.pre.resize(n_layers);
  t.act.resize(n_layers + 1);
  t.mask.resize(arch.depth);

  t.act[0].assign(x, x + arch.input_dim);
  for (std::size_t l = 0; l < n_layers; ++l) {
    const Layer& layer = params.layers[l];
    const std::size_t out = arch.layer_out(l);
    t.pre[l].resize(out);
    kernels::affine(layer.w.data.data(), layer.b.data(), t.act[l].data(),
                    t.pre[l].data(), out, arch.layer_in(l));
    const bool last = (l + 1 == n_layers);
    if (last) {
      for (std::size_t j = 0; j < out; ++j) v[j] = t.pre[l][j];
      t.act[l + 1].assign(v, v + out);
    } else {
      t.act[l + 1] = t.pre[l];
      kernels::relu(t.act[l + 1].data(), out);
      if (training) {
        auto& mask = t.mask[l];
        mask.resize(out);
        const double keep_scale = 1.0 / (1.0 - dropout->rate);
        for (std::size_t j = 0; j < out; ++j) {
          mask[j] = dropout->rng->uniform() < dropout->rate ? 0.0 : keep_scale;
          t.act[l + 1][j] *= mask[j];
        }
      } else {
        t.mask[l].clear();
      }
    }
  }
}

std::vector<double> utilities(const ModelParameters& params, const std::vector<double>& x) {
  if (x.size() != params.arch.input_dim) {
    throw std::runtime_error("utilities: input dimension mismatch");
  }
  std::vector<double> v(params.arch.n_alts);
  utilities(params, x.data(), v.data());
  return v;
}

void probabilities(const double* v, double* s, std::size_t k) {
  double mx = v[0];
  for (std::size_t j = 1; j < k; ++j) mx = std::max(mx, v[j]);
  double sum = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    s[j] = std::exp(v[j] - mx);
    sum += s[j];
  }
  const double inv = 1.0 / sum;
  for (std::size_t j = 0; j < k; ++j) s[j] *= inv;
}

std::vector<double> probabilities(const std::vector<double>& v) {
  std::vector<double> s(v.size());
  probabilities(v.data(), s.data(), v.size());
  return s;
}

double logsumexp(const double* v, std::size_t k) {
  double mx = v[0];
  for (std::size_t j = 1; j < k; ++j) mx = std::max(mx, v[j]);
  if (k == 1) return v[0];
  double sum = 0.0;
  for (std::size_t j = 0; j < k; ++j) sum += std::exp(v[j] - mx);
  return mx + std::log(sum);
}

double logsumexp(const std::vector<double>& v) { return logsumexp(v.data(), v.size()); }

}  // namespace choicenet
