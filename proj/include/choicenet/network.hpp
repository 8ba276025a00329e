#pragma once

#include <cstdint>
#include <vector>

#include "choicenet/matrix.hpp"
#include "choicenet/rng.hpp"

namespace choicenet {

// Layer sizes of the utility network. depth counts hidden layers; depth 0 is
// the linear-utility multinomial logit.
struct Architecture {
  std::size_t input_dim = 0;
  std::size_t n_alts = 0;
  std::size_t depth = 0;
  std::size_t width = 0;

  void validate() const;
  std::size_t n_layers() const { return depth + 1; }
  std::size_t layer_in(std::size_t l) const { return l == 0 ? input_dim : width; }
  std::size_t layer_out(std::size_t l) const { return l + 1 == n_layers() ? n_alts : width; }
  std::size_t n_weights() const;  // weight entries only
  std::size_t n_params() const;   // weights + biases

  bool operator==(const Architecture&) const = default;
};

struct Layer {
  Matrix w;               // out x in
  std::vector<double> b;  // out

  bool operator==(const Layer&) const = default;
};

struct ModelParameters {
  Architecture arch;
  std::vector<Layer> layers;

  void validate() const;
};

// Weights uniform in +-sqrt(6/(fan_in+fan_out)), biases zero.
ModelParameters init_glorot(const Architecture& arch, std::uint64_t seed);

// Training-mode dropout source. When present, each hidden activation is
// zeroed with probability `rate` and survivors are scaled by 1/(1-rate)
// (inverted dropout), so inference needs no rescaling.
struct DropoutContext {
  double rate = 0.0;
  Rng* rng = nullptr;
};

// Per-observation forward state kept for backprop: pre-activations, layer
// activations (input copy in act[0]) and the dropout multipliers actually
// applied (empty rows at inference).
struct ForwardTrace {
  std::vector<std::vector<double>> pre;   // n_layers
  std::vector<std::vector<double>> act;   // n_layers + 1
  std::vector<std::vector<double>> mask;  // depth
};

// V(x): hidden layers are ReLU(Wx+b), the final layer is affine (the softmax
// consumes raw utilities). Deterministic unless a dropout context is given.
void utilities(const ModelParameters& params, const double* x, double* v,
               ForwardTrace* trace = nullptr, const DropoutContext* dropout = nullptr);
std::vector<double> utilities(const ModelParameters& params, const std::vector<double>& x);

// Max-shifted softmax; entries in (0,1), sums to 1 for any finite v.
void probabilities(const double* v, double* s, std::size_t k);
std::vector<double> probabilities(const std::vector<double>& v);

// log sum_j exp(v_j) via the max shift; exact identity for k = 1.
double logsumexp(const double* v, std::size_t k);
double logsumexp(const std::vector<double>& v);

}  // namespace choicenet
