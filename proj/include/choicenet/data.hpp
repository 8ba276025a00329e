#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "choicenet/matrix.hpp"

namespace choicenet {

// Which feature columns play the cost / time roles for one alternative.
// Indices refer to Dataset::feature_names.
struct AttributeRoles {
  int cost = -1;
  std::vector<int> time;
};

// Immutable after construction; shared read-only across concurrent trainings.
struct Dataset {
  Matrix features;                        // N x d, original units
  std::vector<int> choices;               // length N, each in [0, K)
  std::vector<std::string> feature_names; // d
  std::vector<std::string> alt_names;     // K
  std::map<int, AttributeRoles> attribute_map;

  std::size_t n_obs() const { return features.rows; }
  std::size_t n_features() const { return features.cols; }
  std::size_t n_alts() const { return alt_names.size(); }

  // -1 when absent
  int feature_index(const std::string& name) const;
  int alt_index(const std::string& name) const;

  // Checks the type invariants (choice range, finite features, attribute_map
  // indices valid with disjoint cost/time roles). Throws std::runtime_error.
  void validate() const;
};

// Column-wise (x - mean) / std fitted on the training split only. Population
// std; constant columns get std 1 so the transform is total.
struct Standardizer {
  std::vector<double> means;
  std::vector<double> stds;

  std::size_t dim() const { return means.size(); }
  void transform(const double* x, double* out) const;
  void inverse(const double* z, double* out) const;

  static Standardizer identity(std::size_t d);
};

struct SplitIndices {
  std::vector<std::size_t> train, val, test;
};

struct SplitRatios {
  double train = 0.6, val = 0.2, test = 0.2;
};

// train = floor(r_train*n), val = round(remainder * r_val/(r_val+r_test)),
// test = rest; permutation drawn from the seeded RNG. Reproduces
// 5050:1684:1684 on n=8418 at the default ratios.
SplitIndices split(std::size_t n, const SplitRatios& ratios, std::uint64_t seed);

Standardizer fit_standardizer(const Dataset& data,
                              const std::vector<std::size_t>& train_idx);

// --- file interface: delimited text + schema sidecar ---

// CSV with a header row, comma separator, UTF-8; the schema sidecar (JSON)
// names the choice column, the alternative names and the attribute roles.
Dataset load_dataset(const std::string& csv_path, const std::string& schema_path);
void save_dataset(const Dataset& data, const std::string& csv_path,
                  const std::string& schema_path,
                  const std::string& choice_column = "choice");

// --- synthetic generators (oracle substitute for the survey data) ---

struct FeatureRange {
  std::string name;
  double lo = 0.0;
  double hi = 1.0;
};

// Linear utility weights of the generating process, original feature units.
struct GroundTruth {
  Matrix weights;              // K x d; empty for non-linear generators
  std::vector<double> biases;  // K
};

struct SyntheticData {
  Dataset data;
  GroundTruth truth;
  Matrix true_probs;  // N x K choice probabilities of the generator
};

// Features i.i.d. uniform per FeatureRange; choices sampled from the softmax
// of the true linear utilities. Deterministic given seed.
SyntheticData synthesize_mnl(const Matrix& weights,
                             const std::vector<double>& biases,
                             const std::vector<FeatureRange>& features,
                             const std::vector<std::string>& alt_names,
                             std::size_t n, std::uint64_t seed);

// One interaction (x_a * x_b) and one step (x_c > tau) term on top of the
// linear utilities: a generating process a depth-0 model cannot express.
struct NonlinearTerms {
  std::size_t a = 0, b = 0;          // interaction feature pair
  std::vector<double> interaction;   // per-alternative coefficient, length K
  std::size_t c = 0;                 // step feature
  double tau = 0.0;
  std::vector<double> step;          // per-alternative coefficient, length K
};

SyntheticData synthesize_nonlinear(const Matrix& weights,
                                   const std::vector<double>& biases,
                                   const NonlinearTerms& terms,
                                   const std::vector<FeatureRange>& features,
                                   const std::vector<std::string>& alt_names,
                                   std::size_t n, std::uint64_t seed);

void save_ground_truth(const GroundTruth& truth, const Dataset& data,
                       const std::string& path);
GroundTruth load_ground_truth(const std::string& path);

}  // namespace choicenet
