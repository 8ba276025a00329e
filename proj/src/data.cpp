#include "choicenet/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "choicenet/rng.hpp"

namespace choicenet {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error(msg); }

std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double_cell(const std::string& cell, std::size_t line, const std::string& col) {
  const char* begin = cell.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end != begin + cell.size() || cell.empty()) {
    fail("non-numeric value '" + cell + "' in column '" + col + "' at line " +
         std::to_string(line));
  }
  if (!std::isfinite(v)) {
    fail("non-finite value in column '" + col + "' at line " + std::to_string(line));
  }
  return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) fail("unknown key '" + it.key() + "' in " + where);
  }
}

void stable_softmax(const double* v, double* s, std::size_t k) {
  double mx = v[0];
  for (std::size_t j = 1; j < k; ++j) mx = std::max(mx, v[j]);
  double sum = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    s[j] = std::exp(v[j] - mx);
    sum += s[j];
  }
  for (std::size_t j = 0; j < k; ++j) s[j] /= sum;
}

}  // namespace

int Dataset::feature_index(const std::string& name) const {
  for (std::size_t j = 0; j < feature_names.size(); ++j) {
    if (feature_names[j] == name) return static_cast<int>(j);
  }
  return -1;
}

int Dataset::alt_index(const std::string& name) const {
  for (std::size_t k = 0; k < alt_names.size(); ++k) {
    if (alt_names[k] == name) return static_cast<int>(k);
  }
  return -1;
}

void Dataset::validate() const {
  const std::size_t n = n_obs();
  const std::size_t d = n_features();
  const int k = static_cast<int>(n_alts());
  if (d == 0 || feature_names.size() != d) fail("dataset: feature metadata mismatch");
  if (choices.size() != n) fail("dataset: choices length mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    if (choices[i] < 0 || choices[i] >= k) {
      fail("dataset: choice out of range at row " + std::to_string(i));
    }
  }
  for (double v : features.data) {
    if (!std::isfinite(v)) fail("dataset: non-finite feature value");
  }
  for (const auto& [alt, roles] : attribute_map) {
    if (alt < 0 || alt >= k) fail("dataset: attribute_map alternative out of range");
    std::set<int> seen;
    if (roles.cost >= 0) {
      if (roles.cost >= static_cast<int>(d)) fail("dataset: cost feature index out of range");
      seen.insert(roles.cost);
    }
    for (int t : roles.time) {
      if (t < 0 || t >= static_cast<int>(d)) fail("dataset: time feature index out of range");
      if (!seen.insert(t).second) {
        fail("dataset: cost/time roles overlap for alternative " + std::to_string(alt));
      }
    }
  }
}

void Standardizer::transform(const double* x, double* out) const {
  for (std::size_t j = 0; j < means.size(); ++j) out[j] = (x[j] - means[j]) / stds[j];
}

void Standardizer::inverse(const double* z, double* out) const {
  for (std::size_t j = 0; j < means.size(); ++j) out[j] = z[j] * stds[j] + means[j];
}

Standardizer Standardizer::identity(std::size_t d) {
  Standardizer s;
  s.means.assign(d, 0.0);
  s.stds.assign(d, 1.0);
  return s;
}

SplitIndices split(std::size_t n, const SplitRatios& ratios, std::uint64_t seed) {
  if (ratios.train <= 0 || ratios.val <= 0 || ratios.test <= 0) {
    fail("split: ratios must be positive");
  }
  if (std::fabs(ratios.train + ratios.val + ratios.test - 1.0) > 1e-9) {
    fail("split: ratios must sum to 1");
  }
  if (n < 3) fail("split: n too small for three non-empty splits");

  const std::size_t n_train = static_cast<std::size_t>(std::floor(ratios.train * static_cast<double>(n)));
  const double rest = static_cast<double>(n - n_train);
  const std::size_t n_val = static_cast<std::size_t>(
      std::llround(rest * ratios.val / (ratios.val + ratios.test)));
  if (n_train == 0 || n_val == 0 || n_train + n_val >= n) {
    fail("split: n too small for three non-empty splits");
  }

  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  Rng rng(seed);
  rng.shuffle(perm);

  SplitIndices out;
  out.train.assign(perm.begin(), perm.begin() + n_train);
  out.val.assign(perm.begin() + n_train, perm.begin() + n_train + n_val);
  out.test.assign(perm.begin() + n_train + n_val, perm.end());
  return out;
}

Standardizer fit_standardizer(const Dataset& data,
                              const std::vector<std::size_t>& train_idx) {
  if (train_idx.empty()) fail("fit_standardizer: empty training split");
  const std::size_t d = data.n_features();
  Standardizer s;
  s.means.assign(d, 0.0);
  s.stds.assign(d, 0.0);
  const double inv_n = 1.0 / static_cast<double>(train_idx.size());
  for (std::size_t i : train_idx) {
    const double* row = data.features.row(i);
    for (std::size_t j = 0; j < d; ++j) s.means[j] += row[j];
  }
  for (std::size_t j = 0; j < d; ++j) s.means[j] *= inv_n;
  for (std::size_t i : train_idx) {
    const double* row = data.features.row(i);
    for (std::size_t j = 0; j < d; ++j) {
      const double c = row[j] - s.means[j];
      s.stds[j] += c * c;
    }
  }
  for (std::size_t j = 0; j < d; ++j) {
    s.stds[j] = std::sqrt(s.stds[j] * inv_n);
    if (s.stds[j] <= 0.0) s.stds[j] = 1.0;
  }
  return s;
}

Dataset load_dataset(const std::string& csv_path, const std::string& schema_path) {
  std::ifstream schema_in(schema_path);
  if (!schema_in) fail("cannot open schema file: " + schema_path);
  json schema;
  try {
    schema_in >> schema;
  } catch (const json::exception& e) {
    fail("schema parse error in " + schema_path + ": " + e.what());
  }
  reject_unknown_keys(schema, {"choice_column", "alt_names", "attributes"}, "schema");
  if (!schema.contains("choice_column") || !schema.contains("alt_names")) {
    fail("schema must name choice_column and alt_names");
  }
  const std::string choice_col = schema["choice_column"].get<std::string>();
  const std::vector<std::string> alt_names =
      schema["alt_names"].get<std::vector<std::string>>();
  if (alt_names.empty()) fail("schema: alt_names must be non-empty");

  std::ifstream in(csv_path);
  if (!in) fail("cannot open dataset file: " + csv_path);

  std::string line;
  if (!std::getline(in, line)) fail("empty dataset file: " + csv_path);
  const std::vector<std::string> header = split_csv_line(line);
  {
    std::set<std::string> uniq(header.begin(), header.end());
    if (uniq.size() != header.size()) fail("duplicate column names in header");
  }

  int choice_pos = -1;
  std::vector<std::string> feature_names;
  std::vector<int> feature_pos;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == choice_col) {
      choice_pos = static_cast<int>(c);
    } else {
      feature_names.push_back(header[c]);
      feature_pos.push_back(static_cast<int>(c));
    }
  }
  if (choice_pos < 0) fail("unknown column: choice column '" + choice_col + "' not in header");
  if (feature_names.empty()) fail("dataset needs at least one feature column");

  const int k = static_cast<int>(alt_names.size());
  std::vector<double> values;
  std::vector<int> choices;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      fail("row has " + std::to_string(cells.size()) + " cells, expected " +
           std::to_string(header.size()) + " at line " + std::to_string(line_no));
    }
    for (std::size_t f = 0; f < feature_pos.size(); ++f) {
      values.push_back(parse_double_cell(cells[feature_pos[f]], line_no, feature_names[f]));
    }
    const std::string& ccell = cells[choice_pos];
    const char* begin = ccell.c_str();
    char* end = nullptr;
    const long y = std::strtol(begin, &end, 10);
    if (end != begin + ccell.size() || ccell.empty()) {
      fail("non-integer choice '" + ccell + "' at line " + std::to_string(line_no));
    }
    if (y < 0 || y >= k) {
      fail("choice out of range: " + std::to_string(y) + " at line " +
           std::to_string(line_no) + " (K=" + std::to_string(k) + ")");
    }
    choices.push_back(static_cast<int>(y));
  }
  if (choices.empty()) fail("dataset has no observation rows: " + csv_path);

  Dataset data;
  data.feature_names = feature_names;
  data.alt_names = alt_names;
  data.features.rows = choices.size();
  data.features.cols = feature_names.size();
  data.features.data = std::move(values);
  data.choices = std::move(choices);

  if (schema.contains("attributes")) {
    for (auto it = schema["attributes"].begin(); it != schema["attributes"].end(); ++it) {
      const int alt = data.alt_index(it.key());
      if (alt < 0) fail("unknown alternative '" + it.key() + "' in schema attributes");
      reject_unknown_keys(it.value(), {"cost", "time"}, "schema attributes");
      AttributeRoles roles;
      if (it.value().contains("cost")) {
        const std::string name = it.value()["cost"].get<std::string>();
        roles.cost = data.feature_index(name);
        if (roles.cost < 0) fail("unknown column: cost feature '" + name + "'");
      }
      if (it.value().contains("time")) {
        for (const auto& t : it.value()["time"]) {
          const std::string name = t.get<std::string>();
          const int idx = data.feature_index(name);
          if (idx < 0) fail("unknown column: time feature '" + name + "'");
          roles.time.push_back(idx);
        }
      }
      data.attribute_map[alt] = roles;
    }
  }

  data.validate();
  return data;
}

void save_dataset(const Dataset& data, const std::string& csv_path,
                  const std::string& schema_path, const std::string& choice_column) {
  std::ofstream out(csv_path);
  if (!out) fail("cannot write dataset file: " + csv_path);
  for (std::size_t j = 0; j < data.feature_names.size(); ++j) {
    out << data.feature_names[j] << ',';
  }
  out << choice_column << '\n';
  for (std::size_t i = 0; i < data.n_obs(); ++i) {
    const double* row = data.features.row(i);
    for (std::size_t j = 0; j < data.n_features(); ++j) {
      out << format_double(row[j]) << ',';
    }
    out << data.choices[i] << '\n';
  }

  json schema;
  schema["choice_column"] = choice_column;
  schema["alt_names"] = data.alt_names;
  if (!data.attribute_map.empty()) {
    json attrs = json::object();
    for (const auto& [alt, roles] : data.attribute_map) {
      json entry = json::object();
      if (roles.cost >= 0) entry["cost"] = data.feature_names[roles.cost];
      if (!roles.time.empty()) {
        json times = json::array();
        for (int t : roles.time) times.push_back(data.feature_names[t]);
        entry["time"] = times;
      }
      attrs[data.alt_names[alt]] = entry;
    }
    schema["attributes"] = attrs;
  }
  std::ofstream sout(schema_path);
  if (!sout) fail("cannot write schema file: " + schema_path);
  sout << schema.dump(2) << '\n';
}

namespace {

SyntheticData synthesize_impl(const Matrix& weights, const std::vector<double>& biases,
                              const NonlinearTerms* terms,
                              const std::vector<FeatureRange>& features,
                              const std::vector<std::string>& alt_names,
                              std::size_t n, std::uint64_t seed) {
  const std::size_t k = alt_names.size();
  const std::size_t d = features.size();
  if (n == 0) fail("synthesize: n must be positive");
  if (weights.rows != k || weights.cols != d) fail("synthesize: weight matrix must be K x d");
  if (biases.size() != k) fail("synthesize: biases must have length K");
  for (double w : weights.data) {
    if (!std::isfinite(w)) fail("synthesize: non-finite weight");
  }
  if (terms) {
    if (terms->a >= d || terms->b >= d || terms->c >= d) fail("synthesize: term feature out of range");
    if (terms->interaction.size() != k || terms->step.size() != k) {
      fail("synthesize: per-alternative term coefficients must have length K");
    }
  }

  SyntheticData out;
  out.data.alt_names = alt_names;
  for (const auto& f : features) out.data.feature_names.push_back(f.name);
  out.data.features = Matrix(n, d);
  out.data.choices.resize(n);
  out.true_probs = Matrix(n, k);
  out.truth.biases = biases;
  if (!terms) out.truth.weights = weights;

  Rng rng(seed);
  std::vector<double> v(k);
  for (std::size_t i = 0; i < n; ++i) {
    double* x = out.data.features.row(i);
    for (std::size_t j = 0; j < d; ++j) x[j] = rng.uniform(features[j].lo, features[j].hi);
    for (std::size_t kk = 0; kk < k; ++kk) {
      double u = biases[kk];
      const double* wr = weights.row(kk);
      for (std::size_t j = 0; j < d; ++j) u += wr[j] * x[j];
      if (terms) {
        u += terms->interaction[kk] * x[terms->a] * x[terms->b];
        u += terms->step[kk] * (x[terms->c] > terms->tau ? 1.0 : 0.0);
      }
      v[kk] = u;
    }
    double* s = out.true_probs.row(i);
    stable_softmax(v.data(), s, k);
    const double u = rng.uniform();
    double cum = 0.0;
    int pick = static_cast<int>(k) - 1;
    for (std::size_t kk = 0; kk < k; ++kk) {
      cum += s[kk];
      if (u < cum) {
        pick = static_cast<int>(kk);
        break;
      }
    }
    out.data.choices[i] = pick;
  }
  out.data.validate();
  return out;
}

}  // namespace

SyntheticData synthesize_mnl(const Matrix& weights, const std::vector<double>& biases,
                             const std::vector<FeatureRange>& features,
                             const std::vector<std::string>& alt_names,
                             std::size_t n, std::uint64_t seed) {
  return synthesize_impl(weights, biases, nullptr, features, alt_names, n, seed);
}

SyntheticData synthesize_nonlinear(const Matrix& weights, const std::vector<double>& biases,
                                   const NonlinearTerms& terms,
                                   const std::vector<FeatureRange>& features,
                                   const std::vector<std::string>& alt_names,
                                   std::size_t n, std::uint64_t seed) {
  return synthesize_impl(weights, biases, &terms, features, alt_names, n, seed);
}

void save_ground_truth(const GroundTruth& truth, const Dataset& data,
                       const std::string& path) {
  json j;
  j["alt_names"] = data.alt_names;
  j["feature_names"] = data.feature_names;
  j["biases"] = truth.biases;
  json rows = json::array();
  for (std::size_t r = 0; r < truth.weights.rows; ++r) {
    rows.push_back(std::vector<double>(truth.weights.row(r),
                                       truth.weights.row(r) + truth.weights.cols));
  }
  j["weights"] = rows;
  std::ofstream out(path);
  if (!out) fail("cannot write ground truth file: " + path);
  out << j.dump(2) << '\n';
}

GroundTruth load_ground_truth(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open ground truth file: " + path);
  json j;
  in >> j;
  GroundTruth truth;
  truth.biases = j["biases"].get<std::vector<double>>();
  const auto rows = j["weights"];
  truth.weights = Matrix(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t r = 0; r < truth.weights.rows; ++r) {
    const auto row = rows[r].get<std::vector<double>>();
    std::copy(row.begin(), row.end(), truth.weights.row(r));
  }
  return truth;
}

}  // namespace choicenet
