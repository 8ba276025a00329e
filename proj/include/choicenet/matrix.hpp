#pragma once

#include <cstddef>
#include <vector>

namespace choicenet {

// Dense row-major matrix of doubles; the only numeric container in the
// library. Hot loops act on raw rows through the kernels:: primitives.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), data(r * c, fill) {}

  double* row(std::size_t i) { return data.data() + i * cols; }
  const double* row(std::size_t i) const { return data.data() + i * cols; }

  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  std::size_t size() const { return data.size(); }

  bool operator==(const Matrix&) const = default;
};

}  // namespace choicenet
