#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <vector>

#include "rgm/errors.hpp"

namespace rgm {

// Dense row-major tensor of 64-bit floats. Value semantics throughout; the
// heavy lifting on the flat buffer goes through rgm::kernels.
struct Tensor {
  std::vector<std::size_t> shape;
  std::vector<double> v;

  Tensor() = default;

  static Tensor zeros(std::vector<std::size_t> dims) {
    Tensor t;
    t.shape = std::move(dims);
    t.v.assign(t.count(t.shape), 0.0);
    return t;
  }
  static Tensor zeros(std::initializer_list<std::size_t> dims) {
    return zeros(std::vector<std::size_t>(dims));
  }
  static Tensor vector(std::vector<double> vals) {
    Tensor t;
    t.shape = {vals.size()};
    t.v = std::move(vals);
    return t;
  }
  static Tensor matrix(std::size_t r, std::size_t c) { return zeros({r, c}); }

  std::size_t numel() const { return v.size(); }
  bool is_matrix() const { return shape.size() == 2; }
  bool is_vector() const { return shape.size() == 1; }

  std::size_t rows() const {
    require(is_matrix(), "rows(): tensor is not 2-D");
    return shape[0];
  }
  std::size_t cols() const {
    require(is_matrix(), "cols(): tensor is not 2-D");
    return shape[1];
  }

  double& at(std::size_t i) { return v[i]; }
  double at(std::size_t i) const { return v[i]; }
  double& at(std::size_t i, std::size_t j) { return v[i * shape[1] + j]; }
  double at(std::size_t i, std::size_t j) const { return v[i * shape[1] + j]; }

  double* data() { return v.data(); }
  const double* data() const { return v.data(); }
  double* row(std::size_t i) { return v.data() + i * shape[1]; }
  const double* row(std::size_t i) const { return v.data() + i * shape[1]; }

  bool same_shape(const Tensor& o) const { return shape == o.shape; }

  bool all_finite() const {
    for (double x : v)
      if (!std::isfinite(x)) return false;
    return true;
  }

  void fill(double x) { std::fill(v.begin(), v.end(), x); }

  // Treats 1-D tensors as a single row so batch code can accept both.
  std::size_t batch_rows() const { return shape.size() == 1 ? 1 : shape[0]; }
  std::size_t batch_cols() const {
    return shape.size() == 1 ? shape[0] : shape[1];
  }

  static void require(bool ok, const char* msg) {
    if (!ok) throw InvalidArgument(msg);
  }

 private:
  static std::size_t count(const std::vector<std::size_t>& dims) {
    std::size_t n = 1;
    for (std::size_t d : dims) n *= d;
    return n;
  }
};

inline bool operator==(const Tensor& a, const Tensor& b) {
  return a.shape == b.shape && a.v == b.v;
}

}  // namespace rgm
