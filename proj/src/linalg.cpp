#include "rgm/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "rgm/errors.hpp"
#include "rgm/kernels.hpp"

namespace rgm {
namespace {

// Column-major working copy so Jacobi rotations touch contiguous memory.
struct ColMat {
  std::size_t r = 0, c = 0;
  std::vector<double> v;  // column-major
  double* col(std::size_t j) { return v.data() + j * r; }
  const double* col(std::size_t j) const { return v.data() + j * r; }
};

ColMat to_colmajor(const Tensor& a) {
  ColMat m;
  m.r = a.rows();
  m.c = a.cols();
  m.v.resize(m.r * m.c);
  for (std::size_t i = 0; i < m.r; ++i)
    for (std::size_t j = 0; j < m.c; ++j) m.v[j * m.r + i] = a.at(i, j);
  return m;
}

void rotate_cols(double* p, double* q, std::size_t r, double c, double s) {
  for (std::size_t i = 0; i < r; ++i) {
    double pi = p[i], qi = q[i];
    p[i] = c * pi - s * qi;
    q[i] = s * pi + c * qi;
  }
}

// Orthogonalizes the columns of b in place, accumulating rotations into v
// (c x c column-major, starts as identity). Returns false at the sweep cap.
bool jacobi_orthogonalize(ColMat& b, ColMat& v, int max_sweeps) {
  const double tol = 1e-15;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < b.c; ++p) {
      for (std::size_t q = p + 1; q < b.c; ++q) {
        const auto& ops = kernels::active();
        double app = ops.dot(b.col(p), b.col(p), b.r);
        double aqq = ops.dot(b.col(q), b.col(q), b.r);
        double apq = ops.dot(b.col(p), b.col(q), b.r);
        if (std::abs(apq) <= tol * std::sqrt(app * aqq) || apq == 0.0) continue;
        rotated = true;
        double theta = (aqq - app) / (2.0 * apq);
        double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        double c = 1.0 / std::sqrt(1.0 + t * t);
        double s = c * t;
        rotate_cols(b.col(p), b.col(q), b.r, c, s);
        rotate_cols(v.col(p), v.col(q), v.r, c, s);
      }
    }
    if (!rotated) return true;
  }
  return false;
}

// Fills zero columns of u with unit vectors orthogonal to the nonzero ones
// so u keeps orthonormal columns even for rank-deficient inputs.
void complete_basis(ColMat& u, const std::vector<std::size_t>& zero_cols) {
  for (std::size_t j : zero_cols) {
    for (std::size_t cand = 0; cand < u.r; ++cand) {
      std::vector<double> e(u.r, 0.0);
      e[cand] = 1.0;
      for (std::size_t k = 0; k < u.c; ++k) {
        if (k == j) continue;
        double proj = kernels::active().dot(e.data(), u.col(k), u.r);
        for (std::size_t i = 0; i < u.r; ++i) e[i] -= proj * u.col(k)[i];
      }
      double nrm = std::sqrt(kernels::active().dot(e.data(), e.data(), u.r));
      if (nrm > 1e-6) {
        for (std::size_t i = 0; i < u.r; ++i) u.col(j)[i] = e[i] / nrm;
        break;
      }
    }
  }
}

}  // namespace

SvdResult svd(const Tensor& a, int max_sweeps) {
  if (!a.is_matrix()) throw InvalidArgument("svd: input must be 2-D");
  if (!a.all_finite()) throw InvalidArgument("svd: input has non-finite entries");

  bool transposed = a.rows() < a.cols();
  Tensor work = transposed ? transpose(a) : a;
  std::size_t r = work.rows(), c = work.cols();

  ColMat b = to_colmajor(work);
  ColMat v;
  v.r = v.c = c;
  v.v.assign(c * c, 0.0);
  for (std::size_t j = 0; j < c; ++j) v.v[j * c + j] = 1.0;

  if (!jacobi_orthogonalize(b, v, max_sweeps))
    throw NumericalFailure("svd: Jacobi sweeps did not converge");

  std::vector<double> sing(c);
  std::vector<std::size_t> order(c);
  for (std::size_t j = 0; j < c; ++j)
    sing[j] = std::sqrt(kernels::active().dot(b.col(j), b.col(j), r));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return sing[x] > sing[y]; });

  ColMat u;
  u.r = r;
  u.c = c;
  u.v.assign(r * c, 0.0);
  ColMat vs;
  vs.r = c;
  vs.c = c;
  vs.v.assign(c * c, 0.0);
  Tensor s = Tensor::zeros({c});
  std::vector<std::size_t> zero_cols;
  for (std::size_t j = 0; j < c; ++j) {
    std::size_t src = order[j];
    s.v[j] = sing[src];
    for (std::size_t i = 0; i < c; ++i) vs.col(j)[i] = v.col(src)[i];
    if (sing[src] > 0.0) {
      for (std::size_t i = 0; i < r; ++i) u.col(j)[i] = b.col(src)[i] / sing[src];
    } else {
      zero_cols.push_back(j);
    }
  }
  complete_basis(u, zero_cols);

  SvdResult out;
  out.s = std::move(s);
  out.u = Tensor::matrix(r, c);
  out.v = Tensor::matrix(c, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) out.u.at(i, j) = u.col(j)[i];
  for (std::size_t i = 0; i < c; ++i)
    for (std::size_t j = 0; j < c; ++j) out.v.at(i, j) = vs.col(j)[i];
  if (transposed) std::swap(out.u, out.v);
  return out;
}

Tensor pseudoinverse(const Tensor& a, double tol) {
  if (tol < 0) throw InvalidArgument("pseudoinverse: tol must be >= 0");
  SvdResult d = svd(a);
  double smax = d.s.numel() ? d.s.v[0] : 0.0;
  double cut = tol * smax;
  // a^+ = v * diag(1/s) * u^T
  std::size_t n = d.s.numel();
  Tensor vs = Tensor::matrix(d.v.rows(), n);
  for (std::size_t i = 0; i < d.v.rows(); ++i)
    for (std::size_t j = 0; j < n; ++j)
      vs.at(i, j) = d.s.v[j] > cut ? d.v.at(i, j) / d.s.v[j] : 0.0;
  return matmul(vs, transpose(d.u));
}

Tensor matmul(const Tensor& a, const Tensor& b) {
  if (!a.is_matrix() || !b.is_matrix() || a.cols() != b.rows())
    throw InvalidArgument("matmul: incompatible shapes");
  Tensor c = Tensor::matrix(a.rows(), b.cols());
  kernels::active().gemm_nn(a.data(), b.data(), c.data(), a.rows(), b.cols(),
                            a.cols());
  return c;
}

Tensor transpose(const Tensor& a) {
  if (!a.is_matrix()) throw InvalidArgument("transpose: input must be 2-D");
  Tensor t = Tensor::matrix(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t.at(j, i) = a.at(i, j);
  return t;
}

Tensor identity(std::size_t n) {
  Tensor t = Tensor::matrix(n, n);
  for (std::size_t i = 0; i < n; ++i) t.at(i, i) = 1.0;
  return t;
}

double frobenius_norm(const Tensor& a) {
  return std::sqrt(kernels::active().dot(a.data(), a.data(), a.numel()));
}

double norm2(const Tensor& a) { return frobenius_norm(a); }

Tensor subtract(const Tensor& a, const Tensor& b) {
  if (!a.same_shape(b)) throw InvalidArgument("subtract: shape mismatch");
  Tensor out = a;
  for (std::size_t i = 0; i < out.numel(); ++i) out.v[i] -= b.v[i];
  return out;
}

}  // namespace rgm
