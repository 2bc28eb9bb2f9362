#pragma once

#include "rgm/tensor.hpp"

namespace rgm {

// Thin SVD a = u * diag(s) * v^T with orthonormal columns in u (r x min(r,c)
// square when r == c, completed for rank-deficient inputs) and singular
// values sorted non-increasing.
struct SvdResult {
  Tensor u;  // r x n
  Tensor s;  // n
  Tensor v;  // c x n
};

// One-sided Jacobi; suited to the small dense operators used here.
// Throws NumericalFailure if the sweep cap is hit.
SvdResult svd(const Tensor& a, int max_sweeps = 10000);

// Moore-Penrose inverse; singular values <= tol * s_max are treated as zero.
Tensor pseudoinverse(const Tensor& a, double tol = 1e-12);

Tensor matmul(const Tensor& a, const Tensor& b);
Tensor transpose(const Tensor& a);
Tensor identity(std::size_t n);
double frobenius_norm(const Tensor& a);
double norm2(const Tensor& a);

// out = a - b (same shape)
Tensor subtract(const Tensor& a, const Tensor& b);

}  // namespace rgm
