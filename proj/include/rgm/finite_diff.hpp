#pragma once

#include <cmath>
#include <functional>

#include "rgm/errors.hpp"
#include "rgm/tensor.hpp"

namespace rgm {

// Central-difference gradient oracle used to check every analytic gradient
// in the project. Kept deliberately independent of the reverse-mode code.
inline Tensor finite_diff_grad(const std::function<double(const Tensor&)>& f,
                               const Tensor& x, double eps = 1e-6) {
  if (!(eps > 0)) throw InvalidArgument("finite_diff_grad: eps must be > 0");
  Tensor g = Tensor::zeros(x.shape);
  Tensor probe = x;
  for (std::size_t i = 0; i < x.numel(); ++i) {
    double orig = probe.v[i];
    probe.v[i] = orig + eps;
    double fp = f(probe);
    probe.v[i] = orig - eps;
    double fm = f(probe);
    probe.v[i] = orig;
    if (!std::isfinite(fp) || !std::isfinite(fm))
      throw NumericalFailure("finite_diff_grad: non-finite function value");
    g.v[i] = (fp - fm) / (2.0 * eps);
  }
  return g;
}

}  // namespace rgm
