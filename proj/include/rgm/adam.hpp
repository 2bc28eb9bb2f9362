#pragma once

#include <cstdint>

#include "rgm/tensor.hpp"

namespace rgm {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// First/second moment state for one parameter tensor.
struct AdamState {
  Tensor m;
  Tensor v;
  std::uint64_t t = 0;
  AdamConfig cfg;

  static AdamState like(const Tensor& params, const AdamConfig& cfg) {
    AdamState s;
    s.m = Tensor::zeros(params.shape);
    s.v = Tensor::zeros(params.shape);
    s.cfg = cfg;
    return s;
  }
};

// Standard Adam update with bias correction, applied in place.
// Shapes of params/grads/state must agree; lr must be positive.
void adam_step(Tensor& params, const Tensor& grads, AdamState& state);

}  // namespace rgm
