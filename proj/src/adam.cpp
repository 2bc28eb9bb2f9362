#include "rgm/adam.hpp"

#include <cmath>

#include "rgm/errors.hpp"
#include "rgm/kernels.hpp"

namespace rgm {

void adam_step(Tensor& params, const Tensor& grads, AdamState& state) {
  if (!params.same_shape(grads) || !params.same_shape(state.m) ||
      !params.same_shape(state.v))
    throw InvalidArgument("adam_step: shape mismatch");
  if (!(state.cfg.lr > 0)) throw InvalidArgument("adam_step: lr must be > 0");

  state.t += 1;
  double bc1 = 1.0 - std::pow(state.cfg.beta1, static_cast<double>(state.t));
  double bc2 = 1.0 - std::pow(state.cfg.beta2, static_cast<double>(state.t));
  kernels::active().adam_update(params.data(), grads.data(), state.m.data(),
                                state.v.data(), params.numel(), state.cfg.lr,
                                state.cfg.beta1, state.cfg.beta2, state.cfg.eps,
                                1.0 / bc1, 1.0 / bc2);
}

}  // namespace rgm
