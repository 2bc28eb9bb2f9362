#pragma once

#include <cstdint>
#include <vector>

#include "rgm/adam.hpp"
#include "rgm/rng.hpp"
#include "rgm/tensor.hpp"

namespace rgm {

// Fully-connected net: Tanh on hidden layers, linear output.
// dims = {in, hidden..., out}; weights are stored input-major
// (w[l] has shape in_l x out_l) so a batch forward is one gemm_nn per layer.
struct MlpConfig {
  std::vector<std::size_t> dims;
};

struct MlpParams {
  struct Layer {
    Tensor w;  // in x out
    Tensor b;  // out
  };
  std::vector<Layer> layers;
  // Bumped by every optimizer update; tapes record it to detect staleness.
  std::uint64_t revision = 0;

  std::size_t in_dim() const { return layers.front().w.rows(); }
  std::size_t out_dim() const { return layers.back().w.cols(); }
  std::size_t num_params() const;
};

bool operator==(const MlpParams& a, const MlpParams& b);

// Glorot-uniform weights, zero biases.
MlpParams init_params(const MlpConfig& cfg, Rng& rng);

// Records everything backward needs: the input batch and each layer's
// post-activation output.
struct MlpTape {
  const MlpParams* params = nullptr;
  std::uint64_t revision = 0;
  std::vector<Tensor> acts;  // acts[0] = input, acts[l] = layer l output
};

struct MlpGrads {
  std::vector<Tensor> w;
  std::vector<Tensor> b;

  static MlpGrads zeros_like(const MlpParams& p);
  void add_scaled(const MlpGrads& other, double scale);
  void scale(double s);
};

// Forward pass over a batch (rows = examples). A 1-D input is treated as a
// single row and returns a 1-D output.
Tensor mlp_forward(const MlpParams& params, const Tensor& input,
                   MlpTape* tape = nullptr);

// Reverse-mode gradients of the recorded computation. Returns the input
// gradient; accumulates parameter gradients into *grads when non-null.
Tensor mlp_backward(const MlpTape& tape, const Tensor& out_grad,
                    MlpGrads* grads = nullptr);

// Adds scale * d/dparams sum_rows ||d out/d input[0:penalized_dims]||^2 into
// grads (exact second-order pass; the output must be scalar per row).
// Returns scale * sum_rows ||grad||^2.
double input_grad_norm_penalty(const MlpParams& params, const Tensor& input,
                               std::size_t penalized_dims, double scale,
                               MlpGrads* grads);

// Per-tensor Adam over all layers.
struct MlpAdam {
  std::vector<AdamState> w;
  std::vector<AdamState> b;

  static MlpAdam like(const MlpParams& p, const AdamConfig& cfg);
  void step(MlpParams& params, const MlpGrads& grads);
};

}  // namespace rgm
