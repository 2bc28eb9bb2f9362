#pragma once

#include "rgm/mlp.hpp"
#include "rgm/schedule.hpp"

namespace rgm {

// How the step index reaches the nets: a single scalar k/T appended to the
// input (default), or a one-hot vector of length T+1.
enum class StepEncoding { ScalarOverT, OneHot };

struct GeneratorConfig {
  std::size_t data_dim = 2;
  std::size_t z_dim = 2;  // 0 disables the auxiliary input entirely
  StepEncoding encoding = StepEncoding::ScalarOverT;
  std::size_t hidden = 32;
  std::size_t depth = 3;  // number of linear layers

  bool operator==(const GeneratorConfig&) const = default;
};

struct DiscriminatorConfig {
  std::size_t data_dim = 2;
  StepEncoding encoding = StepEncoding::ScalarOverT;
  std::size_t hidden = 32;
  std::size_t depth = 3;

  bool operator==(const DiscriminatorConfig&) const = default;
};

std::size_t step_encoding_dim(StepEncoding enc, int total_steps);
std::size_t generator_input_dim(const GeneratorConfig& cfg, int total_steps);
std::size_t discriminator_input_dim(const DiscriminatorConfig& cfg,
                                    int total_steps);

MlpConfig generator_mlp_config(const GeneratorConfig& cfg, int total_steps);
MlpConfig discriminator_mlp_config(const DiscriminatorConfig& cfg,
                                   int total_steps);

// Degraded observations are lifted to data shape by block replication so one
// fixed-width net serves every step (identity for level-0 steps).
Tensor lift_to_data(const DegradationSchedule& s, int k, const Tensor& y);
// Adjoint of the lift: block-sums a data-space gradient back to step-k shape.
Tensor lift_to_data_adjoint(const DegradationSchedule& s, int k,
                            const Tensor& g);

// x_hat = G(y_k, k, z): input is concat(lift(y_k), encode(k), z).
// y and z are batch tensors with matching row counts.
Tensor generator_apply(const MlpParams& params, const GeneratorConfig& cfg,
                       const DegradationSchedule& s, const Tensor& y, int k,
                       const Tensor& z, MlpTape* tape = nullptr);

// Variant where the space y lives in (space_k, controls lifting) and the
// encoded conditioning index (cond_k) differ; the inverse solver needs this.
Tensor generator_apply_conditioned(const MlpParams& params,
                                   const GeneratorConfig& cfg,
                                   const DegradationSchedule& s,
                                   const Tensor& y, int space_k, int cond_k,
                                   const Tensor& z, MlpTape* tape = nullptr);

// The concatenated MLP input for D(y, k); exposed so the gradient penalty
// can differentiate against it directly.
Tensor discriminator_input(const DiscriminatorConfig& cfg,
                           const DegradationSchedule& s, const Tensor& y,
                           int k);

// Raw logits of D(y, k); one column per batch row.
Tensor discriminator_apply(const MlpParams& params,
                           const DiscriminatorConfig& cfg,
                           const DegradationSchedule& s, const Tensor& y, int k,
                           MlpTape* tape = nullptr);

// Pulls an input-gradient of either net back to the degraded observation
// (through the lift) and, for the generator, to z.
Tensor input_grad_to_y(const DegradationSchedule& s, int space_k,
                       std::size_t data_dim, const Tensor& input_grad);
Tensor input_grad_to_z(const GeneratorConfig& cfg, int total_steps,
                       const Tensor& input_grad);

}  // namespace rgm
