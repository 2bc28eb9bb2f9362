#pragma once

#include <string>
#include <vector>

#include "rgm/rng.hpp"
#include "rgm/tensor.hpp"

namespace rgm {

struct BetaParams {
  double beta_max = 20.0;
  double beta_min = 0.1;
};

// Quadratic noise ramp: 1/4 (bmax-bmin) (k/T)^2 + 1/2 bmin (k/T).
double beta(int k, int t_beta, const BetaParams& p = {});
// Quartic variant with powers 4 and 2.
double beta_tilde(int k, int t_beta, const BetaParams& p = {});

enum class ScheduleKind { Denoise, SuperResNaive, SuperRes };

std::string to_string(ScheduleKind k);
ScheduleKind schedule_kind_from_string(const std::string& s);

struct DataShape {
  std::size_t h = 1, w = 1, c = 1;
  std::size_t dim() const { return h * w * c; }
  bool operator==(const DataShape&) const = default;
};

// One step of the forward process: y_k = gain * P_level x + noise_std * n,
// with noise isotropic in the degraded space.
struct StepOperator {
  double gain = 1.0;
  int level = 0;
  double noise_std = 0.0;
  DataShape out_shape;
  std::size_t dim() const { return out_shape.dim(); }
};

// Markov factorization of step k through step k-1 (valid only when both
// steps share a resolution level).
struct Decomposition {
  int k = 0;
  double gain = 0.0;       // transition gain
  double noise_var = 0.0;  // transition noise variance
  bool valid = false;
};

struct DegradationSchedule {
  ScheduleKind kind = ScheduleKind::Denoise;
  int total_steps = 0;
  DataShape data_shape;
  BetaParams beta_params;
  std::vector<StepOperator> steps;  // index 0..T, step 0 is the identity

  double latent_std() const { return steps.back().noise_std; }
  std::size_t latent_dim() const { return steps.back().dim(); }
  bool fully_decomposable() const;
};

// Builds the per-step operator list for one of the three process kinds.
// SR kinds require h and w divisible by every block size they reach.
DegradationSchedule build_schedule(ScheduleKind kind, int total_steps,
                                   DataShape shape, BetaParams params = {});

// P_level: averages 2^level x 2^level blocks per channel. Batch-aware
// (rows = samples) like every tensor op below.
Tensor block_average(const Tensor& x, const DataShape& shape, int level);
// Transpose-like lift: repeats each degraded pixel over its block (the
// pseudoinverse of block_average).
Tensor block_replicate(const Tensor& y, const DataShape& shape, int level);

Tensor apply_step(const DegradationSchedule& s, int k, const Tensor& x);
Tensor apply_step_pinv(const DegradationSchedule& s, int k, const Tensor& y);
// A_k^T g: pulls a degraded-space gradient back to data space.
Tensor apply_step_adjoint(const DegradationSchedule& s, int k, const Tensor& g);

Tensor forward_sample(const DegradationSchedule& s, int k, const Tensor& x,
                      Rng& rng);

Decomposition decompose(const DegradationSchedule& s, int k);

// Coefficients of the Gaussian y_{k-1} | (y_k, x_hat); mean is
// coef_xhat * x_hat + coef_yk * y_k with isotropic std.
struct PosteriorCoeffs {
  double coef_xhat = 1.0;
  double coef_yk = 0.0;
  double std = 0.0;
};
PosteriorCoeffs posterior_coeffs(const DegradationSchedule& s, int k);

Tensor posterior_sample(const DegradationSchedule& s, int k, const Tensor& y_k,
                        const Tensor& x_hat, Rng& rng);

Tensor latent_sample(const DegradationSchedule& s, std::size_t n, Rng& rng);

// 1/2 sigma_k^-2 ||A_k x_hat - y_k||^2, averaged over batch rows. The
// gradient w.r.t. x_hat (same averaging) is written to grad_xhat when given.
double fidelity_full(const DegradationSchedule& s, int k, const Tensor& x_hat,
                     const Tensor& y_k, Tensor* grad_xhat = nullptr);

// Same with the transition pair (gain, noise) of the step-k decomposition.
double fidelity_transition(const DegradationSchedule& s, int k,
                           const Tensor& y_prev, const Tensor& y_k,
                           Tensor* grad_yprev = nullptr);

}  // namespace rgm
