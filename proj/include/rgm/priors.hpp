#pragma once

#include <optional>
#include <vector>

#include "rgm/models.hpp"

namespace rgm {

enum class PriorKind { Kld, Mmd, Dswd };

std::string to_string(PriorKind k);
PriorKind prior_kind_from_string(const std::string& s);

// --- adversarial (KLD) prior -------------------------------------------------

// mean_b [log(1 - D(fake_b)) - log D(fake_b)], which reduces to minus the
// mean logit. When grad_fake is given it receives the gradient w.r.t. the
// raw fake observations (chained through the lift).
double kld_generator_term(const MlpParams& disc, const DiscriminatorConfig& cfg,
                          const DegradationSchedule& s, const Tensor& fake,
                          int k, Tensor* grad_fake = nullptr);

// Loss minimized by the discriminator:
//   -mean[log D(real) + log(1 - D(fake))] + r1_gamma/2 * mean ||d D/d y (real)||^2
// evaluated in logit form. Parameter gradients are accumulated into *grads.
double discriminator_loss(const MlpParams& disc, const DiscriminatorConfig& cfg,
                          const DegradationSchedule& s, const Tensor& real,
                          const Tensor& fake, int k, double r1_gamma,
                          MlpGrads* grads = nullptr);

// --- kernel (MMD) prior ------------------------------------------------------

struct MmdConfig {
  std::vector<double> bandwidths{0.1, 0.5, 1.0, 2.0, 10.0};
};

// Off-diagonal U-statistic form with a mixture of Gaussian kernels
// exp(-||u-v||^2 / (2 sigma^2)); batches must have equal size M >= 2.
double mmd(const Tensor& x, const Tensor& y, const MmdConfig& cfg,
           Tensor* grad_x = nullptr);

// --- sliced Wasserstein (DSWD) prior ----------------------------------------

// W2^2 between two equal-weight 1-D empirical laws given sorted samples.
double sliced_w2_1d(const std::vector<double>& xs_sorted,
                    const std::vector<double>& ys_sorted);

struct DswdConfig {
  std::size_t num_projections = 10;
  int dsw_iterations = 10;
  double lambda_c = 10.0;  // diversity regularizer weight
  double sampler_lr = 1e-3;
  std::size_t sampler_hidden = 32;
};

// Learnable projection sampler: noise -> unit directions.
struct DswdState {
  MlpParams sampler;
  MlpAdam opt;
};

DswdState make_dswd_state(std::size_t dim, const DswdConfig& cfg, Rng& rng);

// Runs dsw_iterations ascent steps on the sampler (maximizing mean sliced
// W2^2 minus lambda_c * mean squared pairwise cosine similarity), then
// returns the mean sliced W2^2 over the final directions. grad_x gets the
// gradient w.r.t. x with the directions held fixed.
double dswd(const Tensor& x, const Tensor& y, const DswdConfig& cfg,
            DswdState& state, Rng& rng, Tensor* grad_x = nullptr);

// Numerically stable log(1 + exp(x)).
double softplus(double x);
double sigmoid(double x);

}  // namespace rgm
