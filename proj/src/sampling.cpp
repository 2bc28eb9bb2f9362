#include "rgm/sampling.hpp"

#include <cmath>

#include "rgm/errors.hpp"
#include "rgm/kernels.hpp"

namespace rgm {

SampleResult generate(const MlpParams& gen, const GeneratorConfig& cfg,
                      const DegradationSchedule& s, std::size_t n, Rng& rng) {
  if (n == 0) throw InvalidArgument("generate: n must be >= 1");
  SampleResult res;
  Tensor y = latent_sample(s, n, rng);
  Tensor x_hat;
  for (int k = s.total_steps - 1; k >= 0; --k) {
    Tensor z = cfg.z_dim > 0 ? gaussian_matrix(n, cfg.z_dim, rng)
                             : Tensor::zeros({n, std::size_t{0}});
    x_hat = generator_apply(gen, cfg, s, y, k + 1, z);
    res.nfe += 1;
    if (k > 0) {
      const StepOperator& op = s.steps[static_cast<std::size_t>(k)];
      y = apply_step(s, k, x_hat);
      if (op.noise_std > 0)
        for (double& v : y.v) v += op.noise_std * rng.gaussian();
    }
  }
  if (!x_hat.all_finite())
    throw NumericalFailure("generate: non-finite samples");
  res.samples = std::move(x_hat);
  return res;
}

RestoreVariants restore_variants(const MlpParams& gen,
                                 const GeneratorConfig& cfg,
                                 const DegradationSchedule& s, const Tensor& x,
                                 int k, std::size_t z_count, Rng& rng) {
  if (k < 1 || k > s.total_steps)
    throw InvalidArgument("restore_variants: k out of range [1, T]");
  if (z_count == 0) throw InvalidArgument("restore_variants: z_count >= 1");
  if (!x.is_vector() || x.numel() != s.data_shape.dim())
    throw InvalidArgument("restore_variants: x must be a single data point");

  RestoreVariants rv;
  rv.y_k = forward_sample(s, k, x, rng);

  // Same observation replicated; one fresh z per restoration.
  std::size_t obs_dim = rv.y_k.numel();
  Tensor y_rep = Tensor::matrix(z_count, obs_dim);
  for (std::size_t i = 0; i < z_count; ++i)
    for (std::size_t j = 0; j < obs_dim; ++j) y_rep.at(i, j) = rv.y_k.v[j];
  Tensor z = cfg.z_dim > 0 ? gaussian_matrix(z_count, cfg.z_dim, rng)
                           : Tensor::zeros({z_count, std::size_t{0}});
  rv.restorations = generator_apply(gen, cfg, s, y_rep, k, z);

  if (z_count >= 2) {
    std::size_t d = rv.restorations.batch_cols();
    double total = 0.0;
    for (std::size_t i = 0; i < z_count; ++i)
      for (std::size_t j = 0; j < z_count; ++j) {
        if (i == j) continue;
        total += std::sqrt(kernels::active().sum_sq_diff(
            rv.restorations.data() + i * d, rv.restorations.data() + j * d, d));
      }
    rv.spread = total / (static_cast<double>(z_count) *
                         static_cast<double>(z_count - 1));
  }
  return rv;
}

}  // namespace rgm
