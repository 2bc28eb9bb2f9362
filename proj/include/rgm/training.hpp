#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rgm/checkpoint.hpp"
#include "rgm/io.hpp"
#include "rgm/priors.hpp"

namespace rgm {

enum class Algorithm { Posterior, Relaxed, Mmse, Direct };

std::string to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& s);

struct PriorConfig {
  PriorKind kind = PriorKind::Kld;
  double r1_gamma = 0.05;
  std::size_t disc_hidden = 32;
  std::size_t disc_depth = 3;
  MmdConfig mmd;
  DswdConfig dswd;
};

struct TrainConfig {
  ScheduleDescriptor schedule;
  Algorithm algorithm = Algorithm::Relaxed;
  PriorConfig prior;
  // Fidelity weight 1/lambda; +infinity switches the fidelity term off.
  double lambda = 1.0;
  double lr_g = 1e-4;
  double lr_d = 1e-4;
  // Adam moment decays for both nets; the adversarial setups here want the
  // GAN-style values rather than the regression defaults.
  double adam_beta1 = 0.5;
  double adam_beta2 = 0.9;
  std::size_t batch_size = 1000;
  std::uint64_t iterations = 20000;
  std::uint64_t seed = 1;
  std::uint64_t log_every = 100;
  GeneratorConfig generator;
  bool use_z = true;  // false feeds a zero auxiliary vector of the same width
};

json train_config_to_json(const TrainConfig& c);
TrainConfig train_config_from_json(const json& j);

struct LogPoint {
  std::uint64_t iteration;
  double loss_g;
  double loss_d_or_prior;
  double fidelity;
};

struct TrainerState {
  DegradationSchedule schedule;
  GeneratorConfig gen_cfg;
  DiscriminatorConfig disc_cfg;
  MlpParams gen;
  MlpAdam gen_opt;
  std::optional<MlpParams> disc;
  std::optional<MlpAdam> disc_opt;
  std::optional<DswdState> dswd;
  Rng rng{0};
  std::uint64_t step = 0;
};

// Validates the config (posterior mode needs a decomposable schedule) and
// seeds all parameter initializations from config.seed.
TrainerState init_trainer(const TrainConfig& cfg);
TrainerState trainer_from_checkpoint(const TrainConfig& cfg,
                                     const Checkpoint& ckpt);
Checkpoint make_checkpoint(const TrainerState& st, const TrainConfig& cfg);

// Randomness of one iteration, drawn up front and grouped by step index so
// step losses become pure functions of the parameters.
struct StepDraws {
  struct Group {
    int k = 1;
    std::vector<std::size_t> rows;
    Tensor z;            // |rows| x z_dim (may be zero-width)
    Tensor noise_k;      // |rows| x dim_k
    Tensor noise_km1;    // |rows| x dim_{k-1}
    Tensor noise_regen;  // |rows| x dim_{k-1}
  };
  std::vector<Group> groups;
};

StepDraws draw_step(const TrainConfig& cfg, TrainerState& st,
                    std::size_t dataset_rows);

struct StepLosses {
  double loss_g = 0.0;
  double loss_d_or_prior = 0.0;
  double fidelity = 0.0;
};

// Generator-side objective for fixed draws. Accumulates parameter gradients
// when grads is non-null. Mutates only the DSWD sampler (its inner ascent);
// every other prior leaves the state untouched.
double generator_loss(TrainerState& st, const TrainConfig& cfg,
                      const Tensor& dataset, const StepDraws& draws,
                      MlpGrads* grads, double* fidelity_out = nullptr,
                      double* prior_out = nullptr);

// One full iteration: prior/discriminator update, then generator update.
StepLosses train_iteration(TrainerState& st, const TrainConfig& cfg,
                           const Tensor& dataset);

struct RunRecord {
  json config;
  std::string config_hash;
  std::vector<LogPoint> points;
  Checkpoint final_checkpoint;
  bool aborted = false;
  std::string abort_reason;
};

RunRecord train(const TrainConfig& cfg, const Tensor& dataset);
// Continues a checkpointed run up to cfg.iterations total iterations.
RunRecord train_resume(const TrainConfig& cfg, const Tensor& dataset,
                       const Checkpoint& from);

}  // namespace rgm
