#pragma once

#include <optional>

#include "rgm/models.hpp"

namespace rgm {

enum class TaskKind { Denoise, SuperResolve, Colorize };

std::string to_string(TaskKind k);
TaskKind task_kind_from_string(const std::string& s);

// One restoration task: a linear observation of a data-space image plus
// optional isotropic noise. sigma_obs == 0 means a noiseless observation and
// an unwhitened fidelity term.
struct InverseTask {
  TaskKind kind = TaskKind::Denoise;
  DataShape data_shape;
  Tensor y;
  double sigma_obs = 0.0;
  int factor = 1;  // SR block size (power of two)
  std::optional<Tensor> ground_truth;

  std::size_t obs_dim() const { return y.numel(); }
};

struct SolverConfig {
  int repeats = 10;     // outer loop count M
  double lambda = 5.0;  // prox weight
  double alpha = 0.1;   // update rate in (0, 1]
  int depth = 1;        // inner loop depth K (schedule steps used)
};

Tensor apply_observation(const InverseTask& t, const Tensor& x);
Tensor observation_adjoint(const InverseTask& t, const Tensor& u);
Tensor observation_pinv(const InverseTask& t, const Tensor& y);

InverseTask make_denoise(const Tensor& gt, DataShape shape, double sigma,
                         Rng& rng);
InverseTask make_sr(const Tensor& gt, DataShape shape, int factor);
InverseTask make_colorize(const Tensor& gt, DataShape shape);

// Pseudoinverse reconstruction: identity for denoising, nearest-neighbor
// upsample for SR, gray replication for colorization.
Tensor baseline_reconstruct(const InverseTask& t);

// argmin_x 1/2 ||x - v||^2 + lambda/2 ||(Sigma^+)^(1/2) (A x - y)||^2,
// closed form via the SVD structure of the task operators (all singular
// values equal, identity on the null space).
Tensor prox_fidelity(const Tensor& v, const InverseTask& t, double lambda);

// Plug-and-play splitting with the trained restorer as prior: pushes the
// iterate through the forward process, restores, and applies the fidelity
// prox, alpha-damped. Runs a fixed budget of repeats x depth steps.
Tensor solve(const InverseTask& t, const MlpParams& gen,
             const GeneratorConfig& cfg, const DegradationSchedule& s,
             const SolverConfig& solver, Rng& rng,
             std::uint64_t* nfe = nullptr);

}  // namespace rgm
