#include "rgm/inverse.hpp"

#include <cmath>

#include "rgm/errors.hpp"
#include "rgm/kernels.hpp"

namespace rgm {

std::string to_string(TaskKind k) {
  switch (k) {
    case TaskKind::Denoise: return "denoise";
    case TaskKind::SuperResolve: return "sr";
    case TaskKind::Colorize: return "color";
  }
  return "?";
}

TaskKind task_kind_from_string(const std::string& s) {
  if (s == "denoise") return TaskKind::Denoise;
  if (s == "sr") return TaskKind::SuperResolve;
  if (s == "color" || s == "colorize") return TaskKind::Colorize;
  throw InvalidArgument("unknown task kind: " + s);
}

namespace {

int sr_level(int factor) {
  if (factor < 2 || (factor & (factor - 1)) != 0)
    throw InvalidArgument("sr: factor must be a power of two >= 2");
  int level = 0;
  while ((1 << level) < factor) ++level;
  return level;
}

// Squared singular value shared by every nonzero direction of the operator.
double operator_s2(const InverseTask& t) {
  switch (t.kind) {
    case TaskKind::Denoise: return 1.0;
    case TaskKind::SuperResolve:
      return std::pow(4.0, -sr_level(t.factor));
    case TaskKind::Colorize: return 1.0 / 3.0;
  }
  return 1.0;
}

}  // namespace

Tensor apply_observation(const InverseTask& t, const Tensor& x) {
  if (x.batch_cols() != t.data_shape.dim())
    throw InvalidArgument("apply_observation: x has wrong dim");
  switch (t.kind) {
    case TaskKind::Denoise: return x;
    case TaskKind::SuperResolve:
      return block_average(x, t.data_shape, sr_level(t.factor));
    case TaskKind::Colorize: {
      if (t.data_shape.c != 3)
        throw InvalidArgument("colorize: needs 3-channel data");
      std::size_t pixels = t.data_shape.h * t.data_shape.w;
      std::size_t n = x.batch_rows();
      Tensor out = x.is_vector() ? Tensor::zeros({pixels})
                                 : Tensor::zeros({n, pixels});
      for (std::size_t b = 0; b < n; ++b) {
        const double* src = x.data() + b * t.data_shape.dim();
        double* dst = out.data() + b * pixels;
        for (std::size_t p = 0; p < pixels; ++p)
          dst[p] = (src[3 * p] + src[3 * p + 1] + src[3 * p + 2]) / 3.0;
      }
      return out;
    }
  }
  throw InvalidArgument("apply_observation: bad task");
}

Tensor observation_adjoint(const InverseTask& t, const Tensor& u) {
  switch (t.kind) {
    case TaskKind::Denoise: return u;
    case TaskKind::SuperResolve: {
      int level = sr_level(t.factor);
      Tensor out = block_replicate(u, t.data_shape, level);
      double s = std::pow(4.0, -level);
      for (double& v : out.v) v *= s;
      return out;
    }
    case TaskKind::Colorize: {
      std::size_t pixels = t.data_shape.h * t.data_shape.w;
      std::size_t n = u.batch_rows();
      if (u.batch_cols() != pixels)
        throw InvalidArgument("colorize adjoint: wrong observation dim");
      Tensor out = u.is_vector() ? Tensor::zeros({t.data_shape.dim()})
                                 : Tensor::zeros({n, t.data_shape.dim()});
      for (std::size_t b = 0; b < n; ++b) {
        const double* src = u.data() + b * pixels;
        double* dst = out.data() + b * t.data_shape.dim();
        for (std::size_t p = 0; p < pixels; ++p)
          for (int c = 0; c < 3; ++c) dst[3 * p + c] = src[p] / 3.0;
      }
      return out;
    }
  }
  throw InvalidArgument("observation_adjoint: bad task");
}

Tensor observation_pinv(const InverseTask& t, const Tensor& y) {
  Tensor out = observation_adjoint(t, y);
  double inv_s2 = 1.0 / operator_s2(t);
  for (double& v : out.v) v *= inv_s2;
  return out;
}

InverseTask make_denoise(const Tensor& gt, DataShape shape, double sigma,
                         Rng& rng) {
  if (!(sigma > 0)) throw InvalidArgument("make_denoise: sigma must be > 0");
  InverseTask t;
  t.kind = TaskKind::Denoise;
  t.data_shape = shape;
  t.sigma_obs = sigma;
  t.ground_truth = gt;
  t.y = gt;
  for (double& v : t.y.v) v += sigma * rng.gaussian();
  return t;
}

InverseTask make_sr(const Tensor& gt, DataShape shape, int factor) {
  InverseTask t;
  t.kind = TaskKind::SuperResolve;
  t.data_shape = shape;
  t.factor = factor;
  t.ground_truth = gt;
  t.y = apply_observation(t, gt);
  return t;
}

InverseTask make_colorize(const Tensor& gt, DataShape shape) {
  InverseTask t;
  t.kind = TaskKind::Colorize;
  t.data_shape = shape;
  t.ground_truth = gt;
  t.y = apply_observation(t, gt);
  return t;
}

Tensor baseline_reconstruct(const InverseTask& t) {
  return observation_pinv(t, t.y);
}

Tensor prox_fidelity(const Tensor& v, const InverseTask& t, double lambda) {
  if (lambda < 0) throw InvalidArgument("prox_fidelity: lambda must be >= 0");
  if (v.numel() != t.data_shape.dim())
    throw InvalidArgument("prox_fidelity: v has wrong dim");
  if (lambda == 0.0) return v;

  double var = t.sigma_obs > 0 ? t.sigma_obs * t.sigma_obs : 1.0;
  double c = lambda / var;
  double s2 = operator_s2(t);

  // x = (I - P) v + (P v + c A^T y) / (1 + c s^2), P the range projector of A^T A.
  Tensor av = apply_observation(t, v);
  Tensor pv = observation_adjoint(t, av);
  for (double& x : pv.v) x /= s2;
  Tensor aty = observation_adjoint(t, t.y);

  Tensor out = v;
  double denom = 1.0 + c * s2;
  for (std::size_t i = 0; i < out.numel(); ++i)
    out.v[i] = v.v[i] - pv.v[i] + (pv.v[i] + c * aty.v[i]) / denom;
  return out;
}

Tensor solve(const InverseTask& t, const MlpParams& gen,
             const GeneratorConfig& cfg, const DegradationSchedule& s,
             const SolverConfig& solver, Rng& rng, std::uint64_t* nfe) {
  if (solver.repeats < 1) throw InvalidArgument("solve: repeats must be >= 1");
  if (solver.depth < 1 || solver.depth > s.total_steps)
    throw InvalidArgument("solve: depth must be in [1, T]");
  if (!(solver.alpha > 0.0) || solver.alpha > 1.0)
    throw InvalidArgument("solve: alpha must be in (0, 1]");
  if (t.data_shape.dim() != s.data_shape.dim())
    throw InvalidArgument("solve: task and schedule data spaces differ");

  Tensor x = observation_pinv(t, t.y);
  std::uint64_t calls = 0;
  for (int rep = 0; rep < solver.repeats; ++rep) {
    for (int i = solver.depth; i >= 1; --i) {
      // Push the iterate into the learned distribution, restore, damp.
      Tensor y_hat = forward_sample(s, i, x, rng);
      Tensor z = cfg.z_dim > 0 ? gaussian_vector(cfg.z_dim, rng)
                               : Tensor::zeros({std::size_t{0}});
      Tensor x_hat =
          generator_apply_conditioned(gen, cfg, s, y_hat, i, i - 1, z);
      ++calls;
      for (std::size_t j = 0; j < x_hat.numel(); ++j)
        x_hat.v[j] = (1.0 - solver.alpha) * x.v[j] + solver.alpha * x_hat.v[j];

      Tensor reflect = x_hat;
      for (std::size_t j = 0; j < reflect.numel(); ++j)
        reflect.v[j] = 2.0 * x_hat.v[j] - x.v[j];
      Tensor proxed = prox_fidelity(reflect, t, solver.lambda);
      for (std::size_t j = 0; j < x.numel(); ++j)
        x.v[j] += proxed.v[j] - x_hat.v[j];
      if (!x.all_finite())
        throw NumericalFailure("solve: iterate became non-finite");
    }
  }
  if (nfe) *nfe = calls;
  return x;
}

}  // namespace rgm
