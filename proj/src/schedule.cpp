#include "rgm/schedule.hpp"

#include <cmath>

#include "rgm/errors.hpp"
#include "rgm/kernels.hpp"

namespace rgm {
namespace {

double ratio(int k, int t) { return static_cast<double>(k) / t; }

void check_beta_args(int k, int t_beta) {
  if (t_beta < 1) throw InvalidArgument("beta: t_beta must be >= 1");
  if (k < 0 || k > t_beta) throw InvalidArgument("beta: k out of range [0, t_beta]");
}

DataShape reduced_shape(const DataShape& s, int level) {
  std::size_t f = std::size_t{1} << level;
  if (level > 0 && (s.h % f != 0 || s.w % f != 0))
    throw InvalidArgument("schedule: shape not divisible by block size");
  return DataShape{s.h / f, s.w / f, s.c};
}

}  // namespace

double beta(int k, int t_beta, const BetaParams& p) {
  check_beta_args(k, t_beta);
  double r = ratio(k, t_beta);
  return 0.25 * (p.beta_max - p.beta_min) * r * r + 0.5 * p.beta_min * r;
}

double beta_tilde(int k, int t_beta, const BetaParams& p) {
  check_beta_args(k, t_beta);
  double r = ratio(k, t_beta);
  double r2 = r * r;
  return 0.25 * (p.beta_max - p.beta_min) * r2 * r2 + 0.5 * p.beta_min * r2;
}

std::string to_string(ScheduleKind k) {
  switch (k) {
    case ScheduleKind::Denoise: return "d";
    case ScheduleKind::SuperResNaive: return "sr-naive";
    case ScheduleKind::SuperRes: return "sr";
  }
  return "?";
}

ScheduleKind schedule_kind_from_string(const std::string& s) {
  if (s == "d") return ScheduleKind::Denoise;
  if (s == "sr-naive") return ScheduleKind::SuperResNaive;
  if (s == "sr") return ScheduleKind::SuperRes;
  throw InvalidArgument("unknown schedule kind: " + s);
}

bool DegradationSchedule::fully_decomposable() const {
  for (int k = 1; k <= total_steps; ++k)
    if (!decompose(*this, k).valid) return false;
  return true;
}

DegradationSchedule build_schedule(ScheduleKind kind, int total_steps,
                                   DataShape shape, BetaParams params) {
  if (total_steps < 1) throw InvalidArgument("build_schedule: need T >= 1");
  if (!(params.beta_max > params.beta_min && params.beta_min > 0))
    throw InvalidArgument("build_schedule: need beta_max > beta_min > 0");

  DegradationSchedule s;
  s.kind = kind;
  s.total_steps = total_steps;
  s.data_shape = shape;
  s.beta_params = params;

  for (int k = 0; k <= total_steps; ++k) {
    StepOperator op;
    switch (kind) {
      case ScheduleKind::Denoise: {
        double b = beta(k, total_steps, params);
        op.gain = std::exp(-b);
        op.noise_std = 1.0 - std::exp(-2.0 * b);
        op.level = 0;
        break;
      }
      case ScheduleKind::SuperResNaive: {
        double b = beta_tilde(k, total_steps, params);
        op.gain = std::exp(-b);
        op.level = k;
        op.noise_std = (1.0 - std::exp(-2.0 * b)) * std::pow(2.0, -k);
        break;
      }
      case ScheduleKind::SuperRes: {
        // Noise ramp indexed on half steps: denoise on odd k, downsample on even.
        int t_beta = (total_steps + 1) / 2;
        int up = (k + 1) / 2;
        int down = k / 2;
        double b = beta(up, t_beta, params);
        op.gain = std::exp(-b);
        op.level = down;
        op.noise_std = std::pow(2.0, up) * (1.0 - std::exp(-2.0 * b)) *
                       std::pow(2.0, -down);
        break;
      }
    }
    op.out_shape = reduced_shape(shape, op.level);
    s.steps.push_back(op);
  }
  return s;
}

Tensor block_average(const Tensor& x, const DataShape& shape, int level) {
  if (level < 0) throw InvalidArgument("block_average: level must be >= 0");
  if (x.batch_cols() != shape.dim())
    throw InvalidArgument("block_average: input does not match data shape");
  if (level == 0) return x;

  DataShape out_shape = reduced_shape(shape, level);
  std::size_t f = std::size_t{1} << level;
  double inv = 1.0 / static_cast<double>(f * f);
  std::size_t n = x.batch_rows();
  Tensor out = x.is_vector() ? Tensor::zeros({out_shape.dim()})
                             : Tensor::zeros({n, out_shape.dim()});
  for (std::size_t b = 0; b < n; ++b) {
    const double* src = x.data() + b * shape.dim();
    double* dst = out.data() + b * out_shape.dim();
    for (std::size_t oh = 0; oh < out_shape.h; ++oh)
      for (std::size_t ow = 0; ow < out_shape.w; ++ow)
        for (std::size_t ch = 0; ch < out_shape.c; ++ch) {
          double acc = 0.0;
          for (std::size_t dy = 0; dy < f; ++dy)
            for (std::size_t dx = 0; dx < f; ++dx)
              acc += src[((oh * f + dy) * shape.w + (ow * f + dx)) * shape.c + ch];
          dst[(oh * out_shape.w + ow) * out_shape.c + ch] = acc * inv;
        }
  }
  return out;
}

Tensor block_replicate(const Tensor& y, const DataShape& shape, int level) {
  if (level < 0) throw InvalidArgument("block_replicate: level must be >= 0");
  if (level == 0) return y;
  DataShape in_shape = reduced_shape(shape, level);
  if (y.batch_cols() != in_shape.dim())
    throw InvalidArgument("block_replicate: input does not match reduced shape");

  std::size_t f = std::size_t{1} << level;
  std::size_t n = y.batch_rows();
  Tensor out = y.is_vector() ? Tensor::zeros({shape.dim()})
                             : Tensor::zeros({n, shape.dim()});
  for (std::size_t b = 0; b < n; ++b) {
    const double* src = y.data() + b * in_shape.dim();
    double* dst = out.data() + b * shape.dim();
    for (std::size_t h = 0; h < shape.h; ++h)
      for (std::size_t w = 0; w < shape.w; ++w)
        for (std::size_t ch = 0; ch < shape.c; ++ch)
          dst[(h * shape.w + w) * shape.c + ch] =
              src[((h / f) * in_shape.w + (w / f)) * in_shape.c + ch];
  }
  return out;
}

namespace {

const StepOperator& step_at(const DegradationSchedule& s, int k) {
  if (k < 0 || k > s.total_steps)
    throw InvalidArgument("schedule: step index out of range");
  return s.steps[static_cast<std::size_t>(k)];
}

}  // namespace

Tensor apply_step(const DegradationSchedule& s, int k, const Tensor& x) {
  const StepOperator& op = step_at(s, k);
  Tensor out = block_average(x, s.data_shape, op.level);
  for (double& v : out.v) v *= op.gain;
  return out;
}

Tensor apply_step_pinv(const DegradationSchedule& s, int k, const Tensor& y) {
  const StepOperator& op = step_at(s, k);
  if (op.gain == 0.0)
    throw InvalidArgument("apply_step_pinv: zero gain has no inverse");
  Tensor out = block_replicate(y, s.data_shape, op.level);
  double inv = 1.0 / op.gain;
  for (double& v : out.v) v *= inv;
  return out;
}

Tensor apply_step_adjoint(const DegradationSchedule& s, int k, const Tensor& g) {
  const StepOperator& op = step_at(s, k);
  Tensor out = block_replicate(g, s.data_shape, op.level);
  double scale = op.gain / std::pow(4.0, op.level);
  for (double& v : out.v) v *= scale;
  return out;
}

Tensor forward_sample(const DegradationSchedule& s, int k, const Tensor& x,
                      Rng& rng) {
  const StepOperator& op = step_at(s, k);
  Tensor y = apply_step(s, k, x);
  if (op.noise_std > 0.0)
    for (double& v : y.v) v += op.noise_std * rng.gaussian();
  return y;
}

Decomposition decompose(const DegradationSchedule& s, int k) {
  if (k < 1 || k > s.total_steps)
    throw InvalidArgument("decompose: k out of range [1, T]");
  const StepOperator& cur = s.steps[static_cast<std::size_t>(k)];
  const StepOperator& prev = s.steps[static_cast<std::size_t>(k - 1)];
  Decomposition d;
  d.k = k;
  if (cur.level != prev.level) return d;  // resolution change: no scalar factor
  d.gain = cur.gain / prev.gain;
  d.noise_var = cur.noise_std * cur.noise_std -
                d.gain * d.gain * prev.noise_std * prev.noise_std;
  d.valid = d.noise_var > 0.0;
  return d;
}

PosteriorCoeffs posterior_coeffs(const DegradationSchedule& s, int k) {
  Decomposition d = decompose(s, k);
  if (!d.valid)
    throw UnsupportedSchedule("posterior: step does not decompose");
  const StepOperator& prev = s.steps[static_cast<std::size_t>(k - 1)];
  PosteriorCoeffs pc;
  if (prev.noise_std == 0.0) {
    // Degenerate prior: the posterior collapses onto A_{k-1} x_hat.
    pc.coef_xhat = prev.gain;
    pc.coef_yk = 0.0;
    pc.std = 0.0;
    return pc;
  }
  double prev_var = prev.noise_std * prev.noise_std;
  double precision = d.gain * d.gain / d.noise_var + 1.0 / prev_var;
  pc.coef_yk = (d.gain / d.noise_var) / precision;
  pc.coef_xhat = (prev.gain / prev_var) / precision;
  pc.std = std::sqrt(1.0 / precision);
  return pc;
}

Tensor posterior_sample(const DegradationSchedule& s, int k, const Tensor& y_k,
                        const Tensor& x_hat, Rng& rng) {
  PosteriorCoeffs pc = posterior_coeffs(s, k);
  if (!y_k.same_shape(x_hat))
    throw InvalidArgument("posterior_sample: y_k and x_hat shapes differ");
  Tensor out = x_hat;
  for (std::size_t i = 0; i < out.numel(); ++i) {
    double mean = pc.coef_xhat * x_hat.v[i] + pc.coef_yk * y_k.v[i];
    out.v[i] = pc.std > 0.0 ? mean + pc.std * rng.gaussian() : mean;
  }
  return out;
}

Tensor latent_sample(const DegradationSchedule& s, std::size_t n, Rng& rng) {
  Tensor t = gaussian_matrix(n, s.latent_dim(), rng);
  double sd = s.latent_std();
  for (double& v : t.v) v *= sd;
  return t;
}

double fidelity_full(const DegradationSchedule& s, int k, const Tensor& x_hat,
                     const Tensor& y_k, Tensor* grad_xhat) {
  if (k < 1) throw InvalidArgument("fidelity_full: k must be >= 1");
  const StepOperator& op = step_at(s, k);
  Tensor ax = apply_step(s, k, x_hat);
  if (!ax.same_shape(y_k))
    throw InvalidArgument("fidelity_full: y_k has the wrong degraded shape");
  double inv_var = 1.0 / (op.noise_std * op.noise_std);
  double inv_n = 1.0 / static_cast<double>(x_hat.batch_rows());
  double value = 0.5 * inv_var * inv_n *
                 kernels::active().sum_sq_diff(ax.data(), y_k.data(), ax.numel());
  if (grad_xhat) {
    Tensor res = ax;
    for (std::size_t i = 0; i < res.numel(); ++i)
      res.v[i] = inv_var * inv_n * (ax.v[i] - y_k.v[i]);
    // gradient through A_k: gain * P^T delta, with P^T = replicate / 4^level
    Tensor lifted = block_replicate(res, s.data_shape, op.level);
    double scale = op.gain / std::pow(4.0, op.level);
    *grad_xhat = lifted;
    for (double& v : grad_xhat->v) v *= scale;
  }
  return value;
}

double fidelity_transition(const DegradationSchedule& s, int k,
                           const Tensor& y_prev, const Tensor& y_k,
                           Tensor* grad_yprev) {
  Decomposition d = decompose(s, k);
  if (!d.valid)
    throw UnsupportedSchedule("fidelity_transition: step does not decompose");
  if (!y_prev.same_shape(y_k))
    throw InvalidArgument("fidelity_transition: shape mismatch");
  double inv_var = 1.0 / d.noise_var;
  double inv_n = 1.0 / static_cast<double>(y_prev.batch_rows());
  double value = 0.0;
  if (grad_yprev) *grad_yprev = Tensor::zeros(y_prev.shape);
  for (std::size_t i = 0; i < y_prev.numel(); ++i) {
    double r = d.gain * y_prev.v[i] - y_k.v[i];
    value += r * r;
    if (grad_yprev) grad_yprev->v[i] = inv_var * inv_n * d.gain * r;
  }
  return 0.5 * inv_var * inv_n * value;
}

}  // namespace rgm
