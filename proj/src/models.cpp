#include "rgm/models.hpp"

#include <cmath>

#include "rgm/errors.hpp"

namespace rgm {
namespace {

void encode_step(double* dst, StepEncoding enc, int k, int total_steps) {
  if (enc == StepEncoding::ScalarOverT) {
    dst[0] = static_cast<double>(k) / static_cast<double>(total_steps);
  } else {
    for (int i = 0; i <= total_steps; ++i) dst[i] = (i == k) ? 1.0 : 0.0;
  }
}

MlpConfig mlp_dims(std::size_t in, std::size_t hidden, std::size_t depth,
                   std::size_t out) {
  if (depth < 1) throw InvalidArgument("net depth must be >= 1");
  MlpConfig cfg;
  cfg.dims.push_back(in);
  for (std::size_t l = 0; l + 1 < depth; ++l) cfg.dims.push_back(hidden);
  cfg.dims.push_back(out);
  return cfg;
}

}  // namespace

std::size_t step_encoding_dim(StepEncoding enc, int total_steps) {
  return enc == StepEncoding::ScalarOverT
             ? 1
             : static_cast<std::size_t>(total_steps) + 1;
}

std::size_t generator_input_dim(const GeneratorConfig& cfg, int total_steps) {
  return cfg.data_dim + step_encoding_dim(cfg.encoding, total_steps) + cfg.z_dim;
}

std::size_t discriminator_input_dim(const DiscriminatorConfig& cfg,
                                    int total_steps) {
  return cfg.data_dim + step_encoding_dim(cfg.encoding, total_steps);
}

MlpConfig generator_mlp_config(const GeneratorConfig& cfg, int total_steps) {
  return mlp_dims(generator_input_dim(cfg, total_steps), cfg.hidden, cfg.depth,
                  cfg.data_dim);
}

MlpConfig discriminator_mlp_config(const DiscriminatorConfig& cfg,
                                   int total_steps) {
  return mlp_dims(discriminator_input_dim(cfg, total_steps), cfg.hidden,
                  cfg.depth, 1);
}

Tensor lift_to_data(const DegradationSchedule& s, int k, const Tensor& y) {
  if (k < 0 || k > s.total_steps)
    throw InvalidArgument("lift_to_data: step out of range");
  int level = s.steps[static_cast<std::size_t>(k)].level;
  if (y.batch_cols() != s.steps[static_cast<std::size_t>(k)].dim())
    throw InvalidArgument("lift_to_data: wrong degraded-space dim");
  return block_replicate(y, s.data_shape, level);
}

Tensor lift_to_data_adjoint(const DegradationSchedule& s, int k,
                            const Tensor& g) {
  int level = s.steps[static_cast<std::size_t>(k)].level;
  Tensor avg = block_average(g, s.data_shape, level);
  double blocksz = std::pow(4.0, level);
  for (double& v : avg.v) v *= blocksz;
  return avg;
}

namespace {

Tensor concat_inputs(const Tensor& lifted, StepEncoding enc, int k,
                     int total_steps, const Tensor* z) {
  std::size_t n = lifted.batch_rows();
  std::size_t dcols = lifted.batch_cols();
  std::size_t ecols = step_encoding_dim(enc, total_steps);
  std::size_t zcols = z ? z->batch_cols() : 0;
  if (z && z->batch_rows() != n)
    throw InvalidArgument("generator input: y and z row counts differ");

  Tensor in = Tensor::matrix(n, dcols + ecols + zcols);
  for (std::size_t i = 0; i < n; ++i) {
    double* dst = in.row(i);
    const double* src = lifted.data() + i * dcols;
    for (std::size_t j = 0; j < dcols; ++j) dst[j] = src[j];
    encode_step(dst + dcols, enc, k, total_steps);
    if (z) {
      const double* zs = z->data() + i * zcols;
      for (std::size_t j = 0; j < zcols; ++j) dst[dcols + ecols + j] = zs[j];
    }
  }
  return in;
}

}  // namespace

Tensor generator_apply_conditioned(const MlpParams& params,
                                   const GeneratorConfig& cfg,
                                   const DegradationSchedule& s,
                                   const Tensor& y, int space_k, int cond_k,
                                   const Tensor& z, MlpTape* tape) {
  Tensor lifted = lift_to_data(s, space_k, y);
  const Tensor* zp = cfg.z_dim > 0 ? &z : nullptr;
  if (cfg.z_dim > 0 && z.batch_cols() != cfg.z_dim)
    throw InvalidArgument("generator_apply: z dim mismatch");
  Tensor in =
      concat_inputs(lifted, cfg.encoding, cond_k, s.total_steps, zp);
  Tensor out = mlp_forward(params, in, tape);
  if (y.is_vector()) out.shape = {out.numel()};
  return out;
}

Tensor generator_apply(const MlpParams& params, const GeneratorConfig& cfg,
                       const DegradationSchedule& s, const Tensor& y, int k,
                       const Tensor& z, MlpTape* tape) {
  return generator_apply_conditioned(params, cfg, s, y, k, k, z, tape);
}

Tensor discriminator_input(const DiscriminatorConfig& cfg,
                           const DegradationSchedule& s, const Tensor& y,
                           int k) {
  Tensor lifted = lift_to_data(s, k, y);
  return concat_inputs(lifted, cfg.encoding, k, s.total_steps, nullptr);
}

Tensor discriminator_apply(const MlpParams& params,
                           const DiscriminatorConfig& cfg,
                           const DegradationSchedule& s, const Tensor& y, int k,
                           MlpTape* tape) {
  Tensor in = discriminator_input(cfg, s, y, k);
  Tensor out = mlp_forward(params, in, tape);
  if (y.is_vector()) out.shape = {out.numel()};
  return out;
}

Tensor input_grad_to_y(const DegradationSchedule& s, int space_k,
                       std::size_t data_dim, const Tensor& input_grad) {
  std::size_t n = input_grad.batch_rows();
  Tensor gdata = Tensor::matrix(n, data_dim);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < data_dim; ++j)
      gdata.at(i, j) = input_grad.data()[i * input_grad.batch_cols() + j];
  return lift_to_data_adjoint(s, space_k, gdata);
}

Tensor input_grad_to_z(const GeneratorConfig& cfg, int total_steps,
                       const Tensor& input_grad) {
  std::size_t off =
      cfg.data_dim + step_encoding_dim(cfg.encoding, total_steps);
  std::size_t n = input_grad.batch_rows();
  Tensor gz = Tensor::matrix(n, cfg.z_dim);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < cfg.z_dim; ++j)
      gz.at(i, j) = input_grad.data()[i * input_grad.batch_cols() + off + j];
  return gz;
}

}  // namespace rgm
