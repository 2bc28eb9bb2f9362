#include "rgm/mlp.hpp"

#include <cmath>

#include "rgm/errors.hpp"
#include "rgm/kernels.hpp"

namespace rgm {
namespace {

Tensor as_batch(const Tensor& t) {
  if (t.is_matrix()) return t;
  Tensor b = t;
  b.shape = {1, t.numel()};
  return b;
}

void add_bias_rows(Tensor& out, const Tensor& bias) {
  std::size_t n = out.batch_cols();
  for (std::size_t i = 0; i < out.batch_rows(); ++i)
    kernels::active().axpy(1.0, bias.data(), out.data() + i * n, n);
}

Tensor colsum(const Tensor& a) {
  Tensor s = Tensor::zeros({a.batch_cols()});
  for (std::size_t i = 0; i < a.batch_rows(); ++i)
    kernels::active().axpy(1.0, a.data() + i * a.batch_cols(), s.data(),
                           a.batch_cols());
  return s;
}

// out = a .* (1 - h.*h), elementwise over matching shapes
Tensor times_tanh_deriv(const Tensor& a, const Tensor& h) {
  Tensor out = a;
  for (std::size_t i = 0; i < out.numel(); ++i)
    out.v[i] *= 1.0 - h.v[i] * h.v[i];
  return out;
}

}  // namespace

std::size_t MlpParams::num_params() const {
  std::size_t n = 0;
  for (const auto& l : layers) n += l.w.numel() + l.b.numel();
  return n;
}

bool operator==(const MlpParams& a, const MlpParams& b) {
  if (a.layers.size() != b.layers.size()) return false;
  for (std::size_t i = 0; i < a.layers.size(); ++i)
    if (!(a.layers[i].w == b.layers[i].w && a.layers[i].b == b.layers[i].b))
      return false;
  return true;
}

MlpParams init_params(const MlpConfig& cfg, Rng& rng) {
  if (cfg.dims.size() < 2) throw InvalidArgument("init_params: need >= 2 dims");
  MlpParams p;
  for (std::size_t l = 0; l + 1 < cfg.dims.size(); ++l) {
    std::size_t fan_in = cfg.dims[l], fan_out = cfg.dims[l + 1];
    double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    MlpParams::Layer layer;
    layer.w = Tensor::matrix(fan_in, fan_out);
    for (double& x : layer.w.v) x = (2.0 * rng.uniform() - 1.0) * bound;
    layer.b = Tensor::zeros({fan_out});
    p.layers.push_back(std::move(layer));
  }
  return p;
}

Tensor mlp_forward(const MlpParams& params, const Tensor& input, MlpTape* tape) {
  if (params.layers.empty()) throw InvalidArgument("mlp_forward: empty net");
  if (input.batch_cols() != params.in_dim())
    throw InvalidArgument("mlp_forward: input dim mismatch");

  bool vector_in = input.is_vector();
  if (tape) {
    tape->params = &params;
    tape->revision = params.revision;
    tape->acts.clear();
    tape->acts.push_back(input);
  }

  Tensor cur = as_batch(input);
  std::size_t last = params.layers.size() - 1;
  for (std::size_t l = 0; l <= last; ++l) {
    const auto& layer = params.layers[l];
    Tensor out = Tensor::matrix(cur.batch_rows(), layer.w.cols());
    kernels::active().gemm_nn(cur.data(), layer.w.data(), out.data(),
                              cur.batch_rows(), layer.w.cols(), layer.w.rows());
    add_bias_rows(out, layer.b);
    if (l != last)
      kernels::active().tanh_vec(out.data(), out.data(), out.numel());
    if (vector_in) out.shape = {out.numel()};
    if (tape) tape->acts.push_back(out);
    cur = std::move(out);
    if (vector_in) cur = as_batch(cur);
  }
  Tensor result = cur;
  if (vector_in) result.shape = {result.numel()};
  return result;
}

MlpGrads MlpGrads::zeros_like(const MlpParams& p) {
  MlpGrads g;
  for (const auto& l : p.layers) {
    g.w.push_back(Tensor::zeros(l.w.shape));
    g.b.push_back(Tensor::zeros(l.b.shape));
  }
  return g;
}

void MlpGrads::add_scaled(const MlpGrads& other, double scale) {
  for (std::size_t l = 0; l < w.size(); ++l) {
    kernels::active().axpy(scale, other.w[l].data(), w[l].data(), w[l].numel());
    kernels::active().axpy(scale, other.b[l].data(), b[l].data(), b[l].numel());
  }
}

void MlpGrads::scale(double s) {
  for (auto& t : w)
    for (double& x : t.v) x *= s;
  for (auto& t : b)
    for (double& x : t.v) x *= s;
}

Tensor mlp_backward(const MlpTape& tape, const Tensor& out_grad, MlpGrads* grads) {
  if (!tape.params) throw InvalidState("mlp_backward: empty tape");
  const MlpParams& params = *tape.params;
  if (tape.revision != params.revision)
    throw InvalidState("mlp_backward: tape is stale (params were updated)");
  if (tape.acts.size() != params.layers.size() + 1)
    throw InvalidState("mlp_backward: tape does not match net depth");
  if (out_grad.batch_cols() != params.out_dim() ||
      out_grad.batch_rows() != tape.acts.back().batch_rows())
    throw InvalidArgument("mlp_backward: out_grad shape mismatch");

  std::size_t last = params.layers.size() - 1;
  Tensor g = as_batch(out_grad);
  for (std::size_t li = last + 1; li-- > 0;) {
    const auto& layer = params.layers[li];
    const Tensor& out_act = tape.acts[li + 1];
    Tensor ga = (li == last) ? g : times_tanh_deriv(g, as_batch(out_act));
    const Tensor in_act = as_batch(tape.acts[li]);
    if (grads) {
      kernels::active().gemm_tn(in_act.data(), ga.data(), grads->w[li].data(),
                                in_act.batch_rows(), ga.batch_cols(),
                                in_act.batch_cols());
      Tensor bs = colsum(ga);
      kernels::active().axpy(1.0, bs.data(), grads->b[li].data(), bs.numel());
    }
    Tensor gin = Tensor::matrix(ga.batch_rows(), layer.w.rows());
    kernels::active().gemm_nt(ga.data(), layer.w.data(), gin.data(),
                              ga.batch_rows(), layer.w.rows(), layer.w.cols());
    g = std::move(gin);
  }
  if (tape.acts[0].is_vector()) g.shape = {g.numel()};
  return g;
}

double input_grad_norm_penalty(const MlpParams& params, const Tensor& input,
                               std::size_t penalized_dims, double scale,
                               MlpGrads* grads) {
  if (params.out_dim() != 1)
    throw InvalidArgument("input_grad_norm_penalty: output must be scalar");
  if (penalized_dims > params.in_dim())
    throw InvalidArgument("input_grad_norm_penalty: penalized_dims too large");

  MlpTape tape;
  mlp_forward(params, as_batch(input), &tape);
  std::size_t L = params.layers.size();
  std::size_t B = tape.acts[0].batch_rows();

  // First reverse pass: v[l] = d out / d preact_l, p[l] = d out / d act_l.
  std::vector<Tensor> v(L), p(L);
  v[L - 1] = Tensor::zeros({B, std::size_t{1}});
  v[L - 1].fill(1.0);
  for (std::size_t li = L - 1; li-- > 0;) {
    const auto& wnext = params.layers[li + 1].w;
    p[li] = Tensor::matrix(B, wnext.rows());
    kernels::active().gemm_nt(v[li + 1].data(), wnext.data(), p[li].data(), B,
                              wnext.rows(), wnext.cols());
    v[li] = times_tanh_deriv(p[li], tape.acts[li + 1]);
  }
  const auto& w0 = params.layers[0].w;
  Tensor g = Tensor::matrix(B, w0.rows());
  kernels::active().gemm_nt(v[0].data(), w0.data(), g.data(), B, w0.rows(),
                            w0.cols());

  double value = 0.0;
  Tensor r = Tensor::matrix(B, w0.rows());
  for (std::size_t i = 0; i < B; ++i)
    for (std::size_t j = 0; j < penalized_dims; ++j) {
      double gij = g.at(i, j);
      value += gij * gij;
      r.at(i, j) = 2.0 * scale * gij;
    }
  value *= scale;
  if (!grads) return value;

  // Second reverse pass over the gradient computation itself.
  std::vector<Tensor> dv(L), da(L);
  dv[0] = Tensor::matrix(B, w0.cols());
  kernels::active().gemm_nn(r.data(), w0.data(), dv[0].data(), B, w0.cols(),
                            w0.rows());
  kernels::active().gemm_tn(r.data(), v[0].data(), grads->w[0].data(), B,
                            v[0].batch_cols(), r.batch_cols());

  for (std::size_t li = 0; li + 1 < L; ++li) {
    const Tensor& h = tape.acts[li + 1];
    Tensor dp = times_tanh_deriv(dv[li], h);
    da[li] = Tensor::matrix(B, h.batch_cols());
    for (std::size_t i = 0; i < da[li].numel(); ++i) {
      double hv = h.v[i];
      da[li].v[i] = dv[li].v[i] * p[li].v[i] * (-2.0 * hv * (1.0 - hv * hv));
    }
    const auto& wnext = params.layers[li + 1].w;
    kernels::active().gemm_tn(dp.data(), v[li + 1].data(),
                              grads->w[li + 1].data(), B,
                              v[li + 1].batch_cols(), dp.batch_cols());
    if (li + 1 < L - 1) {
      if (dv[li + 1].numel() == 0)
        dv[li + 1] = Tensor::matrix(B, wnext.cols());
      kernels::active().gemm_nn(dp.data(), wnext.data(), dv[li + 1].data(), B,
                                wnext.cols(), wnext.rows());
    }
  }

  // The preactivation contributions flow back through the forward graph.
  for (std::size_t li = L - 1; li-- > 0;) {
    if (da[li].numel() == 0) continue;
    const Tensor in_act = as_batch(tape.acts[li]);
    kernels::active().gemm_tn(in_act.data(), da[li].data(),
                              grads->w[li].data(), B, da[li].batch_cols(),
                              in_act.batch_cols());
    Tensor bs = colsum(da[li]);
    kernels::active().axpy(1.0, bs.data(), grads->b[li].data(), bs.numel());
    if (li > 0) {
      const auto& wl = params.layers[li].w;
      Tensor dh = Tensor::matrix(B, wl.rows());
      kernels::active().gemm_nt(da[li].data(), wl.data(), dh.data(), B,
                                wl.rows(), wl.cols());
      Tensor extra = times_tanh_deriv(dh, tape.acts[li]);
      if (da[li - 1].numel() == 0) da[li - 1] = Tensor::zeros(extra.shape);
      kernels::active().axpy(1.0, extra.data(), da[li - 1].data(),
                             extra.numel());
    }
  }
  return value;
}

MlpAdam MlpAdam::like(const MlpParams& p, const AdamConfig& cfg) {
  MlpAdam a;
  for (const auto& l : p.layers) {
    a.w.push_back(AdamState::like(l.w, cfg));
    a.b.push_back(AdamState::like(l.b, cfg));
  }
  return a;
}

void MlpAdam::step(MlpParams& params, const MlpGrads& grads) {
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    adam_step(params.layers[l].w, grads.w[l], w[l]);
    adam_step(params.layers[l].b, grads.b[l], b[l]);
  }
  params.revision += 1;
}

}  // namespace rgm
