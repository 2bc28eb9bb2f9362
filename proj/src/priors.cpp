#include "rgm/priors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rgm/errors.hpp"
#include "rgm/kernels.hpp"

namespace rgm {

std::string to_string(PriorKind k) {
  switch (k) {
    case PriorKind::Kld: return "kld";
    case PriorKind::Mmd: return "mmd";
    case PriorKind::Dswd: return "dswd";
  }
  return "?";
}

PriorKind prior_kind_from_string(const std::string& s) {
  if (s == "kld") return PriorKind::Kld;
  if (s == "mmd") return PriorKind::Mmd;
  if (s == "dswd") return PriorKind::Dswd;
  throw InvalidArgument("unknown prior kind: " + s);
}

double softplus(double x) {
  return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

double sigmoid(double x) {
  return x >= 0 ? 1.0 / (1.0 + std::exp(-x))
                : std::exp(x) / (1.0 + std::exp(x));
}

double kld_generator_term(const MlpParams& disc, const DiscriminatorConfig& cfg,
                          const DegradationSchedule& s, const Tensor& fake,
                          int k, Tensor* grad_fake) {
  if (fake.batch_rows() == 0) throw InvalidArgument("kld term: empty batch");
  MlpTape tape;
  Tensor logits = discriminator_apply(disc, cfg, s, fake, k, &tape);
  double inv_n = 1.0 / static_cast<double>(fake.batch_rows());
  double value = 0.0;
  for (double l : logits.v) value -= l;  // log(1-D) - log D == -logit
  value *= inv_n;
  if (grad_fake) {
    Tensor dlogits = Tensor::zeros(logits.is_vector()
                                       ? std::vector<std::size_t>{logits.numel()}
                                       : logits.shape);
    dlogits.fill(-inv_n);
    Tensor din = mlp_backward(tape, dlogits, nullptr);
    *grad_fake = input_grad_to_y(s, k, cfg.data_dim, din);
    if (fake.is_vector()) grad_fake->shape = {grad_fake->numel()};
  }
  return value;
}

double discriminator_loss(const MlpParams& disc, const DiscriminatorConfig& cfg,
                          const DegradationSchedule& s, const Tensor& real,
                          const Tensor& fake, int k, double r1_gamma,
                          MlpGrads* grads) {
  std::size_t n_real = real.batch_rows(), n_fake = fake.batch_rows();
  if (n_real == 0 || n_fake == 0)
    throw InvalidArgument("discriminator_loss: empty batch");

  MlpTape tape_r, tape_f;
  Tensor lr = discriminator_apply(disc, cfg, s, real, k, &tape_r);
  Tensor lf = discriminator_apply(disc, cfg, s, fake, k, &tape_f);

  double loss = 0.0;
  for (double l : lr.v) loss += softplus(-l);
  for (double l : lf.v) loss += softplus(l);
  loss = loss / static_cast<double>(n_real);

  if (grads) {
    Tensor dr = Tensor::zeros({n_real, std::size_t{1}});
    Tensor df = Tensor::zeros({n_fake, std::size_t{1}});
    double inv = 1.0 / static_cast<double>(n_real);
    for (std::size_t i = 0; i < n_real; ++i)
      dr.v[i] = (sigmoid(lr.v[i]) - 1.0) * inv;
    for (std::size_t i = 0; i < n_fake; ++i) df.v[i] = sigmoid(lf.v[i]) * inv;
    mlp_backward(tape_r, dr, grads);
    mlp_backward(tape_f, df, grads);
  }

  if (r1_gamma > 0.0) {
    Tensor din = discriminator_input(cfg, s, real, k);
    double scale = r1_gamma / (2.0 * static_cast<double>(n_real));
    loss += input_grad_norm_penalty(disc, din, cfg.data_dim, scale, grads);
  }
  return loss;
}

double mmd(const Tensor& x, const Tensor& y, const MmdConfig& cfg,
           Tensor* grad_x) {
  std::size_t m = x.batch_rows();
  if (m < 2 || y.batch_rows() != m)
    throw InvalidArgument("mmd: need equal batches with M >= 2");
  std::size_t d = x.batch_cols();
  if (y.batch_cols() != d) throw InvalidArgument("mmd: dim mismatch");
  if (cfg.bandwidths.empty()) throw InvalidArgument("mmd: no bandwidths");

  std::vector<double> coef(cfg.bandwidths.size());
  for (std::size_t b = 0; b < coef.size(); ++b) {
    if (!(cfg.bandwidths[b] > 0)) throw InvalidArgument("mmd: bandwidth <= 0");
    coef[b] = 1.0 / (2.0 * cfg.bandwidths[b] * cfg.bandwidths[b]);
  }

  if (grad_x) *grad_x = Tensor::zeros(x.shape);
  const auto& ops = kernels::active();
  std::vector<double> d2(m), arg(m), ex(m), ksum(m), wsum(m);

  // Accumulates sum_{j != i} of the kernel mixture between rows of a and b;
  // when gx is non-null also adds the gradient w.r.t. a's rows with the given
  // sign convention.
  auto pair_block = [&](const Tensor& a, const Tensor& b, bool same_set,
                        double gscale, Tensor* gx) {
    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double* ai = a.data() + i * d;
      for (std::size_t j = 0; j < m; ++j)
        d2[j] = ops.sum_sq_diff(ai, b.data() + j * d, d);
      std::fill(ksum.begin(), ksum.end(), 0.0);
      std::fill(wsum.begin(), wsum.end(), 0.0);
      for (std::size_t bw = 0; bw < coef.size(); ++bw) {
        for (std::size_t j = 0; j < m; ++j) arg[j] = -coef[bw] * d2[j];
        ops.exp_vec(arg.data(), ex.data(), m);
        for (std::size_t j = 0; j < m; ++j) {
          ksum[j] += ex[j];
          wsum[j] += coef[bw] * ex[j];
        }
      }
      for (std::size_t j = 0; j < m; ++j) {
        if (same_set && i == j) continue;
        total += ksum[j];
        if (gx) {
          const double* bj = b.data() + j * d;
          double* gi = gx->data() + i * d;
          double w = gscale * (-2.0) * wsum[j];
          for (std::size_t c = 0; c < d; ++c) gi[c] += w * (ai[c] - bj[c]);
        }
      }
    }
    return total;
  };

  double inv_pairs = 2.0 / (static_cast<double>(m) * static_cast<double>(m - 1));
  double vxx = pair_block(x, x, true, 2.0 * inv_pairs, grad_x);
  double vxy = pair_block(x, y, true, -2.0 * inv_pairs, grad_x);
  double vyy = pair_block(y, y, true, 0.0, nullptr);
  return inv_pairs * (vxx - 2.0 * vxy + vyy);
}

double sliced_w2_1d(const std::vector<double>& xs_sorted,
                    const std::vector<double>& ys_sorted) {
  if (xs_sorted.size() != ys_sorted.size())
    throw InvalidArgument("sliced_w2_1d: length mismatch");
  if (xs_sorted.empty()) throw InvalidArgument("sliced_w2_1d: empty input");
  double s = 0.0;
  for (std::size_t i = 0; i < xs_sorted.size(); ++i) {
    double dd = xs_sorted[i] - ys_sorted[i];
    s += dd * dd;
  }
  return s / static_cast<double>(xs_sorted.size());
}

DswdState make_dswd_state(std::size_t dim, const DswdConfig& cfg, Rng& rng) {
  DswdState st;
  MlpConfig mc;
  mc.dims = {dim, cfg.sampler_hidden, dim};
  st.sampler = init_params(mc, rng);
  st.opt = MlpAdam::like(st.sampler, AdamConfig{.lr = cfg.sampler_lr});
  return st;
}

namespace {

struct SortedProjection {
  std::vector<double> values;        // sorted
  std::vector<std::size_t> order;    // original row of each rank
};

SortedProjection project_sorted(const Tensor& pts, const double* dir,
                                std::size_t d) {
  std::size_t n = pts.batch_rows();
  SortedProjection sp;
  sp.values.resize(n);
  sp.order.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    sp.values[i] = kernels::active().dot(pts.data() + i * d, dir, d);
  std::iota(sp.order.begin(), sp.order.end(), 0);
  std::stable_sort(sp.order.begin(), sp.order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return sp.values[a] < sp.values[b];
                   });
  std::vector<double> sorted(n);
  for (std::size_t r = 0; r < n; ++r) sorted[r] = sp.values[sp.order[r]];
  sp.values = std::move(sorted);
  return sp;
}

// Rows of `raw` normalized to unit length; grad chaining handled by caller.
Tensor normalize_rows(const Tensor& raw, std::vector<double>* norms) {
  Tensor out = raw;
  std::size_t d = raw.batch_cols();
  for (std::size_t i = 0; i < raw.batch_rows(); ++i) {
    double* row = out.data() + i * d;
    double nrm = std::sqrt(kernels::active().dot(row, row, d));
    if (nrm < 1e-12) nrm = 1e-12;
    for (std::size_t c = 0; c < d; ++c) row[c] /= nrm;
    if (norms) (*norms)[i] = nrm;
  }
  return out;
}

}  // namespace

double dswd(const Tensor& x, const Tensor& y, const DswdConfig& cfg,
            DswdState& state, Rng& rng, Tensor* grad_x) {
  std::size_t n = x.batch_rows();
  if (n == 0 || y.batch_rows() != n)
    throw InvalidArgument("dswd: need equal nonempty batches");
  std::size_t d = x.batch_cols();
  if (y.batch_cols() != d) throw InvalidArgument("dswd: dim mismatch");
  std::size_t P = cfg.num_projections;
  if (P < 1) throw InvalidArgument("dswd: need num_projections >= 1");

  Tensor noise = gaussian_matrix(P, d, rng);

  // Inner ascent on the projection sampler; x and y held fixed.
  for (int it = 0; it < cfg.dsw_iterations; ++it) {
    MlpTape tape;
    Tensor raw = mlp_forward(state.sampler, noise, &tape);
    std::vector<double> norms(P);
    Tensor dirs = normalize_rows(raw, &norms);

    Tensor ddirs = Tensor::zeros(dirs.shape);
    for (std::size_t p = 0; p < P; ++p) {
      const double* w = dirs.data() + p * d;
      SortedProjection px = project_sorted(x, w, d);
      SortedProjection py = project_sorted(y, w, d);
      double c = 2.0 / (static_cast<double>(n) * static_cast<double>(P));
      for (std::size_t r = 0; r < n; ++r) {
        double diff = px.values[r] - py.values[r];
        const double* xi = x.data() + px.order[r] * d;
        const double* yi = y.data() + py.order[r] * d;
        double* g = ddirs.data() + p * d;
        for (std::size_t cdim = 0; cdim < d; ++cdim)
          g[cdim] += c * diff * (xi[cdim] - yi[cdim]);
      }
    }
    if (P > 1 && cfg.lambda_c > 0) {
      double cr = 4.0 * cfg.lambda_c /
                  (static_cast<double>(P) * static_cast<double>(P - 1));
      for (std::size_t a = 0; a < P; ++a)
        for (std::size_t b = 0; b < P; ++b) {
          if (a == b) continue;
          double ip = kernels::active().dot(dirs.data() + a * d,
                                            dirs.data() + b * d, d);
          kernels::active().axpy(-cr * ip, dirs.data() + b * d,
                                 ddirs.data() + a * d, d);
        }
    }

    // Chain through row normalization, then ascend.
    Tensor draw = Tensor::zeros(raw.shape);
    for (std::size_t p = 0; p < P; ++p) {
      const double* w = dirs.data() + p * d;
      const double* g = ddirs.data() + p * d;
      double gw = kernels::active().dot(g, w, d);
      double* out = draw.data() + p * d;
      for (std::size_t c = 0; c < d; ++c) out[c] = (g[c] - gw * w[c]) / norms[p];
    }
    MlpGrads grads = MlpGrads::zeros_like(state.sampler);
    mlp_backward(tape, draw, &grads);
    grads.scale(-1.0);  // ascent
    state.opt.step(state.sampler, grads);
  }

  Tensor raw = mlp_forward(state.sampler, noise, nullptr);
  Tensor dirs = normalize_rows(raw, nullptr);
  if (grad_x) *grad_x = Tensor::zeros(x.shape);
  double value = 0.0;
  for (std::size_t p = 0; p < P; ++p) {
    const double* w = dirs.data() + p * d;
    SortedProjection px = project_sorted(x, w, d);
    SortedProjection py = project_sorted(y, w, d);
    std::vector<double> sorted_y = py.values;
    value += sliced_w2_1d(px.values, sorted_y);
    if (grad_x) {
      double c = 2.0 / (static_cast<double>(n) * static_cast<double>(P));
      for (std::size_t r = 0; r < n; ++r) {
        double diff = px.values[r] - py.values[r];
        double* gi = grad_x->data() + px.order[r] * d;
        kernels::active().axpy(c * diff, w, gi, d);
      }
    }
  }
  return value / static_cast<double>(P);
}

}  // namespace rgm
