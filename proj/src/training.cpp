#include "rgm/training.hpp"

#include <cmath>

#include "rgm/errors.hpp"
#include "rgm/kernels.hpp"

namespace rgm {

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Posterior: return "posterior";
    case Algorithm::Relaxed: return "relaxed";
    case Algorithm::Mmse: return "mmse";
    case Algorithm::Direct: return "direct";
  }
  return "?";
}

Algorithm algorithm_from_string(const std::string& s) {
  if (s == "posterior") return Algorithm::Posterior;
  if (s == "relaxed") return Algorithm::Relaxed;
  if (s == "mmse") return Algorithm::Mmse;
  if (s == "direct") return Algorithm::Direct;
  throw InvalidArgument("unknown algorithm: " + s);
}

json train_config_to_json(const TrainConfig& c) {
  json j;
  j["schedule"] = {{"kind", to_string(c.schedule.kind)},
                   {"steps", c.schedule.total_steps},
                   {"data_shape", {c.schedule.shape.h, c.schedule.shape.w,
                                   c.schedule.shape.c}},
                   {"beta_min", c.schedule.beta.beta_min},
                   {"beta_max", c.schedule.beta.beta_max}};
  j["algorithm"] = to_string(c.algorithm);
  json prior;
  prior["kind"] = to_string(c.prior.kind);
  prior["r1_gamma"] = c.prior.r1_gamma;
  prior["disc_hidden"] = c.prior.disc_hidden;
  prior["disc_depth"] = c.prior.disc_depth;
  prior["mmd_bandwidths"] = c.prior.mmd.bandwidths;
  prior["dswd"] = {{"num_projections", c.prior.dswd.num_projections},
                   {"dsw_iterations", c.prior.dswd.dsw_iterations},
                   {"lambda_c", c.prior.dswd.lambda_c},
                   {"sampler_lr", c.prior.dswd.sampler_lr},
                   {"sampler_hidden", c.prior.dswd.sampler_hidden}};
  j["prior"] = prior;
  if (std::isinf(c.lambda))
    j["lambda"] = "inf";
  else
    j["lambda"] = c.lambda;
  j["lr_g"] = c.lr_g;
  j["lr_d"] = c.lr_d;
  j["adam_beta1"] = c.adam_beta1;
  j["adam_beta2"] = c.adam_beta2;
  j["batch_size"] = c.batch_size;
  j["iterations"] = c.iterations;
  j["seed"] = c.seed;
  j["log_every"] = c.log_every;
  j["generator"] = {{"z_dim", c.generator.z_dim},
                    {"hidden", c.generator.hidden},
                    {"depth", c.generator.depth},
                    {"encoding", c.generator.encoding == StepEncoding::OneHot
                                     ? "onehot"
                                     : "scalar"}};
  j["use_z"] = c.use_z;
  return j;
}

TrainConfig train_config_from_json(const json& j) {
  TrainConfig c;
  const json& s = j.at("schedule");
  c.schedule.kind = schedule_kind_from_string(s.at("kind").get<std::string>());
  c.schedule.total_steps = s.at("steps").get<int>();
  auto sh = s.at("data_shape");
  c.schedule.shape = DataShape{sh.at(0).get<std::size_t>(),
                               sh.at(1).get<std::size_t>(),
                               sh.at(2).get<std::size_t>()};
  if (s.contains("beta_min")) c.schedule.beta.beta_min = s.at("beta_min").get<double>();
  if (s.contains("beta_max")) c.schedule.beta.beta_max = s.at("beta_max").get<double>();
  c.algorithm = algorithm_from_string(j.at("algorithm").get<std::string>());
  if (j.contains("prior")) {
    const json& p = j.at("prior");
    c.prior.kind = prior_kind_from_string(p.value("kind", "kld"));
    c.prior.r1_gamma = p.value("r1_gamma", c.prior.r1_gamma);
    c.prior.disc_hidden = p.value("disc_hidden", c.prior.disc_hidden);
    c.prior.disc_depth = p.value("disc_depth", c.prior.disc_depth);
    if (p.contains("mmd_bandwidths"))
      c.prior.mmd.bandwidths = p.at("mmd_bandwidths").get<std::vector<double>>();
    if (p.contains("dswd")) {
      const json& d = p.at("dswd");
      c.prior.dswd.num_projections =
          d.value("num_projections", c.prior.dswd.num_projections);
      c.prior.dswd.dsw_iterations =
          d.value("dsw_iterations", c.prior.dswd.dsw_iterations);
      c.prior.dswd.lambda_c = d.value("lambda_c", c.prior.dswd.lambda_c);
      c.prior.dswd.sampler_lr = d.value("sampler_lr", c.prior.dswd.sampler_lr);
      c.prior.dswd.sampler_hidden =
          d.value("sampler_hidden", c.prior.dswd.sampler_hidden);
    }
  }
  if (j.at("lambda").is_string()) {
    if (j.at("lambda").get<std::string>() != "inf")
      throw InvalidArgument("lambda: expected a number or \"inf\"");
    c.lambda = std::numeric_limits<double>::infinity();
  } else {
    c.lambda = j.at("lambda").get<double>();
  }
  c.lr_g = j.value("lr_g", c.lr_g);
  c.lr_d = j.value("lr_d", c.lr_d);
  c.adam_beta1 = j.value("adam_beta1", c.adam_beta1);
  c.adam_beta2 = j.value("adam_beta2", c.adam_beta2);
  c.batch_size = j.value("batch_size", c.batch_size);
  c.iterations = j.value("iterations", c.iterations);
  c.seed = j.value("seed", c.seed);
  c.log_every = j.value("log_every", c.log_every);
  if (j.contains("generator")) {
    const json& g = j.at("generator");
    c.generator.z_dim = g.value("z_dim", c.generator.z_dim);
    c.generator.hidden = g.value("hidden", c.generator.hidden);
    c.generator.depth = g.value("depth", c.generator.depth);
    c.generator.encoding = g.value("encoding", std::string("scalar")) == "onehot"
                               ? StepEncoding::OneHot
                               : StepEncoding::ScalarOverT;
  }
  c.use_z = j.value("use_z", true);
  return c;
}

namespace {

void validate_config(const TrainConfig& cfg) {
  if (cfg.batch_size < 1) throw InvalidArgument("train: batch_size must be >= 1");
  if (!(cfg.lambda > 0))
    throw InvalidArgument("train: lambda must be positive (or infinite)");
  if (!(cfg.lr_g > 0) || !(cfg.lr_d > 0))
    throw InvalidArgument("train: learning rates must be positive");
  if (cfg.log_every < 1) throw InvalidArgument("train: log_every must be >= 1");
}

Tensor gather_rows(const Tensor& dataset, const std::vector<std::size_t>& rows) {
  std::size_t d = dataset.batch_cols();
  Tensor out = Tensor::matrix(rows.size(), d);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double* src = dataset.data() + rows[i] * d;
    double* dst = out.data() + i * d;
    for (std::size_t j = 0; j < d; ++j) dst[j] = src[j];
  }
  return out;
}

// base + s * noise, elementwise
Tensor with_noise(Tensor base, const Tensor& noise, double s) {
  if (s != 0.0)
    kernels::active().axpy(s, noise.data(), base.data(), base.numel());
  return base;
}

bool needs_prev_step(Algorithm a) {
  return a == Algorithm::Relaxed || a == Algorithm::Posterior;
}

}  // namespace

TrainerState init_trainer(const TrainConfig& cfg) {
  validate_config(cfg);
  TrainerState st;
  st.schedule = cfg.schedule.build();
  if (cfg.algorithm == Algorithm::Posterior && !st.schedule.fully_decomposable())
    throw UnsupportedSchedule(
        "posterior training requires a step-wise decomposable schedule");

  st.gen_cfg = cfg.generator;
  st.gen_cfg.data_dim = st.schedule.data_shape.dim();
  if (cfg.algorithm == Algorithm::Mmse) st.gen_cfg.z_dim = 0;

  st.disc_cfg.data_dim = st.gen_cfg.data_dim;
  st.disc_cfg.encoding = st.gen_cfg.encoding;
  st.disc_cfg.hidden = cfg.prior.disc_hidden;
  st.disc_cfg.depth = cfg.prior.disc_depth;

  st.rng = Rng(cfg.seed);
  st.gen = init_params(generator_mlp_config(st.gen_cfg, st.schedule.total_steps),
                       st.rng);
  st.gen_opt = MlpAdam::like(
      st.gen, AdamConfig{.lr = cfg.lr_g, .beta1 = cfg.adam_beta1,
                         .beta2 = cfg.adam_beta2});

  bool uses_prior = cfg.algorithm != Algorithm::Mmse;
  if (uses_prior && cfg.prior.kind == PriorKind::Kld) {
    st.disc = init_params(
        discriminator_mlp_config(st.disc_cfg, st.schedule.total_steps), st.rng);
    st.disc_opt = MlpAdam::like(
        *st.disc, AdamConfig{.lr = cfg.lr_d, .beta1 = cfg.adam_beta1,
                             .beta2 = cfg.adam_beta2});
  }
  if (uses_prior && cfg.prior.kind == PriorKind::Dswd)
    st.dswd = make_dswd_state(st.gen_cfg.data_dim, cfg.prior.dswd, st.rng);
  return st;
}

Checkpoint make_checkpoint(const TrainerState& st, const TrainConfig& cfg) {
  Checkpoint c;
  c.schedule = cfg.schedule;
  c.algorithm = to_string(cfg.algorithm);
  c.prior = cfg.algorithm == Algorithm::Mmse ? "none" : to_string(cfg.prior.kind);
  c.gen_cfg = st.gen_cfg;
  c.gen = st.gen;
  if (st.disc) c.disc = *st.disc;
  if (st.dswd) c.dswd_sampler = st.dswd->sampler;
  c.step = st.step;
  c.seed = cfg.seed;
  ResumeState rs;
  rs.gen_opt = st.gen_opt;
  if (st.disc_opt) rs.disc_opt = *st.disc_opt;
  if (st.dswd) rs.dswd_opt = st.dswd->opt;
  rs.rng = RngSnapshot::of(st.rng);
  c.resume = std::move(rs);
  return c;
}

TrainerState trainer_from_checkpoint(const TrainConfig& cfg,
                                     const Checkpoint& ckpt) {
  validate_config(cfg);
  if (!(ckpt.schedule == cfg.schedule))
    throw InvalidState("resume: checkpoint schedule differs from config");
  if (ckpt.algorithm != to_string(cfg.algorithm))
    throw InvalidState("resume: checkpoint algorithm differs from config");
  if (!ckpt.resume)
    throw InvalidState("resume: checkpoint carries no optimizer state");

  TrainerState st;
  st.schedule = cfg.schedule.build();
  st.gen_cfg = ckpt.gen_cfg;
  st.disc_cfg.data_dim = st.gen_cfg.data_dim;
  st.disc_cfg.encoding = st.gen_cfg.encoding;
  st.disc_cfg.hidden = cfg.prior.disc_hidden;
  st.disc_cfg.depth = cfg.prior.disc_depth;
  st.gen = ckpt.gen;
  st.gen_opt = ckpt.resume->gen_opt;
  if (ckpt.disc) {
    st.disc = *ckpt.disc;
    if (!ckpt.resume->disc_opt)
      throw InvalidState("resume: missing discriminator optimizer state");
    st.disc_opt = *ckpt.resume->disc_opt;
  }
  if (ckpt.dswd_sampler) {
    DswdState ds;
    ds.sampler = *ckpt.dswd_sampler;
    if (!ckpt.resume->dswd_opt)
      throw InvalidState("resume: missing sampler optimizer state");
    ds.opt = *ckpt.resume->dswd_opt;
    st.dswd = std::move(ds);
  }
  st.rng = ckpt.resume->rng.restore();
  st.step = ckpt.step;
  return st;
}

StepDraws draw_step(const TrainConfig& cfg, TrainerState& st,
                    std::size_t dataset_rows) {
  if (dataset_rows == 0) throw InvalidArgument("draw_step: empty dataset");
  std::size_t B = cfg.batch_size;
  int T = st.schedule.total_steps;

  std::vector<std::size_t> rows(B);
  std::vector<int> ks(B);
  for (std::size_t e = 0; e < B; ++e) {
    rows[e] = st.rng.uniform_index(dataset_rows);
    ks[e] = 1 + static_cast<int>(st.rng.uniform_index(static_cast<std::uint64_t>(T)));
  }

  StepDraws draws;
  for (int k = 1; k <= T; ++k) {
    StepDraws::Group g;
    g.k = k;
    for (std::size_t e = 0; e < B; ++e)
      if (ks[e] == k) g.rows.push_back(rows[e]);
    if (g.rows.empty()) continue;
    std::size_t n = g.rows.size();
    const StepOperator& cur = st.schedule.steps[static_cast<std::size_t>(k)];
    const StepOperator& prev = st.schedule.steps[static_cast<std::size_t>(k - 1)];

    std::size_t zdim = st.gen_cfg.z_dim;
    if (zdim > 0 && cfg.use_z)
      g.z = gaussian_matrix(n, zdim, st.rng);
    else
      g.z = Tensor::zeros({n, zdim});

    g.noise_k = cur.noise_std > 0 ? gaussian_matrix(n, cur.dim(), st.rng)
                                  : Tensor::zeros({n, cur.dim()});
    if (needs_prev_step(cfg.algorithm)) {
      g.noise_km1 = prev.noise_std > 0 ? gaussian_matrix(n, prev.dim(), st.rng)
                                       : Tensor::zeros({n, prev.dim()});
      bool regen_noisy = cfg.algorithm == Algorithm::Relaxed
                             ? prev.noise_std > 0
                             : posterior_coeffs(st.schedule, k).std > 0;
      g.noise_regen = regen_noisy ? gaussian_matrix(n, prev.dim(), st.rng)
                                  : Tensor::zeros({n, prev.dim()});
    }
    draws.groups.push_back(std::move(g));
  }
  return draws;
}

namespace {

struct GroupTensors {
  Tensor x;       // clean rows
  Tensor y_k;     // degraded at k
  Tensor x_hat;   // restoration
  Tensor y_hat;   // fake sample fed to the prior
  Tensor y_real;  // real sample fed to the prior
  int prior_index = 0;
};

// Shared between the discriminator phase and the generator phase so both see
// the same realizations.
GroupTensors materialize(const TrainerState& st, const TrainConfig& cfg,
                         const Tensor& dataset, const StepDraws::Group& g,
                         MlpTape* tape) {
  const DegradationSchedule& sched = st.schedule;
  int k = g.k;
  const StepOperator& cur = sched.steps[static_cast<std::size_t>(k)];
  const StepOperator& prev = sched.steps[static_cast<std::size_t>(k - 1)];

  GroupTensors t;
  t.x = gather_rows(dataset, g.rows);
  t.y_k = with_noise(apply_step(sched, k, t.x), g.noise_k, cur.noise_std);
  t.x_hat = generator_apply(st.gen, st.gen_cfg, sched, t.y_k, k, g.z, tape);

  switch (cfg.algorithm) {
    case Algorithm::Mmse:
      break;
    case Algorithm::Relaxed:
      t.y_hat = with_noise(apply_step(sched, k - 1, t.x_hat), g.noise_regen,
                           prev.noise_std);
      t.y_real = with_noise(apply_step(sched, k - 1, t.x), g.noise_km1,
                            prev.noise_std);
      t.prior_index = k - 1;
      break;
    case Algorithm::Posterior: {
      PosteriorCoeffs pc = posterior_coeffs(sched, k);
      t.y_hat = Tensor::zeros(t.x_hat.shape);
      for (std::size_t i = 0; i < t.y_hat.numel(); ++i)
        t.y_hat.v[i] = pc.coef_xhat * t.x_hat.v[i] + pc.coef_yk * t.y_k.v[i] +
                       pc.std * g.noise_regen.v[i];
      t.y_real = with_noise(apply_step(sched, k - 1, t.x), g.noise_km1,
                            prev.noise_std);
      t.prior_index = k - 1;
      break;
    }
    case Algorithm::Direct:
      t.y_hat = t.x_hat;
      t.y_real = t.x;
      t.prior_index = 0;
      break;
  }
  return t;
}

// Generator objective over pre-materialized groups. mats/tapes must come from
// the same draws with the current generator parameters.
double generator_loss_on(TrainerState& st, const TrainConfig& cfg,
                         const StepDraws& draws,
                         std::vector<GroupTensors>& mats,
                         std::vector<MlpTape>& tapes, MlpGrads* grads,
                         double* fidelity_out, double* prior_out) {
  const DegradationSchedule& sched = st.schedule;
  double inv_lambda = std::isinf(cfg.lambda) ? 0.0 : 1.0 / cfg.lambda;
  std::size_t B = 0;
  for (const auto& g : draws.groups) B += g.rows.size();
  if (B == 0) throw InvalidArgument("generator_loss: empty draws");

  double loss = 0.0, fid_log = 0.0, prior_log = 0.0;
  for (std::size_t gi = 0; gi < draws.groups.size(); ++gi) {
    const auto& g = draws.groups[gi];
    GroupTensors& t = mats[gi];
    MlpTape& tape = tapes[gi];
    double w = static_cast<double>(g.rows.size()) / static_cast<double>(B);

    if (cfg.algorithm == Algorithm::Mmse) {
      double val = kernels::active().sum_sq_diff(t.x_hat.data(), t.x.data(),
                                                 t.x.numel()) /
                   static_cast<double>(B);
      loss += val;
      if (grads) {
        Tensor gx = Tensor::zeros(t.x_hat.shape);
        double c = 2.0 / static_cast<double>(B);
        for (std::size_t i = 0; i < gx.numel(); ++i)
          gx.v[i] = c * (t.x_hat.v[i] - t.x.v[i]);
        mlp_backward(tape, gx, grads);
      }
      continue;
    }

    // Fidelity term.
    Tensor gfid;
    double fid = 0.0;
    if (cfg.algorithm == Algorithm::Posterior)
      fid = fidelity_transition(sched, g.k, t.y_hat, t.y_k,
                                grads ? &gfid : nullptr);
    else
      fid = fidelity_full(sched, g.k, t.x_hat, t.y_k, grads ? &gfid : nullptr);

    // Prior term on (y_hat, y_real) at prior_index.
    Tensor gprior;
    double prior_val = 0.0;
    std::size_t n = g.rows.size();
    switch (cfg.prior.kind) {
      case PriorKind::Kld:
        prior_val = kld_generator_term(*st.disc, st.disc_cfg, sched, t.y_hat,
                                       t.prior_index, grads ? &gprior : nullptr);
        break;
      case PriorKind::Mmd:
        if (n >= 2)
          prior_val = mmd(t.y_hat, t.y_real, cfg.prior.mmd,
                          grads ? &gprior : nullptr);
        break;
      case PriorKind::Dswd: {
        if (n >= 1) {
          Tensor fake_l = lift_to_data(sched, t.prior_index, t.y_hat);
          Tensor real_l = lift_to_data(sched, t.prior_index, t.y_real);
          Tensor glift;
          prior_val = dswd(fake_l, real_l, cfg.prior.dswd, *st.dswd, st.rng,
                           grads ? &glift : nullptr);
          if (grads)
            gprior = lift_to_data_adjoint(sched, t.prior_index, glift);
        }
        break;
      }
    }

    loss += w * (prior_val + inv_lambda * fid);
    fid_log += w * fid;
    prior_log += w * prior_val;

    if (grads) {
      Tensor gx_hat = Tensor::zeros(t.x_hat.shape);
      Tensor gy_hat = Tensor::zeros(t.y_hat.shape);
      if (gprior.numel() > 0)
        kernels::active().axpy(w, gprior.data(), gy_hat.data(), gy_hat.numel());

      switch (cfg.algorithm) {
        case Algorithm::Relaxed: {
          Tensor chained = apply_step_adjoint(sched, g.k - 1, gy_hat);
          kernels::active().axpy(1.0, chained.data(), gx_hat.data(),
                                 gx_hat.numel());
          kernels::active().axpy(w * inv_lambda, gfid.data(), gx_hat.data(),
                                 gx_hat.numel());
          break;
        }
        case Algorithm::Posterior: {
          kernels::active().axpy(w * inv_lambda, gfid.data(), gy_hat.data(),
                                 gy_hat.numel());
          PosteriorCoeffs pc = posterior_coeffs(sched, g.k);
          kernels::active().axpy(pc.coef_xhat, gy_hat.data(), gx_hat.data(),
                                 gx_hat.numel());
          break;
        }
        case Algorithm::Direct: {
          kernels::active().axpy(1.0, gy_hat.data(), gx_hat.data(),
                                 gx_hat.numel());
          kernels::active().axpy(w * inv_lambda, gfid.data(), gx_hat.data(),
                                 gx_hat.numel());
          break;
        }
        case Algorithm::Mmse:
          break;
      }
      mlp_backward(tape, gx_hat, grads);
    }
  }
  if (fidelity_out) *fidelity_out = fid_log;
  if (prior_out) *prior_out = prior_log;
  return loss;
}

}  // namespace

double generator_loss(TrainerState& st, const TrainConfig& cfg,
                      const Tensor& dataset, const StepDraws& draws,
                      MlpGrads* grads, double* fidelity_out,
                      double* prior_out) {
  std::vector<GroupTensors> mats(draws.groups.size());
  std::vector<MlpTape> tapes(draws.groups.size());
  for (std::size_t gi = 0; gi < draws.groups.size(); ++gi)
    mats[gi] = materialize(st, cfg, dataset, draws.groups[gi],
                           grads ? &tapes[gi] : nullptr);
  return generator_loss_on(st, cfg, draws, mats, tapes, grads, fidelity_out,
                           prior_out);
}

StepLosses train_iteration(TrainerState& st, const TrainConfig& cfg,
                           const Tensor& dataset) {
  if (dataset.batch_cols() != st.schedule.data_shape.dim())
    throw InvalidArgument("train: dataset dim does not match schedule");
  StepDraws draws = draw_step(cfg, st, dataset.batch_rows());
  std::size_t B = 0;
  for (const auto& g : draws.groups) B += g.rows.size();

  // One materialization serves both phases: the generator is untouched by
  // the discriminator update, so the tapes stay valid.
  std::vector<GroupTensors> mats(draws.groups.size());
  std::vector<MlpTape> tapes(draws.groups.size());
  for (std::size_t gi = 0; gi < draws.groups.size(); ++gi)
    mats[gi] = materialize(st, cfg, dataset, draws.groups[gi], &tapes[gi]);

  StepLosses out;

  bool kld = cfg.algorithm != Algorithm::Mmse && cfg.prior.kind == PriorKind::Kld;
  if (kld) {
    MlpGrads dgrads = MlpGrads::zeros_like(*st.disc);
    double dloss = 0.0;
    for (std::size_t gi = 0; gi < draws.groups.size(); ++gi) {
      const GroupTensors& t = mats[gi];
      double w = static_cast<double>(draws.groups[gi].rows.size()) /
                 static_cast<double>(B);
      MlpGrads local = MlpGrads::zeros_like(*st.disc);
      dloss += w * discriminator_loss(*st.disc, st.disc_cfg, st.schedule,
                                      t.y_real, t.y_hat, t.prior_index,
                                      cfg.prior.r1_gamma, &local);
      dgrads.add_scaled(local, w);
    }
    st.disc_opt->step(*st.disc, dgrads);
    out.loss_d_or_prior = dloss;
  }

  MlpGrads ggrads = MlpGrads::zeros_like(st.gen);
  double prior_val = 0.0;
  out.loss_g = generator_loss_on(st, cfg, draws, mats, tapes, &ggrads,
                                 &out.fidelity, &prior_val);
  if (!kld) out.loss_d_or_prior = prior_val;
  st.gen_opt.step(st.gen, ggrads);
  st.step += 1;

  if (!std::isfinite(out.loss_g) || !std::isfinite(out.loss_d_or_prior) ||
      !std::isfinite(out.fidelity))
    throw NumericalFailure("non-finite loss at iteration " +
                           std::to_string(st.step));
  return out;
}

namespace {

RunRecord run_loop(TrainerState& st, const TrainConfig& cfg,
                   const Tensor& dataset) {
  RunRecord rec;
  rec.config = train_config_to_json(cfg);
  rec.config_hash = config_hash(rec.config);
  for (std::uint64_t it = st.step; it < cfg.iterations; ++it) {
    StepLosses losses;
    try {
      losses = train_iteration(st, cfg, dataset);
    } catch (const NumericalFailure& e) {
      rec.aborted = true;
      rec.abort_reason = e.what();
      break;
    }
    std::uint64_t done = it + 1;
    if (done % cfg.log_every == 0 || done == cfg.iterations)
      rec.points.push_back(
          {done, losses.loss_g, losses.loss_d_or_prior, losses.fidelity});
  }
  rec.final_checkpoint = make_checkpoint(st, cfg);
  return rec;
}

}  // namespace

RunRecord train(const TrainConfig& cfg, const Tensor& dataset) {
  TrainerState st = init_trainer(cfg);
  return run_loop(st, cfg, dataset);
}

RunRecord train_resume(const TrainConfig& cfg, const Tensor& dataset,
                       const Checkpoint& from) {
  TrainerState st = trainer_from_checkpoint(cfg, from);
  return run_loop(st, cfg, dataset);
}

}  // namespace rgm
