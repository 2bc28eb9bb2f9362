#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <filesystem>

#include "doctest.h"
#include "rgm/checkpoint.hpp"
#include "rgm/finite_diff.hpp"
#include "rgm/io.hpp"
#include "rgm/linalg.hpp"
#include "rgm/models.hpp"

using namespace rgm;

namespace {

// Flattens parameters so the finite-difference oracle can walk them.
Tensor flatten_params(const MlpParams& p) {
  std::vector<double> all;
  for (const auto& l : p.layers) {
    all.insert(all.end(), l.w.v.begin(), l.w.v.end());
    all.insert(all.end(), l.b.v.begin(), l.b.v.end());
  }
  return Tensor::vector(std::move(all));
}

MlpParams unflatten_params(const MlpParams& shape, const Tensor& flat) {
  MlpParams p = shape;
  std::size_t pos = 0;
  for (auto& l : p.layers) {
    for (double& x : l.w.v) x = flat.v[pos++];
    for (double& x : l.b.v) x = flat.v[pos++];
  }
  return p;
}

Tensor flatten_grads(const MlpGrads& g) {
  std::vector<double> all;
  for (std::size_t l = 0; l < g.w.size(); ++l) {
    all.insert(all.end(), g.w[l].v.begin(), g.w[l].v.end());
    all.insert(all.end(), g.b[l].v.begin(), g.b[l].v.end());
  }
  return Tensor::vector(std::move(all));
}

bool grads_match(const Tensor& analytic, const Tensor& numeric, double rtol,
                 double atol = 1e-8) {
  for (std::size_t i = 0; i < analytic.numel(); ++i) {
    double a = analytic.v[i], n = numeric.v[i];
    if (std::abs(a - n) > rtol * std::max(std::abs(a), std::abs(n)) + atol)
      return false;
  }
  return true;
}

}  // namespace

TEST_CASE("mlp_forward: zero params give zero output, identity layer passes through") {
  MlpParams zero;
  zero.layers.push_back({Tensor::matrix(3, 2), Tensor::zeros({2})});
  Tensor out = mlp_forward(zero, Tensor::vector({1.0, -2.0, 3.0}));
  CHECK(out.v[0] == 0.0);
  CHECK(out.v[1] == 0.0);

  MlpParams id;
  id.layers.push_back({identity(3), Tensor::zeros({3})});
  Tensor x = Tensor::vector({0.5, -1.5, 2.5});
  Tensor y = mlp_forward(id, x);
  for (int i = 0; i < 3; ++i) CHECK(y.v[i] == x.v[i]);
}

TEST_CASE("mlp dimension mismatch raises") {
  Rng rng(1);
  MlpParams p = init_params({{4, 8, 2}}, rng);
  CHECK_THROWS_AS(mlp_forward(p, Tensor::vector({1, 2, 3})), InvalidArgument);
}

TEST_CASE("full-Jacobian agreement with finite differences (2-32-32-2 net)") {
  Rng rng(21);
  MlpParams p = init_params({{2, 32, 32, 2}}, rng);
  Tensor input = Tensor::vector({0.37, -0.81});

  // loss = ||out||^2
  auto loss_for = [&](const MlpParams& params) {
    Tensor out = mlp_forward(params, input);
    double s = 0;
    for (double v : out.v) s += v * v;
    return s;
  };

  MlpTape tape;
  Tensor out = mlp_forward(p, input, &tape);
  Tensor dout = out;
  for (double& v : dout.v) v *= 2.0;
  MlpGrads grads = MlpGrads::zeros_like(p);
  Tensor din = mlp_backward(tape, dout, &grads);

  Tensor flat = flatten_params(p);
  Tensor fd = finite_diff_grad(
      [&](const Tensor& f) { return loss_for(unflatten_params(p, f)); }, flat);
  CHECK(grads_match(flatten_grads(grads), fd, 1e-5));

  Tensor fd_in = finite_diff_grad(
      [&](const Tensor& xin) {
        Tensor o = mlp_forward(p, xin);
        double s = 0;
        for (double v : o.v) s += v * v;
        return s;
      },
      input);
  CHECK(grads_match(din, fd_in, 1e-5));
}

TEST_CASE("backward: zero output grad gives zero everywhere; linear net input grad") {
  Rng rng(3);
  MlpParams p = init_params({{3, 5, 1}}, rng);
  MlpTape tape;
  Tensor x = gaussian_vector(3, rng);
  mlp_forward(p, x, &tape);
  MlpGrads g = MlpGrads::zeros_like(p);
  Tensor din = mlp_backward(tape, Tensor::vector({0.0}), &g);
  for (double v : din.v) CHECK(v == 0.0);
  for (const auto& t : g.w)
    for (double v : t.v) CHECK(v == 0.0);

  // single linear layer: d(w^T x)/dx = w
  MlpParams lin;
  lin.layers.push_back({Tensor::matrix(3, 1), Tensor::zeros({1})});
  lin.layers[0].w.at(0, 0) = 0.3;
  lin.layers[0].w.at(1, 0) = -0.7;
  lin.layers[0].w.at(2, 0) = 1.1;
  MlpTape lt;
  mlp_forward(lin, x, &lt);
  Tensor lg = mlp_backward(lt, Tensor::vector({1.0}), nullptr);
  CHECK(lg.v[0] == doctest::Approx(0.3));
  CHECK(lg.v[1] == doctest::Approx(-0.7));
  CHECK(lg.v[2] == doctest::Approx(1.1));
}

TEST_CASE("stale tape is rejected after a parameter update") {
  Rng rng(4);
  MlpParams p = init_params({{2, 4, 1}}, rng);
  MlpAdam opt = MlpAdam::like(p, {});
  MlpTape tape;
  mlp_forward(p, Tensor::vector({1.0, 2.0}), &tape);
  MlpGrads g = MlpGrads::zeros_like(p);
  g.w[0].fill(0.1);
  opt.step(p, g);
  CHECK_THROWS_AS(mlp_backward(tape, Tensor::vector({1.0}), nullptr),
                  InvalidState);
}

TEST_CASE("init_params: Glorot bound, zero biases, determinism, near-zero mean") {
  Rng a(5), b(5);
  MlpConfig cfg{{50, 100, 50}};
  MlpParams p1 = init_params(cfg, a);
  MlpParams p2 = init_params(cfg, b);
  CHECK(p1 == p2);

  double bound0 = std::sqrt(6.0 / (50 + 100));
  double sum = 0;
  std::size_t count = 0;
  for (const auto& l : p1.layers) {
    for (double v : l.b.v) CHECK(v == 0.0);
  }
  for (double v : p1.layers[0].w.v) {
    CHECK(std::abs(v) <= bound0);
    sum += v;
    ++count;
  }
  // mean of n uniform(-b, b) draws: se = b/sqrt(3n)
  double se = bound0 / std::sqrt(3.0 * static_cast<double>(count));
  CHECK(std::abs(sum / static_cast<double>(count)) <= 3.0 * se);
}

TEST_CASE("input-gradient norm penalty matches finite differences") {
  Rng rng(6);
  MlpParams p = init_params({{4, 6, 6, 1}}, rng);
  Tensor input = gaussian_matrix(3, 4, rng);
  const std::size_t penalized = 3;  // leave the conditioning column out
  const double scale = 0.025;

  MlpGrads grads = MlpGrads::zeros_like(p);
  double val = input_grad_norm_penalty(p, input, penalized, scale, &grads);

  auto penalty_for = [&](const MlpParams& params) {
    // oracle: finite-difference input gradients of the scalar output
    double total = 0.0;
    for (std::size_t r = 0; r < input.batch_rows(); ++r) {
      Tensor row = Tensor::vector(std::vector<double>(
          input.data() + r * 4, input.data() + (r + 1) * 4));
      Tensor g = finite_diff_grad(
          [&](const Tensor& x) { return mlp_forward(params, x).v[0]; }, row,
          1e-5);
      for (std::size_t c = 0; c < penalized; ++c) total += g.v[c] * g.v[c];
    }
    return scale * total;
  };
  CHECK(val == doctest::Approx(penalty_for(p)).epsilon(1e-6));

  Tensor flat = flatten_params(p);
  Tensor fd = finite_diff_grad(
      [&](const Tensor& f) { return penalty_for(unflatten_params(p, f)); },
      flat, 1e-4);
  CHECK(grads_match(flatten_grads(grads), fd, 2e-4, 1e-6));
}

TEST_CASE("penalty on a linear discriminator equals gamma/2 ||w||^2 with gradient gamma w") {
  MlpParams lin;
  lin.layers.push_back({Tensor::matrix(3, 1), Tensor::zeros({1})});
  lin.layers[0].w.at(0, 0) = 0.4;
  lin.layers[0].w.at(1, 0) = -1.2;
  lin.layers[0].w.at(2, 0) = 2.0;
  double gamma = 0.05;
  Tensor input = Tensor::matrix(2, 3);  // gradient is w regardless of input
  input.fill(0.3);

  MlpGrads grads = MlpGrads::zeros_like(lin);
  double val = input_grad_norm_penalty(lin, input, 3, gamma / (2.0 * 2), &grads);
  double w2 = 0.4 * 0.4 + 1.2 * 1.2 + 2.0 * 2.0;
  CHECK(val == doctest::Approx(gamma / 2.0 * w2));
  CHECK(grads.w[0].at(0, 0) == doctest::Approx(gamma * 0.4));
  CHECK(grads.w[0].at(1, 0) == doctest::Approx(gamma * -1.2));
  CHECK(grads.w[0].at(2, 0) == doctest::Approx(gamma * 2.0));
  for (double v : grads.b[0].v) CHECK(v == 0.0);
}

TEST_CASE("generator wrapper: determinism, z sensitivity, input width") {
  DegradationSchedule s = build_schedule(ScheduleKind::Denoise, 4, {1, 2, 1});
  GeneratorConfig cfg{.data_dim = 2, .z_dim = 2};
  CHECK(generator_input_dim(cfg, s.total_steps) == 5);  // 2*data + 1 when z == data

  Rng rng(7);
  MlpParams g = init_params(generator_mlp_config(cfg, s.total_steps), rng);
  Tensor y = Tensor::vector({0.4, -0.2});
  Tensor z1 = Tensor::vector({0.1, 0.9});
  Tensor z2 = Tensor::vector({-1.3, 0.2});

  Tensor a = generator_apply(g, cfg, s, y, 2, z1);
  Tensor b = generator_apply(g, cfg, s, y, 2, z1);
  CHECK(a == b);
  Tensor c = generator_apply(g, cfg, s, y, 2, z2);
  CHECK(!(a == c));

  Tensor wrong = Tensor::vector({0.4, -0.2, 0.7});
  CHECK_THROWS_AS(generator_apply(g, cfg, s, wrong, 2, z1), InvalidArgument);
}

TEST_CASE("discriminator wrapper: zero params give logit 0, repeatable, y-grad checks out") {
  DegradationSchedule s = build_schedule(ScheduleKind::Denoise, 4, {1, 2, 1});
  DiscriminatorConfig cfg{.data_dim = 2};
  Rng rng(8);
  MlpParams d = init_params(discriminator_mlp_config(cfg, s.total_steps), rng);

  MlpParams zero = d;
  for (auto& l : zero.layers) {
    l.w.fill(0.0);
    l.b.fill(0.0);
  }
  Tensor y = Tensor::vector({0.3, 0.8});
  CHECK(discriminator_apply(zero, cfg, s, y, 1).v[0] == 0.0);

  Tensor l1 = discriminator_apply(d, cfg, s, y, 3);
  Tensor l2 = discriminator_apply(d, cfg, s, y, 3);
  CHECK(l1 == l2);

  // gradient of the logit w.r.t. y (needed by the R1 term)
  MlpTape tape;
  discriminator_apply(d, cfg, s, y, 3, &tape);
  Tensor din = mlp_backward(tape, Tensor::vector({1.0}), nullptr);
  Tensor gy = input_grad_to_y(s, 3, cfg.data_dim, din);
  Tensor fd = finite_diff_grad(
      [&](const Tensor& yy) { return discriminator_apply(d, cfg, s, yy, 3).v[0]; },
      y);
  CHECK(grads_match(gy, fd, 1e-5));
}

TEST_CASE("checkpoint round-trips bit-exactly and rejects bad files") {
  Rng rng(9);
  Checkpoint c;
  c.schedule = {ScheduleKind::Denoise, 4, {1, 2, 1}, {}};
  c.gen_cfg = GeneratorConfig{.data_dim = 2, .z_dim = 2};
  c.gen = init_params(generator_mlp_config(c.gen_cfg, 4), rng);
  DiscriminatorConfig dc{.data_dim = 2};
  c.disc = init_params(discriminator_mlp_config(dc, 4), rng);
  c.step = 123;
  c.seed = 42;
  ResumeState rs;
  rs.gen_opt = MlpAdam::like(c.gen, {.lr = 1e-4});
  rs.disc_opt = MlpAdam::like(*c.disc, {.lr = 1e-4});
  rs.rng = RngSnapshot::of(rng);
  c.resume = rs;

  auto dir = std::filesystem::temp_directory_path() / "rgm_ckpt_test";
  std::filesystem::create_directories(dir);
  std::string path = (dir / "c.json").string();
  save_checkpoint(c, path);
  Checkpoint back = load_checkpoint(path);
  CHECK(back == c);

  // version mismatch
  json j = parse_json_file(path);
  j["version"] = 999;
  write_text_file(path, j.dump());
  CHECK_THROWS_AS(load_checkpoint(path), VersionMismatch);

  // truncated file
  std::string text = read_text_file(path);
  write_text_file(path, text.substr(0, text.size() / 2));
  CHECK_THROWS_AS(load_checkpoint(path), CorruptFile);

  std::filesystem::remove_all(dir);
}

TEST_CASE("rng snapshot restores the exact stream position") {
  Rng rng(11);
  for (int i = 0; i < 7; ++i) rng.gaussian();
  RngSnapshot snap = RngSnapshot::of(rng);
  std::vector<double> want;
  for (int i = 0; i < 5; ++i) want.push_back(rng.gaussian());
  Rng back = snap.restore();
  for (int i = 0; i < 5; ++i) CHECK(back.gaussian() == want[i]);
}
