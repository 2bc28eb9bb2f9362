#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "rgm/sampling.hpp"

using namespace rgm;

namespace {

MlpParams constant_generator(const GeneratorConfig& cfg, int total_steps,
                             const std::vector<double>& c) {
  Rng rng(1);
  MlpParams p = init_params(generator_mlp_config(cfg, total_steps), rng);
  for (auto& l : p.layers) {
    l.w.fill(0.0);
    l.b.fill(0.0);
  }
  for (std::size_t i = 0; i < c.size(); ++i) p.layers.back().b.v[i] = c[i];
  return p;
}

}  // namespace

TEST_CASE("constant generator: every sample equals the constant, NFE = T") {
  DegradationSchedule s = build_schedule(ScheduleKind::Denoise, 4, {1, 2, 1});
  GeneratorConfig cfg{.data_dim = 2, .z_dim = 2};
  MlpParams g = constant_generator(cfg, s.total_steps, {0.37, -1.2});
  Rng rng(2);
  SampleResult res = generate(g, cfg, s, 9, rng);
  CHECK(res.nfe == 4);
  CHECK(res.samples.batch_rows() == 9);
  for (std::size_t i = 0; i < 9; ++i) {
    CHECK(res.samples.at(i, 0) == doctest::Approx(0.37));
    CHECK(res.samples.at(i, 1) == doctest::Approx(-1.2));
  }
}

TEST_CASE("sampling is deterministic given the seed and never reads a dataset") {
  DegradationSchedule s = build_schedule(ScheduleKind::Denoise, 4, {1, 2, 1});
  GeneratorConfig cfg{.data_dim = 2, .z_dim = 2, .hidden = 8, .depth = 3};
  Rng init(3);
  MlpParams g = init_params(generator_mlp_config(cfg, s.total_steps), init);
  Rng a(7), b(7), c(8);
  CHECK(generate(g, cfg, s, 5, a).samples == generate(g, cfg, s, 5, b).samples);
  CHECK(!(generate(g, cfg, s, 5, c).samples ==
          generate(g, cfg, s, 5, a).samples));
}

TEST_CASE("hierarchical sampling tracks the schedule dims on a resolution ladder") {
  DegradationSchedule s = build_schedule(ScheduleKind::SuperRes, 7, {16, 16, 1});
  GeneratorConfig cfg{.data_dim = 256, .z_dim = 4, .hidden = 8, .depth = 2};
  Rng init(4);
  MlpParams g = init_params(generator_mlp_config(cfg, s.total_steps), init);
  Rng rng(5);
  SampleResult res = generate(g, cfg, s, 2, rng);
  CHECK(res.nfe == 7);
  CHECK(res.samples.batch_cols() == 256);
  CHECK(res.samples.all_finite());
}

TEST_CASE("z-free generator yields identical restorations and zero spread") {
  DegradationSchedule s = build_schedule(ScheduleKind::Denoise, 4, {1, 2, 1});
  GeneratorConfig cfg{.data_dim = 2, .z_dim = 0, .hidden = 8, .depth = 3};
  Rng init(6);
  MlpParams g = init_params(generator_mlp_config(cfg, s.total_steps), init);
  Rng rng(9);
  Tensor x = Tensor::vector({0.4, 0.1});
  RestoreVariants rv = restore_variants(g, cfg, s, x, 3, 5, rng);
  CHECK(rv.restorations.batch_rows() == 5);
  for (std::size_t i = 1; i < 5; ++i)
    for (std::size_t c2 = 0; c2 < 2; ++c2)
      CHECK(rv.restorations.at(i, c2) == rv.restorations.at(0, c2));
  CHECK(rv.spread == 0.0);
}

TEST_CASE("restore_variants: single draw has zero spread; fresh z spreads a generic net") {
  DegradationSchedule s = build_schedule(ScheduleKind::Denoise, 4, {1, 2, 1});
  GeneratorConfig cfg{.data_dim = 2, .z_dim = 2, .hidden = 8, .depth = 3};
  Rng init(10);
  MlpParams g = init_params(generator_mlp_config(cfg, s.total_steps), init);
  Rng rng(11);
  Tensor x = Tensor::vector({-0.7, 0.2});
  RestoreVariants one = restore_variants(g, cfg, s, x, 2, 1, rng);
  CHECK(one.spread == 0.0);
  RestoreVariants many = restore_variants(g, cfg, s, x, 2, 8, rng);
  CHECK(many.spread > 0.0);

  CHECK_THROWS_AS(restore_variants(g, cfg, s, x, 0, 3, rng), InvalidArgument);
  CHECK_THROWS_AS(restore_variants(g, cfg, s, x, 5, 3, rng), InvalidArgument);
}
