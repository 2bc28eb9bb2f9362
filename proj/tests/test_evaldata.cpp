#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "rgm/evaldata.hpp"
#include "rgm/schedule.hpp"

using namespace rgm;

TEST_CASE("gmm8 sampling: determinism, component balance, within-mode std") {
  Gmm8Spec spec;
  Rng a(1), b(1);
  CHECK(sample_gmm8(32, spec, a) == sample_gmm8(32, spec, b));

  const std::size_t n = 100000;
  Rng rng(2);
  Tensor s = sample_gmm8(n, spec, rng);
  Tensor centers = spec.centers();

  std::vector<std::size_t> counts(8, 0);
  std::vector<double> ssd(8, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    int best = 0;
    double bd = 1e300;
    for (int c = 0; c < 8; ++c) {
      double dx = s.at(i, 0) - centers.at(c, 0);
      double dy = s.at(i, 1) - centers.at(c, 1);
      double d = dx * dx + dy * dy;
      if (d < bd) {
        bd = d;
        best = c;
      }
    }
    counts[best] += 1;
    ssd[best] += bd;
  }
  // per-component counts within 4 sigma of n/8 (binomial)
  double se = std::sqrt(n * (1.0 / 8) * (7.0 / 8));
  for (int c = 0; c < 8; ++c)
    CHECK(std::abs(double(counts[c]) - n / 8.0) <= 4 * se);
  // within-mode std (2-D: E||x - mu||^2 = 2 s^2) within 2%
  for (int c = 0; c < 8; ++c) {
    double est = std::sqrt(ssd[c] / double(counts[c]) / 2.0);
    CHECK(std::abs(est - spec.effective_std()) <= 0.02 * spec.effective_std());
  }
}

TEST_CASE("standardized mixture has near unit variance per coordinate") {
  Gmm8Spec spec;
  Rng rng(3);
  Tensor s = sample_gmm8(200000, spec, rng);
  for (int c = 0; c < 2; ++c) {
    double m1 = 0, m2 = 0;
    for (std::size_t i = 0; i < s.batch_rows(); ++i) {
      m1 += s.at(i, c);
      m2 += s.at(i, c) * s.at(i, c);
    }
    m1 /= double(s.batch_rows());
    double var = m2 / double(s.batch_rows()) - m1 * m1;
    CHECK(std::abs(var - 1.0) < 0.02);
  }
}

TEST_CASE("mode coverage: true sampler covers 8, degenerate clouds do not") {
  Gmm8Spec spec;
  Rng rng(4);
  Tensor s = sample_gmm8(10000, spec, rng);
  ModeCoverage mc = mode_coverage(s, spec);
  CHECK(mc.covered == 8);
  for (double f : mc.fractions) CHECK(f >= 0.02);

  // every sample at one center
  Tensor one = Tensor::matrix(100, 2);
  Tensor centers = spec.centers();
  for (int i = 0; i < 100; ++i) {
    one.at(i, 0) = centers.at(3, 0);
    one.at(i, 1) = centers.at(3, 1);
  }
  CHECK(mode_coverage(one, spec).covered == 1);

  // everything far from all centers
  Tensor origin = Tensor::matrix(100, 2);
  CHECK(mode_coverage(origin, spec).covered == 0);
}

TEST_CASE("energy distance: identity, point masses, symmetry, null behavior") {
  Rng rng(5);
  Tensor x = sample_gmm8(500, Gmm8Spec{}, rng);
  CHECK(std::abs(energy_distance(x, x)) <= 1e-12);

  // two point masses at distance d: 2d - 0 - 0
  Tensor a = Tensor::matrix(10, 2);
  Tensor b = Tensor::matrix(10, 2);
  for (int i = 0; i < 10; ++i) b.at(i, 0) = 1.5;
  CHECK(energy_distance(a, b) == doctest::Approx(3.0));

  Tensor y = sample_gmm8(500, Gmm8Spec{}, rng);
  CHECK(energy_distance(x, y) == doctest::Approx(energy_distance(y, x)));

  // same-law draws: non-negative in expectation (100 trials)
  double total = 0;
  for (int t = 0; t < 100; ++t) {
    Tensor u = sample_gmm8(200, Gmm8Spec{}, rng);
    Tensor v = sample_gmm8(200, Gmm8Spec{}, rng);
    total += energy_distance(u, v);
  }
  CHECK(total / 100.0 >= 0.0);
}

TEST_CASE("psnr: cap at exact match, plug-in value, monotone in noise") {
  Tensor x = Tensor::vector({0.1, 0.2, 0.3, 0.4});
  CHECK(psnr(x, x, 1.0) == 99.0);

  // MSE 0.01 at peak 1 -> 20 dB
  Tensor ref = Tensor::vector({0.0, 0.0, 0.0, 0.0});
  Tensor noisy = Tensor::vector({0.1, -0.1, 0.1, -0.1});
  CHECK(psnr(noisy, ref, 1.0) == doctest::Approx(20.0));

  Rng rng(6);
  Tensor base = Tensor::zeros({256});
  double prev = 1e9;
  for (double sd : {0.05, 0.1, 0.2}) {
    Tensor n = base;
    Rng r(7);
    for (double& v : n.v) v += sd * r.gaussian();
    double p = psnr(n, base, 2.0);
    CHECK(p < prev);
    prev = p;
  }
}

TEST_CASE("ssim: identity is 1, degraded is below 1") {
  Rng rng(8);
  ToyImageSpec spec;
  spec.seed = 9;
  Tensor imgs = make_toy_images(spec, 1);
  Tensor x = Tensor::vector(std::vector<double>(imgs.v.begin(), imgs.v.end()));
  CHECK(ssim(x, x, 2.0) == doctest::Approx(1.0));
  Tensor n = x;
  for (double& v : n.v) v += 0.3 * rng.gaussian();
  CHECK(ssim(n, x, 2.0) < 0.95);
}

TEST_CASE("toy images: deterministic, in range, divisible sizes enforced") {
  ToyImageSpec spec;
  spec.seed = 10;
  Tensor a = make_toy_images(spec, 8);
  Tensor b = make_toy_images(spec, 8);
  CHECK(a == b);
  for (double v : a.v) {
    CHECK(v >= -1.0);
    CHECK(v <= 1.0);
  }

  ToyImageSpec bad;
  bad.size = 12;
  CHECK_THROWS_AS(make_toy_images(bad, 1), InvalidArgument);
}

TEST_CASE("period-2 checkerboard block-averages to a constant image") {
  // direct averaging oracle: every 2x2 block holds two lows and two highs
  ToyImageSpec spec;
  spec.family = ToyImageFamily::Checkerboards;
  spec.size = 16;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    spec.seed = seed;
    Tensor img = make_toy_images(spec, 1);
    // find a period-2 board: adjacent pixels differ
    bool period2 = img.v[0] != img.v[1] && img.v[1] != img.v[2];
    if (!period2) continue;
    Tensor flat = Tensor::vector(std::vector<double>(img.v.begin(), img.v.end()));
    Tensor avg = block_average(flat, spec.shape(), 1);
    for (std::size_t i = 1; i < avg.numel(); ++i)
      CHECK(avg.v[i] == doctest::Approx(avg.v[0]));
  }
}

TEST_CASE("three-channel images work with the colorization operator") {
  ToyImageSpec spec;
  spec.channels = 3;
  spec.seed = 11;
  Tensor imgs = make_toy_images(spec, 4);
  CHECK(imgs.batch_cols() == 16 * 16 * 3);
  for (double v : imgs.v) CHECK(std::abs(v) <= 1.0);
}
