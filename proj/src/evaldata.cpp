#include "rgm/evaldata.hpp"

#include <algorithm>
#include <cmath>

#include "rgm/errors.hpp"
#include "rgm/kernels.hpp"

namespace rgm {
namespace {

constexpr double kTau = 6.283185307179586476925286766559;

}  // namespace

double Gmm8Spec::scale() const {
  return standardize ? std::sqrt(radius * radius / 2.0 +
                                 component_std * component_std)
                     : 1.0;
}

Tensor Gmm8Spec::centers() const {
  Tensor c = Tensor::matrix(8, 2);
  double s = scale();
  for (int i = 0; i < 8; ++i) {
    double ang = kTau * i / 8.0;
    c.at(i, 0) = radius * std::cos(ang) / s;
    c.at(i, 1) = radius * std::sin(ang) / s;
  }
  return c;
}

double Gmm8Spec::effective_std() const { return component_std / scale(); }

Tensor sample_gmm8(std::size_t n, const Gmm8Spec& spec, Rng& rng) {
  if (n == 0) throw InvalidArgument("sample_gmm8: n must be >= 1");
  if (!(spec.component_std > 0))
    throw InvalidArgument("sample_gmm8: component std must be > 0");
  Tensor centers = spec.centers();
  double s = spec.effective_std();
  Tensor out = Tensor::matrix(n, 2);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t c = rng.uniform_index(8);
    out.at(i, 0) = centers.at(c, 0) + s * rng.gaussian();
    out.at(i, 1) = centers.at(c, 1) + s * rng.gaussian();
  }
  return out;
}

ModeCoverage mode_coverage(const Tensor& samples, const Gmm8Spec& spec,
                           double radius_in_stds, double min_fraction) {
  if (samples.batch_cols() != 2)
    throw InvalidArgument("mode_coverage: samples must be 2-D points");
  Tensor centers = spec.centers();
  double radius = radius_in_stds * spec.effective_std();
  double r2 = radius * radius;

  std::vector<std::size_t> counts(8, 0);
  std::size_t n = samples.batch_rows();
  for (std::size_t i = 0; i < n; ++i) {
    const double* p = samples.data() + i * 2;
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int c = 0; c < 8; ++c) {
      double d = kernels::active().sum_sq_diff(p, centers.row(c), 2);
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    if (best_d <= r2) counts[static_cast<std::size_t>(best)] += 1;
  }

  ModeCoverage mc;
  mc.fractions.resize(8);
  for (int c = 0; c < 8; ++c) {
    mc.fractions[c] = n ? static_cast<double>(counts[c]) / n : 0.0;
    if (mc.fractions[c] >= min_fraction) mc.covered += 1;
  }
  return mc;
}

namespace {

double mean_pair_distance(const Tensor& a, const Tensor& b) {
  std::size_t n = a.batch_rows(), m = b.batch_rows(), d = a.batch_cols();
  const auto& ops = kernels::active();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double* ai = a.data() + i * d;
    double row = 0.0;
    for (std::size_t j = 0; j < m; ++j)
      row += std::sqrt(ops.sum_sq_diff(ai, b.data() + j * d, d));
    total += row;
  }
  return total / (static_cast<double>(n) * static_cast<double>(m));
}

}  // namespace

double energy_distance(const Tensor& x, const Tensor& y) {
  if (x.batch_rows() == 0 || y.batch_rows() == 0)
    throw InvalidArgument("energy_distance: empty batch");
  if (x.batch_cols() != y.batch_cols())
    throw InvalidArgument("energy_distance: dim mismatch");
  return 2.0 * mean_pair_distance(x, y) - mean_pair_distance(x, x) -
         mean_pair_distance(y, y);
}

double psnr(const Tensor& x, const Tensor& ref, double peak, double cap_db) {
  if (!x.same_shape(ref)) throw InvalidArgument("psnr: shape mismatch");
  double mse = kernels::active().sum_sq_diff(x.data(), ref.data(), x.numel()) /
               static_cast<double>(x.numel());
  if (mse <= 0.0) return cap_db;
  return std::min(cap_db, 10.0 * std::log10(peak * peak / mse));
}

double ssim(const Tensor& x, const Tensor& ref, double peak) {
  if (!x.same_shape(ref)) throw InvalidArgument("ssim: shape mismatch");
  std::size_t n = x.numel();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x.v[i];
    my += ref.v[i];
  }
  mx /= n;
  my /= n;
  double vx = 0, vy = 0, cov = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double dx = x.v[i] - mx, dy = ref.v[i] - my;
    vx += dx * dx;
    vy += dy * dy;
    cov += dx * dy;
  }
  vx /= n;
  vy /= n;
  cov /= n;
  double c1 = 0.01 * peak, c2 = 0.03 * peak;
  c1 *= c1;
  c2 *= c2;
  return ((2 * mx * my + c1) * (2 * cov + c2)) /
         ((mx * mx + my * my + c1) * (vx + vy + c2));
}

std::string to_string(ToyImageFamily f) {
  switch (f) {
    case ToyImageFamily::Blobs: return "blobs";
    case ToyImageFamily::Gradients: return "gradients";
    case ToyImageFamily::Checkerboards: return "checkerboards";
  }
  return "?";
}

ToyImageFamily toy_family_from_string(const std::string& s) {
  if (s == "blobs") return ToyImageFamily::Blobs;
  if (s == "gradients") return ToyImageFamily::Gradients;
  if (s == "checkerboards") return ToyImageFamily::Checkerboards;
  throw InvalidArgument("unknown toy image family: " + s);
}

namespace {

void paint_blobs(double* img, std::size_t size, std::size_t channels, Rng& rng) {
  std::size_t k = 1 + rng.uniform_index(3);
  std::vector<double> cx(k), cy(k), amp(k), inv2s2(k);
  for (std::size_t b = 0; b < k; ++b) {
    cx[b] = rng.uniform() * size;
    cy[b] = rng.uniform() * size;
    amp[b] = 0.8 + 1.2 * rng.uniform();
    double sigma = 1.5 + 2.5 * rng.uniform();
    inv2s2[b] = 1.0 / (2.0 * sigma * sigma);
  }
  for (std::size_t yy = 0; yy < size; ++yy)
    for (std::size_t xx = 0; xx < size; ++xx) {
      double v = -1.0;
      for (std::size_t b = 0; b < k; ++b) {
        double dx = xx + 0.5 - cx[b], dy = yy + 0.5 - cy[b];
        v += 2.0 * amp[b] * std::exp(-(dx * dx + dy * dy) * inv2s2[b]);
      }
      v = std::clamp(v, -1.0, 1.0);
      for (std::size_t c = 0; c < channels; ++c)
        img[(yy * size + xx) * channels + c] = v;
    }
  if (channels == 3) {
    // tint channels so colorization has something to recover
    double tint[3] = {0.6 + 0.4 * rng.uniform(), 0.6 + 0.4 * rng.uniform(),
                      0.6 + 0.4 * rng.uniform()};
    for (std::size_t i = 0; i < size * size; ++i)
      for (std::size_t c = 0; c < 3; ++c)
        img[i * 3 + c] = std::clamp(img[i * 3 + c] * tint[c], -1.0, 1.0);
  }
}

void paint_gradient(double* img, std::size_t size, std::size_t channels,
                    Rng& rng) {
  double ang = rng.uniform() * kTau;
  double ux = std::cos(ang), uy = std::sin(ang);
  double a = -1.0 + 0.5 * rng.uniform();
  double b = 1.0 - 0.5 * rng.uniform();
  for (std::size_t yy = 0; yy < size; ++yy)
    for (std::size_t xx = 0; xx < size; ++xx) {
      double t = (ux * (xx + 0.5) / size + uy * (yy + 0.5) / size + 1.0) / 2.0;
      double v = std::clamp(a + (b - a) * t, -1.0, 1.0);
      for (std::size_t c = 0; c < channels; ++c)
        img[(yy * size + xx) * channels + c] =
            channels == 3 ? std::clamp(v * (0.5 + 0.5 * ((c + 1) / 3.0)), -1.0, 1.0)
                          : v;
    }
}

void paint_checkerboard(double* img, std::size_t size, std::size_t channels,
                        Rng& rng) {
  std::size_t period = std::size_t{2} << rng.uniform_index(3);  // 2, 4 or 8
  std::size_t phase_x = rng.uniform_index(period);
  std::size_t phase_y = rng.uniform_index(period);
  double lo = -1.0 + 0.6 * rng.uniform();
  double hi = 1.0 - 0.6 * rng.uniform();
  if (hi - lo < 0.5) hi = lo + 0.5;
  for (std::size_t yy = 0; yy < size; ++yy)
    for (std::size_t xx = 0; xx < size; ++xx) {
      bool odd = (((xx + phase_x) / (period / 2)) + ((yy + phase_y) / (period / 2))) % 2;
      double v = odd ? hi : lo;
      for (std::size_t c = 0; c < channels; ++c)
        img[(yy * size + xx) * channels + c] = v;
    }
}

}  // namespace

Tensor make_toy_images(const ToyImageSpec& spec, std::size_t n) {
  if (n == 0) throw InvalidArgument("make_toy_images: n must be >= 1");
  if (spec.size % 8 != 0)
    throw InvalidArgument("make_toy_images: size must be divisible by 8");
  if (spec.channels != 1 && spec.channels != 3)
    throw InvalidArgument("make_toy_images: channels must be 1 or 3");

  Rng rng(spec.seed);
  std::size_t dim = spec.shape().dim();
  Tensor out = Tensor::matrix(n, dim);
  for (std::size_t i = 0; i < n; ++i) {
    double* img = out.data() + i * dim;
    switch (spec.family) {
      case ToyImageFamily::Blobs:
        paint_blobs(img, spec.size, spec.channels, rng);
        break;
      case ToyImageFamily::Gradients:
        paint_gradient(img, spec.size, spec.channels, rng);
        break;
      case ToyImageFamily::Checkerboards:
        paint_checkerboard(img, spec.size, spec.channels, rng);
        break;
    }
  }
  return out;
}

}  // namespace rgm
