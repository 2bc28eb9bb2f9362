#pragma once

#include <string>
#include <vector>

#include "rgm/rng.hpp"
#include "rgm/schedule.hpp"
#include "rgm/tensor.hpp"

namespace rgm {

// Eight Gaussians equally spaced on a circle. With standardize on, samples
// (and the centers used by the coverage metric) are scaled by the analytic
// per-coordinate standard deviation sqrt(R^2/2 + s^2) so the data has unit
// variance.
struct Gmm8Spec {
  double radius = 2.0;
  double component_std = 0.1;
  bool standardize = true;

  double scale() const;
  // 8 x 2 center matrix in the (possibly standardized) sample space.
  Tensor centers() const;
  double effective_std() const;
};

Tensor sample_gmm8(std::size_t n, const Gmm8Spec& spec, Rng& rng);

struct ModeCoverage {
  int covered = 0;
  std::vector<double> fractions;  // per mode, within-radius share of samples
};

// Assigns samples to the nearest center and counts modes holding at least
// min_fraction of all samples within `radius_in_stds` component stds.
ModeCoverage mode_coverage(const Tensor& samples, const Gmm8Spec& spec,
                           double radius_in_stds = 3.0,
                           double min_fraction = 0.02);

// 2 E||x-y|| - E||x-x'|| - E||y-y'|| with all-pairs (V-statistic) sums.
double energy_distance(const Tensor& x, const Tensor& y);

double psnr(const Tensor& x, const Tensor& ref, double peak,
            double cap_db = 99.0);
// Single-window SSIM with C1=(0.01 peak)^2, C2=(0.03 peak)^2.
double ssim(const Tensor& x, const Tensor& ref, double peak);

enum class ToyImageFamily { Blobs, Gradients, Checkerboards };

std::string to_string(ToyImageFamily f);
ToyImageFamily toy_family_from_string(const std::string& s);

// Procedural stand-in datasets; pixel values land in [-1, 1].
struct ToyImageSpec {
  std::size_t size = 16;  // height == width, divisible by 8
  std::size_t channels = 1;
  ToyImageFamily family = ToyImageFamily::Blobs;
  std::uint64_t seed = 0;

  DataShape shape() const { return DataShape{size, size, channels}; }
};

Tensor make_toy_images(const ToyImageSpec& spec, std::size_t n);

}  // namespace rgm
