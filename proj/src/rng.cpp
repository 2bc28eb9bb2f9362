#include "rgm/rng.hpp"

#include <cmath>

#include "rgm/errors.hpp"

namespace rgm {
namespace {

inline std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

constexpr double kTwoPi = 6.283185307179586476925286766559;

}  // namespace

Rng::Rng(std::uint64_t seed) : seed_(seed) {
  std::uint64_t sm = seed;
  for (auto& w : s_) w = splitmix64(sm);
}

std::uint64_t Rng::next_u64() {
  std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  ++draws_;
  return result;
}

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::gaussian() {
  double u1 = 1.0 - uniform();  // (0, 1]
  double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

std::uint64_t Rng::uniform_index(std::uint64_t n) {
  if (n == 0) throw InvalidArgument("uniform_index: n must be >= 1");
  std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return x % n;
}

Rng Rng::split() {
  std::uint64_t d = next_u64() ^ 0x6a09e667f3bcc909ULL;
  return Rng(d);
}

Tensor gaussian_vector(std::size_t dim, Rng& rng) {
  if (dim == 0) throw InvalidArgument("gaussian_vector: dim must be >= 1");
  Tensor t = Tensor::zeros({dim});
  for (std::size_t i = 0; i < dim; ++i) t.v[i] = rng.gaussian();
  return t;
}

Tensor gaussian_matrix(std::size_t n, std::size_t dim, Rng& rng) {
  if (n == 0 || dim == 0) throw InvalidArgument("gaussian_matrix: empty shape");
  Tensor t = Tensor::zeros({n, dim});
  for (double& x : t.v) x = rng.gaussian();
  return t;
}

}  // namespace rgm
