#include "psdsketch/random.hpp"

#include <cmath>
#include <numbers>

#include "psdsketch/errors.hpp"

namespace psdsketch {

namespace {

constexpr std::uint64_t kPhi = 0x9e3779b97f4a7c15ull;

std::uint64_t hash_label(std::string_view label) {
  // FNV-1a
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
  x += kPhi;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

Rng::Rng(Seed seed, std::string_view label)
    : key_(splitmix64(splitmix64(seed.value) ^ hash_label(label))) {}

Rng Rng::split(std::string_view label) const {
  return Rng(splitmix64(key_ ^ splitmix64(hash_label(label))));
}

Rng Rng::split(std::uint64_t index) const {
  return Rng(splitmix64(key_ + splitmix64(index ^ 0x5851f42d4c957f2dull)));
}

std::uint64_t Rng::next_u64() { return splitmix64(key_ + (counter_++) * kPhi); }

double Rng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw ValidationError("Rng::below: bound must be positive");
  // Lemire's multiply-shift with rejection keeps the draw unbiased.
  std::uint64_t x = next_u64();
  __uint128_t m = static_cast<__uint128_t>(x) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = -bound % bound;
    while (low < threshold) {
      x = next_u64();
      m = static_cast<__uint128_t>(x) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

double Rng::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

Matrix gaussian_matrix(Rng& rng, Index rows, Index cols) {
  Matrix g(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) g(i, j) = rng.gaussian();
  }
  return g;
}

Matrix random_orthonormal(Rng& rng, Index n, Index cols) {
  if (cols > n) throw ValidationError("random_orthonormal: cols > n");
  const Matrix g = gaussian_matrix(rng, n, cols);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(n, cols);
  const Matrix& r = qr.matrixQR();
  for (Index j = 0; j < cols; ++j) {
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  }
  return q;
}

}  // namespace psdsketch
