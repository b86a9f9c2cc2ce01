#pragma once

#include <cstdint>
#include <string_view>

#include "psdsketch/matrix.hpp"

namespace psdsketch {

struct Seed {
  std::uint64_t value = 0;
  friend bool operator==(Seed, Seed) = default;
};

// Counter-based generator: output j of a stream is splitmix64(key + j * phi),
// where the key is derived from (seed, purpose label). Streams with different
// labels are independent and each stream is reproducible on any platform.
class Rng {
 public:
  Rng(Seed seed, std::string_view label);

  // Child stream keyed by this stream's key and a label.
  Rng split(std::string_view label) const;
  Rng split(std::uint64_t index) const;

  std::uint64_t next_u64();
  // Uniform in [0, 1) with 53 random bits.
  double uniform();
  // Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);
  // Standard normal via Box-Muller (caches the second variate).
  double gaussian();
  bool bernoulli(double p) { return uniform() < p; }

  std::uint64_t key() const { return key_; }

 private:
  explicit Rng(std::uint64_t key) : key_(key) {}

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

std::uint64_t splitmix64(std::uint64_t x);

// n x m matrix of independent standard normals.
Matrix gaussian_matrix(Rng& rng, Index rows, Index cols);

// Orthonormal n x n basis from the QR factorization of a Gaussian draw, with
// the sign convention R_ii > 0 so the result is Haar distributed.
Matrix random_orthonormal(Rng& rng, Index n, Index cols);

}  // namespace psdsketch
