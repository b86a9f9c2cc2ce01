#pragma once

#include <string>
#include <vector>

#include "psdsketch/matrix.hpp"
#include "psdsketch/random.hpp"

namespace psdsketch {

// U diag(eigenvalues) U^T with U a seeded Haar-random orthonormal basis.
PsdMatrix gen_spectrum_psd(Index n, const Vector& eigenvalues, Seed seed);

// lambda_i = i^{-decay}, i = 1..n
Vector powerlaw_spectrum(Index n, double decay = 1.0);
// lambda_i = 2^{-i}, i = 1..n
Vector fast_decay_spectrum(Index n);
// lambda_1 = sqrt(n), all others 1
Vector spiked_spectrum(Index n);

enum class HardVariant { mu, nu, gamma, gamma_b };

std::string to_string(HardVariant v);
HardVariant parse_hard_variant(const std::string& s);

struct HardInstanceSpec {
  Index n = 0;
  Index k = 1;  // block count (gamma_b only)
  double eps = 0.5;
  HardVariant variant = HardVariant::gamma_b;
  Seed seed{};
};

struct HardInstance {
  PsdMatrix a;
  // Index sets S^1..S^k of the block partition (one set of size n for the
  // single-block variants).
  std::vector<std::vector<Index>> blocks;
  // The planted all-ones subsets, one per block drawn from mu.
  std::vector<std::vector<Index>> planted;
  Index planted_size = 0;
};

// round(sqrt(16 eps m)) clamped to [2, m]
Index planted_subset_size(Index m, double eps);

void validate(const HardInstanceSpec& spec);
HardInstance gen_hard_instance(const HardInstanceSpec& spec);

// Exact ||A - A_k||_F^2 for a hard instance, from its block structure alone:
// each planted block of size s contributes eigenvalue s and s - 1 zeros,
// every other index contributes eigenvalue 1.
double planted_frob_tail_sq(const HardInstance& inst, Index k);

struct Counterexample {
  PsdMatrix a;  // diagonal: alpha^2 (k times), 0, beta^2 (n - k - 1 times)
  Matrix b;     // rank-k, nonzero only in the first k rows
  Index k = 0;
  double eps = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
};

Counterexample gen_sqrt_route_counterexample(Index n, Index k, double eps, double alpha,
                                             double beta);

}  // namespace psdsketch
