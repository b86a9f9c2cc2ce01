#include "psdsketch/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "psdsketch/errors.hpp"

namespace psdsketch {

PsdMatrix gen_spectrum_psd(Index n, const Vector& eigenvalues, Seed seed) {
  if (n <= 0) throw ValidationError("gen_spectrum_psd: n must be positive");
  if (eigenvalues.size() != n) {
    throw ValidationError("gen_spectrum_psd: need exactly n eigenvalues");
  }
  if (!eigenvalues.allFinite() || (eigenvalues.array() < 0.0).any()) {
    throw ValidationError("gen_spectrum_psd: eigenvalues must be finite and nonnegative");
  }
  Rng rng(seed, "gen_spectrum_psd");
  const Matrix u = random_orthonormal(rng, n, n);
  const Matrix factor = u * eigenvalues.cwiseSqrt().asDiagonal();
  Matrix a = Matrix::Zero(n, n);
  a.selfadjointView<Eigen::Upper>().rankUpdate(factor);
  a.triangularView<Eigen::StrictlyLower>() = a.transpose();
  return PsdMatrix(std::move(a));
}

Vector powerlaw_spectrum(Index n, double decay) {
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = std::pow(static_cast<double>(i + 1), -decay);
  return v;
}

Vector fast_decay_spectrum(Index n) {
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = std::ldexp(1.0, -static_cast<int>(i + 1));
  return v;
}

Vector spiked_spectrum(Index n) {
  Vector v = Vector::Ones(n);
  v[0] = std::sqrt(static_cast<double>(n));
  return v;
}

std::string to_string(HardVariant v) {
  switch (v) {
    case HardVariant::mu: return "mu";
    case HardVariant::nu: return "nu";
    case HardVariant::gamma: return "gamma";
    case HardVariant::gamma_b: return "gamma_b";
  }
  return "?";
}

HardVariant parse_hard_variant(const std::string& s) {
  if (s == "mu") return HardVariant::mu;
  if (s == "nu") return HardVariant::nu;
  if (s == "gamma") return HardVariant::gamma;
  if (s == "gamma_b") return HardVariant::gamma_b;
  throw ValidationError("unknown hard-instance variant '" + s + "'");
}

Index planted_subset_size(Index m, double eps) {
  const auto s = static_cast<Index>(std::llround(std::sqrt(16.0 * eps * static_cast<double>(m))));
  return std::clamp<Index>(s, 2, m);
}

void validate(const HardInstanceSpec& spec) {
  if (!(spec.eps > 0.0)) throw ValidationError("hard instance: eps must be positive");
  const double n = static_cast<double>(spec.n);
  if (spec.variant == HardVariant::gamma_b) {
    if (spec.k < 1 || spec.n < 2) throw ValidationError("hard instance: need n >= 2, k >= 1");
    if (2.0 * n * static_cast<double>(spec.k) / spec.eps > n * n) {
      throw ValidationError("hard instance: requires 2nk/eps <= n^2");
    }
    if (spec.n % (2 * spec.k) != 0) {
      throw ValidationError("hard instance: n/(2k) must be an integer");
    }
    return;
  }
  if (spec.n < 1) throw ValidationError("hard instance: m must be positive");
  if (spec.variant == HardVariant::nu) return;
  if (n / spec.eps > n * n) throw ValidationError("hard instance: requires m/eps <= m^2");
  if (16.0 * spec.eps > n) throw ValidationError("hard instance: requires 16 eps <= m");
}

namespace {

// Fisher-Yates prefix: a uniformly random subset of size `count`, in draw order.
std::vector<Index> random_subset(Rng& rng, const std::vector<Index>& pool, Index count) {
  std::vector<Index> items = pool;
  for (Index i = 0; i < count; ++i) {
    const auto j = i + static_cast<Index>(rng.below(static_cast<std::uint64_t>(items.size() - i)));
    std::swap(items[i], items[j]);
  }
  items.resize(static_cast<std::size_t>(count));
  return items;
}

void plant_ones(Matrix& a, const std::vector<Index>& subset) {
  for (Index i : subset) {
    for (Index j : subset) a(i, j) = 1.0;
  }
}

}  // namespace

HardInstance gen_hard_instance(const HardInstanceSpec& spec) {
  validate(spec);
  Rng rng(spec.seed, "gen_hard_instance/" + to_string(spec.variant));
  HardInstance inst;
  Matrix a = Matrix::Identity(spec.n, spec.n);
  std::vector<Index> all(static_cast<std::size_t>(spec.n));
  std::iota(all.begin(), all.end(), Index{0});

  auto draw_block = [&](const std::vector<Index>& block, bool use_mu) {
    const auto m = static_cast<Index>(block.size());
    inst.planted_size = planted_subset_size(m, spec.eps);
    if (!use_mu) return;
    auto s = random_subset(rng, block, inst.planted_size);
    std::sort(s.begin(), s.end());
    plant_ones(a, s);
    inst.planted.push_back(std::move(s));
  };

  switch (spec.variant) {
    case HardVariant::mu:
      inst.blocks.push_back(all);
      draw_block(all, true);
      break;
    case HardVariant::nu:
      inst.blocks.push_back(all);
      inst.planted_size = planted_subset_size(spec.n, spec.eps);
      break;
    case HardVariant::gamma: {
      inst.blocks.push_back(all);
      const bool use_mu = rng.bernoulli(0.5);
      draw_block(all, use_mu);
      break;
    }
    case HardVariant::gamma_b: {
      const Index m = spec.n / (2 * spec.k);
      // A random half of [n], split into k random blocks of size m.
      const auto half = random_subset(rng, all, spec.n / 2);
      for (Index b = 0; b < spec.k; ++b) {
        std::vector<Index> block(half.begin() + b * m, half.begin() + (b + 1) * m);
        std::sort(block.begin(), block.end());
        const bool use_mu = rng.bernoulli(0.5);
        draw_block(block, use_mu);
        inst.blocks.push_back(std::move(block));
      }
      break;
    }
  }
  inst.a = PsdMatrix(std::move(a));
  return inst;
}

double planted_frob_tail_sq(const HardInstance& inst, Index k) {
  const Index n = inst.a.n();
  std::vector<double> eig;
  Index covered = 0;
  for (const auto& s : inst.planted) {
    const auto size = static_cast<Index>(s.size());
    eig.push_back(static_cast<double>(size));
    eig.insert(eig.end(), static_cast<std::size_t>(size - 1), 0.0);
    covered += size;
  }
  eig.insert(eig.end(), static_cast<std::size_t>(n - covered), 1.0);
  std::sort(eig.begin(), eig.end(), std::greater<>());
  double tail = 0.0;
  for (std::size_t i = static_cast<std::size_t>(k); i < eig.size(); ++i) tail += eig[i] * eig[i];
  return tail;
}

Counterexample gen_sqrt_route_counterexample(Index n, Index k, double eps, double alpha,
                                             double beta) {
  if (!(alpha > beta && beta > 0.0)) {
    throw ValidationError("counterexample: requires alpha > beta > 0");
  }
  if (k < 1 || n < k + 2) throw ValidationError("counterexample: requires k >= 1, n >= k + 2");
  if (!(eps > 0.0)) throw ValidationError("counterexample: eps must be positive");
  Matrix a = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    if (i < k) {
      a(i, i) = alpha * alpha;
    } else if (i > k) {
      a(i, i) = beta * beta;
    }
  }
  Matrix b = Matrix::Zero(n, n);
  for (Index i = 0; i < k; ++i) b(i, i) = alpha;
  b(0, k + 1) = std::sqrt(eps * static_cast<double>(n - k - 1)) * beta;

  Counterexample out;
  out.a = PsdMatrix(std::move(a));
  out.b = std::move(b);
  out.k = k;
  out.eps = eps;
  out.alpha = alpha;
  out.beta = beta;
  return out;
}

}  // namespace psdsketch
