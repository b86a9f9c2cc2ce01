#include "psdsketch/oracle.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

namespace psdsketch {

namespace {

std::uint64_t pair_slot(Index i, Index j) {
  if (i > j) std::swap(i, j);
  const auto uj = static_cast<std::uint64_t>(j);
  return uj * (uj + 1) / 2 + static_cast<std::uint64_t>(i);
}

}  // namespace

PsdOracle::PsdOracle(const PsdMatrix& a) : a_(a), n_(a.n()) {
  const std::uint64_t pairs = static_cast<std::uint64_t>(n_) * (n_ + 1) / 2;
  const std::uint64_t words = (pairs + 63) / 64;
  seen_ = std::make_unique<std::atomic<std::uint64_t>[]>(words);
  for (std::uint64_t w = 0; w < words; ++w) seen_[w].store(0, std::memory_order_relaxed);
}

void PsdOracle::mark(Index i, Index j) {
  const std::uint64_t slot = pair_slot(i, j);
  const std::uint64_t bit = 1ull << (slot % 64);
  const std::uint64_t old = seen_[slot / 64].fetch_or(bit, std::memory_order_relaxed);
  if ((old & bit) == 0) count_.fetch_add(1, std::memory_order_relaxed);
}

double PsdOracle::entry(Index i, Index j) {
  if (i < 0 || j < 0 || i >= n_ || j >= n_) {
    throw std::out_of_range("PsdOracle::entry: index (" + std::to_string(i) + ", " +
                            std::to_string(j) + ") outside n = " + std::to_string(n_));
  }
  mark(i, j);
  return a_(i, j);
}

bool PsdOracle::was_read(Index i, Index j) const {
  if (i < 0 || j < 0 || i >= n_ || j >= n_) return false;
  const std::uint64_t slot = pair_slot(i, j);
  return (seen_[slot / 64].load(std::memory_order_relaxed) >> (slot % 64)) & 1ull;
}

std::vector<std::pair<Index, Index>> PsdOracle::accessed_pairs() const {
  std::vector<std::pair<Index, Index>> out;
  for (Index j = 0; j < n_; ++j) {
    for (Index i = 0; i <= j; ++i) {
      if (was_read(i, j)) out.emplace_back(i, j);
    }
  }
  return out;
}

Vector PsdOracle::diagonal() {
  Vector d(n_);
  for (Index i = 0; i < n_; ++i) d[i] = entry(i, i);
  return d;
}

Matrix PsdOracle::gather(std::span<const Index> rows, std::span<const Index> cols) {
  Matrix out(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) {
    for (std::size_t r = 0; r < rows.size(); ++r) {
      out(static_cast<Index>(r), static_cast<Index>(c)) = entry(rows[r], cols[c]);
    }
  }
  return out;
}

Matrix PsdOracle::columns(std::span<const Index> cols) {
  std::vector<Index> all(static_cast<std::size_t>(n_));
  std::iota(all.begin(), all.end(), Index{0});
  return gather(all, cols);
}

Matrix PsdOracle::rows(std::span<const Index> rows) {
  std::vector<Index> all(static_cast<std::size_t>(n_));
  std::iota(all.begin(), all.end(), Index{0});
  return gather(rows, all);
}

}  // namespace psdsketch
