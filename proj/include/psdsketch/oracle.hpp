#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "psdsketch/matrix.hpp"

namespace psdsketch {

// Entry-level gateway to a PSD matrix. Every algorithm on the sublinear path
// reads A only through here. The counter tracks distinct symmetric pairs
// {i, j}: rereading (i, j) or reading (j, i) later does not count again.
// Safe to share between threads; the matrix must outlive the oracle.
class PsdOracle {
 public:
  explicit PsdOracle(const PsdMatrix& a);
  PsdOracle(const PsdOracle&) = delete;
  PsdOracle& operator=(const PsdOracle&) = delete;

  Index n() const { return n_; }

  // Throws std::out_of_range for indices outside [0, n).
  double entry(Index i, Index j);

  Vector diagonal();
  // A[rows, cols]
  Matrix gather(std::span<const Index> rows, std::span<const Index> cols);
  // A[:, cols]
  Matrix columns(std::span<const Index> cols);
  // A[rows, :]
  Matrix rows(std::span<const Index> rows);

  std::uint64_t access_count() const { return count_.load(std::memory_order_relaxed); }
  bool was_read(Index i, Index j) const;
  // The access log: every distinct pair read so far, as (min, max).
  std::vector<std::pair<Index, Index>> accessed_pairs() const;

 private:
  void mark(Index i, Index j);

  const PsdMatrix& a_;
  Index n_;
  std::unique_ptr<std::atomic<std::uint64_t>[]> seen_;
  std::atomic<std::uint64_t> count_{0};
};

}  // namespace psdsketch
