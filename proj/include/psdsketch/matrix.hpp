#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <iosfwd>

namespace psdsketch {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Dense symmetric n x n matrix. The upper triangle is canonical; the lower
// triangle is a mirror so A(i,j) == A(j,i) holds bit-for-bit.
class PsdMatrix {
 public:
  PsdMatrix() = default;

  // Throws ValidationError if `m` is not square, has non-finite entries, or
  // is asymmetric beyond 1e-10 relative to its largest entry.
  explicit PsdMatrix(Matrix m);

  Index n() const { return data_.rows(); }
  double operator()(Index i, Index j) const { return data_(i, j); }
  const Matrix& dense() const { return data_; }

  double trace() const { return data_.trace(); }
  double frobenius_sq() const { return data_.squaredNorm(); }

  friend bool operator==(const PsdMatrix& a, const PsdMatrix& b) {
    return a.data_.rows() == b.data_.rows() && a.data_ == b.data_;
  }

 private:
  Matrix data_;
};

// PSDM binary: "PSDM", u32 version = 1, u64 n, n*n f64 row-major, all LE.
void write_psdm(const PsdMatrix& a, std::ostream& out);
PsdMatrix read_psdm(std::istream& in);
void write_psdm(const PsdMatrix& a, const std::filesystem::path& path);
PsdMatrix read_psdm(const std::filesystem::path& path);

// n lines of n comma-separated values, no header.
void write_csv(const PsdMatrix& a, std::ostream& out);
PsdMatrix read_csv(std::istream& in);

// Vectors: CSV with one value per line, or u64 length + f64 values (LE).
void write_vector_csv(const Vector& v, std::ostream& out);
Vector read_vector_csv(std::istream& in);
void write_vector_bin(const Vector& v, std::ostream& out);
Vector read_vector_bin(std::istream& in);
// Dispatches on extension: ".csv" is text, anything else binary.
Vector read_vector(const std::filesystem::path& path);
void write_vector(const Vector& v, const std::filesystem::path& path);

namespace detail {
void put_u32(std::ostream& out, std::uint32_t v);
void put_u64(std::ostream& out, std::uint64_t v);
void put_f64(std::ostream& out, double v);
std::uint32_t get_u32(std::istream& in);
std::uint64_t get_u64(std::istream& in);
double get_f64(std::istream& in);
}  // namespace detail

}  // namespace psdsketch
