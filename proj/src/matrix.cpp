#include "psdsketch/matrix.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstdio>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "psdsketch/errors.hpp"

namespace psdsketch {

PsdMatrix::PsdMatrix(Matrix m) : data_(std::move(m)) {
  if (data_.rows() != data_.cols()) {
    throw ValidationError("PsdMatrix: matrix must be square");
  }
  if (!data_.allFinite()) {
    throw ValidationError("PsdMatrix: non-finite entry");
  }
  const Index n = data_.rows();
  const double scale = n > 0 ? data_.cwiseAbs().maxCoeff() : 0.0;
  for (Index j = 0; j < n; ++j) {
    for (Index i = j + 1; i < n; ++i) {
      if (std::abs(data_(i, j) - data_(j, i)) > 1e-10 * (1.0 + scale)) {
        throw ValidationError("PsdMatrix: input is not symmetric");
      }
      data_(i, j) = data_(j, i);
    }
  }
}

namespace detail {

static_assert(std::endian::native == std::endian::little ||
                  std::endian::native == std::endian::big,
              "mixed-endian platforms are not supported");

template <typename T>
static void put_le(std::ostream& out, T v) {
  unsigned char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(buf, buf + sizeof(T));
  }
  out.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <typename T>
static T get_le(std::istream& in) {
  unsigned char buf[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(buf), sizeof(T))) {
    throw ValidationError("unexpected end of binary stream");
  }
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(buf, buf + sizeof(T));
  }
  T v;
  std::memcpy(&v, buf, sizeof(T));
  return v;
}

void put_u32(std::ostream& out, std::uint32_t v) { put_le(out, v); }
void put_u64(std::ostream& out, std::uint64_t v) { put_le(out, v); }
void put_f64(std::ostream& out, double v) { put_le(out, v); }
std::uint32_t get_u32(std::istream& in) { return get_le<std::uint32_t>(in); }
std::uint64_t get_u64(std::istream& in) { return get_le<std::uint64_t>(in); }
double get_f64(std::istream& in) { return get_le<double>(in); }

}  // namespace detail

namespace {

constexpr char kPsdmMagic[4] = {'P', 'S', 'D', 'M'};
constexpr std::uint32_t kPsdmVersion = 1;

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot write " + path.string());
  return out;
}

double parse_double(const std::string& field) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(field, &pos);
  } catch (const std::exception&) {
    throw ValidationError("CSV: bad number '" + field + "'");
  }
  while (pos < field.size() && std::isspace(static_cast<unsigned char>(field[pos]))) ++pos;
  if (pos != field.size()) throw ValidationError("CSV: bad number '" + field + "'");
  return v;
}

}  // namespace

void write_psdm(const PsdMatrix& a, std::ostream& out) {
  out.write(kPsdmMagic, 4);
  detail::put_u32(out, kPsdmVersion);
  detail::put_u64(out, static_cast<std::uint64_t>(a.n()));
  for (Index i = 0; i < a.n(); ++i) {
    for (Index j = 0; j < a.n(); ++j) detail::put_f64(out, a(i, j));
  }
}

PsdMatrix read_psdm(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kPsdmMagic, 4) != 0) {
    throw ValidationError("PSDM: bad magic");
  }
  if (detail::get_u32(in) != kPsdmVersion) throw ValidationError("PSDM: unsupported version");
  const std::uint64_t n = detail::get_u64(in);
  if (n == 0 || n > (1u << 20)) throw ValidationError("PSDM: implausible dimension");
  Matrix m(n, n);
  for (std::uint64_t i = 0; i < n; ++i) {
    for (std::uint64_t j = 0; j < n; ++j) m(i, j) = detail::get_f64(in);
  }
  return PsdMatrix(std::move(m));
}

void write_psdm(const PsdMatrix& a, const std::filesystem::path& path) {
  auto out = open_out(path);
  write_psdm(a, out);
}

PsdMatrix read_psdm(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_psdm(in);
}

void write_csv(const PsdMatrix& a, std::ostream& out) {
  char buf[32];
  for (Index i = 0; i < a.n(); ++i) {
    for (Index j = 0; j < a.n(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", a(i, j));
      if (j > 0) out << ',';
      out << buf;
    }
    out << '\n';
  }
}

PsdMatrix read_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) row.push_back(parse_double(field));
    rows.push_back(std::move(row));
  }
  const auto n = static_cast<Index>(rows.size());
  if (n == 0) throw ValidationError("CSV: empty matrix");
  Matrix m(n, n);
  for (Index i = 0; i < n; ++i) {
    if (static_cast<Index>(rows[i].size()) != n) throw ValidationError("CSV: matrix is not square");
    for (Index j = 0; j < n; ++j) m(i, j) = rows[i][j];
  }
  return PsdMatrix(std::move(m));
}

void write_vector_csv(const Vector& v, std::ostream& out) {
  char buf[32];
  for (Index i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", v[i]);
    out << buf << '\n';
  }
}

Vector read_vector_csv(std::istream& in) {
  std::vector<double> vals;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    vals.push_back(parse_double(line));
  }
  return Eigen::Map<Vector>(vals.data(), static_cast<Index>(vals.size()));
}

void write_vector_bin(const Vector& v, std::ostream& out) {
  detail::put_u64(out, static_cast<std::uint64_t>(v.size()));
  for (Index i = 0; i < v.size(); ++i) detail::put_f64(out, v[i]);
}

Vector read_vector_bin(std::istream& in) {
  const std::uint64_t len = detail::get_u64(in);
  if (len > (1ull << 32)) throw ValidationError("vector: implausible length");
  Vector v(static_cast<Index>(len));
  for (Index i = 0; i < v.size(); ++i) v[i] = detail::get_f64(in);
  return v;
}

Vector read_vector(const std::filesystem::path& path) {
  auto in = open_in(path);
  return path.extension() == ".csv" ? read_vector_csv(in) : read_vector_bin(in);
}

void write_vector(const Vector& v, const std::filesystem::path& path) {
  auto out = open_out(path);
  if (path.extension() == ".csv") {
    write_vector_csv(v, out);
  } else {
    write_vector_bin(v, out);
  }
}

}  // namespace psdsketch
