#include "splitconv/fft.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace splitconv {

OpCount& OpCount::operator+=(const OpCount& other) {
  complex_mults += other.complex_mults;
  complex_adds += other.complex_adds;
  real_mults += other.real_mults;
  real_adds += other.real_adds;
  mem_reads += other.mem_reads;
  mem_writes += other.mem_writes;
  return *this;
}

namespace {

void check_finite(const std::vector<Complex>& values) {
  for (const Complex& v : values) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw std::invalid_argument("ComplexGrid: non-finite value");
    }
  }
}

// Twiddle tables are immutable once inserted; the mutex only guards the
// lookup, so concurrent transforms read shared read-only data.
const std::vector<Complex>& twiddle_table(std::size_t m, bool inverse) {
  static std::mutex mutex;
  static std::map<std::pair<std::size_t, bool>, std::vector<Complex>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto [it, inserted] = cache.try_emplace({m, inverse});
  if (inserted) {
    std::vector<Complex>& table = it->second;
    table.resize(m / 2);
    const double unit = (inverse ? 2.0 : -2.0) * std::numbers::pi /
                        static_cast<double>(m);
    for (std::size_t t = 0; t < m / 2; ++t) {
      table[t] = std::polar(1.0, unit * static_cast<double>(t));
    }
  }
  return it->second;
}

}  // namespace

ComplexGrid::ComplexGrid(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), values_(rows * cols, Complex{0.0, 0.0}) {
  if (rows == 0 || cols == 0) {
    throw std::invalid_argument("ComplexGrid: dimensions must be positive");
  }
}

ComplexGrid::ComplexGrid(std::size_t rows, std::size_t cols,
                         std::vector<Complex> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (rows == 0 || cols == 0) {
    throw std::invalid_argument("ComplexGrid: dimensions must be positive");
  }
  if (values_.size() != rows * cols) {
    throw std::invalid_argument("ComplexGrid: values length mismatch");
  }
  check_finite(values_);
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_power_of_two(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

std::uint64_t log2_exact(std::size_t n) {
  if (!is_power_of_two(n)) {
    throw std::invalid_argument("log2_exact: not a power of two");
  }
  std::uint64_t bits = 0;
  while ((std::size_t{1} << bits) < n) ++bits;
  return bits;
}

Fft1dResult fft1d(std::vector<Complex> line, FftDirection direction) {
  const std::size_t m = line.size();
  if (!is_power_of_two(m)) {
    throw std::invalid_argument("fft1d: length " + std::to_string(m) +
                                " is not a power of two");
  }
  OpCount ops;
  if (m == 1) {
    return {std::move(line), ops};
  }

  for (std::size_t i = 1, j = 0; i < m; ++i) {
    std::size_t bit = m >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(line[i], line[j]);
  }

  const bool inverse = direction == FftDirection::Inverse;
  const std::vector<Complex>& table = twiddle_table(m, inverse);
  std::uint64_t butterflies = 0;
  for (std::size_t len = 2; len <= m; len <<= 1) {
    const std::size_t half = len >> 1;
    const std::size_t stride = m / len;
    for (std::size_t start = 0; start < m; start += len) {
      for (std::size_t j = 0; j < half; ++j) {
        const Complex w = table[j * stride];
        const Complex t = w * line[start + j + half];
        const Complex u = line[start + j];
        line[start + j] = u + t;
        line[start + j + half] = u - t;
        ++butterflies;
      }
    }
  }
  // One complex multiply and two complex adds per butterfly; the inverse
  // normalization below is excluded from the tallies.
  ops.tally_complex_mults(butterflies);
  ops.tally_complex_adds(2 * butterflies);

  if (inverse) {
    const double scale = 1.0 / static_cast<double>(m);
    for (Complex& v : line) v *= scale;
  }
  return {std::move(line), ops};
}

Fft2dResult fft2d(const ComplexGrid& grid, FftDirection direction) {
  const std::size_t rows = grid.rows();
  const std::size_t cols = grid.cols();
  if (!is_power_of_two(rows) || !is_power_of_two(cols)) {
    throw std::invalid_argument("fft2d: " + std::to_string(rows) + "x" +
                                std::to_string(cols) +
                                " is not a power-of-two shape");
  }
  OpCount ops;
  std::vector<Complex> work(grid.values());

  std::vector<Complex> line(cols);
  for (std::size_t r = 0; r < rows; ++r) {
    line.assign(work.begin() + r * cols, work.begin() + (r + 1) * cols);
    Fft1dResult res = fft1d(std::move(line), direction);
    ops += res.ops;
    line = std::move(res.data);
    std::copy(line.begin(), line.end(), work.begin() + r * cols);
  }

  std::vector<Complex> column(rows);
  for (std::size_t c = 0; c < cols; ++c) {
    for (std::size_t r = 0; r < rows; ++r) column[r] = work[r * cols + c];
    Fft1dResult res = fft1d(std::move(column), direction);
    ops += res.ops;
    column = std::move(res.data);
    for (std::size_t r = 0; r < rows; ++r) work[r * cols + c] = column[r];
  }

  return {ComplexGrid(rows, cols, std::move(work)), ops};
}

Fft2dResult hadamard(const ComplexGrid& a, const ComplexGrid& b) {
  if (!a.same_shape(b)) {
    throw std::invalid_argument("hadamard: shape mismatch");
  }
  std::vector<Complex> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    out[i] = a.values()[i] * b.values()[i];
  }
  OpCount ops;
  ops.tally_complex_mults(a.size());
  return {ComplexGrid(a.rows(), a.cols(), std::move(out)), ops};
}

ComplexGrid real_to_complex(const RealGrid& grid) {
  std::vector<Complex> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out[i] = Complex{grid.values()[i], 0.0};
  }
  return ComplexGrid(grid.rows(), grid.cols(), std::move(out));
}

RealGrid complex_to_real(const ComplexGrid& grid, double tol) {
  double residue = 0.0;
  for (const Complex& v : grid.values()) {
    residue = std::max(residue, std::abs(v.imag()));
  }
  if (residue > tol) {
    throw std::runtime_error("complex_to_real: imaginary residue " +
                             std::to_string(residue) + " exceeds tolerance " +
                             std::to_string(tol));
  }
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out[i] = grid.values()[i].real();
  }
  return RealGrid(grid.rows(), grid.cols(), std::move(out));
}

}  // namespace splitconv
