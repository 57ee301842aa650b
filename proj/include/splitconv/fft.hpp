#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "splitconv/grid.hpp"

namespace splitconv {

using Complex = std::complex<double>;

/// Tallies of arithmetic work and memory traffic. One complex multiply is
/// accounted as 4 real multiplies + 2 real adds, one complex add as 2 real
/// adds; real_mults/real_adds additionally absorb work done directly in the
/// real domain (sliding-window taps, overlap-add accumulation). Combining
/// two tallies sums every field.
struct OpCount {
  std::uint64_t complex_mults = 0;
  std::uint64_t complex_adds = 0;
  std::uint64_t real_mults = 0;
  std::uint64_t real_adds = 0;
  std::uint64_t mem_reads = 0;
  std::uint64_t mem_writes = 0;

  void tally_complex_mults(std::uint64_t n) {
    complex_mults += n;
    real_mults += 4 * n;
    real_adds += 2 * n;
  }
  void tally_complex_adds(std::uint64_t n) {
    complex_adds += n;
    real_adds += 2 * n;
  }

  OpCount& operator+=(const OpCount& other);
  friend OpCount operator+(OpCount a, const OpCount& b) { return a += b; }
  bool operator==(const OpCount&) const = default;
};

/// Dense 2-D complex array, row-major. Transform dimensions must be powers
/// of two; construction rejects non-finite values.
class ComplexGrid {
 public:
  ComplexGrid(std::size_t rows, std::size_t cols);  // zero-filled
  ComplexGrid(std::size_t rows, std::size_t cols, std::vector<Complex> values);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return values_.size(); }

  Complex operator()(std::size_t r, std::size_t c) const {
    return values_[r * cols_ + c];
  }
  const std::vector<Complex>& values() const& { return values_; }
  std::vector<Complex> values() && { return std::move(values_); }

  bool same_shape(const ComplexGrid& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Complex> values_;
};

using Spectrum = ComplexGrid;

enum class FftDirection { Forward, Inverse };

struct Fft1dResult {
  std::vector<Complex> data;
  OpCount ops;
};

struct Fft2dResult {
  ComplexGrid grid;
  OpCount ops;
};

/// Radix-2 Cooley-Tukey transform. Forward is the unnormalized DFT; Inverse
/// carries the full 1/M factor, so fft1d(fft1d(x, F), I) == x. Counters
/// record exactly (M/2)*log2(M) complex multiplies and M*log2(M) complex
/// adds per call (twiddle generation and inverse normalization excluded;
/// unit twiddles are counted like any other butterfly).
Fft1dResult fft1d(std::vector<Complex> line, FftDirection direction);

/// Row-column 2-D transform; rows first, then columns. Inverse normalizes
/// by 1/M per 1-D pass.
Fft2dResult fft2d(const ComplexGrid& grid, FftDirection direction);

/// Elementwise complex product; counts rows*cols complex multiplies.
Fft2dResult hadamard(const ComplexGrid& a, const ComplexGrid& b);

ComplexGrid real_to_complex(const RealGrid& grid);

/// Extracts the real part; errors if any |imaginary| residue exceeds tol
/// (that signals a broken pipeline, not roundoff).
RealGrid complex_to_real(const ComplexGrid& grid, double tol);

bool is_power_of_two(std::size_t n);
std::size_t next_power_of_two(std::size_t n);
std::uint64_t log2_exact(std::size_t n);

}  // namespace splitconv
