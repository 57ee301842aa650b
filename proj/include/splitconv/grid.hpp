#pragma once

#include <cstddef>
#include <vector>

namespace splitconv {

/// Dense 2-D array of doubles, row-major. Immutable after construction;
/// construction rejects non-finite values and shape/length mismatches.
class RealGrid {
 public:
  RealGrid(std::size_t rows, std::size_t cols);  // zero-filled
  RealGrid(std::size_t rows, std::size_t cols, std::vector<double> values);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return values_.size(); }

  double operator()(std::size_t r, std::size_t c) const {
    return values_[r * cols_ + c];
  }
  const std::vector<double>& values() const { return values_; }

  bool same_shape(const RealGrid& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }
  bool operator==(const RealGrid& other) const = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> values_;
};

/// Square convolution filter of side k.
class Kernel {
 public:
  explicit Kernel(RealGrid grid);

  std::size_t side() const { return grid_.rows(); }
  const RealGrid& grid() const { return grid_; }

  /// Kernel mirrored in both axes.
  Kernel flipped() const;

 private:
  RealGrid grid_;
};

/// Stack of equally shaped planes (one per channel).
class ChannelStack {
 public:
  explicit ChannelStack(std::vector<RealGrid> planes);

  std::size_t channels() const { return planes_.size(); }
  std::size_t rows() const { return planes_.front().rows(); }
  std::size_t cols() const { return planes_.front().cols(); }
  const RealGrid& plane(std::size_t c) const { return planes_.at(c); }

 private:
  std::vector<RealGrid> planes_;
};

enum class PadMode { Same, Valid };
enum class ConvOp { Convolution, Correlation };

/// Output-size convention plus the sliding-window operation. Same mode
/// zero-pads floor(k/2) at the borders and requires odd k; Convolution
/// flips the kernel in both axes relative to Correlation.
struct ConvMode {
  PadMode pad = PadMode::Same;
  ConvOp op = ConvOp::Convolution;
};

/// Brute-force sliding-window convolution. Reference for every FFT engine.
RealGrid direct_conv2d(const RealGrid& input, const Kernel& kernel,
                       ConvMode mode);

RealGrid pad_zero(const RealGrid& input, std::size_t top, std::size_t bottom,
                  std::size_t left, std::size_t right);

RealGrid crop(const RealGrid& input, std::size_t row0, std::size_t col0,
              std::size_t h, std::size_t w);

/// One tile of a split image together with its lattice position.
struct Patch {
  std::size_t grid_row = 0;
  std::size_t grid_col = 0;
  RealGrid data;
};

/// Splits into ceil(rows/patch) x ceil(cols/patch) overlapping tiles of side
/// patch + 2*halo. The input is zero-padded by halo on every side and at
/// bottom/right up to the next multiple of patch; tile interiors tile the
/// input exactly, halos overlap the neighbors.
std::vector<Patch> split_with_halo(const RealGrid& input, std::size_t patch,
                                   std::size_t halo);

/// Inverse of a halo-free split: patch (i,j) lands at offset (i*S, j*S);
/// positions past out_rows/out_cols are dropped. The lattice must be
/// complete and duplicate-free.
RealGrid concat_patches(const std::vector<Patch>& patches,
                        std::size_t out_rows, std::size_t out_cols);

double max_abs_diff(const RealGrid& a, const RealGrid& b);

}  // namespace splitconv
