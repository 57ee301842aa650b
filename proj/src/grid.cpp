#include "splitconv/grid.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace splitconv {

namespace {

void check_finite(const std::vector<double>& values) {
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("RealGrid: non-finite value");
    }
  }
}

std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

}  // namespace

RealGrid::RealGrid(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), values_(rows * cols, 0.0) {
  if (rows == 0 || cols == 0) {
    throw std::invalid_argument("RealGrid: dimensions must be positive");
  }
}

RealGrid::RealGrid(std::size_t rows, std::size_t cols,
                   std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (rows == 0 || cols == 0) {
    throw std::invalid_argument("RealGrid: dimensions must be positive");
  }
  if (values_.size() != rows * cols) {
    throw std::invalid_argument(
        "RealGrid: values length " + std::to_string(values_.size()) +
        " does not match " + std::to_string(rows) + "x" + std::to_string(cols));
  }
  check_finite(values_);
}

Kernel::Kernel(RealGrid grid) : grid_(std::move(grid)) {
  if (grid_.rows() != grid_.cols()) {
    throw std::invalid_argument("Kernel: must be square, got " +
                                std::to_string(grid_.rows()) + "x" +
                                std::to_string(grid_.cols()));
  }
}

Kernel Kernel::flipped() const {
  const std::size_t k = side();
  std::vector<double> flipped(k * k);
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t c = 0; c < k; ++c) {
      flipped[r * k + c] = grid_(k - 1 - r, k - 1 - c);
    }
  }
  return Kernel(RealGrid(k, k, std::move(flipped)));
}

ChannelStack::ChannelStack(std::vector<RealGrid> planes)
    : planes_(std::move(planes)) {
  if (planes_.empty()) {
    throw std::invalid_argument("ChannelStack: needs at least one plane");
  }
  for (const RealGrid& p : planes_) {
    if (!p.same_shape(planes_.front())) {
      throw std::invalid_argument("ChannelStack: planes differ in shape");
    }
  }
}

namespace {

void check_mode(const RealGrid& input, std::size_t k, ConvMode mode) {
  if (mode.pad == PadMode::Same && k % 2 == 0) {
    throw std::invalid_argument("Same mode requires an odd kernel side, got " +
                                std::to_string(k));
  }
  if (mode.pad == PadMode::Valid &&
      (k > input.rows() || k > input.cols())) {
    throw std::invalid_argument("Valid mode requires k <= input dims");
  }
}

}  // namespace

RealGrid direct_conv2d(const RealGrid& input, const Kernel& kernel,
                       ConvMode mode) {
  check_mode(input, kernel.side(), mode);
  const Kernel effective =
      mode.op == ConvOp::Convolution ? kernel.flipped() : kernel;
  const RealGrid& w = effective.grid();
  const std::size_t k = kernel.side();
  const auto rows = static_cast<std::ptrdiff_t>(input.rows());
  const auto cols = static_cast<std::ptrdiff_t>(input.cols());
  const auto ks = static_cast<std::ptrdiff_t>(k);

  if (mode.pad == PadMode::Valid) {
    const std::size_t out_rows = input.rows() - k + 1;
    const std::size_t out_cols = input.cols() - k + 1;
    std::vector<double> out(out_rows * out_cols);
    for (std::size_t r = 0; r < out_rows; ++r) {
      for (std::size_t c = 0; c < out_cols; ++c) {
        double acc = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
          for (std::size_t j = 0; j < k; ++j) {
            acc += input(r + i, c + j) * w(i, j);
          }
        }
        out[r * out_cols + c] = acc;
      }
    }
    return RealGrid(out_rows, out_cols, std::move(out));
  }

  const std::ptrdiff_t h = ks / 2;
  std::vector<double> out(input.size());
  for (std::ptrdiff_t r = 0; r < rows; ++r) {
    for (std::ptrdiff_t c = 0; c < cols; ++c) {
      double acc = 0.0;
      for (std::ptrdiff_t i = 0; i < ks; ++i) {
        const std::ptrdiff_t rr = r + i - h;
        if (rr < 0 || rr >= rows) continue;
        for (std::ptrdiff_t j = 0; j < ks; ++j) {
          const std::ptrdiff_t cc = c + j - h;
          if (cc < 0 || cc >= cols) continue;
          acc += input(static_cast<std::size_t>(rr),
                       static_cast<std::size_t>(cc)) *
                 w(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
        }
      }
      out[static_cast<std::size_t>(r * cols + c)] = acc;
    }
  }
  return RealGrid(input.rows(), input.cols(), std::move(out));
}

RealGrid pad_zero(const RealGrid& input, std::size_t top, std::size_t bottom,
                  std::size_t left, std::size_t right) {
  const std::size_t rows = input.rows() + top + bottom;
  const std::size_t cols = input.cols() + left + right;
  std::vector<double> out(rows * cols, 0.0);
  for (std::size_t r = 0; r < input.rows(); ++r) {
    for (std::size_t c = 0; c < input.cols(); ++c) {
      out[(r + top) * cols + (c + left)] = input(r, c);
    }
  }
  return RealGrid(rows, cols, std::move(out));
}

RealGrid crop(const RealGrid& input, std::size_t row0, std::size_t col0,
              std::size_t h, std::size_t w) {
  if (row0 + h > input.rows() || col0 + w > input.cols()) {
    throw std::invalid_argument(
        "crop: window [" + std::to_string(row0) + "+" + std::to_string(h) +
        ", " + std::to_string(col0) + "+" + std::to_string(w) +
        "] exceeds grid " + std::to_string(input.rows()) + "x" +
        std::to_string(input.cols()));
  }
  std::vector<double> out(h * w);
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      out[r * w + c] = input(row0 + r, col0 + c);
    }
  }
  return RealGrid(h, w, std::move(out));
}

std::vector<Patch> split_with_halo(const RealGrid& input, std::size_t patch,
                                   std::size_t halo) {
  if (patch == 0) {
    throw std::invalid_argument("split_with_halo: patch side must be >= 1");
  }
  const std::size_t grid_rows = ceil_div(input.rows(), patch);
  const std::size_t grid_cols = ceil_div(input.cols(), patch);
  const RealGrid padded =
      pad_zero(input, halo, halo + (grid_rows * patch - input.rows()), halo,
               halo + (grid_cols * patch - input.cols()));
  const std::size_t side = patch + 2 * halo;

  std::vector<Patch> patches;
  patches.reserve(grid_rows * grid_cols);
  for (std::size_t gi = 0; gi < grid_rows; ++gi) {
    for (std::size_t gj = 0; gj < grid_cols; ++gj) {
      patches.push_back(
          Patch{gi, gj, crop(padded, gi * patch, gj * patch, side, side)});
    }
  }
  return patches;
}

RealGrid concat_patches(const std::vector<Patch>& patches,
                        std::size_t out_rows, std::size_t out_cols) {
  if (patches.empty()) {
    throw std::invalid_argument("concat_patches: no patches");
  }
  const std::size_t pr = patches.front().data.rows();
  const std::size_t pc = patches.front().data.cols();
  const std::size_t grid_rows = ceil_div(out_rows, pr);
  const std::size_t grid_cols = ceil_div(out_cols, pc);

  std::vector<char> seen(grid_rows * grid_cols, 0);
  for (const Patch& p : patches) {
    if (!p.data.same_shape(patches.front().data)) {
      throw std::invalid_argument("concat_patches: patch shapes differ");
    }
    if (p.grid_row >= grid_rows || p.grid_col >= grid_cols) {
      throw std::invalid_argument("concat_patches: coordinate (" +
                                  std::to_string(p.grid_row) + "," +
                                  std::to_string(p.grid_col) +
                                  ") outside the lattice");
    }
    char& slot = seen[p.grid_row * grid_cols + p.grid_col];
    if (slot) {
      throw std::invalid_argument("concat_patches: duplicate coordinate (" +
                                  std::to_string(p.grid_row) + "," +
                                  std::to_string(p.grid_col) + ")");
    }
    slot = 1;
  }
  if (patches.size() != grid_rows * grid_cols) {
    throw std::invalid_argument("concat_patches: lattice incomplete, got " +
                                std::to_string(patches.size()) + " of " +
                                std::to_string(grid_rows * grid_cols));
  }

  std::vector<double> out(out_rows * out_cols, 0.0);
  for (const Patch& p : patches) {
    for (std::size_t r = 0; r < pr; ++r) {
      const std::size_t rr = p.grid_row * pr + r;
      if (rr >= out_rows) break;
      for (std::size_t c = 0; c < pc; ++c) {
        const std::size_t cc = p.grid_col * pc + c;
        if (cc >= out_cols) break;
        out[rr * out_cols + cc] = p.data(r, c);
      }
    }
  }
  return RealGrid(out_rows, out_cols, std::move(out));
}

double max_abs_diff(const RealGrid& a, const RealGrid& b) {
  if (!a.same_shape(b)) {
    throw std::invalid_argument("max_abs_diff: shape mismatch");
  }
  double max = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    max = std::max(max, std::abs(a.values()[i] - b.values()[i]));
  }
  return max;
}

}  // namespace splitconv
