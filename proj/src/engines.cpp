#include "splitconv/engines.hpp"

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace splitconv {

namespace {

// Roundoff guard for real-result extraction; genuine pipeline bugs show up
// as O(1) residues.
constexpr double kImagTol = 1e-8;

std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

void check_square(const RealGrid& input, const char* who) {
  if (input.rows() != input.cols()) {
    throw std::invalid_argument(std::string(who) +
                                ": input must be square, got " +
                                std::to_string(input.rows()) + "x" +
                                std::to_string(input.cols()));
  }
}

void check_mode(std::size_t rows, std::size_t cols, std::size_t k,
                ConvMode mode, const char* who) {
  if (mode.pad == PadMode::Same && k % 2 == 0) {
    throw std::invalid_argument(std::string(who) +
                                ": Same mode requires odd kernel side");
  }
  if (mode.pad == PadMode::Valid && (k > rows || k > cols)) {
    throw std::invalid_argument(std::string(who) +
                                ": Valid mode requires k <= input dims");
  }
}

// Embed a grid at the origin of an M x M transform plane.
ComplexGrid embed(const RealGrid& grid, std::size_t m) {
  return real_to_complex(
      pad_zero(grid, 0, m - grid.rows(), 0, m - grid.cols()));
}

// Crop of the full linear convolution F (support (N+k-1)^2 at the origin)
// for the requested mode: Same keeps F[h..h+N), Valid keeps F[k-1..N).
RealGrid crop_full_conv(const RealGrid& full, std::size_t n, std::size_t k,
                        PadMode pad) {
  if (pad == PadMode::Same) {
    return crop(full, k / 2, k / 2, n, n);
  }
  return crop(full, k - 1, k - 1, n - k + 1, n - k + 1);
}

std::uint64_t same_axis_taps(std::size_t n, std::size_t k) {
  const auto h = static_cast<std::ptrdiff_t>(k / 2);
  const auto nn = static_cast<std::ptrdiff_t>(n);
  const auto kk = static_cast<std::ptrdiff_t>(k);
  std::uint64_t total = 0;
  for (std::ptrdiff_t r = 0; r < nn; ++r) {
    const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, h - r);
    const std::ptrdiff_t hi = std::min(kk, nn + h - r);
    total += static_cast<std::uint64_t>(hi - lo);
  }
  return total;
}

}  // namespace

const char* engine_name(EngineKind kind) {
  switch (kind) {
    case EngineKind::Direct: return "direct";
    case EngineKind::FullFft: return "full_fft";
    case EngineKind::Oaa: return "oaa";
    case EngineKind::Split: return "split";
  }
  return "?";
}

SplitPlan make_split_plan(std::size_t n, std::size_t k, std::size_t s,
                          ConvMode mode) {
  if (n == 0 || k == 0 || s == 0) {
    throw std::invalid_argument("make_split_plan: sizes must be positive");
  }
  check_mode(n, n, k, mode, "make_split_plan");
  SplitPlan plan;
  plan.input_side = n;
  plan.patch = s;
  plan.kernel_side = k;
  plan.halo = k / 2;
  plan.logical_patch = s + k - 1;
  plan.fft_size =
      next_power_of_two(std::max(s + 2 * plan.halo, plan.logical_patch));
  plan.grid_rows = ceil_div(n, s);
  plan.grid_cols = ceil_div(n, s);
  return plan;
}

KernelSpectrum make_kernel_spectrum(const Kernel& kernel,
                                    std::size_t fft_size, ConvOp op) {
  if (!is_power_of_two(fft_size) || fft_size < kernel.side()) {
    throw std::invalid_argument(
        "make_kernel_spectrum: fft_size must be a power of two >= k");
  }
  // The transform-domain product is a plain convolution; Correlation is
  // obtained by flipping the filter up front.
  const Kernel effective =
      op == ConvOp::Correlation ? kernel.flipped() : kernel;
  Fft2dResult fft = fft2d(embed(effective.grid(), fft_size),
                          FftDirection::Forward);
  return KernelSpectrum{fft_size, std::move(fft.grid), fft.ops};
}

ConvResult conv_direct(const RealGrid& input, const Kernel& kernel,
                       ConvMode mode) {
  RealGrid out = direct_conv2d(input, kernel, mode);
  const std::size_t k = kernel.side();
  OpCount ops;
  std::uint64_t taps = 0;
  if (mode.pad == PadMode::Valid) {
    taps = static_cast<std::uint64_t>(out.size()) * k * k;
  } else {
    taps = same_axis_taps(input.rows(), k) * same_axis_taps(input.cols(), k);
  }
  ops.real_mults += taps;
  ops.real_adds += taps - out.size();  // every window holds >= 1 tap
  ops.mem_reads += taps;
  ops.mem_writes += out.size();
  return ConvResult{std::move(out), ops};
}

ConvResult conv_full_fft(const RealGrid& input, const Kernel& kernel,
                         ConvMode mode) {
  check_square(input, "conv_full_fft");
  const std::size_t n = input.rows();
  const std::size_t k = kernel.side();
  check_mode(n, n, k, mode, "conv_full_fft");

  const std::size_t p = next_power_of_two(n + k - 1);
  OpCount ops;
  Fft2dResult image = fft2d(embed(input, p), FftDirection::Forward);
  ops += image.ops;
  KernelSpectrum filter = make_kernel_spectrum(kernel, p, mode.op);
  ops += filter.ops;
  Fft2dResult product = hadamard(image.grid, filter.spectrum);
  ops += product.ops;
  Fft2dResult inverse = fft2d(product.grid, FftDirection::Inverse);
  ops += inverse.ops;

  RealGrid full = complex_to_real(inverse.grid, kImagTol);
  RealGrid out = crop_full_conv(full, n, k, mode.pad);
  ops.mem_reads += n * n;
  ops.mem_writes += out.size();
  return ConvResult{std::move(out), ops};
}

ConvResult conv_oaa(const RealGrid& input, const Kernel& kernel,
                    ConvMode mode) {
  check_square(input, "conv_oaa");
  const std::size_t n = input.rows();
  const std::size_t k = kernel.side();
  check_mode(n, n, k, mode, "conv_oaa");

  const std::size_t blocks = ceil_div(n, k);
  const std::size_t tiled = blocks * k;
  const RealGrid padded = pad_zero(input, 0, tiled - n, 0, tiled - n);
  const std::size_t q = next_power_of_two(2 * k - 1);

  OpCount ops;
  KernelSpectrum filter = make_kernel_spectrum(kernel, q, mode.op);
  ops += filter.ops;

  const std::size_t acc_side = tiled + k - 1;
  std::vector<double> acc(acc_side * acc_side, 0.0);
  std::vector<char> written(acc_side * acc_side, 0);
  std::uint64_t overlap_adds = 0;

  for (std::size_t bi = 0; bi < blocks; ++bi) {
    for (std::size_t bj = 0; bj < blocks; ++bj) {
      const RealGrid block = crop(padded, bi * k, bj * k, k, k);
      Fft2dResult spec = fft2d(embed(block, q), FftDirection::Forward);
      ops += spec.ops;
      Fft2dResult product = hadamard(spec.grid, filter.spectrum);
      ops += product.ops;
      Fft2dResult inverse = fft2d(product.grid, FftDirection::Inverse);
      ops += inverse.ops;
      const RealGrid partial = complex_to_real(inverse.grid, kImagTol);
      // Linear support of a k x k block convolution is (2k-1)^2.
      for (std::size_t u = 0; u < 2 * k - 1; ++u) {
        for (std::size_t v = 0; v < 2 * k - 1; ++v) {
          const std::size_t idx = (bi * k + u) * acc_side + (bj * k + v);
          if (written[idx]) {
            ++overlap_adds;
          } else {
            written[idx] = 1;
          }
          acc[idx] += partial(u, v);
        }
      }
    }
  }
  ops.real_adds += overlap_adds;

  RealGrid full = crop(RealGrid(acc_side, acc_side, std::move(acc)), 0, 0,
                       n + k - 1, n + k - 1);
  RealGrid out = crop_full_conv(full, n, k, mode.pad);
  ops.mem_reads += tiled * tiled;
  ops.mem_writes += out.size();
  return ConvResult{std::move(out), ops};
}

ConvResult conv_split(const RealGrid& input, const Kernel& kernel,
                      const SplitPlan& plan, ConvMode mode) {
  check_square(input, "conv_split");
  const std::size_t n = input.rows();
  const std::size_t k = kernel.side();
  check_mode(n, n, k, mode, "conv_split");
  if (plan.input_side != n || plan.kernel_side != k) {
    throw std::invalid_argument("conv_split: plan built for different sizes");
  }

  const std::size_t s = plan.patch;
  const std::size_t halo = plan.halo;
  const std::size_t m = plan.fft_size;

  OpCount ops;
  KernelSpectrum filter = make_kernel_spectrum(kernel, m, mode.op);
  ops += filter.ops;

  const std::vector<Patch> patches = split_with_halo(input, s, halo);
  std::vector<Patch> results;
  results.reserve(patches.size());
  for (const Patch& patch : patches) {
    Fft2dResult spec = fft2d(embed(patch.data, m), FftDirection::Forward);
    ops += spec.ops;
    Fft2dResult product = hadamard(spec.grid, filter.spectrum);
    ops += product.ops;
    Fft2dResult inverse = fft2d(product.grid, FftDirection::Inverse);
    ops += inverse.ops;
    const RealGrid plane = complex_to_real(inverse.grid, kImagTol);
    // Offset 2*halo >= k-1 keeps the kept window free of circular wrap
    // and aligned with the patch interior.
    results.push_back(
        Patch{patch.grid_row, patch.grid_col,
              crop(plane, 2 * halo, 2 * halo, s, s)});
  }

  // Concatenated grid G satisfies G[x,y] = F[x+halo, y+halo] with F the
  // full linear convolution.
  RealGrid aligned = concat_patches(results, n, n);
  RealGrid out = mode.pad == PadMode::Same
                     ? std::move(aligned)
                     : crop(aligned, k - 1 - halo, k - 1 - halo, n - k + 1,
                            n - k + 1);

  ops.mem_reads +=
      static_cast<std::uint64_t>(patches.size()) * (s + 2 * halo) *
      (s + 2 * halo);
  ops.mem_writes += out.size();
  return ConvResult{std::move(out), ops};
}

ConvResult convolve(EngineKind engine, const RealGrid& input,
                    const Kernel& kernel, ConvMode mode, std::size_t s) {
  switch (engine) {
    case EngineKind::Direct:
      return conv_direct(input, kernel, mode);
    case EngineKind::FullFft:
      return conv_full_fft(input, kernel, mode);
    case EngineKind::Oaa:
      return conv_oaa(input, kernel, mode);
    case EngineKind::Split:
      return conv_split(input, kernel,
                        make_split_plan(input.rows(), kernel.side(), s, mode),
                        mode);
  }
  throw std::invalid_argument("convolve: unknown engine");
}

namespace {

struct LayerShape {
  std::size_t k = 0;
  std::size_t out_rows = 0;
  std::size_t out_cols = 0;
};

LayerShape check_layer(const ChannelStack& input,
                       const std::vector<std::vector<Kernel>>& weights,
                       ConvMode mode) {
  if (weights.empty() || weights.front().empty()) {
    throw std::invalid_argument("layer_forward: empty weight table");
  }
  LayerShape shape;
  shape.k = weights.front().front().side();
  for (const auto& row : weights) {
    if (row.size() != input.channels()) {
      throw std::invalid_argument(
          "layer_forward: weight row size " + std::to_string(row.size()) +
          " != input channels " + std::to_string(input.channels()));
    }
    for (const Kernel& kernel : row) {
      if (kernel.side() != shape.k) {
        throw std::invalid_argument("layer_forward: kernel sides differ");
      }
    }
  }
  check_mode(input.rows(), input.cols(), shape.k, mode, "layer_forward");
  if (mode.pad == PadMode::Same) {
    shape.out_rows = input.rows();
    shape.out_cols = input.cols();
  } else {
    shape.out_rows = input.rows() - shape.k + 1;
    shape.out_cols = input.cols() - shape.k + 1;
  }
  return shape;
}

void accumulate_complex(std::vector<Complex>& acc, const ComplexGrid& term,
                        OpCount& ops) {
  for (std::size_t i = 0; i < term.size(); ++i) {
    acc[i] += term.values()[i];
  }
  ops.tally_complex_adds(term.size());
}

LayerResult layer_forward_direct(const ChannelStack& input,
                                 const std::vector<std::vector<Kernel>>& weights,
                                 ConvMode mode, const LayerShape& shape) {
  OpCount ops;
  std::vector<RealGrid> planes;
  planes.reserve(weights.size());
  for (const auto& row : weights) {
    std::vector<double> acc(shape.out_rows * shape.out_cols, 0.0);
    for (std::size_t c = 0; c < row.size(); ++c) {
      ConvResult r = conv_direct(input.plane(c), row[c], mode);
      ops += r.ops;
      for (std::size_t i = 0; i < acc.size(); ++i) {
        acc[i] += r.output.values()[i];
      }
      if (c > 0) ops.real_adds += acc.size();
    }
    planes.emplace_back(shape.out_rows, shape.out_cols, std::move(acc));
  }
  return LayerResult{ChannelStack(std::move(planes)), ops, 0, 0};
}

// Shared frequency-domain layer path. Patch spectra are computed once per
// (position, input channel); each filter spectrum once per (output, input)
// pair; the channel sum happens before the single inverse transform of
// each (position, output) pair.
LayerResult layer_forward_fft(const ChannelStack& input,
                              const std::vector<std::vector<Kernel>>& weights,
                              EngineKind engine, std::size_t s, ConvMode mode,
                              const LayerShape& shape) {
  const std::size_t k = shape.k;
  const std::size_t c_in = input.channels();
  const std::size_t c_out = weights.size();
  const std::size_t d = std::max(input.rows(), input.cols());

  OpCount ops;
  std::uint64_t forward = 0;
  std::uint64_t inverse = 0;

  std::vector<RealGrid> planes;
  planes.reserve(c_in);
  for (std::size_t c = 0; c < c_in; ++c) {
    planes.push_back(pad_zero(input.plane(c), 0, d - input.rows(), 0,
                              d - input.cols()));
  }

  const bool save_style = engine != EngineKind::Oaa;
  // Save-style geometry (Split; FullFft is the single-patch case) or
  // overlap-add blocks of the kernel side.
  const std::size_t patch_side = save_style
                                     ? (engine == EngineKind::FullFft ? d : s)
                                     : k;
  SplitPlan plan;
  std::size_t m = 0;
  std::size_t lattice = 0;
  std::size_t tiled = 0;
  if (save_style) {
    plan = make_split_plan(d, k, patch_side, mode);
    m = plan.fft_size;
    lattice = plan.grid_rows;
  } else {
    lattice = ceil_div(d, k);
    tiled = lattice * k;
    m = next_power_of_two(2 * k - 1);
  }
  const std::size_t positions = lattice * lattice;

  // Patch spectra, indexed [position][channel].
  std::vector<std::vector<ComplexGrid>> spectra(positions);
  if (save_style) {
    for (std::size_t c = 0; c < c_in; ++c) {
      std::vector<Patch> patches = split_with_halo(planes[c], patch_side,
                                                   plan.halo);
      for (std::size_t p = 0; p < positions; ++p) {
        Fft2dResult res = fft2d(embed(patches[p].data, m),
                                FftDirection::Forward);
        ops += res.ops;
        ++forward;
        ops.mem_reads += patches[p].data.size();
        spectra[p].push_back(std::move(res.grid));
      }
    }
  } else {
    for (std::size_t c = 0; c < c_in; ++c) {
      const RealGrid padded =
          pad_zero(planes[c], 0, tiled - d, 0, tiled - d);
      for (std::size_t bi = 0; bi < lattice; ++bi) {
        for (std::size_t bj = 0; bj < lattice; ++bj) {
          const RealGrid block = crop(padded, bi * k, bj * k, k, k);
          Fft2dResult res = fft2d(embed(block, m), FftDirection::Forward);
          ops += res.ops;
          ++forward;
          ops.mem_reads += block.size();
          spectra[bi * lattice + bj].push_back(std::move(res.grid));
        }
      }
    }
  }

  std::vector<RealGrid> out_planes;
  out_planes.reserve(c_out);
  for (std::size_t o = 0; o < c_out; ++o) {
    std::vector<KernelSpectrum> filters;
    filters.reserve(c_in);
    for (std::size_t c = 0; c < c_in; ++c) {
      filters.push_back(make_kernel_spectrum(weights[o][c], m, mode.op));
      ops += filters.back().ops;
      ++forward;
    }

    RealGrid plane(1, 1);
    if (save_style) {
      std::vector<Patch> results;
      results.reserve(positions);
      for (std::size_t p = 0; p < positions; ++p) {
        Fft2dResult first = hadamard(spectra[p][0], filters[0].spectrum);
        ops += first.ops;
        std::vector<Complex> acc = std::move(first.grid).values();
        for (std::size_t c = 1; c < c_in; ++c) {
          Fft2dResult prod = hadamard(spectra[p][c], filters[c].spectrum);
          ops += prod.ops;
          accumulate_complex(acc, prod.grid, ops);
        }
        Fft2dResult inv =
            fft2d(ComplexGrid(m, m, std::move(acc)), FftDirection::Inverse);
        ops += inv.ops;
        ++inverse;
        const RealGrid real = complex_to_real(inv.grid, kImagTol);
        results.push_back(Patch{p / lattice, p % lattice,
                                crop(real, 2 * plan.halo, 2 * plan.halo,
                                     patch_side, patch_side)});
      }
      RealGrid aligned = concat_patches(results, d, d);
      plane = mode.pad == PadMode::Same
                  ? std::move(aligned)
                  : crop(aligned, k - 1 - plan.halo, k - 1 - plan.halo,
                         d - k + 1, d - k + 1);
    } else {
      const std::size_t acc_side = tiled + k - 1;
      std::vector<double> acc(acc_side * acc_side, 0.0);
      std::vector<char> written(acc_side * acc_side, 0);
      std::uint64_t overlap_adds = 0;
      for (std::size_t p = 0; p < positions; ++p) {
        Fft2dResult first = hadamard(spectra[p][0], filters[0].spectrum);
        ops += first.ops;
        std::vector<Complex> freq = std::move(first.grid).values();
        for (std::size_t c = 1; c < c_in; ++c) {
          Fft2dResult prod = hadamard(spectra[p][c], filters[c].spectrum);
          ops += prod.ops;
          accumulate_complex(freq, prod.grid, ops);
        }
        Fft2dResult inv =
            fft2d(ComplexGrid(m, m, std::move(freq)), FftDirection::Inverse);
        ops += inv.ops;
        ++inverse;
        const RealGrid partial = complex_to_real(inv.grid, kImagTol);
        const std::size_t bi = p / lattice;
        const std::size_t bj = p % lattice;
        for (std::size_t u = 0; u < 2 * k - 1; ++u) {
          for (std::size_t v = 0; v < 2 * k - 1; ++v) {
            const std::size_t idx = (bi * k + u) * acc_side + (bj * k + v);
            if (written[idx]) {
              ++overlap_adds;
            } else {
              written[idx] = 1;
            }
            acc[idx] += partial(u, v);
          }
        }
      }
      ops.real_adds += overlap_adds;
      RealGrid full = crop(RealGrid(acc_side, acc_side, std::move(acc)), 0,
                           0, d + k - 1, d + k - 1);
      plane = crop_full_conv(full, d, k, mode.pad);
    }
    // Undo the square extension.
    out_planes.push_back(crop(plane, 0, 0, shape.out_rows, shape.out_cols));
    ops.mem_writes += shape.out_rows * shape.out_cols;
  }

  return LayerResult{ChannelStack(std::move(out_planes)), ops, forward,
                     inverse};
}

}  // namespace

LayerResult layer_forward(const ChannelStack& input,
                          const std::vector<std::vector<Kernel>>& weights,
                          EngineKind engine, std::size_t s, ConvMode mode) {
  const LayerShape shape = check_layer(input, weights, mode);
  if (engine == EngineKind::Direct) {
    return layer_forward_direct(input, weights, mode, shape);
  }
  return layer_forward_fft(input, weights, engine, s, mode, shape);
}

}  // namespace splitconv
