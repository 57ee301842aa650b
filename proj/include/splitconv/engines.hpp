#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "splitconv/fft.hpp"
#include "splitconv/grid.hpp"

namespace splitconv {

enum class EngineKind { Direct, FullFft, Oaa, Split };

const char* engine_name(EngineKind kind);

/// Geometry of one split-convolution run: patch side S, halo floor(k/2),
/// logical patch S+k-1, and the power-of-two transform side M >= both
/// S + 2*halo and S + k - 1.
struct SplitPlan {
  std::size_t input_side = 0;     // N
  std::size_t patch = 0;          // S
  std::size_t kernel_side = 0;    // k
  std::size_t halo = 0;           // floor(k/2)
  std::size_t logical_patch = 0;  // S + k - 1
  std::size_t fft_size = 0;       // M, power of two
  std::size_t grid_rows = 0;      // ceil(N/S)
  std::size_t grid_cols = 0;
};

SplitPlan make_split_plan(std::size_t n, std::size_t k, std::size_t s,
                          ConvMode mode);

/// Forward transform of the zero-padded (and, for Correlation, flipped)
/// filter. Computed once per convolution and shared across all patches.
struct KernelSpectrum {
  std::size_t fft_size = 0;
  ComplexGrid spectrum;
  OpCount ops;  // cost of producing the spectrum
};

KernelSpectrum make_kernel_spectrum(const Kernel& kernel, std::size_t fft_size,
                                    ConvOp op);

struct ConvResult {
  RealGrid output;
  OpCount ops;
};

/// Sliding-window reference engine; counters tally the taps actually
/// executed (border windows in Same mode touch fewer input elements).
ConvResult conv_direct(const RealGrid& input, const Kernel& kernel,
                       ConvMode mode);

/// Whole-image path: input and filter zero-padded to a common power-of-two
/// size >= N + k - 1 so the circular product realizes the linear
/// convolution, then cropped to the mode's window.
ConvResult conv_full_fft(const RealGrid& input, const Kernel& kernel,
                         ConvMode mode);

/// Overlap-and-add: non-overlapping k x k input blocks, each convolved at
/// transform size next_pow2(2k-1); the (2k-1)^2 partial outputs are summed
/// into the result at their block offsets. Overlapped accumulations are
/// tallied as real adds.
ConvResult conv_oaa(const RealGrid& input, const Kernel& kernel,
                    ConvMode mode);

/// Overlap-save split convolution: haloed patches, one shared kernel
/// spectrum, Hadamard product per patch, inverse transform, central crop,
/// concatenation. mem_reads records the patch fetches,
/// grid_rows*grid_cols*(S+2*halo)^2.
ConvResult conv_split(const RealGrid& input, const Kernel& kernel,
                      const SplitPlan& plan, ConvMode mode);

/// Dispatch by engine kind; s is consulted by the Split engine only.
ConvResult convolve(EngineKind engine, const RealGrid& input,
                    const Kernel& kernel, ConvMode mode, std::size_t s);

struct LayerResult {
  ChannelStack output;
  OpCount ops;
  std::uint64_t forward_transforms = 0;  // data + filter transforms
  std::uint64_t inverse_transforms = 0;  // one per patch per output channel
};

/// Multi-channel convolution layer: output channel o sums conv(input_c,
/// weights[o][c]) over input channels c. FFT engines accumulate that sum in
/// the frequency domain, so each output patch is inverse-transformed once
/// per output channel regardless of the input channel count. Non-square
/// inputs are zero-extended to a square and the result cropped back.
LayerResult layer_forward(const ChannelStack& input,
                          const std::vector<std::vector<Kernel>>& weights,
                          EngineKind engine, std::size_t s, ConvMode mode);

}  // namespace splitconv
