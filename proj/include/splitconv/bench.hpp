#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <random>
#include <string>
#include <vector>

#include "splitconv/engines.hpp"

namespace splitconv {

/// One convolutional layer's shape.
struct LayerSpec {
  std::string name;
  std::size_t h = 0;
  std::size_t w = 0;
  std::size_t c_in = 0;
  std::size_t c_out = 0;
  std::size_t k = 0;
};

/// The 13 convolutional layers of VGG16, all with 3x3 filters.
std::vector<LayerSpec> vgg16_layers();

/// Uniform values in [-1, 1].
RealGrid random_grid(std::size_t rows, std::size_t cols, std::mt19937_64& rng);

/// Stable per-configuration seed derivation (splitmix64 mixing), so cases
/// are reproducible independently of evaluation order.
std::uint64_t mix_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> parts);

struct VerifySpec {
  std::vector<std::size_t> sizes{8, 16, 32, 64};
  std::vector<std::size_t> kernels{1, 3, 5, 7};
  std::vector<std::size_t> patch_sizes{4, 8, 16, 32};
  std::uint64_t seed = 42;
  double tolerance = 1e-9;
};

struct VerifyCase {
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t s = 0;
  ConvMode mode;
  bool skipped = false;  // s > n configurations
  double max_err = 0;    // worst engine vs direct
  bool passed = false;
};

/// Engine table, replaceable in tests.
struct EngineTable {
  std::function<ConvResult(const RealGrid&, const Kernel&, ConvMode)> full_fft;
  std::function<ConvResult(const RealGrid&, const Kernel&, ConvMode)> oaa;
  std::function<ConvResult(const RealGrid&, const Kernel&, ConvMode,
                           std::size_t)> split;
  static EngineTable standard();
};

/// Runs the equivalence matrix: every engine against direct_conv2d on
/// seeded random inputs, across Same/Valid and Convolution/Correlation.
std::vector<VerifyCase> run_verification(const VerifySpec& spec);
std::vector<VerifyCase> run_verification(const VerifySpec& spec,
                                         const EngineTable& engines);

struct BenchSpec {
  std::vector<EngineKind> engines{EngineKind::Direct, EngineKind::FullFft,
                                  EngineKind::Oaa, EngineKind::Split};
  std::size_t s = 8;
  std::size_t repeats = 3;
  double scale = 0.125;  // shrinks spatial dims and channel counts
  std::uint64_t seed = 42;
};

struct BenchRecord {
  std::string layer;
  EngineKind engine = EngineKind::Direct;
  std::size_t h = 0, w = 0, c_in = 0, c_out = 0, k = 0;
  std::size_t s = 0;  // split engine only, 0 otherwise
  std::uint64_t wall_ns_median = 0;
  double max_abs_err = 0;  // vs the Direct engine on the same tensors
  OpCount ops;
  std::string error;  // per-layer failure (e.g. allocation), else empty
};

LayerSpec scale_layer(const LayerSpec& layer, double scale);

/// Seeded forward-pass benchmark over the given layers. Timing is a median
/// of `repeats` monotonic-clock runs with one warm-up excluded; every FFT
/// engine's output is checked against the Direct engine.
std::vector<BenchRecord> run_benchmark(const BenchSpec& spec,
                                       const std::vector<LayerSpec>& layers);

}  // namespace splitconv
