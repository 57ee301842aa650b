#include "splitconv/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <new>
#include <optional>
#include <stdexcept>

namespace splitconv {

std::vector<LayerSpec> vgg16_layers() {
  return {
      {"conv1_1", 224, 224, 3, 64, 3},    {"conv1_2", 224, 224, 64, 64, 3},
      {"conv2_1", 112, 112, 64, 128, 3},  {"conv2_2", 112, 112, 128, 128, 3},
      {"conv3_1", 56, 56, 128, 256, 3},   {"conv3_2", 56, 56, 256, 256, 3},
      {"conv3_3", 56, 56, 256, 256, 3},   {"conv4_1", 28, 28, 256, 512, 3},
      {"conv4_2", 28, 28, 512, 512, 3},   {"conv4_3", 28, 28, 512, 512, 3},
      {"conv5_1", 14, 14, 512, 512, 3},   {"conv5_2", 14, 14, 512, 512, 3},
      {"conv5_3", 14, 14, 512, 512, 3},
  };
}

RealGrid random_grid(std::size_t rows, std::size_t cols,
                     std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> values(rows * cols);
  for (double& v : values) v = dist(rng);
  return RealGrid(rows, cols, std::move(values));
}

std::uint64_t mix_seed(std::uint64_t seed,
                       std::initializer_list<std::uint64_t> parts) {
  std::uint64_t state = seed;
  auto mix = [&state](std::uint64_t value) {
    state += 0x9e3779b97f4a7c15ull + value;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    state = z ^ (z >> 31);
  };
  for (std::uint64_t part : parts) mix(part);
  return state;
}

EngineTable EngineTable::standard() {
  EngineTable table;
  table.full_fft = [](const RealGrid& in, const Kernel& k, ConvMode m) {
    return conv_full_fft(in, k, m);
  };
  table.oaa = [](const RealGrid& in, const Kernel& k, ConvMode m) {
    return conv_oaa(in, k, m);
  };
  table.split = [](const RealGrid& in, const Kernel& k, ConvMode m,
                   std::size_t s) {
    return conv_split(in, k, make_split_plan(in.rows(), k.side(), s, m), m);
  };
  return table;
}

std::vector<VerifyCase> run_verification(const VerifySpec& spec) {
  return run_verification(spec, EngineTable::standard());
}

std::vector<VerifyCase> run_verification(const VerifySpec& spec,
                                         const EngineTable& engines) {
  std::vector<VerifyCase> cases;
  for (std::size_t n : spec.sizes) {
    for (std::size_t k : spec.kernels) {
      for (std::size_t s : spec.patch_sizes) {
        if (s > n) {
          VerifyCase c;
          c.n = n;
          c.k = k;
          c.s = s;
          c.skipped = true;
          c.passed = true;
          cases.push_back(c);
          continue;
        }
        for (PadMode pad : {PadMode::Same, PadMode::Valid}) {
          for (ConvOp op : {ConvOp::Convolution, ConvOp::Correlation}) {
            VerifyCase c;
            c.n = n;
            c.k = k;
            c.s = s;
            c.mode = ConvMode{pad, op};
            std::mt19937_64 rng(mix_seed(
                spec.seed,
                {n, k, s, static_cast<std::uint64_t>(pad),
                 static_cast<std::uint64_t>(op)}));
            const RealGrid input = random_grid(n, n, rng);
            const Kernel kernel(random_grid(k, k, rng));
            const RealGrid reference = direct_conv2d(input, kernel, c.mode);
            double err = 0.0;
            err = std::max(err, max_abs_diff(
                reference, engines.full_fft(input, kernel, c.mode).output));
            err = std::max(err, max_abs_diff(
                reference, engines.oaa(input, kernel, c.mode).output));
            err = std::max(err, max_abs_diff(
                reference, engines.split(input, kernel, c.mode, s).output));
            c.max_err = err;
            c.passed = err <= spec.tolerance;
            cases.push_back(c);
          }
        }
      }
    }
  }
  return cases;
}

LayerSpec scale_layer(const LayerSpec& layer, double scale) {
  if (!(scale > 0.0) || scale > 1.0) {
    throw std::invalid_argument("scale must be in (0, 1]");
  }
  auto shrink = [scale](std::size_t v) {
    const auto scaled = static_cast<std::size_t>(
        std::llround(static_cast<double>(v) * scale));
    return std::max<std::size_t>(1, scaled);
  };
  LayerSpec scaled = layer;
  scaled.h = shrink(layer.h);
  scaled.w = shrink(layer.w);
  scaled.c_in = shrink(layer.c_in);
  scaled.c_out = shrink(layer.c_out);
  return scaled;
}

namespace {

double stack_max_abs_diff(const ChannelStack& a, const ChannelStack& b) {
  double err = 0.0;
  for (std::size_t c = 0; c < a.channels(); ++c) {
    err = std::max(err, max_abs_diff(a.plane(c), b.plane(c)));
  }
  return err;
}

}  // namespace

std::vector<BenchRecord> run_benchmark(const BenchSpec& spec,
                                       const std::vector<LayerSpec>& layers) {
  if (spec.repeats < 1) {
    throw std::invalid_argument("run_benchmark: repeats must be >= 1");
  }
  using Clock = std::chrono::steady_clock;
  const ConvMode mode{PadMode::Same, ConvOp::Correlation};

  std::vector<BenchRecord> records;
  for (std::size_t li = 0; li < layers.size(); ++li) {
    const LayerSpec layer = scale_layer(layers[li], spec.scale);

    std::mt19937_64 rng(mix_seed(spec.seed, {li, layer.h, layer.w,
                                             layer.c_in, layer.c_out}));
    std::vector<RealGrid> planes;
    planes.reserve(layer.c_in);
    for (std::size_t c = 0; c < layer.c_in; ++c) {
      planes.push_back(random_grid(layer.h, layer.w, rng));
    }
    const ChannelStack input(std::move(planes));
    std::vector<std::vector<Kernel>> weights;
    weights.reserve(layer.c_out);
    for (std::size_t o = 0; o < layer.c_out; ++o) {
      std::vector<Kernel> row;
      row.reserve(layer.c_in);
      for (std::size_t c = 0; c < layer.c_in; ++c) {
        row.emplace_back(random_grid(layer.k, layer.k, rng));
      }
      weights.push_back(std::move(row));
    }

    // Reference output for the error column, shared by all engine rows.
    std::optional<ChannelStack> reference;
    std::string layer_error;
    try {
      reference =
          layer_forward(input, weights, EngineKind::Direct, spec.s, mode)
              .output;
    } catch (const std::bad_alloc&) {
      layer_error = "out of memory";
    }

    for (EngineKind engine : spec.engines) {
      BenchRecord record;
      record.layer = layer.name;
      record.engine = engine;
      record.h = layer.h;
      record.w = layer.w;
      record.c_in = layer.c_in;
      record.c_out = layer.c_out;
      record.k = layer.k;
      record.s = engine == EngineKind::Split ? spec.s : 0;
      if (!reference) {
        record.error = layer_error;
        records.push_back(std::move(record));
        continue;
      }
      try {
        LayerResult result = layer_forward(input, weights, engine, spec.s,
                                           mode);  // warm-up, not timed
        std::vector<std::uint64_t> times;
        times.reserve(spec.repeats);
        for (std::size_t rep = 0; rep < spec.repeats; ++rep) {
          const auto t0 = Clock::now();
          result = layer_forward(input, weights, engine, spec.s, mode);
          const auto t1 = Clock::now();
          times.push_back(static_cast<std::uint64_t>(
              std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0)
                  .count()));
        }
        std::sort(times.begin(), times.end());
        record.wall_ns_median = times[times.size() / 2];
        record.max_abs_err = stack_max_abs_diff(*reference, result.output);
        record.ops = result.ops;
      } catch (const std::bad_alloc&) {
        record.error = "out of memory";
      }
      records.push_back(std::move(record));
    }
  }
  return records;
}

}  // namespace splitconv
