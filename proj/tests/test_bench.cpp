#include <algorithm>
#include <string>
#include <vector>

#include "doctest.h"
#include "splitconv/bench.hpp"

using namespace splitconv;

TEST_CASE("vgg16_layers lists the 13 convolutional layers") {
  const auto layers = vgg16_layers();
  REQUIRE(layers.size() == 13);
  for (const LayerSpec& layer : layers) {
    CHECK(layer.k == 3);
    CHECK(layer.h == layer.w);
  }
  CHECK(layers.front().c_in == 3);
  CHECK(layers.front().c_out == 64);
  CHECK(layers.front().h == 224);
  CHECK(layers.back().h == 14);
  CHECK(layers.back().c_out == 512);
  const auto count512 = std::count_if(
      layers.begin(), layers.end(),
      [](const LayerSpec& l) { return l.c_out == 512; });
  CHECK(count512 == 6);
}

TEST_CASE("scale_layer shrinks dims but keeps them positive") {
  const LayerSpec first = vgg16_layers().front();
  const LayerSpec scaled = scale_layer(first, 0.125);
  CHECK(scaled.h == 28);
  CHECK(scaled.w == 28);
  CHECK(scaled.c_in == 1);  // max(1, round(3/8))
  CHECK(scaled.c_out == 8);
  CHECK(scaled.k == 3);
  CHECK(scale_layer(first, 1.0).h == 224);
  CHECK_THROWS_AS(scale_layer(first, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(scale_layer(first, 1.5), std::invalid_argument);
}

TEST_CASE("mix_seed is deterministic and order-sensitive") {
  CHECK(mix_seed(42, {1, 2, 3}) == mix_seed(42, {1, 2, 3}));
  CHECK(mix_seed(42, {1, 2, 3}) != mix_seed(42, {3, 2, 1}));
  CHECK(mix_seed(42, {1}) != mix_seed(43, {1}));
}

TEST_CASE("run_verification passes on a small grid and skips S > N") {
  VerifySpec spec;
  spec.sizes = {8};
  spec.kernels = {1, 3};
  spec.patch_sizes = {4, 16};
  const auto cases = run_verification(spec);
  // s=4: 2 kernels x 4 mode combos; s=16 > n: one skip marker per kernel.
  REQUIRE(cases.size() == 2 * 4 + 2);
  for (const VerifyCase& c : cases) {
    if (c.s > c.n) {
      CHECK(c.skipped);
    } else {
      CHECK(!c.skipped);
      CHECK(c.passed);
      CHECK(c.max_err <= spec.tolerance);
    }
  }
}

TEST_CASE("run_verification flags a corrupted engine") {
  VerifySpec spec;
  spec.sizes = {8};
  spec.kernels = {3};
  spec.patch_sizes = {4};
  EngineTable engines = EngineTable::standard();
  engines.oaa = [](const RealGrid& in, const Kernel& k, ConvMode m) {
    ConvResult res = conv_oaa(in, k, m);
    std::vector<double> values = res.output.values();
    values[0] += 0.125;
    return ConvResult{RealGrid(res.output.rows(), res.output.cols(),
                               std::move(values)),
                      res.ops};
  };
  const auto cases = run_verification(spec, engines);
  bool any_failed = false;
  for (const VerifyCase& c : cases) any_failed |= !c.passed;
  CHECK(any_failed);
}

TEST_CASE("run_benchmark produces checked, deterministic records") {
  BenchSpec spec;
  spec.engines = {EngineKind::Direct, EngineKind::Split, EngineKind::Oaa};
  spec.repeats = 2;
  spec.scale = 1.0;
  const std::vector<LayerSpec> layers{{"tiny", 12, 12, 2, 3, 3},
                                      {"mini", 9, 9, 1, 2, 3}};
  const auto records = run_benchmark(spec, layers);
  REQUIRE(records.size() == layers.size() * spec.engines.size());
  for (const BenchRecord& r : records) {
    CHECK(r.error.empty());
    CHECK(r.max_abs_err <= 1e-8);
    if (r.engine == EngineKind::Direct) CHECK(r.max_abs_err == 0.0);
    if (r.engine == EngineKind::Split) CHECK(r.s == 8);
  }

  // Error columns must not depend on the repeat count.
  BenchSpec once = spec;
  once.repeats = 1;
  const auto again = run_benchmark(once, layers);
  for (std::size_t i = 0; i < records.size(); ++i) {
    CHECK(records[i].max_abs_err == again[i].max_abs_err);
    CHECK(records[i].ops == again[i].ops);
  }
}
