#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "splitconv/bench.hpp"
#include "splitconv/grid.hpp"

using namespace splitconv;

namespace {

RealGrid make_grid(std::size_t rows, std::size_t cols,
                   std::vector<double> values) {
  return RealGrid(rows, cols, std::move(values));
}

}  // namespace

TEST_CASE("RealGrid construction validates shape and finiteness") {
  CHECK_THROWS_AS(RealGrid(0, 3), std::invalid_argument);
  CHECK_THROWS_AS(RealGrid(2, 2, {1.0, 2.0, 3.0}), std::invalid_argument);
  CHECK_THROWS_AS(
      RealGrid(1, 2, {1.0, std::numeric_limits<double>::quiet_NaN()}),
      std::invalid_argument);
  CHECK_THROWS_AS(
      RealGrid(1, 1, {std::numeric_limits<double>::infinity()}),
      std::invalid_argument);
  const RealGrid g(2, 3);
  CHECK(g.rows() == 2);
  CHECK(g.cols() == 3);
  CHECK(g(1, 2) == 0.0);
}

TEST_CASE("Kernel must be square") {
  CHECK_THROWS_AS(Kernel(RealGrid(2, 3)), std::invalid_argument);
  const Kernel k(make_grid(2, 2, {1, 2, 3, 4}));
  const Kernel f = k.flipped();
  CHECK(f.grid()(0, 0) == 4);
  CHECK(f.grid()(0, 1) == 3);
  CHECK(f.grid()(1, 0) == 2);
  CHECK(f.grid()(1, 1) == 1);
}

TEST_CASE("direct_conv2d all-ones valid convolution") {
  const RealGrid input(3, 3, std::vector<double>(9, 1.0));
  const Kernel kernel(RealGrid(3, 3, std::vector<double>(9, 1.0)));
  const RealGrid out =
      direct_conv2d(input, kernel, {PadMode::Valid, ConvOp::Convolution});
  CHECK(out.rows() == 1);
  CHECK(out.cols() == 1);
  CHECK(out(0, 0) == 9.0);
}

TEST_CASE("direct_conv2d identity kernel reproduces the input") {
  std::mt19937_64 rng(7);
  const RealGrid input = random_grid(5, 7, rng);
  std::vector<double> delta(9, 0.0);
  delta[4] = 1.0;
  const Kernel kernel(RealGrid(3, 3, std::move(delta)));
  for (ConvOp op : {ConvOp::Convolution, ConvOp::Correlation}) {
    const RealGrid out = direct_conv2d(input, kernel, {PadMode::Same, op});
    CHECK(max_abs_diff(out, input) == 0.0);
  }
}

TEST_CASE("direct_conv2d 1x1 kernel scales") {
  const RealGrid input = make_grid(2, 2, {1, 2, 3, 4});
  const Kernel kernel(make_grid(1, 1, {2}));
  const RealGrid out =
      direct_conv2d(input, kernel, {PadMode::Valid, ConvOp::Convolution});
  CHECK(out == make_grid(2, 2, {2, 4, 6, 8}));
}

TEST_CASE("direct_conv2d rejects invalid modes") {
  const RealGrid input(4, 4);
  CHECK_THROWS_AS(direct_conv2d(input, Kernel(RealGrid(2, 2)),
                                {PadMode::Same, ConvOp::Convolution}),
                  std::invalid_argument);
  CHECK_THROWS_AS(direct_conv2d(input, Kernel(RealGrid(5, 5)),
                                {PadMode::Valid, ConvOp::Convolution}),
                  std::invalid_argument);
}

TEST_CASE("pad_zero places the interior and zeroes the margins") {
  const RealGrid single = make_grid(1, 1, {5});
  const RealGrid padded = pad_zero(single, 1, 1, 1, 1);
  CHECK(padded.rows() == 3);
  CHECK(padded.cols() == 3);
  CHECK(padded(1, 1) == 5.0);
  double margin_sum = 0.0;
  for (std::size_t r = 0; r < 3; ++r) {
    for (std::size_t c = 0; c < 3; ++c) {
      if (r != 1 || c != 1) margin_sum += std::abs(padded(r, c));
    }
  }
  CHECK(margin_sum == 0.0);

  const RealGrid grid = make_grid(2, 3, {1, 2, 3, 4, 5, 6});
  CHECK(pad_zero(grid, 0, 0, 0, 0) == grid);

  const RealGrid shifted = pad_zero(grid, 0, 1, 2, 0);
  CHECK(shifted.rows() == 3);
  CHECK(shifted.cols() == 5);
  for (std::size_t r = 0; r < 2; ++r) {
    for (std::size_t c = 0; c < 3; ++c) {
      CHECK(shifted(r, c + 2) == grid(r, c));
    }
  }
  CHECK(shifted(2, 2) == 0.0);
  CHECK(shifted(0, 0) == 0.0);
}

TEST_CASE("crop extracts exact windows and rejects overruns") {
  std::vector<double> seq(16);
  for (std::size_t i = 0; i < 16; ++i) seq[i] = static_cast<double>(i);
  const RealGrid grid(4, 4, std::move(seq));
  CHECK(crop(grid, 1, 1, 2, 2) == make_grid(2, 2, {5, 6, 9, 10}));
  CHECK(crop(grid, 0, 0, 4, 4) == grid);
  CHECK_THROWS_AS(crop(grid, 2, 2, 3, 1), std::invalid_argument);

  std::mt19937_64 rng(11);
  const RealGrid x = random_grid(3, 5, rng);
  CHECK(crop(pad_zero(x, 2, 2, 2, 2), 2, 2, x.rows(), x.cols()) == x);
}

TEST_CASE("pad/crop round trip for all margins up to 4") {
  std::mt19937_64 rng(13);
  const RealGrid x = random_grid(6, 4, rng);
  for (std::size_t a = 0; a <= 4; ++a) {
    for (std::size_t b = 0; b <= 4; b += 2) {
      for (std::size_t c = 0; c <= 4; c += 2) {
        for (std::size_t d = 0; d <= 4; ++d) {
          CHECK(crop(pad_zero(x, a, b, c, d), a, c, x.rows(), x.cols()) == x);
        }
      }
    }
  }
}

TEST_CASE("split_with_halo 4x4 with S=2 halo=1 matches hand enumeration") {
  std::vector<double> seq(16);
  for (std::size_t i = 0; i < 16; ++i) seq[i] = static_cast<double>(i + 1);
  const RealGrid input(4, 4, seq);

  // Padded 6x6 grid built by explicit index arithmetic.
  std::vector<double> padded(36, 0.0);
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 4; ++c) {
      padded[(r + 1) * 6 + (c + 1)] = seq[r * 4 + c];
    }
  }

  const auto patches = split_with_halo(input, 2, 1);
  REQUIRE(patches.size() == 4);
  std::size_t idx = 0;
  for (std::size_t gi = 0; gi < 2; ++gi) {
    for (std::size_t gj = 0; gj < 2; ++gj) {
      const Patch& p = patches[idx++];
      CHECK(p.grid_row == gi);
      CHECK(p.grid_col == gj);
      REQUIRE(p.data.rows() == 4);
      REQUIRE(p.data.cols() == 4);
      for (std::size_t r = 0; r < 4; ++r) {
        for (std::size_t c = 0; c < 4; ++c) {
          CHECK(p.data(r, c) == padded[(gi * 2 + r) * 6 + (gj * 2 + c)]);
        }
      }
    }
  }
}

TEST_CASE("split_with_halo degenerate single patch") {
  std::mt19937_64 rng(17);
  const RealGrid x = random_grid(6, 6, rng);
  const auto patches = split_with_halo(x, 6, 0);
  REQUIRE(patches.size() == 1);
  CHECK(patches[0].data == x);
}

TEST_CASE("split_with_halo 5x5 with S=4 tiles a zero-extended 8x8 grid") {
  std::mt19937_64 rng(19);
  const RealGrid x = random_grid(5, 5, rng);
  std::vector<double> extended(64, 0.0);
  for (std::size_t r = 0; r < 5; ++r) {
    for (std::size_t c = 0; c < 5; ++c) extended[r * 8 + c] = x(r, c);
  }
  const auto patches = split_with_halo(x, 4, 0);
  REQUIRE(patches.size() == 4);
  for (const Patch& p : patches) {
    REQUIRE(p.data.rows() == 4);
    for (std::size_t r = 0; r < 4; ++r) {
      for (std::size_t c = 0; c < 4; ++c) {
        CHECK(p.data(r, c) ==
              extended[(p.grid_row * 4 + r) * 8 + (p.grid_col * 4 + c)]);
      }
    }
  }
}

TEST_CASE("halo consistency: patches equal windows of the padded input") {
  std::mt19937_64 rng(23);
  for (std::size_t n : {5, 8, 9}) {
    for (std::size_t s : {2, 3, 4}) {
      for (std::size_t halo : {0, 1, 2}) {
        const RealGrid x = random_grid(n, n, rng);
        const std::size_t lattice = (n + s - 1) / s;
        const RealGrid padded =
            pad_zero(x, halo, halo + (lattice * s - n), halo,
                     halo + (lattice * s - n));
        for (const Patch& p : split_with_halo(x, s, halo)) {
          const RealGrid window = crop(padded, p.grid_row * s, p.grid_col * s,
                                       s + 2 * halo, s + 2 * halo);
          CHECK(p.data == window);
        }
      }
    }
  }
}

TEST_CASE("concat_patches inverts a halo-free split") {
  std::mt19937_64 rng(29);
  const RealGrid x = random_grid(8, 12, rng);
  CHECK(concat_patches(split_with_halo(x, 4, 0), 8, 12) == x);

  const auto single = split_with_halo(x, 12, 0);
  // 8x12 padded to 12x12 by the split; concat back to the padded dims.
  const RealGrid back = concat_patches(single, 12, 12);
  CHECK(crop(back, 0, 0, 8, 12) == x);
}

TEST_CASE("concat_patches drops overflow and checks the lattice") {
  std::vector<Patch> patches;
  for (std::size_t gi = 0; gi < 2; ++gi) {
    for (std::size_t gj = 0; gj < 2; ++gj) {
      const double base = static_cast<double>(10 * (gi * 2 + gj));
      patches.push_back(Patch{
          gi, gj,
          RealGrid(2, 2, {base, base + 1, base + 2, base + 3})});
    }
  }
  const RealGrid out = concat_patches(patches, 3, 3);
  CHECK(out == make_grid(3, 3, {0, 1, 10, 2, 3, 12, 20, 21, 30}));

  std::vector<Patch> dup = patches;
  dup[3].grid_row = 0;
  dup[3].grid_col = 0;
  CHECK_THROWS_AS(concat_patches(dup, 3, 3), std::invalid_argument);

  std::vector<Patch> missing(patches.begin(), patches.begin() + 3);
  CHECK_THROWS_AS(concat_patches(missing, 3, 3), std::invalid_argument);
}

TEST_CASE("max_abs_diff") {
  const RealGrid x = make_grid(1, 2, {0, 1});
  CHECK(max_abs_diff(x, x) == 0.0);
  CHECK(max_abs_diff(make_grid(1, 1, {1}), make_grid(1, 1, {3})) == 2.0);
  CHECK(max_abs_diff(x, make_grid(1, 2, {1, -1})) == 2.0);
  CHECK_THROWS_AS(max_abs_diff(x, RealGrid(2, 2)), std::invalid_argument);
}

TEST_CASE("direct_conv2d is linear") {
  std::mt19937_64 rng(31);
  const ConvMode mode{PadMode::Same, ConvOp::Convolution};
  for (int rep = 0; rep < 10; ++rep) {
    const RealGrid x = random_grid(7, 7, rng);
    const RealGrid y = random_grid(7, 7, rng);
    const Kernel w(random_grid(3, 3, rng));
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    const double a = coeff(rng);
    const double b = coeff(rng);

    std::vector<double> combo(49);
    for (std::size_t i = 0; i < 49; ++i) {
      combo[i] = a * x.values()[i] + b * y.values()[i];
    }
    const RealGrid lhs = direct_conv2d(RealGrid(7, 7, combo), w, mode);
    const RealGrid cx = direct_conv2d(x, w, mode);
    const RealGrid cy = direct_conv2d(y, w, mode);
    for (std::size_t i = 0; i < 49; ++i) {
      const double expected = a * cx.values()[i] + b * cy.values()[i];
      CHECK(std::abs(lhs.values()[i] - expected) <= 1e-12);
    }
  }
}

TEST_CASE("convolution equals correlation with a doubly flipped kernel") {
  std::mt19937_64 rng(37);
  for (std::size_t k : {1, 3, 5}) {
    const RealGrid x = random_grid(9, 9, rng);
    const Kernel w(random_grid(k, k, rng));
    for (PadMode pad : {PadMode::Same, PadMode::Valid}) {
      const RealGrid conv =
          direct_conv2d(x, w, {pad, ConvOp::Convolution});
      const RealGrid corr =
          direct_conv2d(x, w.flipped(), {pad, ConvOp::Correlation});
      CHECK(conv == corr);
    }
  }
}
