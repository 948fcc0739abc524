#include <gtest/gtest.h>

#include <array>
#include <set>

#include "auglabel/regularizers.hpp"

using namespace auglabel;

namespace {

GridInput counting_grid(std::size_t h, std::size_t w) {
  GridInput g(h, w);
  for (std::size_t r = 0; r < h; ++r)
    for (std::size_t c = 0; c < w; ++c) g(r, c) = static_cast<double>(r * w + c);
  return g;
}

GridInput mirrored(const GridInput& x) {
  GridInput out(x.height(), x.width());
  for (std::size_t r = 0; r < x.height(); ++r)
    for (std::size_t c = 0; c < x.width(); ++c) out(r, c) = x(r, x.width() - 1 - c);
  return out;
}

GridInput from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  GridInput g(rows.size(), rows.begin()->size());
  std::size_t r = 0;
  for (const auto& row : rows) {
    std::size_t c = 0;
    for (double v : row) g(r, c++) = v;
    ++r;
  }
  return g;
}

CategoricalLabel all_zero(std::size_t m) { return CategoricalLabel(std::vector<std::uint8_t>(m, 0)); }

}  // namespace

TEST(DisturbLabels, ZeroRateIsIdentity) {
  Rng rng(1);
  const CategoricalLabel y{1, 0, 1, 1, 0};
  for (int i = 0; i < 100; ++i) EXPECT_EQ(disturb_labels(y, {0.0}, rng), y);
}

TEST(DisturbLabels, RejectsBadRate) {
  Rng rng(1);
  EXPECT_THROW(disturb_labels({1}, {1.0}, rng), Error);
  EXPECT_THROW(disturb_labels({1}, {-0.1}, rng), Error);
}

TEST(DisturbLabels, LeavesInputUntouched) {
  Rng rng(2);
  const CategoricalLabel y{1, 1, 1, 1};
  const CategoricalLabel copy = y;
  (void)disturb_labels(y, {0.9}, rng);
  EXPECT_EQ(y, copy);
}

TEST(DisturbLabels, EmpiricalFlipRate) {
  Rng rng(3);
  const auto y = all_zero(40);
  std::size_t flips = 0, bits = 0;
  for (int draw = 0; draw < 100000; ++draw) {
    const auto out = disturb_labels(y, {0.1}, rng);
    for (std::size_t j = 0; j < 40; ++j) flips += out[j];
    bits += 40;
  }
  EXPECT_NEAR(static_cast<double>(flips) / bits, 0.1, 0.005);
}

TEST(DisturbLabels, TwiceComposesToBinomialRate) {
  Rng rng(4);
  const auto y = all_zero(40);
  std::size_t flips = 0, bits = 0;
  for (int draw = 0; draw < 100000; ++draw) {
    const auto out = disturb_labels(disturb_labels(y, {0.1}, rng), {0.1}, rng);
    for (std::size_t j = 0; j < 40; ++j) flips += out[j];
    bits += 40;
  }
  EXPECT_NEAR(static_cast<double>(flips) / bits, 2 * 0.1 * 0.9, 0.005);
}

TEST(DisturbLabels, DeterministicGivenGeneratorState) {
  Rng a(9), b(9);
  const CategoricalLabel y{1, 0, 1, 0, 1, 0, 1, 0};
  for (int i = 0; i < 50; ++i) EXPECT_EQ(disturb_labels(y, {0.3}, a), disturb_labels(y, {0.3}, b));
}

TEST(CropAt, FourByFourHandEnumerated) {
  const auto x = counting_grid(4, 4);
  //  0  1  2  3
  //  4  5  6  7
  //  8  9 10 11
  // 12 13 14 15
  EXPECT_EQ(crop_at(x, 2, 2, CropLocation::TopLeft), from_rows({{0, 1}, {4, 5}}));
  EXPECT_EQ(crop_at(x, 2, 2, CropLocation::TopRight), from_rows({{2, 3}, {6, 7}}));
  EXPECT_EQ(crop_at(x, 2, 2, CropLocation::BottomLeft), from_rows({{8, 9}, {12, 13}}));
  EXPECT_EQ(crop_at(x, 2, 2, CropLocation::BottomRight), from_rows({{10, 11}, {14, 15}}));
  EXPECT_EQ(crop_at(x, 2, 2, CropLocation::Centre), from_rows({{5, 6}, {9, 10}}));
  EXPECT_EQ(crop_at(x, 2, 2, CropLocation::TopRight, true), from_rows({{3, 2}, {7, 6}}));
}

TEST(CropAt, OddMarginCentreRoundsDown) {
  const auto x = counting_grid(5, 5);
  EXPECT_EQ(crop_at(x, 2, 2, CropLocation::Centre), from_rows({{6, 7}, {11, 12}}));
}

TEST(FiveCropFlip, FourByFourDrawsOnlyTheTenCandidates) {
  const auto x = counting_grid(4, 4);
  std::set<std::vector<double>> allowed;
  for (std::size_t k = 0; k < kCropLocations; ++k) {
    for (bool m : {false, true}) {
      const auto c = crop_at(x, 2, 2, static_cast<CropLocation>(k), m);
      allowed.emplace(c.flat().begin(), c.flat().end());
    }
  }
  ASSERT_EQ(allowed.size(), 10u);
  Rng rng(5);
  std::set<std::vector<double>> seen;
  for (int i = 0; i < 2000; ++i) {
    const auto c = five_crop_flip(x, 2, 2, rng);
    std::vector<double> v(c.flat().begin(), c.flat().end());
    EXPECT_TRUE(allowed.count(v));
    seen.insert(v);
  }
  EXPECT_EQ(seen, allowed);
}

TEST(FiveCropFlip, DegenerateCropIsInputOrMirror) {
  const auto x = counting_grid(8, 8);
  const auto mx = mirrored(x);
  Rng rng(6);
  int plain = 0, flipped = 0;
  for (int i = 0; i < 200; ++i) {
    const auto c = five_crop_flip(x, 8, 8, rng);
    if (c == x) ++plain;
    else if (c == mx) ++flipped;
    else ADD_FAILURE() << "unexpected crop";
  }
  EXPECT_GT(plain, 0);
  EXPECT_GT(flipped, 0);
}

TEST(FiveCropFlip, CropLargerThanInputThrows) {
  Rng rng(7);
  const auto x = counting_grid(8, 8);
  EXPECT_THROW(five_crop_flip(x, 9, 8, rng), ShapeError);
  EXPECT_THROW(five_crop_flip(x, 8, 9, rng), ShapeError);
  EXPECT_THROW(five_crop_flip(x, 0, 4, rng), ShapeError);
}

TEST(FiveCropFlip, LocationAndMirrorFrequencies) {
  // Distinct values everywhere, so the top-left pixel of an unmirrored crop
  // identifies the window; a mirrored crop is recognised by its top-right.
  const auto x = counting_grid(10, 10);
  std::array<std::size_t, kCropLocations> counts{};
  std::size_t mirrors = 0;
  const int draws = 100000;
  Rng rng(8);
  for (int i = 0; i < draws; ++i) {
    const auto c = five_crop_flip(x, 8, 8, rng);
    const bool mirror = c(0, 0) > c(0, 1);
    mirrors += mirror;
    const double anchor = mirror ? c(0, 7) : c(0, 0);
    std::size_t loc = kCropLocations;
    for (std::size_t k = 0; k < kCropLocations; ++k) {
      if (crop_at(x, 8, 8, static_cast<CropLocation>(k))(0, 0) == anchor) loc = k;
    }
    ASSERT_LT(loc, kCropLocations);
    ++counts[loc];
  }
  for (auto n : counts) EXPECT_NEAR(static_cast<double>(n) / draws, 0.2, 0.01);
  EXPECT_NEAR(static_cast<double>(mirrors) / draws, 0.5, 0.01);
}

TEST(FiveCropFlipProperty, ShapeAndPixelMembership) {
  Rng rng(10);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t h = 8 + rng() % 8, w = 8 + rng() % 8;
    GridInput x(h, w);
    for (auto& v : x.pixels().data()) v = normal(rng);
    const std::multiset<double> source(x.flat().begin(), x.flat().end());
    const std::size_t ch = 1 + rng() % h, cw = 1 + rng() % w;
    const auto c = five_crop_flip(x, ch, cw, rng);
    ASSERT_EQ(c.height(), ch);
    ASSERT_EQ(c.width(), cw);
    for (double v : c.flat()) ASSERT_TRUE(source.count(v));
  }
}
