#include <gtest/gtest.h>

#include <cmath>

#include "dct3d/metrics.hpp"
#include "dct3d/quant.hpp"
#include "fixtures.hpp"

using namespace dct3d;

TEST(Psnr, ClosedForms) {
  const Frame a(4, 4, 8, 100);
  EXPECT_TRUE(std::isinf(psnr(a, a, 255)));
  const Frame b(4, 4, 8, 101);
  EXPECT_NEAR(psnr(a, b, 255), 20 * std::log10(255.0), 1e-9);
  EXPECT_NEAR(psnr(a, b, 255), 48.13, 0.01);
  EXPECT_DOUBLE_EQ(psnr(a, b, 255), psnr(b, a, 255));

  const Frame c(4, 4, 12, 1000), d(4, 4, 12, 1016);
  EXPECT_NEAR(psnr(c, d, 4095), 10 * std::log10(4095.0 * 4095.0 / 256.0), 1e-9);
  EXPECT_NEAR(psnr(c, d, 4095), 48.16, 0.01);

  EXPECT_THROW(psnr(a, Frame(4, 3), 255), Error);
  const std::vector<Frame> one = {a}, two = {a, a};
  EXPECT_THROW(psnr(one, two, 255), Error);
  EXPECT_DOUBLE_EQ(mse(std::vector<Frame>{a, b}, std::vector<Frame>{b, b}), 0.5);
}

TEST(Stats, ConstantInputKeepsOnlyDc) {
  VideoCube v;
  v.frames.assign(8, Frame(16, 16, 8, 90));
  const auto st = cube_stats(v.frames, luma_cube(50, 1.0));
  EXPECT_EQ(st.blocks, 4u);
  EXPECT_DOUBLE_EQ(st.zero_fraction(), 1.0 - 1.0 / 512);
  EXPECT_DOUBLE_EQ(st.first_layer_nonzero_fraction(), 1.0);

  const auto s2 = still_stats(Frame(16, 8, 8, 90));
  EXPECT_EQ(s2.blocks, 2u);
  EXPECT_DOUBLE_EQ(s2.zero_fraction(), 1.0 - 1.0 / 64);
  EXPECT_NEAR(s2.diagonal_energy[0], 1.0, 1e-12);
}

TEST(Stats, WhiteNoiseSpreadsAcrossLayers) {
  const auto v = fixtures::random_clip(64, 64, 16, 255, 12);
  EncodeOptions o;
  const auto st = cube_stats(v.frames, luma_cube(90, 1.0));
  EXPECT_NEAR(st.first_layer_nonzero_fraction(), 1.0 / 8, 0.05);
  EXPECT_TRUE(std::isnan(CoefficientStats{}.first_layer_nonzero_fraction()));
}

TEST(Stats, DiagonalEnergySumsToOne) {
  const auto st = still_stats(fixtures::gradient_image(64, 64));
  double total = 0.0;
  for (double e : st.diagonal_energy) total += e;
  EXPECT_NEAR(total, 1.0, 1e-9);
  EXPECT_GT(st.diagonal_energy[0], 0.9);
}

TEST(Report, BitrateAndRatio) {
  // Raw CIF at 30 fps.
  EXPECT_NEAR(bitrate_mbps(352 * 288 * 30, 30, {30, 1}), 24.33, 0.01);
  EXPECT_NEAR(bitrate_mbps(1000, 300, {30000, 1001}), 1000 * 8 / (300 / 29.97) / 1e6, 1e-9);
  EXPECT_THROW(bitrate_mbps(1, 0, {30, 1}), Error);

  MetricsReport r;
  r.stream_bytes = 40;
  r.original_bytes = 1000;
  EXPECT_DOUBLE_EQ(r.compression_ratio(), 25.0);
  EXPECT_DOUBLE_EQ(r.compression_ratio() * r.stream_bytes, r.original_bytes);
}

TEST(Report, Format) {
  MetricsReport r;
  r.mode = "video-color";
  r.plane_psnr_db = {{"y", 41.5}, {"cb", std::numeric_limits<double>::infinity()}};
  r.psnr_mean_db = 43.25;
  r.bitrate_mbps = 0.47;
  r.stream_bytes = 100;
  r.original_bytes = 5120;
  r.zero_fraction = 0.95;
  r.first_layer_nonzero_fraction = 0.9;
  EXPECT_EQ(format_report(r),
            "mode=video-color\n"
            "psnr_y_db=41.500000\n"
            "psnr_cb_db=inf\n"
            "psnr_mean_db=43.250000\n"
            "bitrate_mbps=0.470000\n"
            "compression_ratio=51.200000\n"
            "stream_bytes=100\n"
            "original_bytes=5120\n"
            "zero_fraction=0.950000\n"
            "first_layer_nonzero_fraction=0.900000\n");
}
