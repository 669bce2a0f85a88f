#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "dct3d/codec.hpp"
#include "dct3d/entropy.hpp"
#include "dct3d/metrics.hpp"
#include "dct3d/quant.hpp"
#include "fixtures.hpp"

using namespace dct3d;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::kIo;
}

int max_abs_error(std::span<const Frame> a, std::span<const Frame> b) {
  int worst = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t k = 0; k < a[i].samples.size(); ++k) {
      worst = std::max(worst, std::abs(int(a[i].samples[k]) - int(b[i].samples[k])));
    }
  }
  return worst;
}

// Bits of a single block coded as DC level `dc` plus EOB.
std::string dc_block_bits(int dc) {
  const auto& t = HuffmanTables::jpeg_luminance();
  BitWriter w;
  w.put(t.dc(category(dc)));
  if (dc) w.put(magnitude_bits(dc));
  w.put(t.eob());
  w.pad_to_byte();
  return w.bit_string();
}

std::string bits_of(const Payload& p) {
  std::string s;
  for (auto b : p) {
    for (int i = 7; i >= 0; --i) s += (b >> i & 1) ? '1' : '0';
  }
  return s;
}

VideoCube constant_clip(int w, int h, int frames, std::uint16_t value) {
  VideoCube v;
  v.width = w;
  v.height = h;
  v.frames.assign(frames, Frame(w, h, 8, value));
  return v;
}

}  // namespace

TEST(Still, ConstantBlockIsDcPlusEob) {
  const Frame f(8, 8, 8, 255);
  const auto s = encode_still(f);
  ASSERT_EQ(s.gops.size(), 1u);
  EXPECT_EQ(bits_of(s.gops[0][0]), dc_block_bits(128));
  const Frame back = decode_still(s);
  EXPECT_TRUE(std::all_of(back.samples.begin(), back.samples.end(), [](auto v) { return v == 255; }));
}

TEST(Still, ZeroImage) {
  const Frame f(16, 8, 8, 0);
  const auto s = encode_still(f);
  // Two blocks of DC category 0 + EOB, padded with 1-bits.
  EXPECT_EQ(bits_of(s.gops[0][0]), "001010" "001010" "1111");
  EXPECT_EQ(decode_still(s), f);
}

TEST(Still, GradientQualityAndPadding) {
  const Frame f = fixtures::gradient_image(61, 45);
  const auto s = encode_still(f);
  EXPECT_EQ(s.header.padded_width, 64u);
  EXPECT_EQ(s.header.padded_height, 48u);
  const Frame back = decode_still(s);
  EXPECT_EQ(back.width, 61);
  EXPECT_EQ(back.height, 45);
  EXPECT_GE(psnr(f, back, 255), 30.0);
}

TEST(Still, UnitStepsAreNearLossless) {
  fixtures::Rng rng(4);
  const Frame f = fixtures::random_frame(37, 21, 8, 255, rng);
  EncodeOptions o;
  o.q = 100;
  const Frame back = decode_still(encode_still(f, o));
  EXPECT_LE(max_abs_error(std::span(&f, 1), std::span(&back, 1)), 1);
}

TEST(Still, TwelveBitNeedsRescaleForLargeValues) {
  const Frame f(8, 8, 12, 4095);
  // DC level round(4095 * 8 / 16) = 2048 is outside DC coverage.
  EXPECT_EQ(kind_of([&] { encode_still(f); }), ErrorKind::kRange);
  EncodeOptions o;
  o.rescale_to_8bit = true;
  const Frame g = fixtures::gradient_image(40, 24, 12);
  const Frame back = decode_still(encode_still(g, o));
  EXPECT_EQ(back.bit_depth, 12);
  EXPECT_GE(psnr(g, back, 4095), 30.0);
}

TEST(Still, RejectsOutOfRangeSamples) {
  Frame f(8, 8, 8, 0);
  f.samples[3] = 300;
  EXPECT_EQ(kind_of([&] { encode_still(f); }), ErrorKind::kDataRange);
}

TEST(VideoMono, ConstantCube) {
  const auto v = constant_clip(8, 8, 8, 255);
  const auto s = encode_video_mono(v);
  ASSERT_EQ(s.gops.size(), 1u);
  EXPECT_EQ(std::lround(5770.18 / 16), 361);
  EXPECT_EQ(bits_of(s.gops[0][0]), dc_block_bits(361));
  const auto back = decode_video_mono(s);
  for (const auto& f : back.frames) {
    EXPECT_TRUE(std::all_of(f.samples.begin(), f.samples.end(), [](auto x) { return x == 255; }));
  }
}

TEST(VideoMono, StaticClipBeatsIndependentStills) {
  const Frame f = fixtures::gradient_image(64, 48);
  VideoCube v;
  v.width = 64;
  v.height = 48;
  v.frames.assign(8, f);
  std::size_t still_bytes = 0;
  for (int i = 0; i < 8; ++i) still_bytes += encode_still(f).gops[0][0].size();
  EXPECT_LT(encode_video_mono(v).gops[0][0].size(), still_bytes);
}

TEST(VideoMono, SingleFramePadsTemporally) {
  const Frame f = fixtures::gradient_image(20, 12);
  VideoCube v;
  v.width = 20;
  v.height = 12;
  v.frames = {f};
  const auto s = encode_video_mono(v);
  EXPECT_EQ(s.header.padded_frames, 8u);
  EXPECT_EQ(s.header.frame_count, 1u);
  const auto back = decode_video_mono(s);
  ASSERT_EQ(back.frame_count(), 1);
  EXPECT_GE(psnr(f, back.frames[0], 255), 30.0);
}

TEST(VideoMono, UnitStepsOnLowAmplitudeContent) {
  const auto v = fixtures::random_clip(19, 13, 11, 40, 99);
  EncodeOptions o;
  o.q = 100;
  const auto back = decode_video_mono(encode_video_mono(v, o));
  EXPECT_EQ(back.frame_count(), 11);
  EXPECT_LE(max_abs_error(v.frames, back.frames), 1);
}

TEST(VideoMono, DeterministicAcrossThreadCounts) {
  const auto v = fixtures::talking_head_clip(24, 64, 48);
  EncodeOptions one, many;
  one.threads = 1;
  many.threads = 4;
  const auto a = serialize_stream(encode_video_mono(v, one));
  EXPECT_EQ(a, serialize_stream(encode_video_mono(v, many)));
  EXPECT_EQ(a, serialize_stream(encode_video_mono(v, one)));
}

TEST(VideoMono, RangeErrorCarriesLocationAndAdvice) {
  auto v = constant_clip(16, 8, 8, 0);
  for (auto& f : v.frames) {
    for (int y = 0; y < 8; ++y) {
      for (int x = 8; x < 16; ++x) f.at(x, y) = 255;
    }
  }
  EncodeOptions o;
  o.q = 100;  // unit steps: DC level 5770 overflows the DC table
  try {
    encode_video_mono(v, o);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kRange);
    const std::string msg = e.what();
    EXPECT_NE(msg.find("GOP 0, component 0, block (0,1)"), std::string::npos) << msg;
    EXPECT_NE(msg.find("rescal"), std::string::npos) << msg;
  }
}

TEST(VideoMono, DecoderRejectsDamage) {
  const auto v = fixtures::talking_head_clip(8, 32, 32);
  auto s = encode_video_mono(v);
  auto truncated = s;
  truncated.gops[0][0].resize(truncated.gops[0][0].size() / 2);
  const auto k = kind_of([&] { decode_video_mono(truncated); });
  EXPECT_TRUE(k == ErrorKind::kTruncatedStream || k == ErrorKind::kCorruptStream);

  auto padded_extra = s;
  padded_extra.gops[0][0].push_back(0xFF);
  EXPECT_EQ(kind_of([&] { decode_video_mono(padded_extra); }), ErrorKind::kCorruptStream);

  EXPECT_EQ(kind_of([&] { decode_still(s); }), ErrorKind::kInvalidArgument);
}

TEST(Color, SubsampleAndUpsample) {
  Frame quad(2, 2, 8);
  quad.samples = {10, 10, 20, 20};
  EXPECT_EQ(subsample_420(quad).samples, std::vector<std::uint16_t>{15});

  const Frame c(7, 5, 8, 77);
  const Frame down = subsample_420(c);
  EXPECT_EQ(down.width, 4);
  EXPECT_EQ(down.height, 3);
  EXPECT_EQ(down, Frame(4, 3, 8, 77));
  EXPECT_EQ(upsample_420(down, 7, 5), c);

  Frame odd(3, 1, 8);
  odd.samples = {0, 0, 9};
  EXPECT_EQ(subsample_420(odd).samples, (std::vector<std::uint16_t>{0, 9}));
}

TEST(Color, GrayContentHasMinimalChroma) {
  const auto y = fixtures::talking_head_clip(8, 64, 48);
  const auto cb = constant_clip(32, 24, 8, 128);
  const auto s = encode_video_color(y, cb, cb);
  ASSERT_EQ(s.gops[0].size(), 3u);
  // 12 cubes of DC + EOB each.
  EXPECT_LE(s.gops[0][1].size(), 12u * 3);
  EXPECT_EQ(s.gops[0][1], s.gops[0][2]);
  const auto back = decode_video_color(s);
  EXPECT_EQ(back.cb.width, 32);
  EXPECT_EQ(back.cr.height, 24);
  EXPECT_EQ(back.y.width, 64);
  EXPECT_EQ(back.cb.frames, cb.frames);
}

TEST(Color, LumaMatchesMonoCoding) {
  const auto y = fixtures::talking_head_clip(16, 96, 64);
  VideoCube cb = constant_clip(48, 32, 16, 120);
  VideoCube cr = constant_clip(48, 32, 16, 135);
  const auto color = decode_video_color(encode_video_color(y, cb, cr));
  const auto mono = decode_video_mono(encode_video_mono(y));
  EXPECT_NEAR(psnr(y.frames, color.y.frames, 255), psnr(y.frames, mono.frames, 255), 1.0);
}

TEST(Color, RejectsBadChromaGeometry) {
  const auto y = constant_clip(16, 16, 8, 10);
  const auto wrong = constant_clip(16, 16, 8, 10);
  EXPECT_EQ(kind_of([&] { encode_video_color(y, wrong, wrong); }), ErrorKind::kInvalidArgument);
  const auto c = constant_clip(8, 8, 8, 10);
  EncodeOptions o;
  o.rescale_to_8bit = true;
  EXPECT_EQ(kind_of([&] { encode_video_color(y, c, c, o); }), ErrorKind::kInvalidArgument);
}

TEST(Volume, EightBitMatchesVideoPayloads) {
  const auto clip = fixtures::talking_head_clip(12, 40, 24);
  Volume vol;
  vol.width = clip.width;
  vol.height = clip.height;
  vol.slices = clip.frames;
  const auto a = encode_volume(vol);
  const auto b = encode_video_mono(clip);
  EXPECT_EQ(a.gops, b.gops);
  EXPECT_EQ(a.header.mode, StreamMode::kVolume);
  EXPECT_EQ(decode_volume(a).slices, decode_video_mono(b).frames);
}

TEST(Volume, TwelveBitConstantOverflowsWithoutRescale) {
  Volume vol;
  vol.width = 8;
  vol.height = 8;
  vol.bit_depth = 12;
  vol.slices.assign(8, Frame(8, 8, 12, 4095));
  EXPECT_EQ(std::lround(4095 * 22.627417 / 16), 5791);
  EXPECT_EQ(kind_of([&] { encode_volume(vol); }), ErrorKind::kRange);
  EncodeOptions o;
  o.rescale_to_8bit = true;
  EXPECT_EQ(decode_volume(encode_volume(vol, o)).slices, vol.slices);
}

TEST(Volume, RescaledPhantomQuality) {
  const auto vol = fixtures::smooth_phantom(64, 64, 16);
  EncodeOptions o;
  o.rescale_to_8bit = true;
  const auto s = encode_volume(vol, o);
  EXPECT_TRUE(s.header.rescale);
  EXPECT_GT(s.header.map_scale, 0.0f);
  const auto back = decode_volume(s);
  EXPECT_EQ(back.bit_depth, 12);
  EXPECT_GE(psnr(vol.slices, back.slices, 4095), 35.0);
}

TEST(Volume, UnitStepsLowAmplitude) {
  const auto vol = fixtures::random_volume(16, 16, 9, 12, 40, 5);
  EncodeOptions o;
  o.q = 100;
  EXPECT_LE(max_abs_error(vol.slices, decode_volume(encode_volume(vol, o)).slices), 1);
}

TEST(SampleMap, FitsRange) {
  std::vector<Frame> frames = {Frame(2, 1, 12), Frame(2, 1, 12)};
  frames[0].samples = {100, 200};
  frames[1].samples = {4000, 150};
  const auto m = fit_sample_map(frames);
  EXPECT_DOUBLE_EQ(m.offset, 100.0);
  EXPECT_NEAR(m.forward(4000), 255.0, 1e-4);
  EXPECT_NEAR(m.inverse(m.forward(1234)), 1234.0, 1e-3);
  const std::vector<Frame> flat = {Frame(2, 2, 12, 7)};
  EXPECT_EQ(fit_sample_map(flat).scale, 1.0);
}

TEST(Extract, EdgeReplication) {
  Frame f(3, 2, 8);
  f.samples = {1, 2, 3, 4, 5, 6};
  const auto b = extract_block(f, 0, 0);
  EXPECT_EQ(b.at(0, 7), 3);
  EXPECT_EQ(b.at(7, 0), 4);
  EXPECT_EQ(b.at(7, 7), 6);
  const std::vector<Frame> frames = {f, Frame(3, 2, 8, 9)};
  const auto c = extract_cube(frames, 0, 0, 0);
  EXPECT_EQ(c.at(0, 0, 0), 1);
  EXPECT_EQ(c.at(0, 0, 1), 9);
  EXPECT_EQ(c.at(5, 5, 7), 9);
}
