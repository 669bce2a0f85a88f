#include "fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>

namespace fixtures {

using dct3d::Frame;
using dct3d::VideoCube;
using dct3d::Volume;

std::uint64_t Rng::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

int Rng::uniform_int(int lo, int hi) {
  return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
}

namespace {

double smoothstep(double edge0, double edge1, double x) {
  const double t = std::clamp((x - edge0) / (edge1 - edge0), 0.0, 1.0);
  return t * t * (3.0 - 2.0 * t);
}

// Coverage of an axis-aligned ellipse with an edge ramp `soft` pixels wide.
double ellipse(double x, double y, double cx, double cy, double rx, double ry, double soft) {
  const double dx = (x - cx) / rx;
  const double dy = (y - cy) / ry;
  const double dist = (std::sqrt(dx * dx + dy * dy) - 1.0) * std::min(rx, ry);
  return 1.0 - smoothstep(-soft, soft, dist);
}

double mix(double a, double b, double t) { return a + (b - a) * t; }

std::uint16_t to_sample(double v, int max_value) {
  return static_cast<std::uint16_t>(std::clamp(std::lround(v), 0L, static_cast<long>(max_value)));
}

}  // namespace

VideoCube talking_head_clip(int frame_count, int width, int height, std::uint64_t seed) {
  Rng rng(seed);
  constexpr double kTau = 2.0 * std::numbers::pi;

  // Static backdrop, including a faint fixed texture.
  std::vector<double> backdrop(static_cast<std::size_t>(width) * height);
  double phase[4];
  for (double& p : phase) p = kTau * rng.uniform();
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      double v = 70.0 + 60.0 * x / width + 12.0 * std::sin(y / 45.0);
      // Bright panel on the left and a desk edge at the bottom.
      const double panel = smoothstep(-2, 2, x - 20.0) * (1 - smoothstep(-2, 2, x - 110.0)) *
                           smoothstep(-2, 2, y - 30.0) * (1 - smoothstep(-2, 2, y - 150.0));
      v = mix(v, 200.0 - 0.2 * y, panel);
      v = mix(v, 45.0, smoothstep(-1.5, 1.5, y - 0.9 * height));
      v += 4.0 * std::sin(x / 7.0 + phase[0]) * std::sin(y / 9.0 + phase[1]) +
           1.5 * std::sin((x + y) / 13.0 + phase[2]) + 1.0 * std::cos((x - 2 * y) / 17.0 + phase[3]);
      backdrop[static_cast<std::size_t>(y) * width + x] = v;
    }
  }

  VideoCube clip;
  clip.width = width;
  clip.height = height;
  clip.fps = {30, 1};
  const double cx0 = width * 0.55;
  const double cy0 = height * 0.40;
  for (int t = 0; t < frame_count; ++t) {
    Frame f(width, height, 8);
    const double hx = cx0 + 2.0 * std::sin(kTau * t / 90.0);
    const double hy = cy0 + 0.8 * std::sin(kTau * t / 70.0);
    const double mouth_open = 1.5 + 2.5 * std::abs(std::sin(kTau * t / 14.0));
    const bool blink = t % 40 >= 20 && t % 40 < 23;
    const double eye_ry = blink ? 0.8 : 3.0;
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) {
        double v = backdrop[static_cast<std::size_t>(y) * width + x];
        // Shoulders and jacket.
        const double body = ellipse(x, y, cx0 + 0.3 * (hx - cx0), height + 30.0, 150.0, 140.0, 2.0);
        v = mix(v, 55.0 + 15.0 * (x - cx0) / 150.0, body);
        // Neck.
        const double neck = ellipse(x, y, hx, hy + 75.0, 22.0, 30.0, 2.0);
        v = mix(v, 150.0, neck);
        // Face with soft shading lit from the left.
        const double dx = (x - hx) / 46.0;
        const double dy = (y - hy) / 60.0;
        const double face = ellipse(x, y, hx, hy, 46.0, 60.0, 1.5);
        const double skin = 175.0 - 30.0 * (dx * dx + dy * dy) - 15.0 * dx;
        v = mix(v, skin, face);
        // Hair over the top of the head.
        const double hair = ellipse(x, y, hx, hy - 22.0, 50.0, 44.0, 2.0) *
                            (1 - smoothstep(-3.0, 3.0, y - (hy - 28.0)));
        v = mix(v, 40.0 + 8.0 * std::sin(x / 5.0), hair);
        // Eyes and mouth.
        v = mix(v, 55.0, ellipse(x, y, hx - 17.0, hy - 8.0, 7.0, eye_ry, 1.0));
        v = mix(v, 55.0, ellipse(x, y, hx + 17.0, hy - 8.0, 7.0, eye_ry, 1.0));
        v = mix(v, 95.0, ellipse(x, y, hx, hy + 30.0, 14.0, mouth_open, 1.0));
        v += 1.2 * rng.normal();
        f.at(x, y) = to_sample(v, 255);
      }
    }
    clip.frames.push_back(std::move(f));
  }
  return clip;
}

Volume smooth_phantom(int width, int height, int slices) {
  struct Ellipsoid {
    double cx, cy, cz, rx, ry, rz, value;
  };
  // Coordinates in [-1, 1]^3; values add up, as in the Shepp-Logan model.
  const Ellipsoid parts[] = {
      {0.0, 0.0, 0.0, 0.72, 0.92, 0.95, 1000.0},    // body
      {0.0, -0.02, 0.0, 0.66, 0.86, 0.90, 200.0},   // soft tissue
      {-0.22, 0.0, 0.1, 0.14, 0.36, 0.55, -600.0},  // left lung
      {0.22, 0.0, 0.1, 0.16, 0.40, 0.55, -600.0},   // right lung
      {0.0, 0.35, 0.0, 0.10, 0.10, 0.80, 2200.0},   // spine
      {0.0, -0.25, -0.2, 0.20, 0.18, 0.30, 300.0},  // organ
      {0.08, 0.1, 0.3, 0.05, 0.05, 0.10, 500.0},    // lesion
  };
  Volume vol;
  vol.width = width;
  vol.height = height;
  vol.bit_depth = 12;
  const double soft = 3.0 / width;  // edge ramp of about three pixels
  for (int s = 0; s < slices; ++s) {
    Frame f(width, height, 12);
    const double z = 2.0 * (s + 0.5) / slices - 1.0;
    for (int y = 0; y < height; ++y) {
      const double py = 2.0 * (y + 0.5) / height - 1.0;
      for (int x = 0; x < width; ++x) {
        const double px = 2.0 * (x + 0.5) / width - 1.0;
        double v = 0.0;
        for (const auto& e : parts) {
          const double dx = (px - e.cx) / e.rx;
          const double dy = (py - e.cy) / e.ry;
          const double dz = (z - e.cz) / e.rz;
          const double dist = (std::sqrt(dx * dx + dy * dy + dz * dz) - 1.0) * std::min(e.rx, e.ry);
          v += e.value * (1.0 - smoothstep(-soft, soft, dist));
        }
        // Gentle intensity drift across the field of view.
        if (v > 0.0) v += 80.0 * px + 40.0 * z;
        f.at(x, y) = to_sample(v, 4095);
      }
    }
    vol.slices.push_back(std::move(f));
  }
  return vol;
}

Frame random_frame(int width, int height, int bit_depth, int max_value, Rng& rng) {
  Frame f(width, height, bit_depth);
  for (auto& s : f.samples) s = static_cast<std::uint16_t>(rng.uniform_int(0, max_value));
  return f;
}

VideoCube random_clip(int width, int height, int frame_count, int max_value, std::uint64_t seed) {
  Rng rng(seed);
  VideoCube v;
  v.width = width;
  v.height = height;
  for (int i = 0; i < frame_count; ++i) v.frames.push_back(random_frame(width, height, 8, max_value, rng));
  return v;
}

Volume random_volume(int width, int height, int slices, int bit_depth, int max_value,
                     std::uint64_t seed) {
  Rng rng(seed);
  Volume v;
  v.width = width;
  v.height = height;
  v.bit_depth = bit_depth;
  for (int i = 0; i < slices; ++i) v.slices.push_back(random_frame(width, height, bit_depth, max_value, rng));
  return v;
}

Frame gradient_image(int width, int height, int bit_depth) {
  const double peak = (1 << bit_depth) - 1;
  Frame f(width, height, bit_depth);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      double v = 0.2 + 0.5 * (x + y) / static_cast<double>(width + height);
      v = mix(v, 0.9, ellipse(x, y, width * 0.6, height * 0.4, width * 0.2, height * 0.2, 2.0));
      f.at(x, y) = to_sample(v * peak, static_cast<int>(peak));
    }
  }
  return f;
}

std::filesystem::path scratch_dir(const std::string& name) {
  std::filesystem::path base;
  if (const char* env = std::getenv("DCT3D_TEST_TMP")) {
    base = env;
  } else {
    base = std::filesystem::temp_directory_path() / "dct3d_tests";
  }
  const auto dir = base / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace fixtures
