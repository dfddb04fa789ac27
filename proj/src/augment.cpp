#include "arabdoc/augment.hpp"

#include "arabdoc/error.hpp"
#include "random.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <mutex>
#include <numeric>
#include <thread>

namespace arabdoc {

std::string_view to_string(TransformCategory c) {
  switch (c) {
    case TransformCategory::pre_print: return "pre_print";
    case TransformCategory::mechanical: return "mechanical";
    case TransformCategory::human_marks: return "human_marks";
    case TransformCategory::aging: return "aging";
    case TransformCategory::digital_noise: return "digital_noise";
    case TransformCategory::geometric: return "geometric";
    case TransformCategory::lighting: return "lighting";
    case TransformCategory::blur: return "blur";
  }
  return "unknown";
}

namespace {

constexpr double kPi = 3.14159265358979323846;

using Rgb = std::array<double, 3>;

std::uint8_t u8(double v) {
  return static_cast<std::uint8_t>(std::clamp<long>(std::lround(v), 0, 255));
}

void blend(std::uint8_t* p, const Rgb& target, double alpha) {
  for (int c = 0; c < 3; ++c) p[c] = u8(p[c] + alpha * (target[c] - p[c]));
}

void scale(std::uint8_t* p, double factor) {
  for (int c = 0; c < 3; ++c) p[c] = u8(p[c] * factor);
}

int clampi(int v, int lo, int hi) { return std::clamp(v, lo, hi); }

int min_dim(const RasterImage& img) { return std::min(img.width, img.height); }

struct Ctx {
  const TransformParams& params;
  detail::Rng& rng;
  double strength() const { return params.at("strength"); }
  double get(const char* name) const { return params.at(name); }
  int geti(const char* name) const { return static_cast<int>(std::lround(params.at(name))); }
};

template <typename F>
void for_each_pixel(RasterImage& img, F&& f) {
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) f(x, y, img.at(x, y));
  }
}

// Bilinear lookup; anything outside the canvas reads as white.
std::array<double, 3> sample(const RasterImage& img, double sx, double sy) {
  const double fx0 = std::floor(sx);
  const double fy0 = std::floor(sy);
  const double fx = sx - fx0;
  const double fy = sy - fy0;
  const int x0 = static_cast<int>(fx0);
  const int y0 = static_cast<int>(fy0);
  std::array<double, 3> out{};
  const double w[4] = {(1 - fx) * (1 - fy), fx * (1 - fy), (1 - fx) * fy, fx * fy};
  const int xs[4] = {x0, x0 + 1, x0, x0 + 1};
  const int ys[4] = {y0, y0, y0 + 1, y0 + 1};
  for (int k = 0; k < 4; ++k) {
    if (w[k] == 0.0) continue;
    const bool inside = xs[k] >= 0 && xs[k] < img.width && ys[k] >= 0 && ys[k] < img.height;
    for (int c = 0; c < 3; ++c) {
      out[c] += w[k] * (inside ? img.at(xs[k], ys[k])[c] : 255.0);
    }
  }
  return out;
}

template <typename Map>
RasterImage warp(const RasterImage& img, Map&& map) {
  RasterImage out = img;
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      const auto [sx, sy] = map(static_cast<double>(x), static_cast<double>(y));
      const auto v = sample(img, sx, sy);
      auto* p = out.at(x, y);
      for (int c = 0; c < 3; ++c) p[c] = u8(v[c]);
    }
  }
  return out;
}

RasterImage convolve(const RasterImage& img, const std::vector<std::pair<int, int>>& offsets) {
  RasterImage out = img;
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      double sum[3] = {0, 0, 0};
      for (const auto& [dx, dy] : offsets) {
        const auto* q = img.at(clampi(x + dx, 0, img.width - 1), clampi(y + dy, 0, img.height - 1));
        for (int c = 0; c < 3; ++c) sum[c] += q[c];
      }
      auto* p = out.at(x, y);
      for (int c = 0; c < 3; ++c) p[c] = u8(sum[c] / static_cast<double>(offsets.size()));
    }
  }
  return out;
}

Rgb pick_ink(detail::Rng& rng) {
  static const Rgb inks[] = {{200, 30, 30}, {30, 50, 180}, {20, 110, 60}};
  return inks[rng.index(3)];
}

// ---- pre-print ----

RasterImage watermark(RasterImage img, const Ctx& c) {
  const double a = c.rng.uniform(-kPi / 3, kPi / 3);
  const double half = std::max(1.0, c.get("band_fraction") * min_dim(img));
  const double cx = (img.width - 1) / 2.0;
  const double cy = (img.height - 1) / 2.0;
  const double alpha = 0.35 * c.strength();
  for_each_pixel(img, [&](int x, int y, std::uint8_t* p) {
    const double across = (x - cx) * std::sin(a) - (y - cy) * std::cos(a);
    const double along = (x - cx) * std::cos(a) + (y - cy) * std::sin(a);
    if (std::abs(across) <= half && static_cast<long>(std::floor(along / half)) % 3 != 0) {
      blend(p, {160, 160, 160}, alpha);
    }
  });
  return img;
}

RasterImage stamp_overlay(RasterImage img, const Ctx& c) {
  const double r = std::max(1.0, c.get("radius_fraction") * min_dim(img));
  const double cx = c.rng.uniform(0, img.width);
  const double cy = c.rng.uniform(0, img.height);
  const double thick = std::max(1.0, 0.15 * r);
  const Rgb ink = pick_ink(c.rng);
  const double alpha = 0.6 * c.strength();
  for_each_pixel(img, [&](int x, int y, std::uint8_t* p) {
    const double d = std::hypot(x - cx, y - cy);
    if (std::abs(d - r) <= thick || std::abs(d - 0.6 * r) <= thick * 0.5) blend(p, ink, alpha);
  });
  return img;
}

RasterImage bleed_through(RasterImage img, const Ctx& c) {
  const RasterImage src = img;
  const double alpha = 0.35 * c.strength();
  for_each_pixel(img, [&](int x, int y, std::uint8_t* p) {
    const auto* m = src.at(img.width - 1 - x, y);
    Rgb target;
    for (int k = 0; k < 3; ++k) target[k] = std::min(p[k], m[k]);
    blend(p, target, alpha);
  });
  return img;
}

RasterImage faint_ink(RasterImage img, const Ctx& c) {
  const double alpha = 0.6 * c.strength();
  for_each_pixel(img, [&](int, int, std::uint8_t* p) { blend(p, {255, 255, 255}, alpha); });
  return img;
}

RasterImage page_number_overlay(RasterImage img, const Ctx& c) {
  const int dh = std::max(1, static_cast<int>(c.get("size_fraction") * img.height));
  const int dw = std::max(1, dh * 3 / 5);
  const int digits = 1 + static_cast<int>(c.rng.index(3));
  const int total = digits * dw + (digits - 1) * std::max(1, dw / 3);
  const int x0 = std::max(0, (img.width - total) / 2);
  const int y0 = std::max(0, img.height - 2 * dh);
  const double alpha = c.strength();
  for (int d = 0; d < digits; ++d) {
    const int left = x0 + d * (dw + std::max(1, dw / 3));
    const auto pattern = c.rng.next();
    for (int y = y0; y < std::min(img.height, y0 + dh); ++y) {
      for (int x = left; x < std::min(img.width, left + dw); ++x) {
        const bool edge = y == y0 || y == y0 + dh - 1 || x == left || x == left + dw - 1;
        const bool mid = y == y0 + dh / 2 && (pattern & 1);
        if (edge || mid) blend(img.at(x, y), {40, 40, 40}, alpha);
      }
    }
  }
  return img;
}

// ---- mechanical ----

void dark_spot(RasterImage& img, double cx, double cy, double r, double alpha) {
  const int x0 = std::max(0, static_cast<int>(std::floor(cx - r)));
  const int x1 = std::min(img.width - 1, static_cast<int>(std::ceil(cx + r)));
  const int y0 = std::max(0, static_cast<int>(std::floor(cy - r)));
  const int y1 = std::min(img.height - 1, static_cast<int>(std::ceil(cy + r)));
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      if (std::hypot(x - cx, y - cy) <= r) blend(img.at(x, y), {30, 30, 30}, alpha);
    }
  }
}

RasterImage dirty_drum(RasterImage img, const Ctx& c) {
  const double area = static_cast<double>(img.width) * img.height;
  const long spots = std::lround(c.strength() * c.get("spots_per_10k") * area / 10000.0);
  const double period = std::max(1.0, c.rng.uniform(0.25, 1.0) * img.height);
  for (long i = 0; i < spots; ++i) {
    const double x = c.rng.uniform(0, img.width);
    const double y0 = c.rng.uniform(0, period);
    const double r = c.rng.uniform(0.5, 2.5);
    // The drum repeats its dirt once per revolution.
    for (double y = y0; y < img.height; y += period) dark_spot(img, x, y, r, 0.7);
  }
  return img;
}

RasterImage banding(RasterImage img, const Ctx& c) {
  const double period = std::max(2.0, c.get("period_px"));
  const double phase = c.rng.uniform(0, 2 * kPi);
  const double s = c.strength();
  for_each_pixel(img, [&](int, int y, std::uint8_t* p) {
    scale(p, 1.0 - 0.25 * s * (0.5 + 0.5 * std::sin(2 * kPi * y / period + phase)));
  });
  return img;
}

RasterImage toner_scatter(RasterImage img, const Ctx& c) {
  const RasterImage src = img;
  const double prob = 0.05 * c.strength();
  for_each_pixel(img, [&](int x, int y, std::uint8_t* p) {
    if (!c.rng.bernoulli(prob)) return;
    const int nx = clampi(x + static_cast<int>(c.rng.index(5)) - 2, 0, img.width - 1);
    const int ny = clampi(y + static_cast<int>(c.rng.index(5)) - 2, 0, img.height - 1);
    const auto* q = src.at(nx, ny);
    for (int k = 0; k < 3; ++k) p[k] = std::min(p[k], q[k]);
    scale(p, 0.85);
  });
  return img;
}

RasterImage roller_streak(RasterImage img, const Ctx& c) {
  const int n = std::max(1, c.geti("streaks"));
  const double alpha = 0.4 * c.strength();
  for (int i = 0; i < n; ++i) {
    const int x0 = static_cast<int>(c.rng.index(static_cast<std::uint64_t>(img.width)));
    const int w = 1 + static_cast<int>(c.rng.index(3));
    for (int y = 0; y < img.height; ++y) {
      const double a = alpha * (0.7 + 0.3 * std::sin(y * 0.05));
      for (int x = x0; x < std::min(img.width, x0 + w); ++x) blend(img.at(x, y), {0, 0, 0}, a);
    }
  }
  return img;
}

RasterImage registration_offset(RasterImage img, const Ctx& c) {
  const int shift = static_cast<int>(std::lround(c.strength() * c.get("max_shift_px")));
  const int channel = c.rng.bernoulli(0.5) ? 0 : 2;
  const int dx = c.rng.bernoulli(0.5) ? shift : -shift;
  const int dy = c.rng.bernoulli(0.5) ? shift / 2 : -(shift / 2);
  if (shift == 0) return img;
  const RasterImage src = img;
  for_each_pixel(img, [&](int x, int y, std::uint8_t* p) {
    const int sx = x - dx;
    const int sy = y - dy;
    const bool inside = sx >= 0 && sx < img.width && sy >= 0 && sy < img.height;
    p[channel] = inside ? src.at(sx, sy)[channel] : 255;
  });
  return img;
}

// ---- human marks ----

RasterImage handwritten_markup(RasterImage img, const Ctx& c) {
  const int strokes = std::max(1, c.geti("strokes"));
  const double alpha = 0.85 * c.strength();
  for (int s = 0; s < strokes; ++s) {
    const Rgb ink = pick_ink(c.rng);
    double x = c.rng.uniform(0, img.width);
    double y = c.rng.uniform(0, img.height);
    double heading = c.rng.uniform(0, 2 * kPi);
    const int steps = std::max(2, min_dim(img) / 2);
    const double thick = c.rng.uniform(0.5, 1.5);
    for (int i = 0; i < steps; ++i) {
      heading += c.rng.uniform(-0.35, 0.35);
      x += std::cos(heading);
      y += std::sin(heading);
      const int x0 = std::max(0, static_cast<int>(std::floor(x - thick)));
      const int x1 = std::min(img.width - 1, static_cast<int>(std::ceil(x + thick)));
      const int y0 = std::max(0, static_cast<int>(std::floor(y - thick)));
      const int y1 = std::min(img.height - 1, static_cast<int>(std::ceil(y + thick)));
      for (int py = y0; py <= y1; ++py) {
        for (int px = x0; px <= x1; ++px) {
          if (std::hypot(px - x, py - y) <= thick) blend(img.at(px, py), ink, alpha);
        }
      }
    }
  }
  return img;
}

RasterImage ink_smudge(RasterImage img, const Ctx& c) {
  const double r = std::max(1.0, c.get("radius_fraction") * min_dim(img));
  const double cx = c.rng.uniform(0, img.width);
  const double cy = c.rng.uniform(0, img.height);
  const double stretch = c.rng.uniform(1.0, 2.5);
  const RasterImage src = img;
  const double s = c.strength();
  for_each_pixel(img, [&](int x, int y, std::uint8_t* p) {
    const double d = std::hypot((x - cx) / stretch, y - cy) / r;
    if (d > 1.0) return;
    Rgb mean{};
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        const auto* q = src.at(clampi(x + dx, 0, img.width - 1), clampi(y + dy, 0, img.height - 1));
        for (int k = 0; k < 3; ++k) mean[k] += q[k] / 9.0;
      }
    }
    for (auto& m : mean) m *= 0.75;
    blend(p, mean, s * (1.0 - d * d));
  });
  return img;
}

// ---- aging ----

RasterImage folding(RasterImage img, const Ctx& c) {
  const bool vertical = c.rng.bernoulli(0.5);
  const int extent = vertical ? img.width : img.height;
  const double pos = c.rng.uniform(0.3, 0.7) * (extent - 1);
  const double sigma = std::max(1.0, 0.01 * extent);
  const double s = c.strength();
  for_each_pixel(img, [&](int x, int y, std::uint8_t* p) {
    const double d = (vertical ? x : y) - pos;
    const double crease = std::exp(-(d * d) / (sigma * sigma));
    // The far side of the fold catches a little more light than the near side.
    const double tilt = d > 0 ? 0.04 : -0.04;
    scale(p, 1.0 - s * (0.35 * crease - tilt));
  });
  return img;
}

RasterImage yellowing(RasterImage img, const Ctx& c) {
  const double s = c.strength();
  for_each_pixel(img, [&](int, int, std::uint8_t* p) { p[2] = u8(p[2] * (1.0 - 0.35 * s)); });
  return img;
}

RasterImage coffee_stain(RasterImage img, const Ctx& c) {
  const double r = std::max(1.0, c.get("radius_fraction") * min_dim(img));
  const double cx = c.rng.uniform(0, img.width);
  const double cy = c.rng.uniform(0, img.height);
  const double ring = std::max(1.0, 0.08 * r);
  const Rgb tint{0.85, 0.7, 0.5};
  const double s = c.strength();
  for_each_pixel(img, [&](int x, int y, std::uint8_t* p) {
    const double d = std::hypot(x - cx, y - cy);
    double a = 0.0;
    if (d <= r) a += 0.15;
    a += 0.5 * std::exp(-((d - r) * (d - r)) / (ring * ring));
    a *= s;
    Rgb target;
    for (int k = 0; k < 3; ++k) target[k] = p[k] * tint[k];
    blend(p, target, std::min(1.0, a));
  });
  return img;
}

// ---- digital noise ----

RasterImage salt_and_pepper(RasterImage img, const Ctx& c) {
  const double density = c.strength() * c.get("max_density");
  for_each_pixel(img, [&](int, int, std::uint8_t* p) {
    if (!c.rng.bernoulli(density)) return;
    const std::uint8_t v = c.rng.bernoulli(0.5) ? 255 : 0;
    p[0] = p[1] = p[2] = v;
  });
  return img;
}

RasterImage gaussian_noise(RasterImage img, const Ctx& c) {
  const double sd = c.strength() * c.get("max_sigma");
  for_each_pixel(img, [&](int, int, std::uint8_t* p) {
    for (int k = 0; k < 3; ++k) p[k] = u8(p[k] + sd * c.rng.normal());
  });
  return img;
}

RasterImage jpeg_blockiness(RasterImage img, const Ctx& c) {
  const int block = std::max(2, c.geti("block_px"));
  const double alpha = 0.7 * c.strength();
  for (int by = 0; by < img.height; by += block) {
    for (int bx = 0; bx < img.width; bx += block) {
      const int ex = std::min(img.width, bx + block);
      const int ey = std::min(img.height, by + block);
      Rgb mean{};
      for (int y = by; y < ey; ++y) {
        for (int x = bx; x < ex; ++x) {
          for (int k = 0; k < 3; ++k) mean[k] += img.at(x, y)[k];
        }
      }
      const double n = static_cast<double>((ex - bx) * (ey - by));
      for (auto& m : mean) m /= n;
      for (int y = by; y < ey; ++y) {
        for (int x = bx; x < ex; ++x) blend(img.at(x, y), mean, alpha);
      }
    }
  }
  return img;
}

RasterImage speckle(RasterImage img, const Ctx& c) {
  const double amount = 0.4 * c.strength();
  for_each_pixel(img, [&](int, int, std::uint8_t* p) {
    const double f = 1.0 + amount * c.rng.normal();
    for (int k = 0; k < 3; ++k) p[k] = u8(p[k] * f);
  });
  return img;
}

// ---- geometric ----

RasterImage perspective_distortion(RasterImage img, const Ctx& c) {
  const double k = c.strength() * c.get("max_keystone");
  const bool top_narrow = c.rng.bernoulli(0.5);
  const double cx = (img.width - 1) / 2.0;
  const double hm1 = std::max(1, img.height - 1);
  return warp(img, [&](double x, double y) {
    const double t = y / hm1;
    const double width_scale = 1.0 - k * (top_narrow ? 1.0 - t : t);
    return std::pair{cx + (x - cx) / width_scale, y};
  });
}

RasterImage rotation_skew(RasterImage img, const Ctx& c) {
  const double sign = c.rng.bernoulli(0.5) ? 1.0 : -1.0;
  const double a = sign * c.strength() * c.get("max_angle_deg") * kPi / 180.0;
  const double cx = (img.width - 1) / 2.0;
  const double cy = (img.height - 1) / 2.0;
  const double cs = std::cos(a);
  const double sn = std::sin(a);
  return warp(img, [&](double x, double y) {
    return std::pair{cx + cs * (x - cx) + sn * (y - cy), cy - sn * (x - cx) + cs * (y - cy)};
  });
}

// ---- lighting ----

RasterImage low_light(RasterImage img, const Ctx& c) {
  const double s = c.strength();
  const double gamma = 1.0 + 1.5 * s;
  for_each_pixel(img, [&](int, int, std::uint8_t* p) {
    for (int k = 0; k < 3; ++k) p[k] = u8(255.0 * std::pow(p[k] / 255.0, gamma) * (1.0 - 0.4 * s));
  });
  return img;
}

RasterImage overexposure(RasterImage img, const Ctx& c) {
  const double s = c.strength();
  for_each_pixel(img, [&](int, int, std::uint8_t* p) {
    for (int k = 0; k < 3; ++k) p[k] = u8(p[k] * (1.0 + 0.8 * s) + 40.0 * s);
  });
  return img;
}

RasterImage shadow_gradient(RasterImage img, const Ctx& c) {
  const double a = c.rng.uniform(0, 2 * kPi);
  const double dx = std::cos(a);
  const double dy = std::sin(a);
  const double cx = (img.width - 1) / 2.0;
  const double cy = (img.height - 1) / 2.0;
  const double reach = std::max(1.0, std::abs(dx) * cx + std::abs(dy) * cy);
  const double s = c.strength();
  for_each_pixel(img, [&](int x, int y, std::uint8_t* p) {
    const double t = 0.5 + 0.5 * ((x - cx) * dx + (y - cy) * dy) / reach;
    scale(p, 1.0 - 0.55 * s * std::clamp(t, 0.0, 1.0));
  });
  return img;
}

RasterImage uneven_illumination(RasterImage img, const Ctx& c) {
  const double cx = c.rng.uniform(0, img.width);
  const double cy = c.rng.uniform(0, img.height);
  const double dmax = std::max(1.0, std::hypot(img.width, img.height));
  const double s = c.strength();
  for_each_pixel(img, [&](int x, int y, std::uint8_t* p) {
    const double d = std::hypot(x - cx, y - cy) / dmax;
    scale(p, 1.0 - 0.45 * s * d * d * 4.0 / (1.0 + d * d * 4.0));
  });
  return img;
}

RasterImage glare(RasterImage img, const Ctx& c) {
  const double r = std::max(1.0, c.get("radius_fraction") * min_dim(img));
  const double cx = c.rng.uniform(0, img.width);
  const double cy = c.rng.uniform(0, img.height);
  const double s = c.strength();
  for_each_pixel(img, [&](int x, int y, std::uint8_t* p) {
    const double d = std::hypot(x - cx, y - cy) / r;
    blend(p, {255, 255, 255}, 0.85 * s * std::exp(-d * d));
  });
  return img;
}

// ---- blur ----

RasterImage motion_blur(RasterImage img, const Ctx& c) {
  const int half = static_cast<int>(std::lround(c.strength() * c.get("max_length_px") / 2.0));
  static const int dirs[4][2] = {{1, 0}, {0, 1}, {1, 1}, {1, -1}};
  const auto& d = dirs[c.rng.index(4)];
  std::vector<std::pair<int, int>> offsets;
  for (int k = -half; k <= half; ++k) offsets.emplace_back(k * d[0], k * d[1]);
  return convolve(img, offsets);
}

RasterImage defocus_blur(RasterImage img, const Ctx& c) {
  const double r = c.strength() * c.get("max_radius_px");
  const int ri = static_cast<int>(std::floor(r));
  std::vector<std::pair<int, int>> offsets;
  for (int dy = -ri; dy <= ri; ++dy) {
    for (int dx = -ri; dx <= ri; ++dx) {
      if (dx * dx + dy * dy <= r * r) offsets.emplace_back(dx, dy);
    }
  }
  if (offsets.empty()) offsets.emplace_back(0, 0);
  return convolve(img, offsets);
}

RasterImage gaussian_blur(RasterImage img, const Ctx& c) {
  const double sigma = c.strength() * c.get("max_sigma_px");
  const int radius = sigma > 0 ? static_cast<int>(std::ceil(3 * sigma)) : 0;
  std::vector<double> kernel(2 * radius + 1, 1.0);
  if (radius > 0) {
    double sum = 0;
    for (int i = -radius; i <= radius; ++i) {
      kernel[i + radius] = std::exp(-(i * i) / (2 * sigma * sigma));
      sum += kernel[i + radius];
    }
    for (auto& k : kernel) k /= sum;
  }
  const int w = img.width;
  const int h = img.height;
  std::vector<double> tmp(img.pixels.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int k = 0; k < 3; ++k) {
        double acc = 0;
        for (int i = -radius; i <= radius; ++i) {
          acc += kernel[i + radius] * img.at(clampi(x + i, 0, w - 1), y)[k];
        }
        tmp[(static_cast<std::size_t>(y) * w + x) * 3 + k] = acc;
      }
    }
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int k = 0; k < 3; ++k) {
        double acc = 0;
        for (int i = -radius; i <= radius; ++i) {
          acc += kernel[i + radius] *
                 tmp[(static_cast<std::size_t>(clampi(y + i, 0, h - 1)) * w + x) * 3 + k];
        }
        img.at(x, y)[k] = u8(acc);
      }
    }
  }
  return img;
}

using TransformFn = RasterImage (*)(RasterImage, const Ctx&);

struct Entry {
  TransformSpec spec;
  TransformFn fn;
};

ParamRange strength() { return {"strength", 0.0, 0.3, 1.0}; }

TransformSpec make(TransformCategory cat, std::string name, std::vector<ParamRange> extra,
                   bool seeded, std::string description) {
  std::vector<ParamRange> params{strength()};
  params.insert(params.end(), extra.begin(), extra.end());
  return {cat, std::move(name), std::move(params), seeded, std::move(description)};
}

const std::vector<Entry>& entries() {
  using C = TransformCategory;
  static const std::vector<Entry> table = {
      {make(C::pre_print, "watermark", {{"band_fraction", 0.01, 0.03, 0.15}}, true,
            "dashed grey diagonal band through the page centre"),
       watermark},
      {make(C::pre_print, "stamp_overlay", {{"radius_fraction", 0.02, 0.05, 0.25}}, true,
            "coloured double ring at a random position"),
       stamp_overlay},
      {make(C::pre_print, "bleed_through", {}, false,
            "mirror image of the page darkening from the reverse side"),
       bleed_through},
      {make(C::pre_print, "faint_ink", {}, false, "every pixel pulled toward white"), faint_ink},
      {make(C::pre_print, "page_number_overlay", {{"size_fraction", 0.01, 0.02, 0.06}}, true,
            "outlined digit boxes near the bottom centre"),
       page_number_overlay},
      {make(C::mechanical, "dirty_drum", {{"spots_per_10k", 0.5, 1.0, 20.0}}, true,
            "dark spots repeating vertically with the drum period"),
       dirty_drum},
      {make(C::mechanical, "banding", {{"period_px", 2.0, 4.0, 64.0}}, true,
            "sinusoidal horizontal density bands"),
       banding},
      {make(C::mechanical, "toner_scatter", {}, true,
            "isolated pixels take a darkened nearby value"),
       toner_scatter},
      {make(C::mechanical, "roller_streak", {{"streaks", 1.0, 1.0, 5.0}}, true,
            "thin full-height dark vertical streaks"),
       roller_streak},
      {make(C::mechanical, "registration_offset", {{"max_shift_px", 1.0, 1.0, 6.0}}, true,
            "red or blue plane shifted against the others"),
       registration_offset},
      {make(C::human_marks, "handwritten_markup", {{"strokes", 1.0, 1.0, 4.0}}, true,
            "random-walk pen strokes in red, blue or green"),
       handwritten_markup},
      {make(C::human_marks, "ink_smudge", {{"radius_fraction", 0.02, 0.05, 0.2}}, true,
            "elliptical region blurred and darkened with radial falloff"),
       ink_smudge},
      {make(C::aging, "folding", {}, true, "crease shadow along a vertical or horizontal line"),
       folding},
      {make(C::aging, "yellowing", {}, false, "blue channel scaled by 1 - 0.35 * strength"),
       yellowing},
      {make(C::aging, "coffee_stain", {{"radius_fraction", 0.03, 0.08, 0.3}}, true,
            "brown tinted ring with a faint interior"),
       coffee_stain},
      {make(C::digital_noise, "salt_and_pepper", {{"max_density", 0.0, 0.01, 0.1}}, true,
            "pixels set to black or white with probability strength * max_density"),
       salt_and_pepper},
      {make(C::digital_noise, "gaussian_noise", {{"max_sigma", 0.0, 5.0, 30.0}}, true,
            "additive per-channel normal noise"),
       gaussian_noise},
      {make(C::digital_noise, "jpeg_blockiness", {{"block_px", 2.0, 4.0, 16.0}}, false,
            "pixels pulled toward their block mean"),
       jpeg_blockiness},
      {make(C::digital_noise, "speckle", {}, true, "multiplicative per-pixel normal noise"),
       speckle},
      {make(C::geometric, "perspective_distortion", {{"max_keystone", 0.0, 0.05, 0.2}}, true,
            "keystone warp narrowing the top or bottom edge; size kept, white fill"),
       perspective_distortion},
      {make(C::geometric, "rotation_skew", {{"max_angle_deg", 0.0, 1.0, 5.0}}, true,
            "rotation about the centre; size kept, white fill"),
       rotation_skew},
      {make(C::lighting, "low_light", {}, false, "gamma raised and brightness lowered"),
       low_light},
      {make(C::lighting, "overexposure", {}, false, "gain and offset toward white"),
       overexposure},
      {make(C::lighting, "shadow_gradient", {}, true, "linear darkening across the page"),
       shadow_gradient},
      {make(C::lighting, "uneven_illumination", {}, true,
            "radial darkening away from a random light centre"),
       uneven_illumination},
      {make(C::lighting, "glare", {{"radius_fraction", 0.05, 0.1, 0.4}}, true,
            "gaussian white hotspot"),
       glare},
      {make(C::blur, "motion_blur", {{"max_length_px", 0.0, 2.0, 15.0}}, true,
            "box kernel along one of four directions"),
       motion_blur},
      {make(C::blur, "defocus_blur", {{"max_radius_px", 0.0, 1.0, 5.0}}, false,
            "disk kernel average"),
       defocus_blur},
      {make(C::blur, "gaussian_blur", {{"max_sigma_px", 0.0, 0.5, 3.0}}, false,
            "separable gaussian kernel"),
       gaussian_blur},
  };
  return table;
}

const Entry& find_entry(std::string_view name) {
  for (const auto& e : entries()) {
    if (e.spec.name == name) return e;
  }
  throw Error(ErrorCode::UnknownTransform, "unknown transform '" + std::string(name) + "'");
}

}  // namespace

const std::vector<TransformSpec>& registry() {
  static const std::vector<TransformSpec> specs = [] {
    std::vector<TransformSpec> out;
    for (const auto& e : entries()) out.push_back(e.spec);
    return out;
  }();
  return specs;
}

const TransformSpec& find_transform(std::string_view name) { return find_entry(name).spec; }

std::string registry_json() {
  nlohmann::ordered_json j;
  j["format"] = "arabdoc-augment-registry";
  j["version"] = kRegistryVersion;
  auto list = nlohmann::ordered_json::array();
  for (const auto& s : registry()) {
    nlohmann::ordered_json t;
    t["name"] = s.name;
    t["category"] = to_string(s.category);
    t["seed_consuming"] = s.seed_consuming;
    t["description"] = s.description;
    auto params = nlohmann::ordered_json::array();
    for (const auto& p : s.params) {
      params.push_back({{"name", p.name}, {"min", p.min}, {"sample_min", p.sample_min},
                        {"max", p.max}});
    }
    t["params"] = params;
    list.push_back(t);
  }
  j["transforms"] = list;
  return j.dump(2);
}

TransformParams sample_params(const TransformSpec& spec, std::uint64_t seed) {
  detail::Rng rng(detail::derive_seed(seed, "params:" + spec.name));
  TransformParams out;
  for (const auto& p : spec.params) out[p.name] = rng.uniform(p.sample_min, p.max);
  return out;
}

RasterImage apply_transform(const RasterImage& img, std::string_view name,
                            const TransformParams& params, std::uint64_t seed) {
  const Entry& e = find_entry(name);
  if (!img.valid()) throw Error(ErrorCode::OutOfRange, "invalid image");
  TransformParams full;
  for (const auto& p : e.spec.params) {
    const auto it = params.find(p.name);
    const double v = it == params.end() ? (p.sample_min + p.max) / 2.0 : it->second;
    if (!(v >= p.min && v <= p.max)) {
      throw Error(ErrorCode::OutOfRange, e.spec.name + "." + p.name + " = " + std::to_string(v) +
                                             " outside [" + std::to_string(p.min) + ", " +
                                             std::to_string(p.max) + "]");
    }
    full[p.name] = v;
  }
  for (const auto& [k, v] : params) {
    if (!full.count(k)) {
      throw Error(ErrorCode::InvalidConfig, e.spec.name + " has no parameter '" + k + "'");
    }
  }
  detail::Rng rng(detail::derive_seed(seed, "apply:" + e.spec.name));
  return e.fn(img, Ctx{full, rng});
}

RasterImage apply_transform(const RasterImage& img, const TransformSpec& spec,
                            std::uint64_t seed) {
  return apply_transform(img, spec.name, sample_params(spec, seed), seed);
}

AugmentPlan plan_augmentation(const std::vector<std::string>& image_ids, std::uint64_t seed,
                              bool allow_remainder) {
  const std::size_t n = image_ids.size();
  if (n % 3 != 0 && !allow_remainder) {
    throw Error(ErrorCode::NotDivisibleByThree,
                std::to_string(n) + " images cannot be split into three equal subsets");
  }
  {
    auto sorted = image_ids;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw Error(ErrorCode::DuplicateId, "duplicate image id in plan input");
    }
  }
  AugmentPlan plan;
  plan.seed = seed;
  plan.subset_sizes = {n / 3, n / 3, n - 2 * (n / 3)};

  std::vector<std::string> order = image_ids;
  detail::Rng shuffle(detail::derive_seed(seed, "partition"));
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[shuffle.index(i)]);
  }

  const auto& reg = registry();
  std::size_t pos = 0;
  for (int subset = 1; subset <= 3; ++subset) {
    for (std::size_t k = 0; k < plan.subset_sizes[subset - 1]; ++k, ++pos) {
      Assignment a;
      a.image_id = order[pos];
      a.subset = subset;
      a.seed = detail::derive_seed(seed, a.image_id);
      detail::Rng rng(a.seed);
      std::vector<std::size_t> pool(reg.size());
      std::iota(pool.begin(), pool.end(), 0);
      for (int t = 0; t < subset; ++t) {
        const std::size_t j = t + rng.index(pool.size() - t);
        std::swap(pool[t], pool[j]);
        PlanStep step;
        step.transform = reg[pool[t]].name;
        step.seed = detail::derive_seed(a.seed, static_cast<std::uint64_t>(t));
        step.params = sample_params(reg[pool[t]], step.seed);
        a.steps.push_back(std::move(step));
      }
      plan.assignments.push_back(std::move(a));
    }
  }
  return plan;
}

std::string plan_to_jsonl(const AugmentPlan& plan) {
  std::string out;
  for (const auto& a : plan.assignments) {
    nlohmann::ordered_json j;
    j["schema_version"] = AugmentPlan::kSchemaVersion;
    j["plan_seed"] = plan.seed;
    j["image_id"] = a.image_id;
    j["subset"] = a.subset;
    j["seed"] = a.seed;
    auto steps = nlohmann::ordered_json::array();
    for (const auto& s : a.steps) {
      nlohmann::ordered_json p(nlohmann::ordered_json::value_t::object);
      for (const auto& [k, v] : s.params) p[k] = v;
      steps.push_back({{"name", s.transform}, {"params", p}, {"seed", s.seed}});
    }
    j["transforms"] = steps;
    out += j.dump() + "\n";
  }
  return out;
}

AugmentPlan plan_from_jsonl(std::string_view text) {
  AugmentPlan plan;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const auto line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      if (j.at("schema_version").get<int>() != AugmentPlan::kSchemaVersion) {
        throw Error(ErrorCode::SchemaError, "unsupported plan schema version");
      }
      plan.seed = j.at("plan_seed").get<std::uint64_t>();
      Assignment a;
      a.image_id = j.at("image_id").get<std::string>();
      a.subset = j.at("subset").get<int>();
      a.seed = j.at("seed").get<std::uint64_t>();
      for (const auto& s : j.at("transforms")) {
        PlanStep step;
        step.transform = s.at("name").get<std::string>();
        find_transform(step.transform);
        step.seed = s.at("seed").get<std::uint64_t>();
        step.params = s.at("params").get<TransformParams>();
        a.steps.push_back(std::move(step));
      }
      if (a.subset < 1 || a.subset > 3 || static_cast<int>(a.steps.size()) != a.subset) {
        throw Error(ErrorCode::SchemaError, "subset does not match transform count");
      }
      ++plan.subset_sizes[a.subset - 1];
      plan.assignments.push_back(std::move(a));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::SchemaError, "plan line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return plan;
}

RasterImage apply_assignment(const RasterImage& img, const Assignment& a) {
  RasterImage out = img;
  for (const auto& s : a.steps) out = apply_transform(out, s.transform, s.params, s.seed);
  return out;
}

std::string augmented_id(std::string_view image_id) { return std::string(image_id) + "_aug"; }

AugmentRunResult run_augmentation(const AugmentPlan& plan, const std::filesystem::path& input_dir,
                                  const std::filesystem::path& output_dir, int workers) {
  std::filesystem::create_directories(output_dir);
  const std::size_t n = plan.assignments.size();
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        const auto& a = plan.assignments[i];
        const auto img = read_png(input_dir / (a.image_id + ".png"));
        write_png(apply_assignment(img, a), output_dir / (augmented_id(a.image_id) + ".png"));
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  const int threads = std::max(1, std::min<int>(workers, static_cast<int>(std::max<std::size_t>(n, 1))));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);

  AugmentRunResult result;
  result.manifest = output_dir / "manifest.jsonl";
  std::ofstream manifest(result.manifest, std::ios::binary);
  if (!manifest) throw Error(ErrorCode::IoError, "cannot write " + result.manifest.string());
  for (const auto& a : plan.assignments) {
    nlohmann::ordered_json j;
    j["id"] = augmented_id(a.image_id);
    j["image"] = augmented_id(a.image_id) + ".png";
    j["source_id"] = a.image_id;
    j["subset"] = a.subset;
    auto names = nlohmann::ordered_json::array();
    for (const auto& s : a.steps) names.push_back(s.transform);
    j["transforms"] = names;
    manifest << j.dump() << "\n";
    result.output_ids.push_back(augmented_id(a.image_id));
  }
  return result;
}

}  // namespace arabdoc
