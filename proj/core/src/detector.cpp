#include "puzzleboard/detector.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace puzzleboard {
namespace {

constexpr int kBorder = 2;

struct Maximum {
  int x;
  int y;
  float s;
};

bool is_local_max(const ResponseMap& r, int x, int y, int radius) {
  const float s = r.s[r.index(x, y)];
  const int x0 = std::max(0, x - radius), x1 = std::min(r.width - 1, x + radius);
  const int y0 = std::max(0, y - radius), y1 = std::min(r.height - 1, y + radius);
  for (int yy = y0; yy <= y1; ++yy)
    for (int xx = x0; xx <= x1; ++xx) {
      if ((xx - x) * (xx - x) + (yy - y) * (yy - y) > radius * radius) continue;
      const float t = r.s[r.index(xx, yy)];
      // Plateaus keep their first pixel in raster order.
      const bool before = yy < y || (yy == y && xx < x);
      if (t > s || (before && t == s)) return false;
    }
  return true;
}

template <class T>
T bilinear(const std::vector<T>& a, int width, int height, double u, double v) {
  u = std::clamp(u, 0.0, width - 1.0);
  v = std::clamp(v, 0.0, height - 1.0);
  const int x0 = std::min(static_cast<int>(u), width - 2);
  const int y0 = std::min(static_cast<int>(v), height - 2);
  const double fx = u - x0, fy = v - y0;
  auto at = [&](int x, int y) { return static_cast<double>(a[static_cast<std::size_t>(y) * width + x]); };
  const double top = at(x0, y0) + fx * (at(x0 + 1, y0) - at(x0, y0));
  const double bottom = at(x0, y0 + 1) + fx * (at(x0 + 1, y0 + 1) - at(x0, y0 + 1));
  return static_cast<T>(top + fy * (bottom - top));
}

}  // namespace

ResponseMap hessian_response(const GrayImage& img, double k, double smooth_sigma) {
  if (img.width() < 5 || img.height() < 5)
    throw std::invalid_argument("hessian_response: image must be at least 5x5");
  const GrayImage f = gaussian_blur(img, smooth_sigma);
  ResponseMap r;
  r.width = img.width();
  r.height = img.height();
  r.k = k;
  const std::size_t n = f.data().size();
  r.s.assign(n, 0.0f);
  r.fxx.assign(n, 0.0f);
  r.fyy.assign(n, 0.0f);
  r.fxy.assign(n, 0.0f);
  r.valid.assign(n, 0);
  const auto [lo, hi] = std::minmax_element(f.data().begin(), f.data().end());
  r.intensity_range = *hi - *lo;

  const auto kf = static_cast<float>(k);
  for (int y = kBorder; y < r.height - kBorder; ++y) {
    for (int x = kBorder; x < r.width - kBorder; ++x) {
      const float c = f(x, y);
      const float fxx = f(x + 1, y) - 2.0f * c + f(x - 1, y);
      const float fyy = f(x, y + 1) - 2.0f * c + f(x, y - 1);
      const float fxy = 0.25f * (f(x + 1, y + 1) - f(x + 1, y - 1) - f(x - 1, y + 1) + f(x - 1, y - 1));
      const std::size_t i = r.index(x, y);
      r.fxx[i] = fxx;
      r.fyy[i] = fyy;
      r.fxy[i] = fxy;
      const float trace = fxx + fyy;
      r.s[i] = fxy * fxy - fxx * fyy - kf * trace * trace;
      r.valid[i] = 1;
    }
  }
  return r;
}

CentrosymmetricResult centrosymmetric_test(const GrayImage& img, double u, double v, double theta,
                                           double radius, double tolerance, double min_contrast) {
  std::array<double, 8> d{};
  double mean = 0.0;
  for (int i = 0; i < 8; ++i) {
    const double a = theta + i * std::numbers::pi / 4.0;
    d[static_cast<std::size_t>(i)] = img.sample(u + radius * std::cos(a), v + radius * std::sin(a));
    mean += d[static_cast<std::size_t>(i)];
  }
  mean /= 8.0;
  for (auto& x : d) x -= mean;

  CentrosymmetricResult result;
  result.contrast = (std::abs(d[0]) + std::abs(d[2]) + std::abs(d[4]) + std::abs(d[6])) / 4.0;
  if (!(result.contrast >= min_contrast) || result.contrast <= 0.0) return result;
  const double floor = tolerance * result.contrast;
  for (int i = 0; i < 8; i += 2)
    if (std::abs(d[static_cast<std::size_t>(i)]) < floor) return result;
  auto sign = [&](int i) { return d[static_cast<std::size_t>(i)] > 0.0; };
  if (sign(0) != sign(4) || sign(2) != sign(6) || sign(0) == sign(2)) return result;
  for (int i = 1; i < 4; i += 2) {
    const auto a = static_cast<std::size_t>(i), b = static_cast<std::size_t>(i + 4);
    if (std::abs(d[a]) >= result.contrast && std::abs(d[b]) >= result.contrast && sign(i) != sign(i + 4))
      return result;
  }
  result.pass = true;
  return result;
}

std::vector<Corner> find_corners(const ResponseMap& resp, const GrayImage& img, const DetectorOptions& options) {
  std::vector<Maximum> maxima;
  for (int y = kBorder; y < resp.height - kBorder; ++y)
    for (int x = kBorder; x < resp.width - kBorder; ++x) {
      const float s = resp.s[resp.index(x, y)];
      if (s > 0.0f && is_local_max(resp, x, y, options.nms_radius)) maxima.push_back({x, y, s});
    }
  if (maxima.empty()) return {};

  // Robust maximum: a high quantile of the positive maxima, so a few
  // outliers cannot raise the threshold.
  std::vector<float> values(maxima.size());
  std::transform(maxima.begin(), maxima.end(), values.begin(), [](const Maximum& m) { return m.s; });
  const auto q = static_cast<std::size_t>(0.98 * static_cast<double>(values.size() - 1));
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(q), values.end());
  const double threshold = options.min_response_ratio * values[q];
  const double min_contrast = options.min_contrast_ratio * resp.intensity_range;

  std::vector<Corner> corners;
  for (const auto& m : maxima) {
    if (m.s < threshold) continue;
    double sw = 0.0, su = 0.0, sv = 0.0;
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        const double w = std::max(0.0f, resp.s[resp.index(m.x + dx, m.y + dy)]);
        sw += w;
        su += w * dx;
        sv += w * dy;
      }
    Corner c;
    c.u = m.x + su / sw;
    c.v = m.y + sv / sw;
    c.response = m.s;
    const double fxx = bilinear(resp.fxx, resp.width, resp.height, c.u, c.v);
    const double fyy = bilinear(resp.fyy, resp.width, resp.height, c.u, c.v);
    const double fxy = bilinear(resp.fxy, resp.width, resp.height, c.u, c.v);
    const double theta = 0.5 * std::atan2(2.0 * fxy, fxx - fyy);
    c.eigvec1 = {std::cos(theta), std::sin(theta)};
    c.eigvec2 = {-std::sin(theta), std::cos(theta)};
    if (c.u < options.ring_radius || c.v < options.ring_radius || c.u > img.width() - 1 - options.ring_radius ||
        c.v > img.height() - 1 - options.ring_radius)
      continue;
    const auto test =
        centrosymmetric_test(img, c.u, c.v, theta, options.ring_radius, options.ring_tolerance, min_contrast);
    if (!test.pass) continue;
    c.contrast = test.contrast;
    corners.push_back(c);
  }
  std::stable_sort(corners.begin(), corners.end(),
                   [](const Corner& a, const Corner& b) { return a.response > b.response; });
  return corners;
}

std::vector<Corner> detect_corners(const GrayImage& img, const DetectorOptions& options) {
  return find_corners(hessian_response(img, options.k, options.smooth_sigma), img, options);
}

GrayImage response_image(const ResponseMap& resp) {
  GrayImage out(resp.width, resp.height);
  float peak = 0.0f;
  for (float s : resp.s) peak = std::max(peak, s);
  if (peak <= 0.0f) return out;
  for (std::size_t i = 0; i < resp.s.size(); ++i)
    out.data()[i] = std::sqrt(std::max(0.0f, resp.s[i]) / peak);
  return out;
}

}  // namespace puzzleboard
