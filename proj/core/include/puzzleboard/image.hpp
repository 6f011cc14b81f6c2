#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace puzzleboard {

/// Single-channel float raster, row-major, nominal intensities in [0, 1].
/// Pixel (x, y) has its centre at integer coordinates (x, y).
class GrayImage {
 public:
  GrayImage() = default;
  GrayImage(int width, int height, float fill = 0.0f)
      : width_(width), height_(height),
        data_(static_cast<std::size_t>(checked(width)) * static_cast<std::size_t>(checked(height)), fill) {}

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  bool empty() const noexcept { return data_.empty(); }

  float operator()(int x, int y) const noexcept { return data_[index(x, y)]; }
  float& operator()(int x, int y) noexcept { return data_[index(x, y)]; }

  /// Bilinear interpolation; coordinates are clamped to the pixel centres.
  float sample(double u, double v) const noexcept {
    u = std::clamp(u, 0.0, static_cast<double>(width_ - 1));
    v = std::clamp(v, 0.0, static_cast<double>(height_ - 1));
    const int x0 = std::min(static_cast<int>(u), width_ - 2 < 0 ? 0 : width_ - 2);
    const int y0 = std::min(static_cast<int>(v), height_ - 2 < 0 ? 0 : height_ - 2);
    const int x1 = std::min(x0 + 1, width_ - 1);
    const int y1 = std::min(y0 + 1, height_ - 1);
    const auto fx = static_cast<float>(u - x0);
    const auto fy = static_cast<float>(v - y0);
    const float top = (*this)(x0, y0) + fx * ((*this)(x1, y0) - (*this)(x0, y0));
    const float bottom = (*this)(x0, y1) + fx * ((*this)(x1, y1) - (*this)(x0, y1));
    return top + fy * (bottom - top);
  }

  bool contains(double u, double v) const noexcept {
    return u >= 0.0 && v >= 0.0 && u <= width_ - 1 && v <= height_ - 1;
  }

  std::vector<float>& data() noexcept { return data_; }
  const std::vector<float>& data() const noexcept { return data_; }

  friend bool operator==(const GrayImage&, const GrayImage&) = default;

 private:
  static int checked(int n) {
    if (n < 0) throw std::invalid_argument("GrayImage: negative dimension");
    return n;
  }
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<float> data_;
};

/// Separable Gaussian filter with clamped borders. sigma <= 0 copies.
GrayImage gaussian_blur(const GrayImage& img, double sigma);

}  // namespace puzzleboard
