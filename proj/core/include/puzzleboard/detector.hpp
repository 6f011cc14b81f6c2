#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "puzzleboard/image.hpp"

namespace puzzleboard {

struct DetectorOptions {
  double k = 1.0;                   ///< weight of the (f_xx + f_yy)^2 penalty
  double smooth_sigma = 1.0;        ///< Gaussian pre-smoothing, pixels
  int nms_radius = 2;               ///< suppression disc radius, pixels
  double min_response_ratio = 0.05; ///< relative to the robust maximum of s
  double ring_radius = 2.0;         ///< centrosymmetric test radius, pixels
  /// Sector-centre samples must deviate from the ring mean by at least this
  /// fraction of the ring contrast.
  double ring_tolerance = 0.3;
  /// Ring contrast must reach this fraction of the image's intensity range.
  double min_contrast_ratio = 0.08;
};

/// Hessian entries of the smoothed image and the saddle response
/// s = f_xy^2 - f_xx f_yy - k (f_xx + f_yy)^2, per pixel. Pixels closer than
/// two pixels to the border are invalid and hold s = 0.
struct ResponseMap {
  int width = 0;
  int height = 0;
  double k = 1.0;
  std::vector<float> s;
  std::vector<float> fxx;
  std::vector<float> fyy;
  std::vector<float> fxy;
  std::vector<std::uint8_t> valid;
  float intensity_range = 0.0f;  ///< max - min of the smoothed image

  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x);
  }
};

/// Throws std::invalid_argument for images smaller than 5x5.
ResponseMap hessian_response(const GrayImage& img, double k = 1.0, double smooth_sigma = 1.0);

/// Neighbour slots filled by the grid stage.
enum Direction : int { kPlusX = 0, kMinusX = 1, kPlusY = 2, kMinusY = 3 };

struct Corner {
  double u = 0.0;  ///< sub-pixel position
  double v = 0.0;
  double response = 0.0;  ///< s at the integer maximum
  /// Unit Hessian eigenvectors (bisectors of the black and white sectors).
  std::array<double, 2> eigvec1{1.0, 0.0};
  std::array<double, 2> eigvec2{0.0, 1.0};
  double contrast = 0.0;  ///< ring contrast from the centrosymmetric test
  std::array<int, 4> neighbors{-1, -1, -1, -1};
};

struct CentrosymmetricResult {
  bool pass = false;
  double contrast = 0.0;
};

/// Samples 8 points on a ring around (u, v), starting at angle `theta`
/// (a Hessian eigenvector) in 45 degree steps, and removes their mean.
/// Passes iff the four sector-centre samples are significant, point-reflected
/// pairs share their sign and quarter-turned pairs have opposite signs; the
/// edge samples in between must not contradict the point symmetry when both
/// are significant. `min_contrast` is absolute.
CentrosymmetricResult centrosymmetric_test(const GrayImage& img, double u, double v, double theta,
                                           double radius, double tolerance, double min_contrast);

/// Positive local maxima of s above the relative threshold, filtered by the
/// centrosymmetric test, refined to the centroid of the non-negative s
/// values in the 3x3 neighbourhood. Sorted by descending response.
std::vector<Corner> find_corners(const ResponseMap& resp, const GrayImage& img, const DetectorOptions& options = {});

/// Convenience: hessian_response + find_corners.
std::vector<Corner> detect_corners(const GrayImage& img, const DetectorOptions& options = {});

/// Positive part of s scaled to [0, 1] by its maximum (square-root
/// compressed), for debug dumps.
GrayImage response_image(const ResponseMap& resp);

}  // namespace puzzleboard
