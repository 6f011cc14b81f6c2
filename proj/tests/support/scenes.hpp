#pragma once

// Synthetic camera views of a target, with their exact corner ground truth.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "puzzleboard/board_code.hpp"
#include "puzzleboard/render.hpp"

namespace scene {

struct Spec {
  int pieces_x = 22;
  int pieces_y = 15;
  puzzleboard::LatticePoint origin{123, 45};
  puzzleboard::Orientation orientation = puzzleboard::Orientation::deg0;
  bool code_dots = true;
  double px_per_edge = 10.0;
  double rotation_deg = 0.0;
  double tilt_deg = 0.0;
  double tilt_axis_deg = 0.0;
  /// Sub-pixel shift of the target centre.
  double shift_u = 0.37;
  double shift_v = 0.21;
  /// Optical blur of the synthetic lens.
  double blur_sigma = 0.5;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
  /// Image size; 0 picks the bounding box of the target plus a one-piece quiet zone.
  int width = 0;
  int height = 0;
};

struct Scene {
  puzzleboard::BoardGeometry geom;
  puzzleboard::Homography h;
  puzzleboard::GrayImage image;
  std::vector<puzzleboard::GroundTruthCorner> truth;
};

inline Scene make(const Spec& s) {
  auto geom = puzzleboard::board_geometry(puzzleboard::BoardCode::canonical(), s.origin, s.pieces_x, s.pieces_y,
                                          s.orientation, s.code_dots);
  int width = s.width, height = s.height;
  if (width <= 0 || height <= 0) {
    // Squares span [-1, pieces + 1]; one more piece of quiet zone per side.
    const double a = s.rotation_deg * std::numbers::pi / 180.0;
    const double ex = (s.pieces_x + 4) * s.px_per_edge, ey = (s.pieces_y + 4) * s.px_per_edge;
    width = static_cast<int>(std::ceil(std::abs(ex * std::cos(a)) + std::abs(ey * std::sin(a)))) + 2;
    height = static_cast<int>(std::ceil(std::abs(ex * std::sin(a)) + std::abs(ey * std::cos(a)))) + 2;
  }
  puzzleboard::CameraView view;
  view.px_per_edge = s.px_per_edge;
  view.rotation_deg = s.rotation_deg;
  view.tilt_deg = s.tilt_deg;
  view.tilt_axis_deg = s.tilt_axis_deg;
  view.distance = 4.0 * std::max(s.pieces_x, s.pieces_y);
  view.cx = s.pieces_x / 2.0;
  view.cy = s.pieces_y / 2.0;
  view.u0 = (width - 1) / 2.0 + s.shift_u;
  view.v0 = (height - 1) / 2.0 + s.shift_v;
  const auto h = puzzleboard::camera_homography(view);
  puzzleboard::RenderOptions ro;
  ro.width = width;
  ro.height = height;
  ro.blur_sigma = s.blur_sigma;
  ro.noise_sigma = s.noise_sigma;
  ro.noise_seed = s.seed;
  auto image = puzzleboard::render_view(geom, h, ro);
  auto truth = puzzleboard::ground_truth(geom, h, width, height);
  return Scene{std::move(geom), h, std::move(image), std::move(truth)};
}

/// The benchmark target: 71 x 51 pieces filling a width x height frame with
/// a one-piece margin, turned by 2 degrees so no grid line is pixel-aligned.
/// The left part is painted mid-grey so that only `visible` of the target
/// width shows.
inline Scene bench_frame(int width, int height, double visible = 1.0) {
  constexpr int kx = 71, ky = 51;
  auto geom = puzzleboard::board_geometry(puzzleboard::BoardCode::canonical(), {100, 200}, kx, ky);
  const double px = std::min(width / (kx + 4.0), height / (ky + 4.0));
  const auto h = puzzleboard::Homography::similarity(px, 2.0, kx / 2.0, ky / 2.0, (width - 1) / 2.0,
                                                     (height - 1) / 2.0);
  puzzleboard::RenderOptions ro;
  ro.width = width;
  ro.height = height;
  ro.supersample = 2;
  ro.blur_sigma = 0.5;
  auto image = puzzleboard::render_view(geom, h, ro);
  auto truth = puzzleboard::ground_truth(geom, h, width, height);
  if (visible < 1.0) {
    const double cut = (*h.apply(-1.0, 0.0))[0] + (1.0 - visible) * (kx + 2.0) * px;
    for (int y = 0; y < height; ++y)
      for (int x = 0; x < std::min(width, static_cast<int>(std::ceil(cut))); ++x) image(x, y) = 0.5f;
    std::erase_if(truth, [&](const puzzleboard::GroundTruthCorner& c) { return c.u < cut + px; });
  }
  return Scene{std::move(geom), h, std::move(image), std::move(truth)};
}

/// Nearest point among `candidates` (anything with .u/.v), or -1 if none is
/// within `radius`.
template <class Points>
int nearest(const Points& candidates, double u, double v, double radius) {
  int best = -1;
  double best_d = radius;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const double d = std::hypot(candidates[i].u - u, candidates[i].v - v);
    if (d <= best_d) {
      best_d = d;
      best = static_cast<int>(i);
    }
  }
  return best;
}

}  // namespace scene
