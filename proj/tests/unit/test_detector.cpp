#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "puzzleboard/detector.hpp"
#include "puzzleboard/render.hpp"
#include "scenes.hpp"

namespace pb = puzzleboard;

namespace {

pb::GrayImage from_function(int w, int h, auto f) {
  pb::GrayImage img(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) img(x, y) = static_cast<float>(f(x, y));
  return img;
}

// Quarter turn: pixel (u, v) moves to (h - 1 - v, u).
pb::GrayImage rotate90(const pb::GrayImage& img) {
  pb::GrayImage out(img.height(), img.width());
  for (int y = 0; y < out.height(); ++y)
    for (int x = 0; x < out.width(); ++x) out(x, y) = img(y, img.height() - 1 - x);
  return out;
}

struct Recall {
  int truth = 0;
  int found = 0;
  double rate() const { return truth ? static_cast<double>(found) / truth : 0.0; }
};

// Ground-truth corners at least `margin` px inside the image, matched within 1.5 px.
Recall recall(const scene::Scene& s, const std::vector<pb::Corner>& corners, double margin = 3.0) {
  Recall r;
  for (const auto& t : s.truth) {
    if (t.u < margin || t.v < margin || t.u > s.image.width() - 1 - margin || t.v > s.image.height() - 1 - margin)
      continue;
    ++r.truth;
    if (scene::nearest(corners, t.u, t.v, 1.5) >= 0) ++r.found;
  }
  return r;
}

}  // namespace

TEST(HessianResponse, AnalyticSaddle) {
  const auto img = from_function(21, 21, [](int x, int y) { return 0.01 * (x - 10) * (y - 10); });
  const auto r = pb::hessian_response(img, 1.0, 0.7);
  const auto i = r.index(10, 10);
  EXPECT_NEAR(r.fxx[i], 0.0, 1e-6);
  EXPECT_NEAR(r.fyy[i], 0.0, 1e-6);
  EXPECT_NEAR(r.fxy[i], 0.01, 1e-6);
  EXPECT_NEAR(r.s[i] / 1e-4, 1.0, 1e-3);
}

TEST(HessianResponse, ConstantImageHasZeroResponse) {
  const pb::GrayImage img(16, 12, 0.5f);
  const auto r = pb::hessian_response(img);
  for (float s : r.s) ASSERT_EQ(s, 0.0f);
  EXPECT_TRUE(pb::find_corners(r, img).empty());
}

TEST(HessianResponse, BlobIsNegative) {
  const auto img = from_function(21, 21, [](int x, int y) { return -0.001 * ((x - 10) * (x - 10) + (y - 10) * (y - 10)) / 2.0; });
  const auto r = pb::hessian_response(img, 1.0, 0.7);
  const auto i = r.index(10, 10);
  EXPECT_NEAR(r.fxx[i], -0.001, 1e-6);
  EXPECT_NEAR(r.fyy[i], -0.001, 1e-6);
  EXPECT_NEAR(r.fxy[i], 0.0, 1e-7);
  EXPECT_NEAR(r.s[i] / 1e-6, -5.0, 1e-2);
}

TEST(HessianResponse, FormulaHoldsPerPixelAndBorderIsInvalid) {
  const auto s = scene::make({.pieces_x = 6, .pieces_y = 5, .px_per_edge = 7.0, .rotation_deg = 17.0});
  for (double k : {0.0, 0.5, 1.0}) {
    const auto r = pb::hessian_response(s.image, k, 0.9);
    EXPECT_EQ(r.width, s.image.width());
    EXPECT_EQ(r.height, s.image.height());
    for (int y = 0; y < r.height; ++y)
      for (int x = 0; x < r.width; ++x) {
        const auto i = r.index(x, y);
        const bool border = x < 2 || y < 2 || x >= r.width - 2 || y >= r.height - 2;
        ASSERT_EQ(r.valid[i] != 0, !border);
        const double tr = r.fxx[i] + r.fyy[i];
        ASSERT_NEAR(r.s[i], r.fxy[i] * r.fxy[i] - r.fxx[i] * r.fyy[i] - k * tr * tr, 1e-6);
      }
  }
}

TEST(HessianResponse, RejectsTinyImages) {
  EXPECT_THROW(pb::hessian_response(pb::GrayImage(4, 9)), std::invalid_argument);
  EXPECT_NO_THROW(pb::hessian_response(pb::GrayImage(5, 5)));
}

TEST(Centrosymmetric, SaddlePassesBlobAndEdgeFail) {
  // Ideal X junction at (15.5, 15.5): black where (x - c)(y - c) > 0.
  const auto saddle = from_function(32, 32, [](int x, int y) { return (x - 15.5) * (y - 15.5) > 0 ? 0.0 : 1.0; });
  const double diag = std::numbers::pi / 4.0;
  EXPECT_TRUE(pb::centrosymmetric_test(saddle, 15.5, 15.5, diag, 2.0, 0.3, 0.1).pass);
  EXPECT_TRUE(pb::centrosymmetric_test(saddle, 15.5, 15.5, -diag, 4.0, 0.3, 0.1).pass);

  const auto blob = from_function(32, 32, [](int x, int y) { return std::hypot(x - 15.5, y - 15.5) < 3.0 ? 0.0 : 1.0; });
  for (double theta : {0.0, 0.3, diag}) EXPECT_FALSE(pb::centrosymmetric_test(blob, 15.5, 15.5, theta, 2.0, 0.3, 0.0).pass);

  const auto edge = from_function(32, 32, [](int x, int) { return x < 16 ? 0.0 : 1.0; });
  for (double theta : {0.0, 0.3, diag}) EXPECT_FALSE(pb::centrosymmetric_test(edge, 15.5, 15.5, theta, 2.0, 0.3, 0.0).pass);

  // L junction: a single black quadrant.
  const auto ell = from_function(32, 32, [](int x, int y) { return x < 16 && y < 16 ? 0.0 : 1.0; });
  for (double theta : {diag, -diag}) EXPECT_FALSE(pb::centrosymmetric_test(ell, 15.5, 15.5, theta, 2.0, 0.3, 0.0).pass);

  // Absolute contrast floor.
  EXPECT_FALSE(pb::centrosymmetric_test(saddle, 15.5, 15.5, diag, 2.0, 0.3, 0.6).pass);
}

TEST(Centrosymmetric, RenderedCornersPassAtFourPixelsPerEdge) {
  int truth = 0, pass = 0;
  for (double rot : {0.0, 10.0, 22.5, 37.0}) {
    const auto s = scene::make({.px_per_edge = 4.0, .rotation_deg = rot});
    const auto resp = pb::hessian_response(s.image);
    pb::DetectorOptions o;
    o.ring_tolerance = 0.0;
    o.min_contrast_ratio = 0.0;
    const auto candidates = pb::find_corners(resp, s.image, o);
    for (const auto& t : s.truth) {
      const int i = scene::nearest(candidates, t.u, t.v, 1.5);
      if (i < 0) continue;
      ++truth;
      const auto& c = candidates[static_cast<std::size_t>(i)];
      const double theta = std::atan2(c.eigvec1[1], c.eigvec1[0]);
      if (pb::centrosymmetric_test(s.image, c.u, c.v, theta, 2.0, 0.3, 0.08 * resp.intensity_range).pass) ++pass;
    }
  }
  ASSERT_GT(truth, 1000);
  EXPECT_GE(static_cast<double>(pass) / truth, 0.95) << pass << "/" << truth;
}

TEST(FindCorners, PlainCheckerboardGivesExactlyTheInteriorCorners) {
  for (double rot : {0.0, 7.0, 33.0}) {
    const auto s = scene::make({.pieces_x = 12, .pieces_y = 9, .code_dots = false, .px_per_edge = 10.0,
                                .rotation_deg = rot});
    const auto corners = pb::detect_corners(s.image);
    ASSERT_EQ(s.truth.size(), 13u * 10u);
    EXPECT_EQ(corners.size(), s.truth.size()) << "rotation " << rot;
    double sum = 0.0;
    for (const auto& t : s.truth) {
      const int i = scene::nearest(corners, t.u, t.v, 1.0);
      ASSERT_GE(i, 0);
      sum += std::hypot(corners[static_cast<std::size_t>(i)].u - t.u, corners[static_cast<std::size_t>(i)].v - t.v);
    }
    EXPECT_LT(sum / static_cast<double>(s.truth.size()), 0.3);
  }
}

TEST(FindCorners, CornerInvariants) {
  const auto s = scene::make({.px_per_edge = 8.0, .rotation_deg = 12.0, .tilt_deg = 30.0, .tilt_axis_deg = 40.0});
  const auto corners = pb::detect_corners(s.image);
  ASSERT_FALSE(corners.empty());
  for (std::size_t i = 0; i < corners.size(); ++i) {
    const auto& c = corners[i];
    EXPECT_GT(c.response, 0.0);
    EXPECT_NEAR(std::hypot(c.eigvec1[0], c.eigvec1[1]), 1.0, 1e-9);
    EXPECT_NEAR(std::hypot(c.eigvec2[0], c.eigvec2[1]), 1.0, 1e-9);
    EXPECT_NEAR(c.eigvec1[0] * c.eigvec2[0] + c.eigvec1[1] * c.eigvec2[1], 0.0, 1e-6);
    EXPECT_GT(c.contrast, 0.0);
    EXPECT_EQ(c.neighbors, (std::array<int, 4>{-1, -1, -1, -1}));
    if (i > 0) {
      EXPECT_GE(corners[i - 1].response, c.response);
    }
  }
}

TEST(FindCorners, EigenvectorsBisectTheSectors) {
  const auto s = scene::make({.px_per_edge = 12.0, .rotation_deg = 20.0, .shift_u = 0.0, .shift_v = 0.0});
  const auto corners = pb::detect_corners(s.image);
  const double grid = 20.0 * std::numbers::pi / 180.0;
  for (const auto& c : corners) {
    // Angle to the grid axes modulo 90 degrees must be 45 degrees.
    double a = std::atan2(c.eigvec1[1], c.eigvec1[0]) - grid;
    a = std::fmod(a + 4.0 * std::numbers::pi, std::numbers::pi / 2.0);
    EXPECT_NEAR(a, std::numbers::pi / 4.0, 0.15);
  }
}

TEST(FindCorners, IsolatedBlobsGiveNoCorners) {
  // Discs on a jittered 20 px grid never touch; touching discs would form a real saddle.
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> jitter(-3.0, 3.0), rad(1.5, 5.0);
  std::vector<std::array<double, 3>> blobs;
  for (int gy = 0; gy < 8; ++gy)
    for (int gx = 0; gx < 8; ++gx) blobs.push_back({10.0 + 20.0 * gx + jitter(rng), 10.0 + 20.0 * gy + jitter(rng), rad(rng)});
  auto img = from_function(160, 160, [&](int x, int y) {
    double v = 1.0;
    for (const auto& b : blobs)
      if (std::hypot(x - b[0], y - b[1]) < b[2]) v = 0.0;
    return v;
  });
  img = pb::gaussian_blur(img, 0.5);
  EXPECT_TRUE(pb::detect_corners(img).empty());
  const auto smooth = from_function(64, 64, [](int x, int y) { return std::exp(-((x - 32.0) * (x - 32.0) + (y - 30.0) * (y - 30.0)) / 50.0); });
  EXPECT_TRUE(pb::detect_corners(smooth).empty());
}

TEST(FindCorners, RotationCovariance) {
  const auto s = scene::make({.pieces_x = 14, .pieces_y = 10, .px_per_edge = 7.0, .rotation_deg = 19.0});
  const auto a = pb::detect_corners(s.image);
  const auto b = pb::detect_corners(rotate90(s.image));
  ASSERT_GT(a.size(), 100u);
  EXPECT_EQ(a.size(), b.size());
  const double h = s.image.height();
  for (const auto& c : a) {
    const int i = scene::nearest(b, h - 1 - c.v, c.u, 0.2);
    EXPECT_GE(i, 0) << c.u << "," << c.v;
  }
}

TEST(FindCorners, AffineIntensityInvariance) {
  const auto s = scene::make({.pieces_x = 14, .pieces_y = 10, .px_per_edge = 6.0, .rotation_deg = 8.0, .noise_sigma = 0.03});
  const auto a = pb::detect_corners(s.image);
  for (auto [gain, bias] : {std::pair{0.6f, 0.2f}, std::pair{2.5f, -0.4f}, std::pair{0.1f, 0.85f}}) {
    pb::GrayImage img = s.image;
    for (auto& p : img.data()) p = gain * p + bias;
    const auto b = pb::detect_corners(img);
    ASSERT_EQ(a.size(), b.size()) << gain;
    for (const auto& c : a) EXPECT_GE(scene::nearest(b, c.u, c.v, 1e-3), 0);
  }
}

TEST(FindCorners, ResolutionFloor) {
  for (double rot : {0.0, 22.5}) {
    const auto at5 = scene::make({.px_per_edge = 5.0, .rotation_deg = rot});
    const auto r5 = recall(at5, pb::detect_corners(at5.image));
    EXPECT_GE(r5.rate(), 0.90) << "5 px/edge, rotation " << rot;
    const auto at3 = scene::make({.px_per_edge = 10.0 / 3.0, .rotation_deg = rot});
    const auto r3 = recall(at3, pb::detect_corners(at3.image));
    EXPECT_GE(r3.rate(), 0.80) << "3.33 px/edge, rotation " << rot;
  }
}

TEST(FindCorners, SubPixelAccuracy) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> angle(0.0, 360.0), shift(-0.5, 0.5), scale(10.0, 25.0);
  double sum = 0.0, worst = 0.0;
  int n = 0;
  for (int trial = 0; trial < 12; ++trial) {
    const auto s = scene::make({.pieces_x = 10, .pieces_y = 8, .px_per_edge = scale(rng), .rotation_deg = angle(rng),
                                .shift_u = shift(rng), .shift_v = shift(rng)});
    const auto corners = pb::detect_corners(s.image);
    for (const auto& t : s.truth) {
      const int i = scene::nearest(corners, t.u, t.v, 1.5);
      ASSERT_GE(i, 0);
      const double e = std::hypot(corners[static_cast<std::size_t>(i)].u - t.u, corners[static_cast<std::size_t>(i)].v - t.v);
      sum += e;
      worst = std::max(worst, e);
      ++n;
    }
  }
  EXPECT_LT(sum / n, 0.3);
  EXPECT_LT(worst, 1.0);
}

TEST(ResponseImage, ScaledToUnitRange) {
  const auto s = scene::make({.pieces_x = 5, .pieces_y = 4, .px_per_edge = 8.0});
  const auto img = pb::response_image(pb::hessian_response(s.image));
  float lo = 1.0f, hi = 0.0f;
  for (float p : img.data()) {
    lo = std::min(lo, p);
    hi = std::max(hi, p);
  }
  EXPECT_EQ(lo, 0.0f);
  EXPECT_FLOAT_EQ(hi, 1.0f);
}
