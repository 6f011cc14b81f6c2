#include "overlay.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>
#include <vector>

namespace pbcli {
namespace {

namespace pb = puzzleboard;

void plot(pb::GrayImage& img, int x, int y, float value) {
  if (x >= 0 && y >= 0 && x < img.width() && y < img.height()) img(x, y) = value;
}

void line(pb::GrayImage& img, double u0, double v0, double u1, double v1, float value) {
  const int steps = static_cast<int>(std::ceil(std::max(std::abs(u1 - u0), std::abs(v1 - v0)))) + 1;
  for (int s = 0; s <= steps; ++s) {
    const double t = static_cast<double>(s) / steps;
    plot(img, static_cast<int>(std::lround(u0 + t * (u1 - u0))), static_cast<int>(std::lround(v0 + t * (v1 - v0))),
         value);
  }
}

void cross(pb::GrayImage& img, double u, double v, float value) {
  const int x = static_cast<int>(std::lround(u));
  const int y = static_cast<int>(std::lround(v));
  for (int d = -1; d <= 1; ++d) {
    plot(img, x + d, y, value);
    plot(img, x, y + d, value);
  }
}

}  // namespace

pb::GrayImage debug_overlay(const pb::GrayImage& img, const pb::DetectionResult& result) {
  pb::GrayImage out = img;
  for (float& p : out.data()) p = 0.3f + 0.4f * std::clamp(p, 0.0f, 1.0f);

  std::vector<float> marker(result.corners.size(), 1.0f);
  for (const auto& comp : result.components) {
    const float ink = comp.decoded() ? 1.0f : 0.0f;
    std::map<std::pair<int, int>, const pb::CornerRecord*> at;
    for (const auto& r : comp.corners) at[{r.local.x, r.local.y}] = &r;
    for (const auto& r : comp.corners) {
      for (const auto& [dx, dy] : {std::pair{1, 0}, std::pair{0, 1}}) {
        const auto it = at.find({r.local.x + dx, r.local.y + dy});
        if (it != at.end()) line(out, r.u, r.v, it->second->u, it->second->v, ink);
      }
      if (comp.decoded()) marker[static_cast<std::size_t>(r.index)] = 0.0f;
    }
  }
  for (std::size_t i = 0; i < result.corners.size(); ++i) cross(out, result.corners[i].u, result.corners[i].v, marker[i]);
  return out;
}

}  // namespace pbcli
