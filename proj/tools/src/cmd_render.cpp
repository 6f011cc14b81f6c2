#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <limits>
#include <vector>

#include "common.hpp"
#include "json.hpp"
#include "puzzleboard/board_code.hpp"
#include "puzzleboard/image_io.hpp"
#include "puzzleboard/render.hpp"

namespace pbcli {
namespace {

namespace pb = puzzleboard;
using nlohmann::json;

struct RenderCmdOptions {
  std::array<int, 2> origin{0, 0};
  std::array<int, 2> extent{22, 15};
  int orientation = 0;
  bool plain = false;
  double px_per_edge = 10.0;
  double rotation_deg = 0.0;
  double tilt_deg = 0.0;
  double tilt_axis_deg = 0.0;
  std::vector<double> homography;
  std::array<int, 2> size{0, 0};
  double blur = 0.5;
  double noise = 0.0;
  std::uint64_t seed = 0;
  int supersample = 4;
  std::string output;
  std::string truth;
};

// Camera view centred on the target; without an explicit size the image is
// the bounding box of the squares plus one piece of quiet zone.
pb::Homography camera_for(const RenderCmdOptions& o, int& width, int& height) {
  pb::CameraView view;
  view.px_per_edge = o.px_per_edge;
  view.rotation_deg = o.rotation_deg;
  view.tilt_deg = o.tilt_deg;
  view.tilt_axis_deg = o.tilt_axis_deg;
  view.distance = 4.0 * std::max(o.extent[0], o.extent[1]);
  view.cx = o.extent[0] / 2.0;
  view.cy = o.extent[1] / 2.0;
  const pb::Homography centred = pb::camera_homography(view);
  if (o.size[0] > 0) {
    width = o.size[0];
    height = o.size[1];
    return pb::Homography::scale_translate(1.0, (width - 1) / 2.0, (height - 1) / 2.0) * centred;
  }
  double lo_u = std::numeric_limits<double>::max(), lo_v = lo_u, hi_u = -lo_u, hi_v = -lo_u;
  for (const double x : {-2.0, o.extent[0] + 2.0}) {
    for (const double y : {-2.0, o.extent[1] + 2.0}) {
      const auto p = centred.apply(x, y);
      if (!p) throw Failure(kUsage, "target extends behind the camera; reduce the tilt");
      lo_u = std::min(lo_u, (*p)[0]);
      hi_u = std::max(hi_u, (*p)[0]);
      lo_v = std::min(lo_v, (*p)[1]);
      hi_v = std::max(hi_v, (*p)[1]);
    }
  }
  width = static_cast<int>(std::ceil(hi_u - lo_u)) + 1;
  height = static_cast<int>(std::ceil(hi_v - lo_v)) + 1;
  if (static_cast<double>(width) * height > 1e8) throw Failure(kUsage, "image would exceed 1e8 pixels");
  return pb::Homography::scale_translate(1.0, -lo_u, -lo_v) * centred;
}

int run(const RenderCmdOptions& o, const Shared& shared) {
  check_window(o.origin[0], o.origin[1], o.extent[0], o.extent[1]);
  if ((o.size[0] > 0) != (o.size[1] > 0)) throw Failure(kUsage, "--size needs two positive values");
  const auto geom = pb::board_geometry(pb::BoardCode::canonical(), {o.origin[0], o.origin[1]}, o.extent[0],
                                       o.extent[1], orientation_from_degrees(o.orientation), !o.plain);

  int width = 0, height = 0;
  pb::Homography h;
  if (!o.homography.empty()) {
    if (o.size[0] <= 0) throw Failure(kUsage, "--homography needs --size");
    std::array<double, 9> m{};
    std::copy(o.homography.begin(), o.homography.end(), m.begin());
    try {
      h = pb::Homography(m);
    } catch (const pb::DegenerateHomography& e) {
      throw Failure(kUsage, e.what());
    }
    width = o.size[0];
    height = o.size[1];
  } else {
    h = camera_for(o, width, height);
  }

  pb::RenderOptions ro;
  ro.width = width;
  ro.height = height;
  ro.supersample = o.supersample;
  ro.blur_sigma = o.blur;
  ro.noise_sigma = o.noise;
  ro.noise_seed = o.seed;
  const pb::GrayImage img = pb::render_view(geom, h, ro);
  try {
    pb::write_image(o.output, img);
  } catch (const pb::ImageIOError& e) {
    throw Failure(kUsage, e.what());
  }

  const auto truth = pb::ground_truth(geom, h, width, height);
  json corners = json::array();
  for (const auto& c : truth)
    corners.push_back({{"i", c.local.x}, {"j", c.local.y}, {"x", c.board.x}, {"y", c.board.y}, {"u", c.u}, {"v", c.v}});
  json side;
  side["image"] = std::filesystem::path(o.output).filename().string();
  side["imageSize"] = {width, height};
  side["origin"] = {o.origin[0], o.origin[1]};
  side["extent"] = {o.extent[0], o.extent[1]};
  side["squares"] = {o.extent[0] + 2, o.extent[1] + 2};
  side["orientation"] = o.orientation;
  side["codeDots"] = !o.plain;
  side["homography"] = h.matrix();
  side["blurSigma"] = o.blur;
  side["noiseSigma"] = o.noise;
  side["seed"] = o.seed;
  side["cornerCount"] = truth.size();
  side["corners"] = std::move(corners);
  const std::string truth_path = o.truth.empty() ? o.output + ".json" : o.truth;
  write_text(truth_path, side.dump(2) + "\n");
  log(shared, 1,
      "render: " + std::to_string(width) + "x" + std::to_string(height) + " px, " + std::to_string(truth.size()) +
          " corners in view");
  return kOk;
}

}  // namespace

Runner add_render(CLI::App& app, const Shared& shared) {
  auto opts = std::make_shared<RenderCmdOptions>();
  auto* cmd = app.add_subcommand("render", "Render a synthetic camera image with ground-truth sidecar");
  cmd->add_option("--extent", opts->extent, "Pieces along x and y");
  cmd->add_option("--origin", opts->origin, "Board corner at the top-left lattice corner");
  cmd->add_option("--orientation", opts->orientation, "Quarter-turn of the window: 0, 90, 180, 270")
      ->check(CLI::IsMember({0, 90, 180, 270}));
  cmd->add_flag("--plain", opts->plain, "Plain checkerboard without code dots");
  auto* px = cmd->add_option("--px-per-edge", opts->px_per_edge, "Pixels per piece edge at the target centre")
                 ->check(CLI::Range(0.5, 500.0));
  auto* rot = cmd->add_option("--rotation", opts->rotation_deg, "In-plane rotation in degrees");
  auto* tilt = cmd->add_option("--tilt", opts->tilt_deg, "Out-of-plane tilt in degrees")->check(CLI::Range(0.0, 80.0));
  auto* axis = cmd->add_option("--tilt-axis", opts->tilt_axis_deg, "In-plane direction of the tilt axis, degrees");
  cmd->add_option("--homography", opts->homography, "Row-major 3x3 map from target units to pixels")
      ->expected(9)
      ->excludes(px)
      ->excludes(rot)
      ->excludes(tilt)
      ->excludes(axis);
  cmd->add_option("--size", opts->size, "Image width and height (default: fit the target)");
  cmd->add_option("--blur", opts->blur, "Gaussian lens blur sigma, pixels")->check(CLI::NonNegativeNumber);
  cmd->add_option("--noise", opts->noise, "Gaussian noise sigma, intensity units")->check(CLI::NonNegativeNumber);
  cmd->add_option("--seed", opts->seed, "Noise seed");
  cmd->add_option("--supersample", opts->supersample, "Samples per pixel side")->check(CLI::Range(1, 16));
  cmd->add_option("-o,--output", opts->output, "Image file (.pgm or .png)")->required();
  cmd->add_option("--truth", opts->truth, "Ground-truth JSON (default: <output>.json)");
  return [opts, &shared] { return run(*opts, shared); };
}

}  // namespace pbcli
