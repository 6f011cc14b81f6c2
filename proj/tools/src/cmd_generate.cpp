#include <array>
#include <cmath>
#include <filesystem>

#include "common.hpp"
#include "puzzleboard/board_code.hpp"
#include "puzzleboard/image_io.hpp"
#include "puzzleboard/render.hpp"

namespace pbcli {
namespace {

struct GenerateOptions {
  std::array<int, 2> origin{0, 0};
  std::array<int, 2> extent{0, 0};
  int orientation = 0;
  double edge_mm = 10.0;
  int quiet = 1;
  std::string format;
  double px_per_edge = 10.0;
  bool plain = false;
  std::string output = "-";
};

int run(const GenerateOptions& o, const Shared& shared) {
  namespace pb = puzzleboard;
  check_window(o.origin[0], o.origin[1], o.extent[0], o.extent[1]);
  std::string format = o.format;
  if (format.empty()) format = std::filesystem::path(o.output).extension() == ".png" ? "png" : "svg";

  const auto geom = pb::board_geometry(pb::BoardCode::canonical(), {o.origin[0], o.origin[1]}, o.extent[0],
                                       o.extent[1], orientation_from_degrees(o.orientation), !o.plain);
  if (format == "svg") {
    write_text(o.output, pb::export_svg(geom, o.edge_mm, o.quiet));
  } else {
    if (o.output == "-") throw Failure(kUsage, "png output needs --output");
    // Squares span [-1, pieces + 1]; the quiet zone adds `quiet` pieces per side.
    const double margin = 1.0 + o.quiet;
    pb::RenderOptions ro;
    ro.width = static_cast<int>(std::lround((o.extent[0] + 2.0 * margin) * o.px_per_edge));
    ro.height = static_cast<int>(std::lround((o.extent[1] + 2.0 * margin) * o.px_per_edge));
    const double shift = margin * o.px_per_edge - 0.5;
    pb::write_png(o.output, pb::render_view(geom, pb::Homography::scale_translate(o.px_per_edge, shift, shift), ro));
  }
  log(shared, 1,
      "generate: " + std::to_string(o.extent[0]) + "x" + std::to_string(o.extent[1]) + " pieces at (" +
          std::to_string(o.origin[0]) + ", " + std::to_string(o.origin[1]) + "), " +
          std::to_string(geom.corner_count()) + " coded corners");
  return kOk;
}

}  // namespace

Runner add_generate(CLI::App& app, const Shared& shared) {
  auto opts = std::make_shared<GenerateOptions>();
  auto* cmd = app.add_subcommand("generate", "Write a printable target (SVG or PNG)");
  cmd->add_option("--extent", opts->extent, "Pieces along x and y (1..501)")->required();
  cmd->add_option("--origin", opts->origin, "Board corner at the top-left lattice corner");
  cmd->add_option("--orientation", opts->orientation, "Quarter-turn of the window: 0, 90, 180, 270")
      ->check(CLI::IsMember({0, 90, 180, 270}));
  cmd->add_option("--edge-mm", opts->edge_mm, "Printed piece edge length in millimetres (SVG)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--quiet-zone", opts->quiet, "White border in pieces")->check(CLI::Range(1, 100));
  cmd->add_option("--format", opts->format, "svg or png (default: from the output extension)")
      ->check(CLI::IsMember({"svg", "png"}));
  cmd->add_option("--px-per-edge", opts->px_per_edge, "Raster resolution for PNG output")
      ->check(CLI::Range(1.0, 200.0));
  cmd->add_flag("--plain", opts->plain, "Plain checkerboard without code dots");
  cmd->add_option("-o,--output", opts->output, "Output file, '-' for stdout (SVG only)");
  return [opts, &shared] { return run(*opts, shared); };
}

}  // namespace pbcli
