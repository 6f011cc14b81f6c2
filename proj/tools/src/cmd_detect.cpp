#include <cstdlib>
#include <optional>

#include "common.hpp"
#include "overlay.hpp"
#include "puzzleboard/detector.hpp"
#include "puzzleboard/image_io.hpp"
#include "puzzleboard/pipeline.hpp"
#include "puzzleboard/pipeline_json.hpp"

namespace pbcli {
namespace {

namespace pb = puzzleboard;

struct DetectOptions {
  std::string image;
  std::string config;
  std::optional<double> k;
  std::optional<double> smooth_sigma;
  std::optional<int> nms_radius;
  std::optional<double> min_response_ratio;
  std::optional<double> ambiguity_margin;
  std::optional<int> threads;
  std::string json = "-";
  std::string overlay;
  std::string response;
  bool print_config = false;
};

pb::PipelineConfig resolve_config(const DetectOptions& o, const Shared& shared) {
  pb::PipelineConfig c;
  std::string path = o.config;
  if (path.empty()) {
    if (const char* env = std::getenv("PUZZLEBOARD_CONFIG"); env != nullptr && *env != '\0') path = env;
  }
  if (!path.empty()) {
    log(shared, 1, "detect: config " + path);
    c = pb::load_config(path);
  }
  if (o.k) c.detector.k = *o.k;
  if (o.smooth_sigma) c.detector.smooth_sigma = *o.smooth_sigma;
  if (o.nms_radius) c.detector.nms_radius = *o.nms_radius;
  if (o.min_response_ratio) c.detector.min_response_ratio = *o.min_response_ratio;
  if (o.ambiguity_margin) c.decode.ambiguity_margin = *o.ambiguity_margin;
  if (o.threads) c.threads = *o.threads;
  return c;
}

void write_image_or_fail(const std::string& path, const pb::GrayImage& img) {
  try {
    pb::write_image(path, img);
  } catch (const pb::ImageIOError& e) {
    throw Failure(kUsage, e.what());
  }
}

int run(const DetectOptions& o, const Shared& shared) {
  pb::PipelineConfig config;
  try {
    config = resolve_config(o, shared);
    (void)pb::Pipeline(config);
  } catch (const std::invalid_argument& e) {
    throw Failure(kUsage, e.what());
  }
  if (o.print_config) {
    write_text("-", pb::config_to_json(config) + "\n");
    return kOk;
  }
  if (o.image.empty()) throw Failure(kUsage, "no image given");

  pb::GrayImage img;
  try {
    img = pb::read_image(o.image);
  } catch (const pb::ImageIOError& e) {
    throw Failure(kUsage, e.what());
  }
  const pb::Pipeline pipeline(config);
  const pb::DetectionResult result = pipeline.detect(img);
  write_text(o.json, pb::detection_to_json(result, config, o.image) + "\n");
  if (!o.overlay.empty()) write_image_or_fail(o.overlay, debug_overlay(img, result));
  if (!o.response.empty() && img.width() >= 5 && img.height() >= 5)
    write_image_or_fail(o.response, pb::response_image(pb::hessian_response(img, config.detector.k,
                                                                            config.detector.smooth_sigma)));

  const int decoded = result.decoded_components();
  log(shared, 1,
      "detect: " + std::to_string(result.corners.size()) + " corners, " + std::to_string(result.components.size()) +
          " components, " + std::to_string(decoded) + " decoded, " + std::to_string(result.timings.total_ms) + " ms");
  return decoded > 0 ? kOk : kNoResult;
}

}  // namespace

Runner add_detect(CLI::App& app, const Shared& shared) {
  auto opts = std::make_shared<DetectOptions>();
  auto* cmd = app.add_subcommand("detect", "Detect and decode targets in a PGM or PNG image");
  cmd->add_option("image", opts->image, "Input image (8-bit PGM P5 or PNG)");
  cmd->add_option("-c,--config", opts->config, "Pipeline config JSON (default: $PUZZLEBOARD_CONFIG)");
  cmd->add_option("--k", opts->k, "Trace penalty weight of the saddle response");
  cmd->add_option("--smooth-sigma", opts->smooth_sigma, "Gaussian pre-smoothing, pixels");
  cmd->add_option("--nms-radius", opts->nms_radius, "Non-maximum suppression radius, pixels");
  cmd->add_option("--min-response-ratio", opts->min_response_ratio, "Response threshold relative to the robust max");
  cmd->add_option("--ambiguity-margin", opts->ambiguity_margin, "Required lead of the best placement");
  cmd->add_option("--threads", opts->threads, "Decode threads, 0 = hardware concurrency");
  cmd->add_option("--json", opts->json, "Detection JSON output, '-' for stdout");
  cmd->add_option("--debug-overlay", opts->overlay, "Write the input with corners and lattice links drawn");
  cmd->add_option("--response-dump", opts->response, "Write the saddle response map as an image");
  cmd->add_flag("--print-config", opts->print_config, "Print the effective config and exit");
  return [opts, &shared] { return run(*opts, shared); };
}

}  // namespace pbcli
