#include "puzzleboard/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <stdexcept>
#include <thread>

namespace puzzleboard {
namespace {

using Clock = std::chrono::steady_clock;

constexpr double kPlacements = 4.0 * kBoardSize * kBoardSize;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void validate(const PipelineConfig& c) {
  const auto& d = c.detector;
  if (!(d.k >= 0.0) || !(d.smooth_sigma >= 0.0) || d.nms_radius < 1 || !(d.min_response_ratio >= 0.0) ||
      !(d.ring_radius > 0.0) || !(d.ring_tolerance >= 0.0) || !(d.min_contrast_ratio >= 0.0))
    throw std::invalid_argument("PipelineConfig: invalid detector options");
  if (c.grid.k < 1 || !(c.grid.opposite_window_deg > 0.0) || !(c.grid.axis_window_deg > 0.0) ||
      !(c.grid.collinearity_tolerance >= 0.0))
    throw std::invalid_argument("PipelineConfig: invalid grid options");
  if (!(c.decode.ambiguity_margin >= 0.0) || c.decode.min_known_bits < 1)
    throw std::invalid_argument("PipelineConfig: invalid decode options");
  if (c.min_component_corners < 1 || c.min_decode_corners < 1 || !(c.bit_deadband >= 0.0) || c.threads < 0)
    throw std::invalid_argument("PipelineConfig: invalid pipeline options");
}

struct LatticeIndex {
  int cols = 0;
  int rows = 0;
  std::vector<int> at;  // corner index per lattice point, -1 if missing

  int operator()(int x, int y) const {
    if (x < 0 || y < 0 || x >= cols || y >= rows) return -1;
    return at[static_cast<std::size_t>(y) * static_cast<std::size_t>(cols) + static_cast<std::size_t>(x)];
  }
};

LatticeIndex index_lattice(const LatticeComponent& comp) {
  LatticeIndex idx;
  for (const auto& p : comp.coords) {
    idx.cols = std::max(idx.cols, p.x + 1);
    idx.rows = std::max(idx.rows, p.y + 1);
  }
  idx.at.assign(static_cast<std::size_t>(idx.cols) * static_cast<std::size_t>(idx.rows), -1);
  for (std::size_t n = 0; n < comp.coords.size(); ++n) {
    const auto& p = comp.coords[n];
    idx.at[static_cast<std::size_t>(p.y) * static_cast<std::size_t>(idx.cols) + static_cast<std::size_t>(p.x)] =
        comp.corners[n];
  }
  return idx;
}

Trit read_edge(const GrayImage& img, const Corner& a, const Corner& b, double deadband) {
  const double threshold = 0.5 * (img.sample(a.u, a.v) + img.sample(b.u, b.v));
  const double mid = img.sample(0.5 * (a.u + b.u), 0.5 * (a.v + b.v));
  const double d = mid - threshold;
  if (std::abs(d) < deadband * 0.5 * (a.contrast + b.contrast)) return Trit::unknown;
  return to_trit(d > 0.0);
}

ComponentResult process_component(const GrayImage& img, const std::vector<Corner>& corners,
                                  const LatticeComponent& comp, const BoardCode& board,
                                  const PipelineConfig& config) {
  ComponentResult out;
  out.id = comp.id;
  out.confirmed_edges = comp.confirmed_edges;
  out.rejected_edges = comp.rejected_edges;
  out.observed = sample_bits(img, corners, comp, config.bit_deadband);
  out.decode = decode_component(out.observed, board, static_cast<int>(comp.corners.size()), config.decode,
                                config.min_decode_corners, config.min_significance_bits);
  out.corners.reserve(comp.corners.size());
  for (std::size_t n = 0; n < comp.corners.size(); ++n) {
    const Corner& c = corners[static_cast<std::size_t>(comp.corners[n])];
    CornerRecord rec{comp.corners[n], c.u, c.v, comp.coords[n], std::nullopt};
    if (out.decode.ok()) rec.board = out.decode.board_corner(comp.coords[n]);
    out.corners.push_back(rec);
  }
  // Lattice order makes the output independent of detection order.
  std::sort(out.corners.begin(), out.corners.end(), [](const CornerRecord& a, const CornerRecord& b) {
    return a.local.y != b.local.y ? a.local.y < b.local.y : a.local.x < b.local.x;
  });
  return out;
}

bool same_corner(const Corner& a, const Corner& b) noexcept {
  return a.u == b.u && a.v == b.v && a.response == b.response && a.eigvec1 == b.eigvec1 &&
         a.eigvec2 == b.eigvec2 && a.contrast == b.contrast && a.neighbors == b.neighbors;
}

bool same_decode(const DecodeResult& a, const DecodeResult& b) noexcept {
  return a.status == b.status && a.origin == b.origin && a.orientation == b.orientation &&
         a.matched_bits == b.matched_bits && a.known_bits == b.known_bits && a.score == b.score &&
         a.runner_up == b.runner_up && a.h_status == b.h_status && a.v_status == b.v_status;
}

}  // namespace

int DetectionResult::decoded_components() const noexcept {
  return static_cast<int>(std::count_if(components.begin(), components.end(),
                                        [](const ComponentResult& c) { return c.decoded(); }));
}

bool same_detections(const DetectionResult& a, const DetectionResult& b) noexcept {
  if (a.width != b.width || a.height != b.height || a.corners.size() != b.corners.size() || a.components.size() != b.components.size()) return false;
  for (std::size_t i = 0; i < a.corners.size(); ++i)
    if (!same_corner(a.corners[i], b.corners[i])) return false;
  for (std::size_t i = 0; i < a.components.size(); ++i) {
    const auto& ca = a.components[i];
    const auto& cb = b.components[i];
    if (ca.id != cb.id || !(ca.observed == cb.observed) || !same_decode(ca.decode, cb.decode) ||
        ca.confirmed_edges != cb.confirmed_edges || ca.rejected_edges != cb.rejected_edges ||
        ca.corners.size() != cb.corners.size())
      return false;
    for (std::size_t k = 0; k < ca.corners.size(); ++k) {
      const auto& ra = ca.corners[k];
      const auto& rb = cb.corners[k];
      if (ra.index != rb.index || ra.u != rb.u || ra.v != rb.v || ra.local != rb.local || ra.board != rb.board)
        return false;
    }
  }
  return true;
}

ObservedCode sample_bits(const GrayImage& img, const std::vector<Corner>& corners,
                         const LatticeComponent& component, double deadband) {
  const LatticeIndex idx = index_lattice(component);
  ObservedCode obs(idx.cols, idx.rows);
  for (int y = 0; y < idx.rows; ++y) {
    for (int x = 0; x < idx.cols; ++x) {
      const int c = idx(x, y);
      if (c < 0) continue;
      const Corner& a = corners[static_cast<std::size_t>(c)];
      if (const int r = idx(x + 1, y); r >= 0) obs.h(x, y) = read_edge(img, a, corners[static_cast<std::size_t>(r)], deadband);
      if (const int d = idx(x, y + 1); d >= 0) obs.v(x, y) = read_edge(img, a, corners[static_cast<std::size_t>(d)], deadband);
    }
  }
  return obs;
}

double decode_significance(int known, int matched) {
  if (known <= 0) return -std::log2(kPlacements);
  matched = std::clamp(matched, 0, known);
  // Binomial(known, 1/2) upper tail, summed in log space from the far end.
  const double log_half = -known * std::log(2.0);
  double tail = 0.0;
  for (int k = known; k >= matched; --k)
    tail += std::exp(std::lgamma(known + 1.0) - std::lgamma(k + 1.0) - std::lgamma(known - k + 1.0) + log_half);
  return -std::log2(tail * kPlacements);
}

DecodeResult decode_component(const ObservedCode& obs, const BoardCode& board, int corner_count,
                              const DecodeOptions& options, int min_corners, double min_significance_bits) {
  if (corner_count < min_corners || obs.known_count() == 0) {
    DecodeResult r;
    classify_edges(obs, board, r);
    return r;
  }
  DecodeResult r = decode_position(obs, board, options);
  if (r.ok() && decode_significance(r.known_bits, r.matched_bits) < min_significance_bits)
    r.status = DecodeStatus::ambiguous;
  return r;
}

Pipeline::Pipeline(PipelineConfig config, const BoardCode& board) : config_(config), board_(&board) {
  validate(config_);
}

DetectionResult Pipeline::detect(const GrayImage& img) const {
  DetectionResult result;
  result.width = img.width();
  result.height = img.height();
  const auto t_total = Clock::now();
  if (img.width() < 5 || img.height() < 5) return result;

  auto t0 = Clock::now();
  const ResponseMap resp = hessian_response(img, config_.detector.k, config_.detector.smooth_sigma);
  result.timings.response_ms = ms_since(t0);

  t0 = Clock::now();
  result.corners = find_corners(resp, img, config_.detector);
  result.timings.corners_ms = ms_since(t0);

  t0 = Clock::now();
  const std::vector<LatticeComponent> comps = build_grid(result.corners, config_.grid, config_.min_component_corners);
  result.timings.grid_ms = ms_since(t0);

  t0 = Clock::now();
  result.components.resize(comps.size());
  const int hw = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  const int threads = std::min(config_.threads == 0 ? hw : config_.threads, static_cast<int>(comps.size()));
  auto work = [&](std::size_t i) {
    result.components[i] = process_component(img, result.corners, comps[i], *board_, config_);
  };
  if (threads <= 1) {
    for (std::size_t i = 0; i < comps.size(); ++i) work(i);
  } else {
    // Each worker takes every threads-th component; slots are preassigned so
    // the result does not depend on scheduling.
    std::vector<std::future<void>> jobs;
    for (int t = 0; t < threads; ++t) {
      jobs.push_back(std::async(std::launch::async, [&, t] {
        for (std::size_t i = static_cast<std::size_t>(t); i < comps.size(); i += static_cast<std::size_t>(threads))
          work(i);
      }));
    }
    for (auto& j : jobs) j.get();
  }
  result.timings.decode_ms = ms_since(t0);
  result.timings.total_ms = ms_since(t_total);
  return result;
}

DetectionResult detect(const GrayImage& img, const PipelineConfig& config) {
  return Pipeline(config).detect(img);
}

}  // namespace puzzleboard
