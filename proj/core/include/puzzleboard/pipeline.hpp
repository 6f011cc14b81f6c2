#pragma once

#include <optional>
#include <vector>

#include "puzzleboard/board_code.hpp"
#include "puzzleboard/decoder.hpp"
#include "puzzleboard/detector.hpp"
#include "puzzleboard/grid.hpp"
#include "puzzleboard/image.hpp"

namespace puzzleboard {

struct PipelineConfig {
  DetectorOptions detector;
  GridOptions grid;
  DecodeOptions decode;
  /// Smaller components (isolated corners) are not reported.
  int min_component_corners = 2;
  /// Smaller components are reported with status insufficient_code.
  int min_decode_corners = 4;
  /// An edge bit is left unknown when |midpoint - threshold| is below this
  /// fraction of the endpoints' mean ring contrast.
  double bit_deadband = 0.25;
  /// A decode must beat chance by this many bits (see decode_significance).
  double min_significance_bits = 4.0;
  /// Worker threads for per-component sampling and decoding; 0 picks the
  /// hardware concurrency.
  int threads = 1;
};

struct StageTimings {
  double response_ms = 0.0;
  double corners_ms = 0.0;
  double grid_ms = 0.0;
  double decode_ms = 0.0;
  double total_ms = 0.0;
};

struct CornerRecord {
  int index = -1;   ///< into DetectionResult::corners
  double u = 0.0;
  double v = 0.0;
  LatticePoint local;                 ///< (i, j) within the component
  std::optional<LatticePoint> board;  ///< global (x, y), only when decoded
};

struct ComponentResult {
  int id = 0;
  DecodeResult decode;
  ObservedCode observed;
  std::vector<CornerRecord> corners;
  int confirmed_edges = 0;
  int rejected_edges = 0;

  bool decoded() const noexcept { return decode.ok(); }
};

struct DetectionResult {
  int width = 0;  ///< of the input image
  int height = 0;
  std::vector<Corner> corners;
  std::vector<ComponentResult> components;
  StageTimings timings;

  int decoded_components() const noexcept;
  friend bool same_detections(const DetectionResult& a, const DetectionResult& b) noexcept;
};

/// Reads one bit per lattice edge whose endpoints were both detected: the
/// threshold is the mean of the bilinear samples at the two corners and the
/// bit is 1 (white dot) when the sample at the midpoint of the two image
/// positions is brighter. Other edges stay unknown, as do edges inside the
/// dead band (see PipelineConfig::bit_deadband).
ObservedCode sample_bits(const GrayImage& img, const std::vector<Corner>& corners,
                         const LatticeComponent& component, double deadband = 0.0);

/// -log2 of the expected number of board placements (4 x 501 x 501) that
/// random bits would match at least `matched` of `known` folded cells.
/// Positive when the match is unlikely to be chance.
double decode_significance(int known, int matched);

/// Decodes one component. Components below `min_corners` corners are
/// insufficient_code without looking at the bits; a decode whose
/// significance is below `min_significance_bits` is downgraded to ambiguous.
DecodeResult decode_component(const ObservedCode& obs, const BoardCode& board, int corner_count,
                              const DecodeOptions& options = {}, int min_corners = 4,
                              double min_significance_bits = 0.0);

/// Corners, grid, sampling and decoding. Immutable once constructed and
/// safe to share between threads working on different images. `board`
/// must outlive the pipeline.
class Pipeline {
 public:
  explicit Pipeline(PipelineConfig config = {}, const BoardCode& board = BoardCode::canonical());

  const PipelineConfig& config() const noexcept { return config_; }
  const BoardCode& board() const noexcept { return *board_; }

  /// Deterministic for a fixed config. Images too small to hold a corner
  /// give an empty result.
  DetectionResult detect(const GrayImage& img) const;

 private:
  PipelineConfig config_;
  const BoardCode* board_;
};

DetectionResult detect(const GrayImage& img, const PipelineConfig& config = {});

}  // namespace puzzleboard
