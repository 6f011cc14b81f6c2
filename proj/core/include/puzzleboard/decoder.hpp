#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "puzzleboard/board_code.hpp"

namespace puzzleboard {

/// Observations folded onto one code period under a hypothesised
/// orientation (translation left free). `vertical` has the shape of ring A
/// (3 x 167, index r * 167 + c); `horizontal` the shape of the rotated ring
/// B (167 x 3, index r * 3 + c).
struct FoldedCode {
  std::vector<Trit> vertical;
  std::vector<Trit> horizontal;
  int known_vertical = 0;
  int known_horizontal = 0;

  int known() const noexcept { return known_vertical + known_horizontal; }
};

/// Majority vote over all observations congruent modulo the tiling period.
/// Ties and cells without observations stay unknown.
FoldedCode fold_and_vote(const ObservedCode& obs, Orientation orientation = Orientation::deg0);

/// Recovers the board position from per-pattern cyclic shifts:
/// x = x_a + 167 * ((x_a - x_b) mod 3), y = y_b + 167 * ((y_b - y_a) mod 3).
/// x_a, y_b in [0, 167); x_b, y_a in [0, 3).
LatticePoint combine_shifts(int x_a, int y_a, int x_b, int y_b) noexcept;

enum class DecodeStatus : std::uint8_t { decoded, ambiguous, insufficient_code };
enum class EdgeStatus : std::uint8_t { correct, incorrect, unread };

std::string_view to_string(DecodeStatus s) noexcept;

struct DecodeOptions {
  /// Best normalised score must beat the runner-up by this much.
  double ambiguity_margin = 0.03;
  /// Minimum number of known folded cells (at orientation 0).
  int min_known_bits = 10;
};

struct DecodeResult {
  DecodeStatus status = DecodeStatus::insufficient_code;
  LatticePoint origin;
  Orientation orientation = Orientation::deg0;
  int matched_bits = 0;   ///< folded cells agreeing with the code
  int known_bits = 0;     ///< folded cells with a majority
  double score = 0.0;     ///< matched_bits / known_bits
  double runner_up = 0.0; ///< best normalised score of any other placement
  double margin = 0.0;    ///< score - runner_up

  /// Per observed edge, laid out like ObservedCode (h/v, index y * cols + x).
  int cols = 0;
  int rows = 0;
  std::vector<EdgeStatus> h_status;
  std::vector<EdgeStatus> v_status;
  int edges_read = 0;
  int edges_correct = 0;
  int edges_incorrect = 0;

  bool ok() const noexcept { return status == DecodeStatus::decoded; }
  EdgeStatus status_of(EdgeRef e) const noexcept {
    const auto i = static_cast<std::size_t>(e.at.y) * static_cast<std::size_t>(cols) +
                   static_cast<std::size_t>(e.at.x);
    return e.kind == EdgeKind::horizontal ? h_status[i] : v_status[i];
  }
  /// Board corner of a local corner under the decoded placement, wrapped.
  LatticePoint board_corner(LatticePoint local) const noexcept {
    return wrap_to_board(origin + rotate(local, orientation));
  }
};

/// Correlates the folded observation against both rings for all four
/// orientations and picks the best placement.
DecodeResult decode_position(const ObservedCode& obs, const BoardCode& board,
                             const DecodeOptions& options = {});

/// Compares every known observed edge against the code at a placement.
void classify_edges(const ObservedCode& obs, const BoardCode& board, DecodeResult& result);

/// Error-correction structure of a ring pair over full folded patterns.
/// Index d of each table is the relative quarter-turn between the true and
/// the hypothesised orientation; d = 0 excludes the correct shift.
/// Correlations are agree-minus-disagree counts over 501 cells, and
/// distances are 501 - correlation (twice the bit Hamming distance).
struct HammingProfile {
  std::array<int, 4> max_correlation_a{};  ///< vertical pattern vs ring A
  std::array<int, 4> max_correlation_b{};  ///< horizontal pattern vs rotated ring B
  std::array<int, 4> distance_a{};
  std::array<int, 4> distance_b{};
  std::array<int, 4> pair_distance{};
  int min_pair_distance = 0;
  /// Smallest bit Hamming distance between the correct 1002-bit folded
  /// codeword and the codeword of any other placement or orientation.
  int min_wrong_placement_hamming = 0;
  /// Flipped folded bits that can never change the decode.
  int guaranteed_correctable_bits = 0;
};

HammingProfile hamming_profile(const DeBruijnRing& ring_a, const DeBruijnRing& ring_b);

}  // namespace puzzleboard
