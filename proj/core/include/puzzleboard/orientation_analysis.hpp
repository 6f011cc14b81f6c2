#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "puzzleboard/board_code.hpp"

namespace puzzleboard {

/// All edge bits of a k x k piece window: h is (k+1) rows x k cols, v is
/// k rows x (k+1) cols, both row-major.
struct EdgeWindow {
  int k = 0;
  std::vector<std::uint8_t> h;
  std::vector<std::uint8_t> v;

  explicit EdgeWindow(int pieces = 0);

  std::uint8_t& h_at(int row, int col) { return h[static_cast<std::size_t>(row * k + col)]; }
  std::uint8_t& v_at(int row, int col) { return v[static_cast<std::size_t>(row * (k + 1) + col)]; }
  std::uint8_t h_at(int row, int col) const { return h[static_cast<std::size_t>(row * k + col)]; }
  std::uint8_t v_at(int row, int col) const { return v[static_cast<std::size_t>(row * (k + 1) + col)]; }

  /// Quarter turn, same sense as rotate(): corner (i, j) -> (k - j, i).
  EdgeWindow rotated90() const;
  EdgeWindow rotated(Orientation o) const;

  std::uint64_t h_code() const noexcept;
  std::uint64_t v_code() const noexcept;
  /// h bits in the low half, v bits above (k <= 4 fits in 64 bits).
  std::uint64_t code() const noexcept;

  static EdgeWindow from_board(const BoardCode& board, LatticePoint at, int pieces);
};

struct CollisionReport {
  int window_pieces = 0;
  std::int64_t total = 0;      ///< positions x 4 orientations
  std::int64_t colliding = 0;  ///< keys whose code occurs more than once
  double unique_ratio = 0.0;
};

/// Exhaustive: every cyclic position and orientation of the full board,
/// all 2k(k+1) edge bits per window, sorted and scanned for duplicates.
CollisionReport orientation_collisions(const BoardCode& board, int window_pieces);

/// Same quantity computed from the ring pair alone. The window set of the
/// board is the product of the 501 ring-A phases and the 501 ring-B
/// phases, so the count reduces to unions of rectangles in that product.
CollisionReport ring_pair_collisions(const DeBruijnRing& ring_a, const DeBruijnRing& ring_b,
                                     int window_pieces);

struct RingPair {
  DeBruijnRing a;
  DeBruijnRing b;
};

struct RingPairSearch {
  RingPair rings;
  CollisionReport collisions3;
  CollisionReport collisions4;
  int iterations = 0;
  int accepted_moves = 0;
};

class RingSearchError : public std::runtime_error {
 public:
  RingSearchError(const std::string& what, RingPairSearch best)
      : std::runtime_error(what), best_(std::move(best)) {}
  const RingPairSearch& best() const noexcept { return best_; }

 private:
  RingPairSearch best_;
};

/// Stochastic hill climbing over ring pairs, minimising the number of 4x4
/// orientation collisions first and 3x3 collisions second. Moves act on the
/// Eulerian trails that define the rings (segment transpositions at a
/// thrice-visited node, swapping the omitted loop), so every candidate stays
/// a valid ring. Deterministic per seed. Throws std::invalid_argument for
/// iterations < 1 and RingSearchError if no 4x4-collision-free pair is found.
RingPairSearch optimize_ring_pair(int iterations, std::uint64_t seed);

}  // namespace puzzleboard
