#pragma once

#include <cstdint>
#include <vector>

#include "puzzleboard/bit_matrix.hpp"
#include "puzzleboard/lattice.hpp"
#include "puzzleboard/ring.hpp"

namespace puzzleboard {

/// The 501x501 PuzzleBoard position code.
///
/// Vertical edges carry ring A tiled cyclically (period 3 along y, 167 along
/// x); horizontal edges carry ring B rotated a quarter turn clockwise (period
/// 167 along y, 3 along x). Each edge type repeats with period 3 along its
/// own direction, which is what makes every 3x3-piece window carry 24
/// independent bits. Immutable after construction.
class BoardCode {
 public:
  /// Throws std::invalid_argument if either ring is not sub-perfect.
  BoardCode(DeBruijnRing ring_a, DeBruijnRing ring_b);

  /// The ring pair shipped with the library (core/data/ring_{a,b}.txt).
  static const BoardCode& canonical();

  const DeBruijnRing& ring_a() const noexcept { return ring_a_; }
  const DeBruijnRing& ring_b() const noexcept { return ring_b_; }
  /// Ring B after the quarter turn, 167x3.
  const BitMatrix& ring_b_rotated() const noexcept { return ring_b_rot_; }

  /// Full 501x501 arrays, indexed (y, x).
  const BitMatrix& hbits() const noexcept { return hbits_; }
  const BitMatrix& vbits() const noexcept { return vbits_; }

  /// Bit on an edge; coordinates are wrapped onto the board.
  std::uint8_t bit(EdgeRef edge) const noexcept {
    const LatticePoint p = wrap_to_board(edge.at);
    return edge.kind == EdgeKind::horizontal ? hbits_(p.y, p.x) : vbits_(p.y, p.x);
  }

  /// 18-bit code of the 3x3-piece window at a board position: top and left
  /// edge bit of every piece.
  std::uint32_t piece_code18(LatticePoint at) const noexcept;

 private:
  DeBruijnRing ring_a_;
  DeBruijnRing ring_b_;
  BitMatrix ring_b_rot_;
  BitMatrix hbits_;
  BitMatrix vbits_;
};

BoardCode compose_board(const DeBruijnRing& ring_a, const DeBruijnRing& ring_b);

/// Tri-state code bit as read from an image.
enum class Trit : std::uint8_t { zero = 0, one = 1, unknown = 2 };

constexpr Trit to_trit(bool bit) noexcept { return bit ? Trit::one : Trit::zero; }
constexpr Trit flip(Trit t) noexcept {
  return t == Trit::unknown ? t : (t == Trit::one ? Trit::zero : Trit::one);
}

/// Edge bits of a lattice component in its own coordinates. The lattice has
/// `cols` x `rows` corners; h(x, y) is the edge (x, y)-(x+1, y) and v(x, y)
/// the edge (x, y)-(x, y+1). Slots that leave the lattice stay unknown.
class ObservedCode {
 public:
  ObservedCode() = default;
  ObservedCode(int cols, int rows);

  int cols() const noexcept { return cols_; }
  int rows() const noexcept { return rows_; }

  Trit h(int x, int y) const noexcept { return h_[index(x, y)]; }
  Trit v(int x, int y) const noexcept { return v_[index(x, y)]; }
  Trit& h(int x, int y) noexcept { return h_[index(x, y)]; }
  Trit& v(int x, int y) noexcept { return v_[index(x, y)]; }

  Trit get(EdgeRef e) const noexcept {
    return e.kind == EdgeKind::horizontal ? h(e.at.x, e.at.y) : v(e.at.x, e.at.y);
  }
  Trit& get(EdgeRef e) noexcept {
    return e.kind == EdgeKind::horizontal ? h(e.at.x, e.at.y) : v(e.at.x, e.at.y);
  }

  /// True if the edge lies inside the corner lattice.
  bool has_edge(EdgeRef e) const noexcept;

  /// All in-lattice edges, horizontal first, row-major.
  std::vector<EdgeRef> edges() const;

  int known_count() const noexcept;

  friend bool operator==(const ObservedCode&, const ObservedCode&) = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(cols_) +
           static_cast<std::size_t>(x);
  }

  int cols_ = 0;
  int rows_ = 0;
  std::vector<Trit> h_;
  std::vector<Trit> v_;
};

/// Cyclic read-out of the board for a window of `pieces_x` x `pieces_y`
/// pieces, i.e. (pieces_x + 1) x (pieces_y + 1) corners, as seen in a local
/// frame related to the board by board = origin + rotate(local, orientation).
ObservedCode expected_bits(const BoardCode& board, LatticePoint origin, Orientation orientation,
                           int pieces_x, int pieces_y);

}  // namespace puzzleboard
