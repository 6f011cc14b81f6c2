#include "puzzleboard/board_code.hpp"

#include <stdexcept>

namespace puzzleboard {

BoardCode::BoardCode(DeBruijnRing ring_a, DeBruijnRing ring_b)
    : ring_a_(std::move(ring_a)), ring_b_(std::move(ring_b)) {
  if (!validate_subperfect(ring_a_).ok)
    throw std::invalid_argument("compose_board: ring A is not sub-perfect");
  if (!validate_subperfect(ring_b_).ok)
    throw std::invalid_argument("compose_board: ring B is not sub-perfect");
  ring_b_rot_ = ring_b_.bits().rotated90();
  hbits_ = BitMatrix(kBoardSize, kBoardSize);
  vbits_ = BitMatrix(kBoardSize, kBoardSize);
  for (int y = 0; y < kBoardSize; ++y) {
    for (int x = 0; x < kBoardSize; ++x) {
      vbits_(y, x) = ring_a_.bits()(y % kRingRows, x % kRingCols);
      hbits_(y, x) = ring_b_rot_(y % kRingCols, x % kRingRows);
    }
  }
}

BoardCode compose_board(const DeBruijnRing& ring_a, const DeBruijnRing& ring_b) {
  return BoardCode(ring_a, ring_b);
}

std::uint32_t BoardCode::piece_code18(LatticePoint at) const noexcept {
  std::uint32_t code = 0;
  int bit = 0;
  for (int dy = 0; dy < 3; ++dy) {
    for (int dx = 0; dx < 3; ++dx) {
      const LatticePoint p = at + LatticePoint{dx, dy};
      code |= static_cast<std::uint32_t>(this->bit({EdgeKind::horizontal, p})) << bit++;
      code |= static_cast<std::uint32_t>(this->bit({EdgeKind::vertical, p})) << bit++;
    }
  }
  return code;
}

ObservedCode::ObservedCode(int cols, int rows) : cols_(cols), rows_(rows) {
  if (cols < 1 || rows < 1) throw std::invalid_argument("ObservedCode: empty lattice");
  const auto n = static_cast<std::size_t>(cols) * static_cast<std::size_t>(rows);
  h_.assign(n, Trit::unknown);
  v_.assign(n, Trit::unknown);
}

bool ObservedCode::has_edge(EdgeRef e) const noexcept {
  if (e.at.x < 0 || e.at.y < 0 || e.at.x >= cols_ || e.at.y >= rows_) return false;
  return e.kind == EdgeKind::horizontal ? e.at.x + 1 < cols_ : e.at.y + 1 < rows_;
}

std::vector<EdgeRef> ObservedCode::edges() const {
  std::vector<EdgeRef> out;
  out.reserve(static_cast<std::size_t>(2 * cols_ * rows_));
  for (int y = 0; y < rows_; ++y)
    for (int x = 0; x + 1 < cols_; ++x) out.push_back({EdgeKind::horizontal, {x, y}});
  for (int y = 0; y + 1 < rows_; ++y)
    for (int x = 0; x < cols_; ++x) out.push_back({EdgeKind::vertical, {x, y}});
  return out;
}

int ObservedCode::known_count() const noexcept {
  int n = 0;
  for (auto t : h_) n += t != Trit::unknown;
  for (auto t : v_) n += t != Trit::unknown;
  return n;
}

ObservedCode expected_bits(const BoardCode& board, LatticePoint origin, Orientation orientation,
                           int pieces_x, int pieces_y) {
  if (pieces_x < 1 || pieces_y < 1) throw std::invalid_argument("expected_bits: empty extent");
  ObservedCode out(pieces_x + 1, pieces_y + 1);
  for (const auto& e : out.edges()) out.get(e) = to_trit(board.bit(map_edge(e, orientation, origin)));
  return out;
}

}  // namespace puzzleboard
