#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace puzzleboard {

/// Side length of the full board in pieces (and corners, it is cyclic).
inline constexpr int kBoardSize = 501;

/// Number-theoretic modulo: result always in [0, m).
constexpr int positive_mod(int a, int m) noexcept {
  const int r = a % m;
  return r < 0 ? r + m : r;
}

struct LatticePoint {
  int x = 0;
  int y = 0;

  friend constexpr bool operator==(LatticePoint, LatticePoint) = default;
  constexpr LatticePoint operator+(LatticePoint o) const noexcept { return {x + o.x, y + o.y}; }
  constexpr LatticePoint operator-(LatticePoint o) const noexcept { return {x - o.x, y - o.y}; }
};

/// Rotation of an observed lattice relative to the canonical board, in
/// quarter turns. board_corner = origin + rotate(local_corner, orientation).
enum class Orientation : std::uint8_t { deg0 = 0, deg90 = 1, deg180 = 2, deg270 = 3 };

inline constexpr std::array<Orientation, 4> kAllOrientations = {
    Orientation::deg0, Orientation::deg90, Orientation::deg180, Orientation::deg270};

constexpr int quarter_turns(Orientation o) noexcept { return static_cast<int>(o); }
constexpr Orientation orientation_from_turns(int turns) noexcept {
  return static_cast<Orientation>(positive_mod(turns, 4));
}
constexpr Orientation compose(Orientation a, Orientation b) noexcept {
  return orientation_from_turns(quarter_turns(a) + quarter_turns(b));
}
constexpr Orientation inverse(Orientation o) noexcept {
  return orientation_from_turns(-quarter_turns(o));
}
constexpr int degrees(Orientation o) noexcept { return 90 * quarter_turns(o); }

std::string_view to_string(Orientation o) noexcept;

/// One quarter turn maps (x, y) to (-y, x).
constexpr LatticePoint rotate(LatticePoint p, Orientation o) noexcept {
  switch (o) {
    case Orientation::deg0: return p;
    case Orientation::deg90: return {-p.y, p.x};
    case Orientation::deg180: return {-p.x, -p.y};
    case Orientation::deg270: return {p.y, -p.x};
  }
  return p;
}

constexpr LatticePoint wrap_to_board(LatticePoint p) noexcept {
  return {positive_mod(p.x, kBoardSize), positive_mod(p.y, kBoardSize)};
}

/// A horizontal edge at (x, y) joins corners (x, y) and (x + 1, y); a
/// vertical edge at (x, y) joins corners (x, y) and (x, y + 1).
enum class EdgeKind : std::uint8_t { horizontal, vertical };

struct EdgeRef {
  EdgeKind kind = EdgeKind::horizontal;
  LatticePoint at;

  friend constexpr bool operator==(const EdgeRef&, const EdgeRef&) = default;
};

/// Maps a local lattice edge into board coordinates (not wrapped).
constexpr EdgeRef map_edge(EdgeRef local, Orientation o, LatticePoint origin) noexcept {
  const LatticePoint start = origin + rotate(local.at, o);
  const LatticePoint step =
      rotate(local.kind == EdgeKind::horizontal ? LatticePoint{1, 0} : LatticePoint{0, 1}, o);
  if (step.x == 1) return {EdgeKind::horizontal, start};
  if (step.x == -1) return {EdgeKind::horizontal, start - LatticePoint{1, 0}};
  if (step.y == 1) return {EdgeKind::vertical, start};
  return {EdgeKind::vertical, start - LatticePoint{0, 1}};
}

}  // namespace puzzleboard
