#pragma once

// Brute-force reference implementations used to cross-check the library.
// They deliberately avoid the library's folding, scanning and rotation
// helpers and work directly on the board arrays.

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "puzzleboard/board_code.hpp"

namespace oracle {

using puzzleboard::BitMatrix;
using puzzleboard::BoardCode;
using puzzleboard::kBoardSize;

inline int wrap(int a, int m) { return ((a % m) + m) % m; }

/// All 501 cyclic 3x3 window values of a 3x167 matrix, read cell by cell.
inline std::vector<int> ring_windows(const BitMatrix& m) {
  std::vector<int> out;
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c) {
      int code = 0;
      for (int dr = 0; dr < 3; ++dr)
        for (int dc = 0; dc < 3; ++dc)
          code = code * 2 + m(wrap(r + dr, m.rows()), wrap(c + dc, m.cols()));
      out.push_back(code);
    }
  return out;
}

/// Edge arrays of the whole board picture turned by a quarter turn.
/// Corner (x, y) moves to (-y, x): the h edge at (x, y) becomes the v edge at
/// (-y, x) and the v edge at (x, y) becomes the h edge at (-y - 1, x).
struct EdgeArrays {
  std::vector<std::uint8_t> h;
  std::vector<std::uint8_t> v;
  std::uint8_t H(int x, int y) const { return h[idx(x, y)]; }
  std::uint8_t V(int x, int y) const { return v[idx(x, y)]; }
  static std::size_t idx(int x, int y) {
    return static_cast<std::size_t>(wrap(y, kBoardSize) * kBoardSize + wrap(x, kBoardSize));
  }
};

inline EdgeArrays board_arrays(const BoardCode& b) {
  EdgeArrays e;
  e.h.resize(kBoardSize * kBoardSize);
  e.v.resize(kBoardSize * kBoardSize);
  for (int y = 0; y < kBoardSize; ++y)
    for (int x = 0; x < kBoardSize; ++x) {
      e.h[EdgeArrays::idx(x, y)] = b.hbits()(y, x);
      e.v[EdgeArrays::idx(x, y)] = b.vbits()(y, x);
    }
  return e;
}

inline EdgeArrays turn(const EdgeArrays& in) {
  EdgeArrays out = in;
  for (int y = 0; y < kBoardSize; ++y)
    for (int x = 0; x < kBoardSize; ++x) {
      out.v[EdgeArrays::idx(-y, x)] = in.H(x, y);
      out.h[EdgeArrays::idx(-y - 1, x)] = in.V(x, y);
    }
  return out;
}

/// Code of all 2k(k+1) edges of the k x k piece window at (x, y).
inline std::uint64_t window_code(const EdgeArrays& e, int x, int y, int k) {
  std::uint64_t code = 0;
  for (int j = 0; j <= k; ++j)
    for (int i = 0; i < k; ++i) code = code << 1 | e.H(x + i, y + j);
  for (int j = 0; j < k; ++j)
    for (int i = 0; i <= k; ++i) code = code << 1 | e.V(x + i, y + j);
  return code;
}

/// Number of (position, turn) keys whose full window code is shared with
/// another key, over the board and its three rotated copies.
inline std::int64_t rotational_collisions(const BoardCode& b, int k) {
  std::array<EdgeArrays, 4> turned;
  turned[0] = board_arrays(b);
  for (int t = 1; t < 4; ++t) turned[t] = turn(turned[t - 1]);
  std::unordered_map<std::uint64_t, int> count;
  count.reserve(4u * kBoardSize * kBoardSize);
  for (const auto& e : turned)
    for (int y = 0; y < kBoardSize; ++y)
      for (int x = 0; x < kBoardSize; ++x) ++count[window_code(e, x, y, k)];
  std::int64_t colliding = 0;
  for (const auto& [code, n] : count)
    if (n > 1) colliding += n;
  return colliding;
}

/// Local corner (i, j) of an observation sits on board corner
/// origin + R^turns (i, j), R (x, y) = (-y, x).
inline std::array<int, 2> rot(int x, int y, int turns) {
  for (int t = 0; t < turns; ++t) {
    const int nx = -y;
    y = x;
    x = nx;
  }
  return {x, y};
}

struct Placement {
  int x = 0;
  int y = 0;
  int turns = 0;
  double score = 0.0;
  bool tied = false;  ///< another placement reaches the same score
};

/// Agreement of one turn hypothesis with every placement. The observation is
/// reduced to majority votes per board edge class (the class of a board
/// edge is its position modulo the tiling period of its kind). Placement
/// (X, Y) agrees on hscore[(Y mod 167) * 3 + X mod 3] + vscore[(Y mod 3) *
/// 167 + X mod 167] classes.
struct TurnScores {
  int known = 0;
  std::vector<int> hscore;
  std::vector<int> vscore;
  int at(int X, int Y) const { return hscore[(Y % 167) * 3 + X % 3] + vscore[(Y % 3) * 167 + X % 167]; }
};

inline TurnScores turn_scores(const puzzleboard::ObservedCode& obs, const BoardCode& b, int t) {
  using puzzleboard::Trit;
  const int P = 167;
  std::vector<int> hv(501, 0), vv(501, 0);
  for (int y = 0; y < obs.rows(); ++y)
    for (int x = 0; x < obs.cols(); ++x)
      for (int kind = 0; kind < 2; ++kind) {
        const bool horiz = kind == 0;
        if (horiz ? x + 1 >= obs.cols() : y + 1 >= obs.rows()) continue;
        const Trit tv = horiz ? obs.h(x, y) : obs.v(x, y);
        if (tv == Trit::unknown) continue;
        const auto a = rot(x, y, t);
        const auto bpt = rot(horiz ? x + 1 : x, horiz ? y : y + 1, t);
        const int bx = std::min(a[0], bpt[0]);
        const int by = std::min(a[1], bpt[1]);
        const int d = tv == Trit::one ? 1 : -1;
        if (a[1] == bpt[1]) hv[wrap(by, P) * 3 + wrap(bx, 3)] += d;
        else vv[wrap(by, 3) * P + wrap(bx, P)] += d;
      }
  std::vector<std::array<int, 3>> hcells, vcells;  // (row, col, bit)
  for (int c = 0; c < 501; ++c) {
    if (hv[c] != 0) hcells.push_back({c / 3, c % 3, hv[c] > 0});
    if (vv[c] != 0) vcells.push_back({c / P, c % P, vv[c] > 0});
  }
  TurnScores ts;
  ts.known = static_cast<int>(hcells.size() + vcells.size());
  ts.hscore.assign(501, 0);
  ts.vscore.assign(501, 0);
  for (int ym = 0; ym < P; ++ym)
    for (int xm = 0; xm < 3; ++xm)
      for (const auto& c : hcells)
        ts.hscore[ym * 3 + xm] += b.hbits()(wrap(c[0] + ym, P), wrap(c[1] + xm, 3)) == c[2];
  for (int ym = 0; ym < 3; ++ym)
    for (int xm = 0; xm < P; ++xm)
      for (const auto& c : vcells)
        ts.vscore[ym * P + xm] += b.vbits()(wrap(c[0] + ym, 3), wrap(c[1] + xm, P)) == c[2];
  return ts;
}

/// Exhaustive search over all 501 x 501 x 4 placements, each scored by its
/// agreeing classes divided by the number of classes with a majority.
inline Placement best_placement(const puzzleboard::ObservedCode& obs, const BoardCode& b) {
  Placement best{0, 0, 0, -1.0, false};
  for (int t = 0; t < 4; ++t) {
    const TurnScores ts = turn_scores(obs, b, t);
    if (ts.known == 0) continue;
    for (int Y = 0; Y < kBoardSize; ++Y)
      for (int X = 0; X < kBoardSize; ++X) {
        const double score = static_cast<double>(ts.at(X, Y)) / ts.known;
        if (score > best.score + 1e-12) best = {X, Y, t, score, false};
        else if (score > best.score - 1e-12) best.tied = true;
      }
  }
  return best;
}

/// Observation of 167 x 167 corners in which every edge class of the board
/// at turn 0 is seen exactly once, carrying the board's own bits at origin.
inline puzzleboard::ObservedCode full_period(const BoardCode& b, int ox = 0, int oy = 0) {
  puzzleboard::ObservedCode obs(167, 167);
  for (int y = 0; y < 167; ++y)
    for (int x = 0; x < 3; ++x) obs.h(x, y) = puzzleboard::to_trit(b.hbits()(wrap(oy + y, 501), wrap(ox + x, 501)));
  for (int y = 0; y < 3; ++y)
    for (int x = 0; x < 167; ++x) obs.v(x, y) = puzzleboard::to_trit(b.vbits()(wrap(oy + y, 501), wrap(ox + x, 501)));
  return obs;
}

}  // namespace oracle
