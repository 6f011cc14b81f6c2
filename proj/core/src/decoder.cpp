#include "puzzleboard/decoder.hpp"

#include <algorithm>
#include <limits>

namespace puzzleboard {
namespace {

constexpr int kPeriodLong = kRingCols;   // 167
constexpr int kPeriodShort = kRingRows;  // 3
constexpr int kCells = kRingWindows;     // 501

struct Cell {
  int r;
  int c;
  std::uint8_t bit;
};

struct Votes {
  std::vector<std::uint16_t> ones;
  std::vector<std::uint16_t> zeros;
};

// Top two correlation counts over all cyclic shifts of one pattern.
struct ShiftScan {
  int best = -1;
  int second = -1;
  int shift_r = 0;
  int shift_c = 0;
};

/// `pattern` is rows x cols. Cells use the pattern's own (r, c) indexing.
ShiftScan scan_shifts(const std::vector<Cell>& cells, const BitMatrix& pattern,
                      bool skip_identity = false) {
  const int rows = pattern.rows();
  const int cols = pattern.cols();
  // Doubled copy so the inner loop needs no modulo.
  std::vector<std::uint8_t> doubled(static_cast<std::size_t>(4 * rows * cols));
  for (int r = 0; r < 2 * rows; ++r)
    for (int c = 0; c < 2 * cols; ++c)
      doubled[static_cast<std::size_t>(r * 2 * cols + c)] = pattern(r % rows, c % cols);

  ShiftScan scan;
  for (int sr = 0; sr < rows; ++sr) {
    for (int sc = 0; sc < cols; ++sc) {
      if (skip_identity && sr == 0 && sc == 0) continue;
      int count = 0;
      for (const auto& cell : cells)
        count += doubled[static_cast<std::size_t>((cell.r + sr) * 2 * cols + cell.c + sc)] == cell.bit;
      if (count > scan.best) {
        scan.second = scan.best;
        scan.best = count;
        scan.shift_r = sr;
        scan.shift_c = sc;
      } else if (count > scan.second) {
        scan.second = count;
      }
    }
  }
  return scan;
}

std::vector<Cell> known_cells(const std::vector<Trit>& folded, int cols) {
  std::vector<Cell> cells;
  for (std::size_t i = 0; i < folded.size(); ++i) {
    if (folded[i] == Trit::unknown) continue;
    cells.push_back({static_cast<int>(i) / cols, static_cast<int>(i) % cols,
                     static_cast<std::uint8_t>(folded[i] == Trit::one)});
  }
  return cells;
}

Trit majority(std::uint16_t ones, std::uint16_t zeros) {
  if (ones > zeros) return Trit::one;
  if (zeros > ones) return Trit::zero;
  return Trit::unknown;
}

}  // namespace

std::string_view to_string(DecodeStatus s) noexcept {
  switch (s) {
    case DecodeStatus::decoded: return "decoded";
    case DecodeStatus::ambiguous: return "ambiguous";
    case DecodeStatus::insufficient_code: return "insufficient_code";
  }
  return "?";
}

FoldedCode fold_and_vote(const ObservedCode& obs, Orientation orientation) {
  Votes vert{std::vector<std::uint16_t>(kCells, 0), std::vector<std::uint16_t>(kCells, 0)};
  Votes horiz = vert;
  for (const auto& e : obs.edges()) {
    const Trit t = obs.get(e);
    if (t == Trit::unknown) continue;
    const EdgeRef b = map_edge(e, orientation, {0, 0});
    std::size_t idx;
    Votes* votes;
    if (b.kind == EdgeKind::vertical) {
      idx = static_cast<std::size_t>(positive_mod(b.at.y, kPeriodShort) * kPeriodLong +
                                     positive_mod(b.at.x, kPeriodLong));
      votes = &vert;
    } else {
      idx = static_cast<std::size_t>(positive_mod(b.at.y, kPeriodLong) * kPeriodShort +
                                     positive_mod(b.at.x, kPeriodShort));
      votes = &horiz;
    }
    if (t == Trit::one) ++votes->ones[idx];
    else ++votes->zeros[idx];
  }

  FoldedCode out;
  out.vertical.resize(kCells);
  out.horizontal.resize(kCells);
  for (std::size_t i = 0; i < static_cast<std::size_t>(kCells); ++i) {
    out.vertical[i] = majority(vert.ones[i], vert.zeros[i]);
    out.horizontal[i] = majority(horiz.ones[i], horiz.zeros[i]);
    out.known_vertical += out.vertical[i] != Trit::unknown;
    out.known_horizontal += out.horizontal[i] != Trit::unknown;
  }
  return out;
}

LatticePoint combine_shifts(int x_a, int y_a, int x_b, int y_b) noexcept {
  return {x_a + kPeriodLong * positive_mod(x_a - x_b, kPeriodShort),
          y_b + kPeriodLong * positive_mod(y_b - y_a, kPeriodShort)};
}

void classify_edges(const ObservedCode& obs, const BoardCode& board, DecodeResult& result) {
  result.cols = obs.cols();
  result.rows = obs.rows();
  const auto n = static_cast<std::size_t>(obs.cols()) * static_cast<std::size_t>(obs.rows());
  result.h_status.assign(n, EdgeStatus::unread);
  result.v_status.assign(n, EdgeStatus::unread);
  result.edges_read = result.edges_correct = result.edges_incorrect = 0;
  for (const auto& e : obs.edges()) {
    const Trit t = obs.get(e);
    if (t == Trit::unknown) continue;
    const bool expected = board.bit(map_edge(e, result.orientation, result.origin)) != 0;
    const bool good = (t == Trit::one) == expected;
    const auto i = static_cast<std::size_t>(e.at.y) * static_cast<std::size_t>(obs.cols()) +
                   static_cast<std::size_t>(e.at.x);
    (e.kind == EdgeKind::horizontal ? result.h_status : result.v_status)[i] =
        good ? EdgeStatus::correct : EdgeStatus::incorrect;
    ++result.edges_read;
    ++(good ? result.edges_correct : result.edges_incorrect);
  }
}

DecodeResult decode_position(const ObservedCode& obs, const BoardCode& board,
                             const DecodeOptions& options) {
  DecodeResult result;
  result.cols = obs.cols();
  result.rows = obs.rows();

  bool any_h = false;
  bool any_v = false;
  for (const auto& e : obs.edges()) {
    if (obs.get(e) == Trit::unknown) continue;
    (e.kind == EdgeKind::horizontal ? any_h : any_v) = true;
  }
  if (!any_h || !any_v) {
    classify_edges(obs, board, result);
    return result;
  }

  struct Candidate {
    double score = -1.0;
    double runner_up = -1.0;
    int matched = 0;
    int known = 0;
    LatticePoint origin;
  };
  std::array<Candidate, 4> per_orientation{};

  for (const Orientation o : kAllOrientations) {
    const FoldedCode folded = fold_and_vote(obs, o);
    if (o == Orientation::deg0 && folded.known() < options.min_known_bits) {
      classify_edges(obs, board, result);
      return result;
    }
    if (folded.known() == 0) continue;
    const ShiftScan va = scan_shifts(known_cells(folded.vertical, kPeriodLong), board.ring_a().bits());
    const ShiftScan hb = scan_shifts(known_cells(folded.horizontal, kPeriodShort), board.ring_b_rotated());

    auto& cand = per_orientation[static_cast<std::size_t>(quarter_turns(o))];
    const double known = folded.known();
    cand.known = folded.known();
    cand.matched = va.best + hb.best;
    cand.score = cand.matched / known;
    cand.runner_up = std::max(va.best + hb.second, va.second + hb.best) / known;
    // Vertical scan: rows are y mod 3, cols x mod 167. Horizontal scan:
    // rows y mod 167, cols x mod 3.
    cand.origin = combine_shifts(va.shift_c, va.shift_r, hb.shift_c, hb.shift_r);
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < per_orientation.size(); ++i)
    if (per_orientation[i].score > per_orientation[best].score) best = i;
  double runner_up = per_orientation[best].runner_up;
  for (std::size_t i = 0; i < per_orientation.size(); ++i)
    if (i != best) runner_up = std::max(runner_up, per_orientation[i].score);

  const auto& win = per_orientation[best];
  result.origin = win.origin;
  result.orientation = orientation_from_turns(static_cast<int>(best));
  result.matched_bits = win.matched;
  result.known_bits = win.known;
  result.score = win.score;
  result.runner_up = std::max(runner_up, 0.0);
  result.margin = result.score - result.runner_up;
  result.status = result.margin >= options.ambiguity_margin ? DecodeStatus::decoded
                                                            : DecodeStatus::ambiguous;
  classify_edges(obs, board, result);
  return result;
}

HammingProfile hamming_profile(const DeBruijnRing& ring_a, const DeBruijnRing& ring_b) {
  const BoardCode board(ring_a, ring_b);
  HammingProfile profile;
  std::array<int, 4> ham_a{};
  std::array<int, 4> ham_b{};

  for (const Orientation d : kAllOrientations) {
    // Fold one full period of the board, seen rotated by d, with every cell
    // observed exactly once.
    std::vector<Trit> vert(kCells, Trit::unknown);
    std::vector<Trit> horiz(kCells, Trit::unknown);
    for (int y = 0; y < kBoardSize; ++y) {
      for (int x = 0; x < kBoardSize; ++x) {
        for (const EdgeKind kind : {EdgeKind::horizontal, EdgeKind::vertical}) {
          const EdgeRef src{kind, {x, y}};
          const EdgeRef dst = map_edge(src, d, {0, 0});
          const Trit t = to_trit(board.bit(src));
          if (dst.kind == EdgeKind::vertical) {
            vert[static_cast<std::size_t>(positive_mod(dst.at.y, kPeriodShort) * kPeriodLong +
                                          positive_mod(dst.at.x, kPeriodLong))] = t;
          } else {
            horiz[static_cast<std::size_t>(positive_mod(dst.at.y, kPeriodLong) * kPeriodShort +
                                           positive_mod(dst.at.x, kPeriodShort))] = t;
          }
        }
      }
    }
    const bool identity = d == Orientation::deg0;
    const ShiftScan va = scan_shifts(known_cells(vert, kPeriodLong), ring_a.bits(), identity);
    const ShiftScan hb = scan_shifts(known_cells(horiz, kPeriodShort), board.ring_b_rotated(), identity);
    const auto i = static_cast<std::size_t>(quarter_turns(d));
    profile.max_correlation_a[i] = 2 * va.best - kCells;
    profile.max_correlation_b[i] = 2 * hb.best - kCells;
    profile.distance_a[i] = kCells - profile.max_correlation_a[i];
    profile.distance_b[i] = kCells - profile.max_correlation_b[i];
    profile.pair_distance[i] = profile.distance_a[i] + profile.distance_b[i];
    ham_a[i] = kCells - va.best;
    ham_b[i] = kCells - hb.best;
  }

  profile.min_pair_distance =
      *std::min_element(profile.pair_distance.begin(), profile.pair_distance.end());
  // At the right orientation one pattern may sit at its correct shift while
  // the other is wrong; at a wrong orientation both shifts are free.
  int dmin = std::min(ham_a[0], ham_b[0]);
  for (std::size_t i = 1; i < 4; ++i) dmin = std::min(dmin, ham_a[i] + ham_b[i]);
  profile.min_wrong_placement_hamming = dmin;
  profile.guaranteed_correctable_bits = (dmin - 1) / 2;
  return profile;
}

}  // namespace puzzleboard
