#include "puzzleboard/orientation_analysis.hpp"

#include <algorithm>
#include <bitset>
#include <random>
#include <unordered_set>

namespace puzzleboard {
namespace {

using Phases = std::bitset<kRingWindows>;

std::uint64_t pack(const std::vector<std::uint8_t>& bits) {
  std::uint64_t code = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) code |= static_cast<std::uint64_t>(bits[i] & 1) << i;
  return code;
}

// v-part of a window at ring-A phase (px in [0,167), py in [0,3)).
EdgeWindow a_part(const BitMatrix& a, int px, int py, int k) {
  EdgeWindow w(k);
  for (int j = 0; j < k; ++j)
    for (int i = 0; i <= k; ++i) w.v_at(j, i) = a.cyclic(py + j, px + i);
  return w;
}

// h-part of a window at ring-B phase (qx in [0,3), qy in [0,167)).
EdgeWindow b_part(const BitMatrix& b_rot, int qx, int qy, int k) {
  EdgeWindow w(k);
  for (int j = 0; j <= k; ++j)
    for (int i = 0; i < k; ++i) w.h_at(j, i) = b_rot.cyclic(qy + j, qx + i);
  return w;
}

std::int64_t count_colliding_positions(const BitMatrix& a, const BitMatrix& b_rot, int k) {
  std::vector<EdgeWindow> as;
  std::vector<EdgeWindow> bs;
  as.reserve(kRingWindows);
  bs.reserve(kRingWindows);
  std::unordered_set<std::uint64_t> va;
  std::unordered_set<std::uint64_t> hb;
  for (int py = 0; py < kRingRows; ++py)
    for (int px = 0; px < kRingCols; ++px) {
      as.push_back(a_part(a, px, py, k));
      va.insert(as.back().v_code());
    }
  for (int qy = 0; qy < kRingCols; ++qy)
    for (int qx = 0; qx < kRingRows; ++qx) {
      bs.push_back(b_part(b_rot, qx, qy, k));
      hb.insert(bs.back().h_code());
    }

  // (a, b) rotated by d is again a board window iff the rotated parts are
  // present: for d = 2 the parts keep their kind, for d = 1, 3 they swap.
  std::array<std::vector<bool>, 4> x;
  std::array<Phases, 4> y;
  for (int d = 1; d < 4; ++d) {
    const auto o = orientation_from_turns(d);
    auto& xd = x[static_cast<std::size_t>(d)];
    auto& yd = y[static_cast<std::size_t>(d)];
    xd.assign(as.size(), false);
    for (std::size_t i = 0; i < as.size(); ++i) {
      const EdgeWindow r = as[i].rotated(o);
      xd[i] = d == 2 ? va.contains(r.v_code()) : hb.contains(r.h_code());
    }
    for (std::size_t i = 0; i < bs.size(); ++i) {
      const EdgeWindow r = bs[i].rotated(o);
      yd[i] = d == 2 ? hb.contains(r.h_code()) : va.contains(r.v_code());
    }
  }

  std::int64_t colliding = 0;
  for (std::size_t i = 0; i < as.size(); ++i) {
    Phases hit;
    for (std::size_t d = 1; d < 4; ++d)
      if (x[d][i]) hit |= y[d];
    colliding += static_cast<std::int64_t>(hit.count());
  }
  return colliding;
}

CollisionReport make_report(int k, std::int64_t colliding_keys) {
  CollisionReport r;
  r.window_pieces = k;
  r.total = 4LL * kBoardSize * kBoardSize;
  r.colliding = colliding_keys;
  r.unique_ratio = 1.0 - static_cast<double>(colliding_keys) / static_cast<double>(r.total);
  return r;
}

}  // namespace

EdgeWindow::EdgeWindow(int pieces)
    : k(pieces),
      h(static_cast<std::size_t>((pieces + 1) * pieces), 0),
      v(static_cast<std::size_t>(pieces * (pieces + 1)), 0) {}

EdgeWindow EdgeWindow::rotated90() const {
  EdgeWindow out(k);
  for (int j = 0; j <= k; ++j)
    for (int i = 0; i < k; ++i) out.v_at(i, k - j) = h_at(j, i);
  for (int j = 0; j < k; ++j)
    for (int i = 0; i <= k; ++i) out.h_at(i, k - j - 1) = v_at(j, i);
  return out;
}

EdgeWindow EdgeWindow::rotated(Orientation o) const {
  EdgeWindow out = *this;
  for (int t = 0; t < quarter_turns(o); ++t) out = out.rotated90();
  return out;
}

std::uint64_t EdgeWindow::h_code() const noexcept { return pack(h); }
std::uint64_t EdgeWindow::v_code() const noexcept { return pack(v); }
std::uint64_t EdgeWindow::code() const noexcept { return h_code() | (v_code() << h.size()); }

EdgeWindow EdgeWindow::from_board(const BoardCode& board, LatticePoint at, int pieces) {
  EdgeWindow w(pieces);
  for (int j = 0; j <= pieces; ++j)
    for (int i = 0; i < pieces; ++i)
      w.h_at(j, i) = board.bit({EdgeKind::horizontal, at + LatticePoint{i, j}});
  for (int j = 0; j < pieces; ++j)
    for (int i = 0; i <= pieces; ++i)
      w.v_at(j, i) = board.bit({EdgeKind::vertical, at + LatticePoint{i, j}});
  return w;
}

CollisionReport orientation_collisions(const BoardCode& board, int window_pieces) {
  if (window_pieces < 1 || window_pieces > 4)
    throw std::invalid_argument("orientation_collisions: window must be 1..4 pieces");
  std::vector<std::uint64_t> keys;
  keys.reserve(4u * kBoardSize * kBoardSize);
  for (int y = 0; y < kBoardSize; ++y) {
    for (int x = 0; x < kBoardSize; ++x) {
      EdgeWindow w = EdgeWindow::from_board(board, {x, y}, window_pieces);
      for (int t = 0; t < 4; ++t) {
        keys.push_back(w.code());
        w = w.rotated90();
      }
    }
  }
  std::sort(keys.begin(), keys.end());
  std::int64_t colliding = 0;
  for (std::size_t i = 0; i < keys.size();) {
    std::size_t j = i + 1;
    while (j < keys.size() && keys[j] == keys[i]) ++j;
    if (j - i > 1) colliding += static_cast<std::int64_t>(j - i);
    i = j;
  }
  return make_report(window_pieces, colliding);
}

CollisionReport ring_pair_collisions(const DeBruijnRing& ring_a, const DeBruijnRing& ring_b,
                                     int window_pieces) {
  if (window_pieces < 1 || window_pieces > 4)
    throw std::invalid_argument("ring_pair_collisions: window must be 1..4 pieces");
  const auto positions =
      count_colliding_positions(ring_a.bits(), ring_b.bits().rotated90(), window_pieces);
  return make_report(window_pieces, 4 * positions);
}

namespace {

struct Side {
  detail::RingTrail trail;
  DeBruijnRing ring;
};

// Cyclic trail with node sequence n_i = tail(edge_i). Picks a node visited
// at least three times and reorders the closed sub-walks between visits.
bool transpose_segments(const detail::QuotientGraph& g, detail::RingTrail& trail,
                        std::mt19937_64& rng) {
  const auto& edges = trail.edges;
  std::vector<std::vector<std::size_t>> visits(static_cast<std::size_t>(g.node_count));
  for (std::size_t i = 0; i < edges.size(); ++i)
    visits[static_cast<std::size_t>(g.class_tail[static_cast<std::size_t>(edges[i])])].push_back(i);
  std::vector<std::size_t> candidates;
  for (std::size_t n = 0; n < visits.size(); ++n)
    if (visits[n].size() >= 3) candidates.push_back(n);
  if (candidates.empty()) return false;
  auto& at = visits[candidates[std::uniform_int_distribution<std::size_t>(0, candidates.size() - 1)(rng)]];
  std::shuffle(at.begin(), at.end(), rng);
  std::array<std::size_t, 3> cut{at[0], at[1], at[2]};
  std::sort(cut.begin(), cut.end());

  std::vector<int> next;
  next.reserve(edges.size());
  next.insert(next.end(), edges.begin() + static_cast<std::ptrdiff_t>(cut[1]),
              edges.begin() + static_cast<std::ptrdiff_t>(cut[2]));
  next.insert(next.end(), edges.begin() + static_cast<std::ptrdiff_t>(cut[0]),
              edges.begin() + static_cast<std::ptrdiff_t>(cut[1]));
  next.insert(next.end(), edges.begin() + static_cast<std::ptrdiff_t>(cut[2]), edges.end());
  next.insert(next.end(), edges.begin(), edges.begin() + static_cast<std::ptrdiff_t>(cut[0]));
  trail.edges = std::move(next);
  return true;
}

// Puts the omitted loop back and omits another one instead.
bool swap_dropped_loop(const detail::QuotientGraph& g, detail::RingTrail& trail,
                       std::mt19937_64& rng) {
  std::vector<std::size_t> loop_positions;
  for (std::size_t i = 0; i < trail.edges.size(); ++i) {
    const auto e = static_cast<std::size_t>(trail.edges[i]);
    if (g.class_tail[e] == g.class_head[e]) loop_positions.push_back(i);
  }
  if (loop_positions.empty()) return false;
  const std::size_t pos =
      loop_positions[std::uniform_int_distribution<std::size_t>(0, loop_positions.size() - 1)(rng)];
  const int removed = trail.edges[pos];
  trail.edges.erase(trail.edges.begin() + static_cast<std::ptrdiff_t>(pos));

  const int node = g.class_tail[static_cast<std::size_t>(trail.dropped_loop)];
  std::vector<std::size_t> slots;
  for (std::size_t i = 0; i < trail.edges.size(); ++i)
    if (g.class_tail[static_cast<std::size_t>(trail.edges[i])] == node) slots.push_back(i);
  if (slots.empty()) return false;
  const std::size_t slot = slots[std::uniform_int_distribution<std::size_t>(0, slots.size() - 1)(rng)];
  trail.edges.insert(trail.edges.begin() + static_cast<std::ptrdiff_t>(slot), trail.dropped_loop);
  trail.dropped_loop = removed;
  return true;
}

std::optional<Side> random_side(const detail::QuotientGraph& g, std::mt19937_64& rng) {
  for (int attempt = 0; attempt < 256; ++attempt) {
    auto trail = detail::random_trail(g, rng);
    if (!trail) continue;
    for (int lift = 0; lift < 8; ++lift) {
      auto cols = detail::lift_trail(g, *trail, rng);
      if (!cols) continue;
      auto ring = detail::ring_from_columns(*cols);
      if (validate_subperfect(ring).ok) return Side{std::move(*trail), std::move(ring)};
    }
  }
  return std::nullopt;
}

std::optional<Side> mutate(const detail::QuotientGraph& g, const Side& side, std::mt19937_64& rng) {
  detail::RingTrail trail = side.trail;
  const bool moved = std::uniform_int_distribution<int>(0, 3)(rng) == 0
                         ? swap_dropped_loop(g, trail, rng)
                         : transpose_segments(g, trail, rng);
  if (!moved) return std::nullopt;
  for (int lift = 0; lift < 8; ++lift) {
    auto cols = detail::lift_trail(g, trail, rng);
    if (!cols) continue;
    auto ring = detail::ring_from_columns(*cols);
    if (validate_subperfect(ring).ok) return Side{std::move(trail), std::move(ring)};
  }
  return std::nullopt;
}

struct Score {
  std::int64_t c4 = 0;
  std::int64_t c3 = 0;
  auto operator<=>(const Score&) const = default;
};

Score evaluate(const DeBruijnRing& a, const DeBruijnRing& b) {
  const BitMatrix b_rot = b.bits().rotated90();
  return {count_colliding_positions(a.bits(), b_rot, 4), count_colliding_positions(a.bits(), b_rot, 3)};
}

}  // namespace

RingPairSearch optimize_ring_pair(int iterations, std::uint64_t seed) {
  if (iterations < 1) throw std::invalid_argument("optimize_ring_pair: iterations must be >= 1");
  const auto& g = detail::QuotientGraph::instance();
  std::mt19937_64 rng(seed);

  auto a = random_side(g, rng);
  auto b = random_side(g, rng);
  if (!a || !b) throw RingGenerationError("optimize_ring_pair: could not seed the search");
  Score current = evaluate(a->ring, b->ring);
  Side best_a = *a;
  Side best_b = *b;
  Score best = current;

  RingPairSearch out;
  for (int it = 0; it < iterations; ++it) {
    const bool left = std::uniform_int_distribution<int>(0, 1)(rng) == 0;
    auto candidate = mutate(g, left ? *a : *b, rng);
    if (!candidate) continue;
    const Score s = left ? evaluate(candidate->ring, b->ring) : evaluate(a->ring, candidate->ring);
    if (s <= current) {
      (left ? a : b) = std::move(candidate);
      current = s;
      ++out.accepted_moves;
      if (s < best) {
        best = s;
        best_a = *a;
        best_b = *b;
      }
    }
  }

  out.rings = {best_a.ring, best_b.ring};
  out.iterations = iterations;
  out.collisions4 = make_report(4, 4 * best.c4);
  out.collisions3 = make_report(3, 4 * best.c3);
  if (best.c4 != 0) {
    throw RingSearchError("optimize_ring_pair: 4x4 orientation collisions remain (" +
                              std::to_string(4 * best.c4) + " keys)",
                          std::move(out));
  }
  return out;
}

}  // namespace puzzleboard
