#include <gtest/gtest.h>

#include <random>
#include <unordered_set>

#include "oracles.hpp"
#include "puzzleboard/board_code.hpp"

namespace pb = puzzleboard;

TEST(BoardCode, TilingDefinition) {
  const auto& b = pb::BoardCode::canonical();
  ASSERT_EQ(b.hbits().rows(), 501);
  ASSERT_EQ(b.hbits().cols(), 501);
  ASSERT_EQ(b.vbits().rows(), 501);
  ASSERT_EQ(b.vbits().cols(), 501);
  const auto& A = b.ring_a().bits();
  const auto& B = b.ring_b().bits();
  for (int y = 0; y < 501; ++y)
    for (int x = 0; x < 501; ++x) {
      ASSERT_EQ(b.vbits()(y, x), A(y % 3, x % 167));
      // Ring B turned clockwise: row r of the turned ring is column r of B
      // read bottom to top.
      ASSERT_EQ(b.hbits()(y, x), B(2 - x % 3, y % 167));
    }
}

TEST(BoardCode, BitWrapsCoordinates) {
  const auto& b = pb::BoardCode::canonical();
  EXPECT_EQ(b.bit({pb::EdgeKind::horizontal, {-1, -1}}), b.hbits()(500, 500));
  EXPECT_EQ(b.bit({pb::EdgeKind::vertical, {501, 1003}}), b.vbits()(1, 0));
}

TEST(BoardCode, EighteenBitCodesUniqueAtFixedOrientation) {
  const auto& b = pb::BoardCode::canonical();
  const auto arrays = oracle::board_arrays(b);
  std::unordered_set<std::uint32_t> seen;
  seen.reserve(251001);
  for (int y = 0; y < 501; ++y)
    for (int x = 0; x < 501; ++x) {
      std::uint32_t code = 0;
      for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i)
          code = code << 2 | arrays.H(x + i, y + j) << 1 | arrays.V(x + i, y + j);
      seen.insert(code);
    }
  EXPECT_EQ(seen.size(), 251001u);
}

TEST(BoardCode, PieceCode18MatchesDirectRead) {
  const auto& b = pb::BoardCode::canonical();
  std::unordered_set<std::uint32_t> seen;
  for (int y = 0; y < 501; y += 7)
    for (int x = 0; x < 501; ++x) seen.insert(b.piece_code18({x, y}));
  EXPECT_EQ(seen.size(), static_cast<std::size_t>(72 * 501));
  EXPECT_LT(b.piece_code18({500, 500}), 1u << 18);
}

TEST(BoardCode, RejectsInvalidRing) {
  const pb::DeBruijnRing zeros(pb::BitMatrix(3, 167, 0));
  EXPECT_THROW(pb::compose_board(zeros, pb::BoardCode::canonical().ring_b()), std::invalid_argument);
  EXPECT_THROW(pb::compose_board(pb::BoardCode::canonical().ring_a(), zeros), std::invalid_argument);
}

TEST(ExpectedBits, FullBoardAtOrigin) {
  const auto& b = pb::BoardCode::canonical();
  const auto obs = pb::expected_bits(b, {0, 0}, pb::Orientation::deg0, 501, 501);
  ASSERT_EQ(obs.cols(), 502);
  ASSERT_EQ(obs.rows(), 502);
  for (int y = 0; y < 501; ++y)
    for (int x = 0; x < 501; ++x) {
      ASSERT_EQ(obs.h(x, y), pb::to_trit(b.hbits()(y, x)));
      ASSERT_EQ(obs.v(x, y), pb::to_trit(b.vbits()(y, x)));
    }
  // Outside the corner lattice the slots stay unknown.
  EXPECT_EQ(obs.h(501, 0), pb::Trit::unknown);
  EXPECT_EQ(obs.v(0, 501), pb::Trit::unknown);
  EXPECT_EQ(obs.known_count(), 2 * 501 * 502);
}

TEST(ExpectedBits, MatchesRotatedBoardOracle) {
  const auto& b = pb::BoardCode::canonical();
  // Turning the board picture by t quarter turns and reading the window at
  // R^t(origin) gives what a camera rotated by -t sees.
  std::array<oracle::EdgeArrays, 4> turned;
  turned[0] = oracle::board_arrays(b);
  for (int t = 1; t < 4; ++t) turned[t] = oracle::turn(turned[t - 1]);
  std::mt19937 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const pb::LatticePoint origin{static_cast<int>(rng() % 501), static_cast<int>(rng() % 501)};
    const int t = static_cast<int>(rng() % 4);
    const int w = 1 + static_cast<int>(rng() % 6), h = 1 + static_cast<int>(rng() % 6);
    const auto obs = pb::expected_bits(b, origin, pb::orientation_from_turns(t), w, h);
    // local corner (i, j) is board corner origin + R^t(i, j); in the picture
    // turned by -t (i.e. 4 - t) that corner sits at R^{-t}(origin) + (i, j).
    const auto o = oracle::rot(origin.x, origin.y, (4 - t) % 4);
    const auto& e = turned[static_cast<std::size_t>((4 - t) % 4)];
    for (int j = 0; j <= h; ++j)
      for (int i = 0; i <= w; ++i) {
        if (i < w) {
          ASSERT_EQ(obs.h(i, j), pb::to_trit(e.H(o[0] + i, o[1] + j)));
        }
        if (j < h) {
          ASSERT_EQ(obs.v(i, j), pb::to_trit(e.V(o[0] + i, o[1] + j)));
        }
      }
  }
}

TEST(ExpectedBits, HalfTurnTwiceIsIdentity) {
  const auto& b = pb::BoardCode::canonical();
  const pb::LatticePoint origin{123, 456};
  const auto first = pb::expected_bits(b, origin, pb::Orientation::deg180, 4, 5);
  // Rotating the local frame by another half turn about the far corner
  // returns to the unrotated read-out.
  const pb::LatticePoint far = origin + pb::rotate({4, 5}, pb::Orientation::deg180);
  const auto back = pb::expected_bits(b, pb::wrap_to_board(far), pb::Orientation::deg0, 4, 5);
  for (int j = 0; j <= 5; ++j)
    for (int i = 0; i < 4; ++i) EXPECT_EQ(back.h(i, j), first.h(3 - i, 5 - j));
  EXPECT_EQ(pb::compose(pb::Orientation::deg180, pb::Orientation::deg180), pb::Orientation::deg0);
}

TEST(Lattice, MapEdgeKeepsEndpoints) {
  const pb::LatticePoint origin{10, 20};
  for (auto o : pb::kAllOrientations)
    for (auto kind : {pb::EdgeKind::horizontal, pb::EdgeKind::vertical}) {
      const pb::EdgeRef local{kind, {3, 4}};
      const pb::LatticePoint a = origin + pb::rotate(local.at, o);
      const pb::LatticePoint bl =
          origin + pb::rotate(local.at + (kind == pb::EdgeKind::horizontal ? pb::LatticePoint{1, 0}
                                                                            : pb::LatticePoint{0, 1}),
                              o);
      const auto e = pb::map_edge(local, o, origin);
      const pb::LatticePoint other =
          e.at + (e.kind == pb::EdgeKind::horizontal ? pb::LatticePoint{1, 0} : pb::LatticePoint{0, 1});
      const bool same = (e.at == a && other == bl) || (e.at == bl && other == a);
      EXPECT_TRUE(same);
    }
}

TEST(ObservedCode, EdgesAndKnownCount) {
  pb::ObservedCode obs(3, 2);
  EXPECT_EQ(obs.edges().size(), static_cast<std::size_t>(2 * 2 + 3 * 1));
  EXPECT_EQ(obs.known_count(), 0);
  obs.h(0, 0) = pb::Trit::one;
  obs.v(2, 0) = pb::Trit::zero;
  EXPECT_EQ(obs.known_count(), 2);
  EXPECT_TRUE(obs.has_edge({pb::EdgeKind::horizontal, {1, 1}}));
  EXPECT_FALSE(obs.has_edge({pb::EdgeKind::horizontal, {2, 1}}));
  EXPECT_FALSE(obs.has_edge({pb::EdgeKind::vertical, {0, 1}}));
  EXPECT_EQ(pb::flip(pb::Trit::one), pb::Trit::zero);
  EXPECT_EQ(pb::flip(pb::Trit::unknown), pb::Trit::unknown);
}
