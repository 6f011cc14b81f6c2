#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "puzzleboard/bit_matrix.hpp"

namespace puzzleboard {

inline constexpr int kRingRows = 3;
inline constexpr int kRingCols = 167;
inline constexpr int kRingWindows = kRingRows * kRingCols;  // 501

/// A 3x167 binary array, cyclic in both axes. Construction only checks the
/// shape; sub-perfectness is checked by validate_subperfect().
class DeBruijnRing {
 public:
  DeBruijnRing() : bits_(kRingRows, kRingCols) {}
  explicit DeBruijnRing(BitMatrix bits);

  const BitMatrix& bits() const noexcept { return bits_; }
  std::uint8_t operator()(int r, int c) const noexcept { return bits_.cyclic(r, c); }

  /// 9-bit code of the cyclic 3x3 window whose top-left cell is (row, col);
  /// bit (3*dr + dc) holds cell (row + dr, col + dc).
  std::uint16_t window(int row, int col) const noexcept;

  friend bool operator==(const DeBruijnRing&, const DeBruijnRing&) = default;

 private:
  BitMatrix bits_;
};

struct WindowPosition {
  int row = 0;
  int col = 0;
  friend bool operator==(WindowPosition, WindowPosition) = default;
};

struct WindowCollision {
  WindowPosition first;   ///< earliest position carrying the code
  WindowPosition repeat;  ///< a later position carrying the same code
  std::uint16_t code = 0;
};

struct SubperfectReport {
  bool ok = false;
  int distinct_windows = 0;
  std::vector<WindowCollision> collisions;
};

/// Checks that all 501 cyclic 3x3 windows are pairwise distinct. Throws
/// std::invalid_argument if the matrix is not 3x167 or not binary.
SubperfectReport validate_subperfect(const BitMatrix& bits);
inline SubperfectReport validate_subperfect(const DeBruijnRing& ring) {
  return validate_subperfect(ring.bits());
}

class RingGenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Deterministic per seed. Throws RingGenerationError if the bounded search
/// does not close a valid ring (callers retry with another seed).
DeBruijnRing generate_ring(std::uint64_t seed);

// Plain-text ring files: three lines of 167 '0'/'1' characters. Blank lines
// and lines starting with '#' are ignored.
DeBruijnRing parse_ring(std::string_view text);
std::string format_ring(const DeBruijnRing& ring, std::string_view comment = {});
DeBruijnRing read_ring_file(const std::filesystem::path& path);
void write_ring_file(const std::filesystem::path& path, const DeBruijnRing& ring,
                     std::string_view comment = {});

namespace detail {

// Column/row-rotation machinery shared by the generator and the ring-pair
// optimizer. A ring column is a 3-bit value, bit r = row r.
constexpr int rotate_column(int c) noexcept { return ((c >> 1) | ((c & 1) << 2)) & 7; }

/// Closed trail in the quotient de Bruijn graph whose nodes are column pairs
/// up to simultaneous row rotation and whose edges are 3-column windows up
/// to row rotation. Lifting the trail to actual columns yields a ring.
struct RingTrail {
  std::vector<int> edges;  ///< window-class ids, 167 of them
  int dropped_loop = -1;   ///< the one class left out
};

struct QuotientGraph {
  QuotientGraph();

  int node_count = 0;
  std::vector<int> pair_orbit;         ///< column pair (6 bits) -> node id
  std::vector<int> class_rep;          ///< class id -> canonical 9-bit triple
  std::vector<int> class_tail;         ///< class id -> node id
  std::vector<int> class_head;         ///< class id -> node id
  std::vector<std::vector<int>> out;   ///< node id -> outgoing class ids
  std::vector<int> loops;              ///< class ids with tail == head

  static const QuotientGraph& instance();
};

/// Random Eulerian circuit of the quotient graph with one loop class removed.
std::optional<RingTrail> random_trail(const QuotientGraph& g, std::mt19937_64& rng);

/// Lifts a trail to ring columns, choosing randomly among the row rotations
/// where the walk passes a rotation-invariant column pair. Returns nullopt
/// when the lifted walk does not close on its starting pair.
std::optional<std::vector<int>> lift_trail(const QuotientGraph& g, const RingTrail& trail,
                                           std::mt19937_64& rng);

DeBruijnRing ring_from_columns(const std::vector<int>& columns);

}  // namespace detail
}  // namespace puzzleboard
