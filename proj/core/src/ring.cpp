#include "puzzleboard/ring.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

namespace puzzleboard {
namespace {

constexpr int kGenerationAttempts = 256;

int rotate_pair(int p) {
  return detail::rotate_column(p & 7) | (detail::rotate_column((p >> 3) & 7) << 3);
}

int rotate_triple(int t) {
  return detail::rotate_column(t & 7) | (detail::rotate_column((t >> 3) & 7) << 3) |
         (detail::rotate_column((t >> 6) & 7) << 6);
}

}  // namespace

DeBruijnRing::DeBruijnRing(BitMatrix bits) : bits_(std::move(bits)) {
  if (bits_.rows() != kRingRows || bits_.cols() != kRingCols) {
    throw std::invalid_argument("DeBruijnRing: expected a 3x167 bit array, got " +
                                std::to_string(bits_.rows()) + "x" +
                                std::to_string(bits_.cols()));
  }
}

std::uint16_t DeBruijnRing::window(int row, int col) const noexcept {
  std::uint16_t code = 0;
  for (int dr = 0; dr < 3; ++dr)
    for (int dc = 0; dc < 3; ++dc)
      if (bits_.cyclic(row + dr, col + dc)) code |= static_cast<std::uint16_t>(1u << (3 * dr + dc));
  return code;
}

SubperfectReport validate_subperfect(const BitMatrix& bits) {
  if (bits.rows() != kRingRows || bits.cols() != kRingCols) {
    throw std::invalid_argument("validate_subperfect: expected shape 3x167, got " +
                                std::to_string(bits.rows()) + "x" + std::to_string(bits.cols()));
  }
  for (auto b : bits.data())
    if (b > 1) throw std::invalid_argument("validate_subperfect: non-binary entry");

  const DeBruijnRing ring(bits);
  std::array<int, 512> first_seen;
  first_seen.fill(-1);
  SubperfectReport report;
  for (int r = 0; r < kRingRows; ++r) {
    for (int c = 0; c < kRingCols; ++c) {
      const auto code = ring.window(r, c);
      const int slot = r * kRingCols + c;
      if (first_seen[code] < 0) {
        first_seen[code] = slot;
        ++report.distinct_windows;
      } else {
        const int f = first_seen[code];
        report.collisions.push_back({{f / kRingCols, f % kRingCols}, {r, c}, code});
      }
    }
  }
  report.ok = report.collisions.empty();
  return report;
}

namespace detail {

QuotientGraph::QuotientGraph() {
  pair_orbit.assign(64, -1);
  for (int p = 0; p < 64; ++p) {
    if (pair_orbit[p] >= 0) continue;
    const int id = node_count++;
    for (int q = p, i = 0; i < 3; ++i, q = rotate_pair(q)) pair_orbit[q] = id;
  }
  out.resize(static_cast<std::size_t>(node_count));

  std::array<bool, 512> seen{};
  for (int t = 0; t < 512; ++t) {
    if (seen[t]) continue;
    const int t1 = rotate_triple(t);
    const int t2 = rotate_triple(t1);
    seen[t] = seen[t1] = seen[t2] = true;
    if (t1 == t) continue;  // row-rotation invariant: would repeat in all three rows
    const int id = static_cast<int>(class_rep.size());
    class_rep.push_back(t);
    class_tail.push_back(pair_orbit[t & 63]);
    class_head.push_back(pair_orbit[t >> 3]);
    out[static_cast<std::size_t>(class_tail.back())].push_back(id);
    if (class_tail.back() == class_head.back()) loops.push_back(id);
  }
}

const QuotientGraph& QuotientGraph::instance() {
  static const QuotientGraph graph;
  return graph;
}

std::optional<RingTrail> random_trail(const QuotientGraph& g, std::mt19937_64& rng) {
  if (g.loops.empty()) return std::nullopt;
  std::vector<std::vector<int>> adj = g.out;
  for (auto& a : adj) std::shuffle(a.begin(), a.end(), rng);
  std::vector<std::size_t> next(adj.size(), 0);

  const int dropped =
      g.loops[std::uniform_int_distribution<std::size_t>(0, g.loops.size() - 1)(rng)];

  // Hierholzer's algorithm.
  std::vector<int> node_stack{g.class_tail[static_cast<std::size_t>(dropped)]};
  std::vector<int> edge_stack;
  std::vector<int> circuit;
  while (!node_stack.empty()) {
    const auto v = static_cast<std::size_t>(node_stack.back());
    if (next[v] < adj[v].size()) {
      const int e = adj[v][next[v]++];
      edge_stack.push_back(e);
      node_stack.push_back(g.class_head[static_cast<std::size_t>(e)]);
    } else {
      node_stack.pop_back();
      if (!edge_stack.empty()) {
        circuit.push_back(edge_stack.back());
        edge_stack.pop_back();
      }
    }
  }
  std::reverse(circuit.begin(), circuit.end());
  if (circuit.size() != g.class_rep.size()) return std::nullopt;

  const auto at = std::find(circuit.begin(), circuit.end(), dropped);
  RingTrail trail;
  trail.dropped_loop = dropped;
  trail.edges.assign(at + 1, circuit.end());
  trail.edges.insert(trail.edges.end(), circuit.begin(), at);
  return trail;
}

std::optional<std::vector<int>> lift_trail(const QuotientGraph& g, const RingTrail& trail,
                                           std::mt19937_64& rng) {
  if (trail.edges.empty()) return std::nullopt;
  const int rep0 = g.class_rep[static_cast<std::size_t>(trail.edges.front())];
  int start = rep0 & 63;
  for (int k = std::uniform_int_distribution<int>(0, 2)(rng); k > 0; --k) start = rotate_pair(start);

  std::vector<int> columns{start & 7, start >> 3};
  columns.reserve(trail.edges.size() + 2);
  int current = start;
  std::array<int, 3> options{};
  for (int e : trail.edges) {
    int t = g.class_rep[static_cast<std::size_t>(e)];
    int n = 0;
    for (int k = 0; k < 3; ++k, t = rotate_triple(t))
      if ((t & 63) == current) options[static_cast<std::size_t>(n++)] = t;
    if (n == 0) return std::nullopt;
    const int chosen =
        options[static_cast<std::size_t>(n == 1 ? 0 : std::uniform_int_distribution<int>(0, n - 1)(rng))];
    columns.push_back(chosen >> 6);
    current = chosen >> 3;
  }
  if (current != start) return std::nullopt;
  columns.resize(trail.edges.size());
  return columns;
}

DeBruijnRing ring_from_columns(const std::vector<int>& columns) {
  BitMatrix bits(kRingRows, kRingCols);
  for (int c = 0; c < kRingCols; ++c)
    for (int r = 0; r < kRingRows; ++r)
      bits(r, c) = static_cast<std::uint8_t>((columns[static_cast<std::size_t>(c)] >> r) & 1);
  return DeBruijnRing(std::move(bits));
}

}  // namespace detail

DeBruijnRing generate_ring(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto& graph = detail::QuotientGraph::instance();
  for (int attempt = 0; attempt < kGenerationAttempts; ++attempt) {
    const auto trail = detail::random_trail(graph, rng);
    if (!trail) continue;
    for (int lift = 0; lift < 8; ++lift) {
      const auto columns = detail::lift_trail(graph, *trail, rng);
      if (!columns) continue;
      auto ring = detail::ring_from_columns(*columns);
      if (validate_subperfect(ring).ok) return ring;
    }
  }
  throw RingGenerationError("generate_ring: no closed ring found for seed " +
                            std::to_string(seed));
}

DeBruijnRing parse_ring(std::string_view text) {
  std::vector<std::string> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
      line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    rows.push_back(line);
  }
  if (rows.size() != kRingRows)
    throw std::invalid_argument("ring file: expected 3 rows, found " + std::to_string(rows.size()));
  BitMatrix bits(kRingRows, kRingCols);
  for (int r = 0; r < kRingRows; ++r) {
    const auto& row = rows[static_cast<std::size_t>(r)];
    if (row.size() != kRingCols)
      throw std::invalid_argument("ring file: row " + std::to_string(r) + " has " +
                                  std::to_string(row.size()) + " columns, expected 167");
    for (int c = 0; c < kRingCols; ++c) {
      const char ch = row[static_cast<std::size_t>(c)];
      if (ch != '0' && ch != '1')
        throw std::invalid_argument("ring file: invalid character in row " + std::to_string(r));
      bits(r, c) = ch == '1';
    }
  }
  return DeBruijnRing(std::move(bits));
}

std::string format_ring(const DeBruijnRing& ring, std::string_view comment) {
  std::string out;
  if (!comment.empty()) {
    std::istringstream in{std::string(comment)};
    std::string line;
    while (std::getline(in, line)) out += "# " + line + "\n";
  }
  return out + ring.bits().to_text();
}

DeBruijnRing read_ring_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open ring file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_ring(ss.str());
}

void write_ring_file(const std::filesystem::path& path, const DeBruijnRing& ring,
                     std::string_view comment) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write ring file " + path.string());
  out << format_ring(ring, comment);
}

}  // namespace puzzleboard
