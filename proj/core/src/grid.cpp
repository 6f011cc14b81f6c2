#include "puzzleboard/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <unordered_map>

namespace puzzleboard {
namespace {

using Vec = std::array<double, 2>;

double dot(Vec a, Vec b) { return a[0] * b[0] + a[1] * b[1]; }
double cross(Vec a, Vec b) { return a[0] * b[1] - a[1] * b[0]; }
Vec unit(Vec v) {
  const double n = std::hypot(v[0], v[1]);
  return n > 0.0 ? Vec{v[0] / n, v[1] / n} : Vec{1.0, 0.0};
}
Vec neg(Vec v) { return {-v[0], -v[1]}; }
Vec offset(const Corner& from, const Corner& to) { return {to.u - from.u, to.v - from.v}; }
double angle_between(Vec a, Vec b) { return std::abs(std::atan2(cross(a, b), dot(a, b))); }
Vec reflect(Vec d, Vec e) {
  const double k = 2.0 * dot(d, e);
  return {k * e[0] - d[0], k * e[1] - d[1]};
}

constexpr LatticePoint step_of(Direction d) {
  switch (d) {
    case kPlusX: return {1, 0};
    case kMinusX: return {-1, 0};
    case kPlusY: return {0, 1};
    case kMinusY: return {0, -1};
  }
  return {0, 0};
}

Direction classify_in_frame(const NeighborProposals& f, Vec d) {
  d = unit(d);
  const std::array<double, 4> score{dot(d, f.x_axis), -dot(d, f.x_axis), dot(d, f.y_axis), -dot(d, f.y_axis)};
  return static_cast<Direction>(std::max_element(score.begin(), score.end()) - score.begin());
}

std::int64_t pair_key(int a, int b) { return static_cast<std::int64_t>(a) << 32 | static_cast<std::uint32_t>(b); }

// Maps a corner's frame into its parent's: p -> rotate(p, rot) + t.
struct Transform {
  Orientation rot = Orientation::deg0;
  LatticePoint t{};

  LatticePoint apply(LatticePoint p) const { return rotate(p, rot) + t; }
  // (*this) after `inner`.
  Transform after(const Transform& inner) const { return {compose(inner.rot, rot), apply(inner.t)}; }
  Transform inverse() const {
    const Orientation r = puzzleboard::inverse(rot);
    return {r, rotate(LatticePoint{-t.x, -t.y}, r)};
  }
  friend bool operator==(const Transform&, const Transform&) = default;
};

// Union-find over lattice frames. Every corner keeps its transform into the
// root frame directly; merging rewrites the smaller side, so find is O(1).
class LatticeUnionFind {
 public:
  explicit LatticeUnionFind(int n)
      : root_(static_cast<std::size_t>(n)), to_root_(static_cast<std::size_t>(n)),
        next_(static_cast<std::size_t>(n), -1), tail_(static_cast<std::size_t>(n)),
        size_(static_cast<std::size_t>(n), 1) {
    occupied_.reserve(static_cast<std::size_t>(2 * n));
    for (int i = 0; i < n; ++i) {
      root_[static_cast<std::size_t>(i)] = i;
      tail_[static_cast<std::size_t>(i)] = i;
      occupied_.emplace(Cell{i, {0, 0}}, i);
    }
  }

  // Root and the transform from i's frame into the root frame.
  std::pair<int, Transform> find(int i) const {
    return {root_[static_cast<std::size_t>(i)], to_root_[static_cast<std::size_t>(i)]};
  }

  // Attaches root `child` under root `into` with `child_to_into`; refused
  // if any lattice point would be taken twice.
  bool merge(int into, int child, const Transform& child_to_into) {
    for (int m = child; m >= 0; m = next_[static_cast<std::size_t>(m)])
      if (occupied_.count(Cell{into, child_to_into.apply(to_root_[static_cast<std::size_t>(m)].t)})) return false;
    for (int m = child; m >= 0; m = next_[static_cast<std::size_t>(m)]) {
      auto& t = to_root_[static_cast<std::size_t>(m)];
      occupied_.erase(Cell{child, t.t});
      t = child_to_into.after(t);
      root_[static_cast<std::size_t>(m)] = into;
      occupied_.emplace(Cell{into, t.t}, m);
    }
    next_[static_cast<std::size_t>(tail_[static_cast<std::size_t>(into)])] = child;
    tail_[static_cast<std::size_t>(into)] = tail_[static_cast<std::size_t>(child)];
    size_[static_cast<std::size_t>(into)] += size_[static_cast<std::size_t>(child)];
    return true;
  }

  int size(int root) const { return size_[static_cast<std::size_t>(root)]; }

 private:
  struct Cell {
    int root;
    LatticePoint p;
    friend bool operator==(const Cell&, const Cell&) = default;
  };
  struct CellHash {
    std::size_t operator()(const Cell& c) const noexcept {
      std::uint64_t h = static_cast<std::uint64_t>(static_cast<std::uint32_t>(c.root)) * 0x9E3779B97F4A7C15ull;
      h ^= static_cast<std::uint64_t>(pair_key(c.p.x, c.p.y)) + 0x632BE59BD9B4E019ull + (h << 6) + (h >> 2);
      return static_cast<std::size_t>(h ^ (h >> 29));
    }
  };

  std::vector<int> root_;
  std::vector<Transform> to_root_;
  std::vector<int> next_;  // member lists, threaded through the corners
  std::vector<int> tail_;
  std::vector<int> size_;
  std::unordered_map<Cell, int, CellHash> occupied_;
};

class PlainUnionFind {
 public:
  explicit PlainUnionFind(int n) : parent_(static_cast<std::size_t>(n)), size_(static_cast<std::size_t>(n), 1) {
    for (int i = 0; i < n; ++i) parent_[static_cast<std::size_t>(i)] = i;
  }
  int find(int i) {
    while (parent_[static_cast<std::size_t>(i)] != i) {
      auto& p = parent_[static_cast<std::size_t>(i)];
      p = parent_[static_cast<std::size_t>(p)];
      i = p;
    }
    return i;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[static_cast<std::size_t>(a)] < size_[static_cast<std::size_t>(b)]) std::swap(a, b);
    parent_[static_cast<std::size_t>(b)] = a;
    size_[static_cast<std::size_t>(a)] += size_[static_cast<std::size_t>(b)];
    return true;
  }

 private:
  std::vector<int> parent_;
  std::vector<int> size_;
};

// Indices of the bridges of an undirected graph (iterative Tarjan lowlink).
std::vector<std::size_t> find_bridges(int n, const std::vector<std::array<int, 2>>& edges) {
  std::vector<std::vector<std::pair<int, std::size_t>>> adj(static_cast<std::size_t>(n));
  for (std::size_t k = 0; k < edges.size(); ++k) {
    adj[static_cast<std::size_t>(edges[k][0])].emplace_back(edges[k][1], k);
    adj[static_cast<std::size_t>(edges[k][1])].emplace_back(edges[k][0], k);
  }
  std::vector<int> order(static_cast<std::size_t>(n), -1), low(static_cast<std::size_t>(n), 0);
  std::vector<std::size_t> bridges;
  struct Frame {
    int v;
    std::size_t via;  // edge used to enter v
    std::size_t next = 0;
  };
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  int counter = 0;
  std::vector<Frame> stack;
  for (int s = 0; s < n; ++s) {
    if (order[static_cast<std::size_t>(s)] >= 0 || adj[static_cast<std::size_t>(s)].empty()) continue;
    order[static_cast<std::size_t>(s)] = low[static_cast<std::size_t>(s)] = counter++;
    stack.push_back({s, kNone});
    while (!stack.empty()) {
      Frame& f = stack.back();
      const auto uv = static_cast<std::size_t>(f.v);
      if (f.next < adj[uv].size()) {
        const auto [w, k] = adj[uv][f.next++];
        if (k == f.via) continue;
        const auto uw = static_cast<std::size_t>(w);
        if (order[uw] < 0) {
          order[uw] = low[uw] = counter++;
          stack.push_back({w, k});
        } else {
          low[uv] = std::min(low[uv], order[uw]);
        }
        continue;
      }
      const Frame done = f;
      stack.pop_back();
      if (stack.empty()) break;
      const auto up = static_cast<std::size_t>(stack.back().v);
      const auto ud = static_cast<std::size_t>(done.v);
      low[up] = std::min(low[up], low[ud]);
      if (low[ud] > order[up]) bridges.push_back(done.via);
    }
  }
  return bridges;
}

// Edge a -> b leaves a in direction `dir`; a's proposal in the opposite
// direction, if any, should sit at about a - (b - a). Gaps in the target
// otherwise let a corner pick a far corner as its neighbour.
bool mirrored(const std::vector<Corner>& corners, const std::vector<NeighborProposals>& proposals, int a, int b,
              Direction dir, double tolerance) {
  const int c = proposals[static_cast<std::size_t>(a)].neighbor[static_cast<std::size_t>(dir ^ 1)];
  if (c < 0 || c == b) return true;
  const auto ab = offset(corners[static_cast<std::size_t>(a)], corners[static_cast<std::size_t>(b)]);
  const auto ac = offset(corners[static_cast<std::size_t>(a)], corners[static_cast<std::size_t>(c)]);
  const double residual = std::hypot(ab[0] + ac[0], ab[1] + ac[1]);
  return residual <= tolerance * std::max(std::hypot(ab[0], ab[1]), std::hypot(ac[0], ac[1]));
}

}  // namespace

std::vector<std::vector<int>> nearest_neighbors(const std::vector<Corner>& corners, int k) {
  const int n = static_cast<int>(corners.size());
  std::vector<std::vector<int>> out(static_cast<std::size_t>(n));
  if (n < 2 || k < 1) return out;
  k = std::min(k, n - 1);

  double x0 = corners[0].u, x1 = x0, y0 = corners[0].v, y1 = y0;
  for (const auto& c : corners) {
    x0 = std::min(x0, c.u);
    x1 = std::max(x1, c.u);
    y0 = std::min(y0, c.v);
    y1 = std::max(y1, c.v);
  }
  // About two corners per bucket for a uniform spread.
  const double cell = std::max(1.0, std::sqrt(2.0 * std::max(1.0, (x1 - x0) * (y1 - y0)) / n));
  const int gw = static_cast<int>((x1 - x0) / cell) + 1, gh = static_cast<int>((y1 - y0) / cell) + 1;
  std::vector<std::vector<int>> buckets(static_cast<std::size_t>(gw) * static_cast<std::size_t>(gh));
  auto cell_of = [&](const Corner& c) {
    return std::array<int, 2>{std::min(gw - 1, static_cast<int>((c.u - x0) / cell)),
                              std::min(gh - 1, static_cast<int>((c.v - y0) / cell))};
  };
  for (int i = 0; i < n; ++i) {
    const auto [cx, cy] = cell_of(corners[static_cast<std::size_t>(i)]);
    buckets[static_cast<std::size_t>(cy) * static_cast<std::size_t>(gw) + static_cast<std::size_t>(cx)].push_back(i);
  }

  // Running k best as (squared distance, index), ascending; ties go to the lower index.
  std::vector<std::pair<double, int>> best;
  best.reserve(static_cast<std::size_t>(k) + 1);
  for (int i = 0; i < n; ++i) {
    const auto& q = corners[static_cast<std::size_t>(i)];
    const auto [cx, cy] = cell_of(q);
    best.clear();
    const int max_ring = std::max(gw, gh);
    for (int r = 0; r <= max_ring; ++r) {
      for (int by = cy - r; by <= cy + r; ++by) {
        if (by < 0 || by >= gh) continue;
        const bool edge_row = by == cy - r || by == cy + r;
        for (int bx = cx - r; bx <= cx + r; bx += (edge_row || r == 0) ? 1 : 2 * r) {
          if (bx < 0 || bx >= gw) continue;
          for (int j : buckets[static_cast<std::size_t>(by) * static_cast<std::size_t>(gw) + static_cast<std::size_t>(bx)]) {
            if (j == i) continue;
            const auto& p = corners[static_cast<std::size_t>(j)];
            const std::pair<double, int> cand{(p.u - q.u) * (p.u - q.u) + (p.v - q.v) * (p.v - q.v), j};
            if (static_cast<int>(best.size()) == k && !(cand < best.back())) continue;
            best.insert(std::upper_bound(best.begin(), best.end(), cand), cand);
            if (static_cast<int>(best.size()) > k) best.pop_back();
          }
        }
      }
      // Anything outside ring r is at least r cells away; equality could still tie on a lower index.
      if (static_cast<int>(best.size()) == k && best.back().first < (r * cell) * (r * cell)) break;
    }
    auto& list = out[static_cast<std::size_t>(i)];
    list.reserve(best.size());
    for (const auto& [d, j] : best) list.push_back(j);
  }
  return out;
}

bool is_direct_neighbor(const Corner& c, const Corner& n) noexcept {
  return std::abs(dot(c.eigvec1, n.eigvec1)) < std::numbers::sqrt2 / 2.0;
}

NeighborProposals classify_neighbors(const std::vector<Corner>& corners, int index, const std::vector<int>& knn,
                                     const GridOptions& options) {
  const auto& c = corners[static_cast<std::size_t>(index)];
  NeighborProposals p;
  std::vector<int> direct;
  for (int j : knn)
    if (is_direct_neighbor(c, corners[static_cast<std::size_t>(j)])) direct.push_back(j);

  auto orient_y = [&](Vec x) {
    const Vec y = unit(reflect(x, c.eigvec1));
    return cross(x, y) > 0.0 ? y : neg(y);
  };
  if (direct.empty()) {
    p.x_axis = unit({c.eigvec1[0] + c.eigvec2[0], c.eigvec1[1] + c.eigvec2[1]});
    p.y_axis = orient_y(p.x_axis);
    return p;
  }

  const int plus_x = direct.front();
  p.neighbor[kPlusX] = plus_x;
  p.x_axis = unit(offset(c, corners[static_cast<std::size_t>(plus_x)]));
  const Vec reflected_y = orient_y(p.x_axis);
  p.y_axis = reflected_y;

  const double to_rad = std::numbers::pi / 180.0;
  auto nearest_along = [&](Vec axis, double window_deg) {
    for (int j : direct) {
      if (std::find(p.neighbor.begin(), p.neighbor.end(), j) != p.neighbor.end()) continue;
      if (angle_between(axis, offset(c, corners[static_cast<std::size_t>(j)])) <= window_deg * to_rad) return j;
    }
    return -1;
  };
  p.neighbor[kMinusX] = nearest_along(neg(p.x_axis), options.opposite_window_deg);
  p.neighbor[kPlusY] = nearest_along(reflected_y, options.axis_window_deg);
  p.neighbor[kMinusY] = nearest_along(neg(reflected_y), options.axis_window_deg);
  if (p.neighbor[kPlusY] >= 0) p.y_axis = unit(offset(c, corners[static_cast<std::size_t>(p.neighbor[kPlusY])]));
  return p;
}

double edge_weight(const Corner& a, const Corner& b, double median_response) noexcept {
  const double length = std::hypot(a.u - b.u, a.v - b.v);
  const double r = std::min(a.response, b.response);
  return length / (1.0 + (median_response > 0.0 ? r / median_response : 0.0));
}

std::vector<CandidateEdge> candidate_edges(const std::vector<Corner>& corners,
                                           const std::vector<NeighborProposals>& proposals,
                                           const GridOptions& options) {
  std::vector<double> responses;
  responses.reserve(corners.size());
  for (const auto& c : corners) responses.push_back(c.response);
  double median = 0.0;
  if (!responses.empty()) {
    const auto mid = responses.begin() + static_cast<std::ptrdiff_t>(responses.size() / 2);
    std::nth_element(responses.begin(), mid, responses.end());
    median = *mid;
  }

  // Slot in which `from` proposes `to`, or -1.
  auto slot_of = [&](int from, int to) {
    const auto& nb = proposals[static_cast<std::size_t>(from)].neighbor;
    for (int s = 0; s < 4; ++s)
      if (nb[static_cast<std::size_t>(s)] == to) return s;
    return -1;
  };

  std::vector<CandidateEdge> edges;
  for (std::size_t i = 0; i < proposals.size(); ++i) {
    const int ii = static_cast<int>(i);
    for (int s = 0; s < 4; ++s) {
      const int j = proposals[i].neighbor[static_cast<std::size_t>(s)];
      if (j < 0 || slot_of(ii, j) != s) continue;
      if (j < ii && slot_of(j, ii) >= 0) continue;  // already emitted from j
      const int a = std::min(ii, j), b = std::max(ii, j);
      const auto& ca = corners[static_cast<std::size_t>(a)];
      const auto& cb = corners[static_cast<std::size_t>(b)];
      CandidateEdge e;
      e.a = a;
      e.b = b;
      const int sa = slot_of(a, b), sb = slot_of(b, a);
      e.at_a = sa >= 0 ? static_cast<Direction>(sa) : classify_in_frame(proposals[static_cast<std::size_t>(a)], offset(ca, cb));
      e.at_b = sb >= 0 ? static_cast<Direction>(sb) : classify_in_frame(proposals[static_cast<std::size_t>(b)], offset(cb, ca));
      if (!mirrored(corners, proposals, a, b, e.at_a, options.collinearity_tolerance) ||
          !mirrored(corners, proposals, b, a, e.at_b, options.collinearity_tolerance))
        continue;
      e.weight = edge_weight(ca, cb, median);
      edges.push_back(e);
    }
  }
  return edges;
}

std::vector<LatticeComponent> build_forest(const std::vector<Corner>& corners, std::vector<CandidateEdge> edges,
                                           int min_corners, bool cycles_only) {
  const int n = static_cast<int>(corners.size());
  std::stable_sort(edges.begin(), edges.end(),
                   [](const CandidateEdge& x, const CandidateEdge& y) { return x.weight < y.weight; });

  LatticeUnionFind uf(n);
  std::vector<std::array<int, 2>> accepted;
  std::vector<std::array<int, 2>> confirmed;
  std::vector<int> rejected_at;  // components are resolved at the end
  for (const auto& e : edges) {
    const LatticePoint sa = step_of(e.at_a), sb = step_of(e.at_b);
    // b's frame -> a's frame: b's step towards a must point back along a's step.
    Transform b_to_a;
    b_to_a.t = sa;
    bool aligned = false;
    for (const auto o : kAllOrientations)
      if (rotate(sb, o) == LatticePoint{-sa.x, -sa.y}) {
        b_to_a.rot = o;
        aligned = true;
      }
    if (!aligned) continue;

    const auto [ra, ta] = uf.find(e.a);
    const auto [rb, tb] = uf.find(e.b);
    const Transform via_a = ta.after(b_to_a);
    if (ra == rb) {
      if (via_a == tb) {
        confirmed.push_back({e.a, e.b});
      } else {
        rejected_at.push_back(e.a);
      }
      continue;
    }
    const Transform rb_to_ra = via_a.after(tb.inverse());
    const bool ok = uf.size(ra) >= uf.size(rb) ? uf.merge(ra, rb, rb_to_ra) : uf.merge(rb, ra, rb_to_ra.inverse());
    if (ok) {
      accepted.push_back({e.a, e.b});
    } else {
      rejected_at.push_back(e.a);
    }
  }

  // Lattice-consistent edges, tree edges first. Components are rebuilt from
  // them so that dropping bridges can split a tree.
  std::vector<std::array<int, 2>> consistent = accepted;
  consistent.insert(consistent.end(), confirmed.begin(), confirmed.end());
  std::vector<char> keep(consistent.size(), 1);
  if (cycles_only) {
    for (const std::size_t k : find_bridges(n, consistent)) keep[k] = 0;
  }

  PlainUnionFind groups(n);
  constexpr std::size_t kNoSlot = static_cast<std::size_t>(-1);
  std::vector<char> spanning(consistent.size(), 0);
  for (std::size_t k = 0; k < consistent.size(); ++k)
    if (keep[k]) spanning[k] = groups.unite(consistent[k][0], consistent[k][1]);

  std::vector<std::size_t> slot(static_cast<std::size_t>(n), kNoSlot);
  std::vector<LatticeComponent> comps;
  for (int i = 0; i < n; ++i) {
    auto& s = slot[static_cast<std::size_t>(groups.find(i))];
    if (s == kNoSlot) {
      s = comps.size();
      comps.emplace_back();
    }
    auto& comp = comps[s];
    comp.corners.push_back(i);
    comp.coords.push_back(uf.find(i).second.t);
  }
  for (std::size_t k = 0; k < consistent.size(); ++k) {
    if (!keep[k]) continue;
    auto& comp = comps[slot[static_cast<std::size_t>(groups.find(consistent[k][0]))]];
    if (spanning[k]) {
      comp.edges.push_back(consistent[k]);
    } else {
      ++comp.confirmed_edges;
    }
  }
  for (int a : rejected_at) ++comps[slot[static_cast<std::size_t>(groups.find(a))]].rejected_edges;

  std::erase_if(comps, [&](const LatticeComponent& c) { return static_cast<int>(c.corners.size()) < min_corners; });
  for (auto& c : comps) {
    int mx = std::numeric_limits<int>::max(), my = mx;
    for (const auto& p : c.coords) {
      mx = std::min(mx, p.x);
      my = std::min(my, p.y);
    }
    for (auto& p : c.coords) p = p - LatticePoint{mx, my};
  }
  std::stable_sort(comps.begin(), comps.end(), [](const LatticeComponent& x, const LatticeComponent& y) {
    return x.corners.size() > y.corners.size();
  });
  for (std::size_t i = 0; i < comps.size(); ++i) comps[i].id = static_cast<int>(i);
  return comps;
}

std::vector<LatticeComponent> build_grid(std::vector<Corner>& corners, const GridOptions& options, int min_corners) {
  const auto knn = nearest_neighbors(corners, options.k);
  std::vector<NeighborProposals> proposals(corners.size());
  for (std::size_t i = 0; i < corners.size(); ++i) {
    proposals[i] = classify_neighbors(corners, static_cast<int>(i), knn[i], options);
    corners[i].neighbors = proposals[i].neighbor;
  }
  return build_forest(corners, candidate_edges(corners, proposals, options), min_corners,
                      options.cycles_only);
}

}  // namespace puzzleboard
