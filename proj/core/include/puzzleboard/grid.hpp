#pragma once

#include <array>
#include <vector>

#include "puzzleboard/detector.hpp"
#include "puzzleboard/lattice.hpp"

namespace puzzleboard {

struct GridOptions {
  int k = 9;                         ///< neighbours considered per corner
  double opposite_window_deg = 45.0; ///< -X search window around the reversed +X direction
  double axis_window_deg = 45.0;     ///< +-Y search window around the reflected +X direction
  /// An edge a-b is dropped when a's neighbour c on the opposite side does
  /// not mirror it: |(b - a) + (c - a)| > tolerance * max(|b - a|, |c - a|).
  /// Checked at both endpoints; values >= 2 disable the check.
  double collinearity_tolerance = 0.3;
  /// Keep only edges that lie on a cycle of lattice-consistent edges. A
  /// lone link between two patches cannot be cross-checked, so bridges are
  /// cut and their sides become separate components.
  bool cycles_only = true;
};

/// Euclidean k nearest neighbours of every corner, closest first; ties go
/// to the lower index. Fewer than k when fewer corners exist.
std::vector<std::vector<int>> nearest_neighbors(const std::vector<Corner>& corners, int k = 9);

/// True if `n` is a direct (not diagonal) grid neighbour of `c` by corner
/// orientation: one step along a grid line swaps the black and white
/// sectors, which turns the Hessian's leading eigenvector by 90 degrees,
/// while a diagonal step keeps it.
bool is_direct_neighbor(const Corner& c, const Corner& n) noexcept;

/// A corner's local lattice frame and its proposed direct neighbours.
struct NeighborProposals {
  std::array<int, 4> neighbor{-1, -1, -1, -1};  ///< indexed by Direction
  std::array<double, 2> x_axis{1.0, 0.0};       ///< unit image direction of +X
  std::array<double, 2> y_axis{0.0, 1.0};       ///< unit image direction of +Y
};

/// +X is the nearest direct neighbour; -X the nearest direct one within the
/// opposite window around -(+X). The +-Y axes are the
/// reflections of +X across the two eigenvectors, oriented so that
/// cross(X, Y) > 0, and each takes the nearest direct neighbour within the
/// axis window. Without a +X neighbour the frame falls back to the grid
/// axes implied by the eigenvectors and all slots stay empty.
NeighborProposals classify_neighbors(const std::vector<Corner>& corners, int index, const std::vector<int>& knn,
                                     const GridOptions& options = {});

/// Lower is more trusted: length / (1 + min(response) / median_response).
double edge_weight(const Corner& a, const Corner& b, double median_response) noexcept;

struct CandidateEdge {
  int a = -1;
  int b = -1;
  Direction at_a = kPlusX;  ///< direction of b in a's frame
  Direction at_b = kPlusX;  ///< direction of a in b's frame
  double weight = 0.0;
};

/// One edge per proposed pair (one-sided proposals included). The endpoint
/// that did not propose the pair classifies it by its own frame axes.
/// Pairs failing the collinearity check are left out.
std::vector<CandidateEdge> candidate_edges(const std::vector<Corner>& corners,
                                           const std::vector<NeighborProposals>& proposals,
                                           const GridOptions& options = {});

struct LatticeComponent {
  int id = 0;
  std::vector<int> corners;           ///< indices into the corner list
  std::vector<LatticePoint> coords;   ///< parallel to corners, min (i, j) = (0, 0)
  std::vector<std::array<int, 2>> edges;  ///< spanning-forest edges
  int confirmed_edges = 0;  ///< consistent candidate edges beyond the spanning ones
  int rejected_edges = 0;   ///< contradicting candidate edges, counted at their first endpoint
};

/// Kruskal over the candidate edges (ascending weight, stable) with a
/// union-find that carries each corner's lattice transform. Merging rewrites
/// the smaller component into the larger one's frame and is refused if two
/// corners would share a lattice point. With `cycles_only`, bridges of the
/// graph of lattice-consistent edges are cut afterwards. Components with at
/// least `min_corners` corners, largest first.
std::vector<LatticeComponent> build_forest(const std::vector<Corner>& corners, std::vector<CandidateEdge> edges,
                                           int min_corners = 2, bool cycles_only = false);

/// Full grid stage: neighbours, proposals (stored in corners[i].neighbors),
/// candidate edges and the forest.
std::vector<LatticeComponent> build_grid(std::vector<Corner>& corners, const GridOptions& options = {},
                                         int min_corners = 2);

}  // namespace puzzleboard
