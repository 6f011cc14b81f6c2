#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "puzzleboard/board_code.hpp"
#include "puzzleboard/image.hpp"

namespace puzzleboard {

enum class Color : std::uint8_t { black, white };

/// Intensity of each colour in rendered views.
inline constexpr float kBlackLevel = 0.0f;
inline constexpr float kWhiteLevel = 1.0f;

/// Code dot diameter as a fraction of the piece edge.
inline constexpr double kDotDiameter = 1.0 / 3.0;

/// One checkerboard square [x, x+1] x [y, y+1] in target units.
struct Square {
  LatticePoint at;
  Color color = Color::black;
};

/// A code dot centred on the midpoint of a coded edge.
struct CodeDot {
  EdgeRef edge;          ///< local edge of the code lattice
  double cx = 0.0;       ///< centre in target units
  double cy = 0.0;
  double radius = kDotDiameter / 2.0;
  Color color = Color::black;
};

/// Printable layout of a target showing a window of the board.
///
/// The code lattice has (pieces_x + 1) x (pieces_y + 1) corners, corner
/// (i, j) sitting at target point (i, j); board corner of (i, j) is
/// origin + rotate((i, j), orientation). One extra ring of squares around
/// the lattice makes every lattice corner a full X junction, so the target
/// has (pieces_x + 2) x (pieces_y + 2) squares spanning [-1, pieces + 1].
/// Each lattice edge carries a dot: white for bit 1, black for bit 0.
/// Squares follow the board's parity: board square (x, y) is black iff
/// x + y is even, so board piece (0, 0) is black.
class BoardGeometry {
 public:
  BoardGeometry(const BoardCode& board, LatticePoint origin, int pieces_x, int pieces_y,
                Orientation orientation = Orientation::deg0, bool code_dots = true);

  LatticePoint origin() const noexcept { return origin_; }
  Orientation orientation() const noexcept { return orientation_; }
  int pieces_x() const noexcept { return pieces_x_; }
  int pieces_y() const noexcept { return pieces_y_; }
  bool has_code_dots() const noexcept { return code_dots_; }
  /// Bits on the lattice edges, in local coordinates.
  const ObservedCode& code() const noexcept { return code_; }

  std::vector<Square> squares() const;
  std::vector<CodeDot> dots() const;
  int corner_count() const noexcept { return (pieces_x_ + 1) * (pieces_y_ + 1); }

  Color square_color(int sx, int sy) const noexcept;
  /// Colour at a target point, or nullopt outside the squares (background).
  std::optional<Color> color_at(double x, double y) const noexcept;

  /// Board coordinates of a lattice corner, wrapped onto the board.
  LatticePoint board_corner(LatticePoint local) const noexcept {
    return wrap_to_board(origin_ + rotate(local, orientation_));
  }

 private:
  LatticePoint origin_;
  Orientation orientation_;
  int pieces_x_;
  int pieces_y_;
  bool code_dots_;
  int parity_;
  ObservedCode code_;
};

/// Throws std::invalid_argument for an empty extent.
BoardGeometry board_geometry(const BoardCode& board, LatticePoint origin, int pieces_x, int pieces_y,
                             Orientation orientation = Orientation::deg0, bool code_dots = true);

/// Standalone SVG 1.1. The drawing uses 6 user units per piece edge so the
/// dot radius is exactly 1; a white quiet zone of `quiet_pieces` surrounds
/// the squares. Physical size follows edge_length_mm.
std::string export_svg(const BoardGeometry& geom, double edge_length_mm, int quiet_pieces = 1);

class DegenerateHomography : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Projective map from target units to image pixels.
class Homography {
 public:
  Homography() : m_{1, 0, 0, 0, 1, 0, 0, 0, 1} {}
  /// Row-major 3x3; throws DegenerateHomography if singular.
  explicit Homography(const std::array<double, 9>& m);

  const std::array<double, 9>& matrix() const noexcept { return m_; }
  double operator()(int r, int c) const noexcept { return m_[static_cast<std::size_t>(3 * r + c)]; }

  /// Maps a point; nullopt if it lies on or behind the camera plane (w <= 0).
  std::optional<std::array<double, 2>> apply(double x, double y) const noexcept;
  /// Projective denominator at a point.
  double depth(double x, double y) const noexcept { return m_[6] * x + m_[7] * y + m_[8]; }

  Homography inverse() const;
  Homography operator*(const Homography& rhs) const;

  static Homography scale_translate(double scale, double tx, double ty);
  /// Similarity: `px_per_edge` pixels per piece edge, rotated by
  /// `rotation_deg` about the target point (cx, cy), which lands on image
  /// point (u0, v0).
  static Homography similarity(double px_per_edge, double rotation_deg, double cx, double cy, double u0,
                               double v0);

 private:
  std::array<double, 9> m_;
};

/// Pinhole view of the target plane. The camera looks at target point
/// (cx, cy) from `distance` target units; the optical axis is tilted by
/// `tilt_deg` about an in-plane axis at `tilt_axis_deg`, and the image is
/// rotated by `rotation_deg`. The focal length is chosen so that the
/// target centre appears at `px_per_edge` pixels per edge at (u0, v0).
struct CameraView {
  double px_per_edge = 10.0;
  double rotation_deg = 0.0;
  double tilt_deg = 0.0;
  double tilt_axis_deg = 0.0;
  double distance = 30.0;
  double cx = 0.0;
  double cy = 0.0;
  double u0 = 0.0;
  double v0 = 0.0;
};

Homography camera_homography(const CameraView& view);

struct RenderOptions {
  int width = 640;
  int height = 480;
  int supersample = 4;
  double blur_sigma = 0.0;
  double noise_sigma = 0.0;
  std::uint64_t noise_seed = 0;
  float background = kWhiteLevel;
};

/// Area-averaged rendering: each pixel averages supersample^2 points on a
/// regular grid inside it, mapped into the target through H^-1. Optional
/// Gaussian blur, then Gaussian noise, clamped to [0, 1]. Deterministic.
GrayImage render_view(const BoardGeometry& geom, const Homography& h, const RenderOptions& options);

struct GroundTruthCorner {
  LatticePoint local;  ///< (i, j) on the code lattice
  LatticePoint board;  ///< global board coordinates
  double u = 0.0;
  double v = 0.0;
};

/// Projected lattice corners that fall inside [0, width-1] x [0, height-1].
std::vector<GroundTruthCorner> ground_truth(const BoardGeometry& geom, const Homography& h, int width,
                                            int height);

}  // namespace puzzleboard
