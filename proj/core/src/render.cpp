#include "puzzleboard/render.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace puzzleboard {
namespace {

constexpr double kDotRadius = kDotDiameter / 2.0;

float level(Color c) { return c == Color::black ? kBlackLevel : kWhiteLevel; }

using Mat3 = std::array<double, 9>;

Mat3 multiply(const Mat3& a, const Mat3& b) {
  Mat3 r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) r[3 * i + j] += a[3 * i + k] * b[3 * k + j];
  return r;
}

double determinant(const Mat3& m) {
  return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
         m[2] * (m[3] * m[7] - m[4] * m[6]);
}

double frobenius(const Mat3& m) {
  double s = 0.0;
  for (double v : m) s += v * v;
  return std::sqrt(s);
}

}  // namespace

BoardGeometry::BoardGeometry(const BoardCode& board, LatticePoint origin, int pieces_x, int pieces_y,
                             Orientation orientation, bool code_dots)
    : origin_(origin), orientation_(orientation), pieces_x_(pieces_x), pieces_y_(pieces_y),
      code_dots_(code_dots) {
  if (pieces_x < 1 || pieces_y < 1)
    throw std::invalid_argument("board_geometry: extent must be at least 1x1 pieces");
  code_ = expected_bits(board, origin, orientation, pieces_x, pieces_y);
  // Local square (sx, sy) covers board square origin + min(R(sx, sy),
  // R(sx + 1, sy + 1)); only the parity of that corner matters.
  const LatticePoint a = rotate({0, 0}, orientation);
  const LatticePoint b = rotate({1, 1}, orientation);
  parity_ = positive_mod(origin.x + origin.y + std::min(a.x, b.x) + std::min(a.y, b.y), 2);
}

Color BoardGeometry::square_color(int sx, int sy) const noexcept {
  // Rotations preserve the checkerboard parity of neighbouring squares.
  return positive_mod(sx + sy + parity_, 2) == 0 ? Color::black : Color::white;
}

std::optional<Color> BoardGeometry::color_at(double x, double y) const noexcept {
  if (!(x >= -1.0 && y >= -1.0 && x < pieces_x_ + 1.0 && y < pieces_y_ + 1.0)) return std::nullopt;
  if (code_dots_) {
    const int fx = static_cast<int>(std::floor(x));
    const int fy = static_cast<int>(std::floor(y));
    const int rx = static_cast<int>(std::lround(x));
    const int ry = static_cast<int>(std::lround(y));
    // Nearest horizontal edge midpoint (fx + 0.5, ry), vertical (rx, fy + 0.5).
    double dx = x - (fx + 0.5);
    double dy = y - ry;
    if (dx * dx + dy * dy < kDotRadius * kDotRadius && fx >= 0 && fx < pieces_x_ && ry >= 0 &&
        ry <= pieces_y_)
      return code_.h(fx, ry) == Trit::one ? Color::white : Color::black;
    dx = x - rx;
    dy = y - (fy + 0.5);
    if (dx * dx + dy * dy < kDotRadius * kDotRadius && rx >= 0 && rx <= pieces_x_ && fy >= 0 &&
        fy < pieces_y_)
      return code_.v(rx, fy) == Trit::one ? Color::white : Color::black;
  }
  return square_color(static_cast<int>(std::floor(x)), static_cast<int>(std::floor(y)));
}

std::vector<Square> BoardGeometry::squares() const {
  std::vector<Square> out;
  out.reserve(static_cast<std::size_t>((pieces_x_ + 2) * (pieces_y_ + 2)));
  for (int sy = -1; sy <= pieces_y_; ++sy)
    for (int sx = -1; sx <= pieces_x_; ++sx) out.push_back({{sx, sy}, square_color(sx, sy)});
  return out;
}

std::vector<CodeDot> BoardGeometry::dots() const {
  std::vector<CodeDot> out;
  if (!code_dots_) return out;
  for (const auto& e : code_.edges()) {
    CodeDot d;
    d.edge = e;
    d.cx = e.at.x + (e.kind == EdgeKind::horizontal ? 0.5 : 0.0);
    d.cy = e.at.y + (e.kind == EdgeKind::vertical ? 0.5 : 0.0);
    d.color = code_.get(e) == Trit::one ? Color::white : Color::black;
    out.push_back(d);
  }
  return out;
}

BoardGeometry board_geometry(const BoardCode& board, LatticePoint origin, int pieces_x, int pieces_y,
                             Orientation orientation, bool code_dots) {
  return BoardGeometry(board, origin, pieces_x, pieces_y, orientation, code_dots);
}

std::string export_svg(const BoardGeometry& geom, double edge_length_mm, int quiet_pieces) {
  if (!(edge_length_mm > 0.0)) throw std::invalid_argument("export_svg: edge length must be positive");
  if (quiet_pieces < 1) throw std::invalid_argument("export_svg: quiet zone must be at least one piece");
  constexpr int unit = 6;  // user units per edge, dot radius = 1
  const int squares_x = geom.pieces_x() + 2;
  const int squares_y = geom.pieces_y() + 2;
  const int view_w = unit * (squares_x + 2 * quiet_pieces);
  const int view_h = unit * (squares_y + 2 * quiet_pieces);
  // Target point (x, y) -> user units ((x + 1 + quiet) * 6, ...).
  const int shift = unit * (1 + quiet_pieces);

  std::ostringstream svg;
  svg.imbue(std::locale::classic());
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
      << edge_length_mm * view_w / unit << "mm\" height=\"" << edge_length_mm * view_h / unit
      << "mm\" viewBox=\"0 0 " << view_w << ' ' << view_h << "\">\n"
      << "<desc>PuzzleBoard target, board origin " << geom.origin().x << ' ' << geom.origin().y
      << ", orientation " << degrees(geom.orientation()) << ", " << geom.pieces_x() << 'x'
      << geom.pieces_y() << " pieces, edge " << edge_length_mm << " mm</desc>\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << view_w << "\" height=\"" << view_h
      << "\" fill=\"#ffffff\"/>\n<g shape-rendering=\"crispEdges\">\n";
  for (const auto& s : geom.squares()) {
    svg << "<rect class=\"" << (s.color == Color::black ? "black" : "white") << "\" x=\""
        << s.at.x * unit + shift << "\" y=\"" << s.at.y * unit + shift << "\" width=\"" << unit
        << "\" height=\"" << unit << "\" fill=\"" << (s.color == Color::black ? "#000000" : "#ffffff")
        << "\"/>\n";
  }
  svg << "</g>\n<g>\n";
  for (const auto& d : geom.dots()) {
    // Centres are integers or half-integers, so x6 is exact.
    svg << "<circle cx=\"" << static_cast<int>(std::lround(d.cx * unit)) + shift << "\" cy=\""
        << static_cast<int>(std::lround(d.cy * unit)) + shift << "\" r=\"1\" fill=\""
        << (d.color == Color::black ? "#000000" : "#ffffff") << "\"/>\n";
  }
  svg << "</g>\n</svg>\n";
  return svg.str();
}

Homography::Homography(const std::array<double, 9>& m) : m_(m) {
  const double scale = frobenius(m);
  if (!(scale > 0.0) || !std::isfinite(scale) ||
      std::abs(determinant(m)) <= 1e-12 * scale * scale * scale)
    throw DegenerateHomography("homography is singular");
}

std::optional<std::array<double, 2>> Homography::apply(double x, double y) const noexcept {
  const double w = depth(x, y);
  if (!(w > 0.0)) return std::nullopt;
  return std::array<double, 2>{(m_[0] * x + m_[1] * y + m_[2]) / w, (m_[3] * x + m_[4] * y + m_[5]) / w};
}

Homography Homography::inverse() const {
  const auto& m = m_;
  const Mat3 adj = {m[4] * m[8] - m[5] * m[7], m[2] * m[7] - m[1] * m[8], m[1] * m[5] - m[2] * m[4],
                    m[5] * m[6] - m[3] * m[8], m[0] * m[8] - m[2] * m[6], m[2] * m[3] - m[0] * m[5],
                    m[3] * m[7] - m[4] * m[6], m[1] * m[6] - m[0] * m[7], m[0] * m[4] - m[1] * m[3]};
  const double det = determinant(m);
  Mat3 inv{};
  // The exact inverse (not just up to scale) maps image points of visible
  // target points back with a positive denominator.
  for (std::size_t i = 0; i < 9; ++i) inv[i] = adj[i] / det;
  return Homography(inv);
}

Homography Homography::operator*(const Homography& rhs) const { return Homography(multiply(m_, rhs.m_)); }

Homography Homography::scale_translate(double scale, double tx, double ty) {
  return Homography({scale, 0, tx, 0, scale, ty, 0, 0, 1});
}

Homography Homography::similarity(double px_per_edge, double rotation_deg, double cx, double cy, double u0,
                                  double v0) {
  const double t = rotation_deg * std::numbers::pi / 180.0;
  const double c = px_per_edge * std::cos(t);
  const double s = px_per_edge * std::sin(t);
  return Homography({c, -s, u0 - c * cx + s * cy, s, c, v0 - s * cx - c * cy, 0, 0, 1});
}

Homography camera_homography(const CameraView& view) {
  if (!(view.distance > 0.0) || !(view.px_per_edge > 0.0))
    throw DegenerateHomography("camera view needs positive distance and scale");
  const double deg = std::numbers::pi / 180.0;
  const double rz = view.rotation_deg * deg;
  const Mat3 in_plane = {std::cos(rz), -std::sin(rz), 0, std::sin(rz), std::cos(rz), 0, 0, 0, 1};
  // Rodrigues rotation about the in-plane axis n.
  const double a = view.tilt_axis_deg * deg;
  const double t = view.tilt_deg * deg;
  const double nx = std::cos(a), ny = std::sin(a);
  const double c = std::cos(t), s = std::sin(t), k = 1.0 - c;
  const Mat3 tilt = {c + nx * nx * k, nx * ny * k, ny * s,   //
                     nx * ny * k, c + ny * ny * k, -nx * s,  //
                     -ny * s, nx * s, c};
  const Mat3 r = multiply(tilt, in_plane);
  const double f = view.px_per_edge * view.distance;
  // Camera point of target (x, y): R (x - cx, y - cy, 0) + (0, 0, d).
  const double tx = -(r[0] * view.cx + r[1] * view.cy);
  const double ty = -(r[3] * view.cx + r[4] * view.cy);
  const double tz = -(r[6] * view.cx + r[7] * view.cy) + view.distance;
  const Mat3 rt = {r[0], r[1], tx, r[3], r[4], ty, r[6], r[7], tz};
  const Mat3 kmat = {f, 0, view.u0, 0, f, view.v0, 0, 0, 1};
  return Homography(multiply(kmat, rt));
}

GrayImage render_view(const BoardGeometry& geom, const Homography& h, const RenderOptions& options) {
  if (options.supersample < 1) throw std::invalid_argument("render_view: supersample must be >= 1");
  if (options.width < 1 || options.height < 1) throw std::invalid_argument("render_view: empty image");
  const Homography inv = h.inverse();
  const auto& m = inv.matrix();
  const int s = options.supersample;
  const double inv_count = 1.0 / (s * s);

  GrayImage img(options.width, options.height);
  std::vector<double> offsets(static_cast<std::size_t>(s));
  for (int k = 0; k < s; ++k) offsets[static_cast<std::size_t>(k)] = -0.5 + (k + 0.5) / s;

  for (int py = 0; py < options.height; ++py) {
    for (int px = 0; px < options.width; ++px) {
      double acc = 0.0;
      for (int ky = 0; ky < s; ++ky) {
        const double v = py + offsets[static_cast<std::size_t>(ky)];
        for (int kx = 0; kx < s; ++kx) {
          const double u = px + offsets[static_cast<std::size_t>(kx)];
          const double w = m[6] * u + m[7] * v + m[8];
          float value = options.background;
          if (w > 0.0) {
            const double x = (m[0] * u + m[1] * v + m[2]) / w;
            const double y = (m[3] * u + m[4] * v + m[5]) / w;
            if (const auto c = geom.color_at(x, y)) value = level(*c);
          }
          acc += value;
        }
      }
      img(px, py) = static_cast<float>(acc * inv_count);
    }
  }

  if (options.blur_sigma > 0.0) img = gaussian_blur(img, options.blur_sigma);
  if (options.noise_sigma > 0.0) {
    std::mt19937_64 rng(options.noise_seed);
    std::normal_distribution<double> noise(0.0, options.noise_sigma);
    for (auto& p : img.data()) p = static_cast<float>(std::clamp(p + noise(rng), 0.0, 1.0));
  }
  return img;
}

std::vector<GroundTruthCorner> ground_truth(const BoardGeometry& geom, const Homography& h, int width,
                                            int height) {
  std::vector<GroundTruthCorner> out;
  for (int j = 0; j <= geom.pieces_y(); ++j)
    for (int i = 0; i <= geom.pieces_x(); ++i) {
      const auto p = h.apply(i, j);
      if (!p) continue;
      const double u = (*p)[0], v = (*p)[1];
      if (u < 0.0 || v < 0.0 || u > width - 1 || v > height - 1) continue;
      out.push_back({{i, j}, geom.board_corner({i, j}), u, v});
    }
  return out;
}

}  // namespace puzzleboard
