#include "puzzleboard/bit_matrix.hpp"

#include <stdexcept>

#include "puzzleboard/lattice.hpp"

namespace puzzleboard {

std::string_view to_string(Orientation o) noexcept {
  switch (o) {
    case Orientation::deg0: return "0";
    case Orientation::deg90: return "90";
    case Orientation::deg180: return "180";
    case Orientation::deg270: return "270";
  }
  return "?";
}

BitMatrix::BitMatrix(int rows, int cols, std::uint8_t fill) : rows_(rows), cols_(cols) {
  if (rows < 0 || cols < 0) throw std::invalid_argument("BitMatrix: negative shape");
  bits_.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), fill ? 1 : 0);
}

std::uint8_t BitMatrix::cyclic(int r, int c) const noexcept {
  return (*this)(positive_mod(r, rows_), positive_mod(c, cols_));
}

BitMatrix BitMatrix::rotated90() const {
  BitMatrix out(cols_, rows_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) out(c, rows_ - 1 - r) = (*this)(r, c);
  return out;
}

BitMatrix BitMatrix::rotated180() const {
  BitMatrix out(rows_, cols_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) out(rows_ - 1 - r, cols_ - 1 - c) = (*this)(r, c);
  return out;
}

BitMatrix BitMatrix::rotated270() const { return rotated180().rotated90(); }

std::string BitMatrix::to_text() const {
  std::string out;
  out.reserve(static_cast<std::size_t>(rows_) * static_cast<std::size_t>(cols_ + 1));
  for (int r = 0; r < rows_; ++r) {
    for (int c = 0; c < cols_; ++c) out.push_back((*this)(r, c) ? '1' : '0');
    out.push_back('\n');
  }
  return out;
}

}  // namespace puzzleboard
