#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace puzzleboard {

/// Dense row-major matrix of 0/1 values with cyclic read access.
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(int rows, int cols, std::uint8_t fill = 0);

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  bool empty() const noexcept { return bits_.empty(); }

  std::uint8_t operator()(int r, int c) const noexcept { return bits_[index(r, c)]; }
  std::uint8_t& operator()(int r, int c) noexcept { return bits_[index(r, c)]; }

  /// Reads with both indices taken modulo the matrix shape.
  std::uint8_t cyclic(int r, int c) const noexcept;

  BitMatrix rotated90() const;  ///< clockwise quarter turn
  BitMatrix rotated180() const;
  BitMatrix rotated270() const;

  std::span<const std::uint8_t> data() const noexcept { return bits_; }

  /// One line of '0'/'1' characters per row, each terminated by '\n'.
  std::string to_text() const;

  friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

 private:
  std::size_t index(int r, int c) const noexcept {
    return static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) +
           static_cast<std::size_t>(c);
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<std::uint8_t> bits_;
};

}  // namespace puzzleboard
