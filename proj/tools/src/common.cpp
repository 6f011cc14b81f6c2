#include "common.hpp"

#include <fstream>
#include <iostream>

namespace pbcli {

void log(const Shared& shared, int level, const std::string& message) {
  if (level <= shared.verbosity) std::cerr << message << '\n';
}

puzzleboard::Orientation orientation_from_degrees(int deg) {
  if (deg % 90 != 0 || deg < 0 || deg >= 360) throw Failure(kUsage, "orientation must be 0, 90, 180 or 270");
  return puzzleboard::orientation_from_turns(deg / 90);
}

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Failure(kUsage, "cannot write " + path);
  out << text;
  if (!out) throw Failure(kUsage, "write failed: " + path);
}

void check_window(int origin_x, int origin_y, int pieces_x, int pieces_y) {
  using puzzleboard::kBoardSize;
  if (pieces_x < 1 || pieces_y < 1 || pieces_x > kBoardSize || pieces_y > kBoardSize)
    throw Failure(kUsage, "extent must be 1.." + std::to_string(kBoardSize) + " pieces per side, got " +
                              std::to_string(pieces_x) + "x" + std::to_string(pieces_y));
  if (origin_x < 0 || origin_y < 0 || origin_x >= kBoardSize || origin_y >= kBoardSize)
    throw Failure(kUsage, "origin must lie in [0, " + std::to_string(kBoardSize) + ")");
}

}  // namespace pbcli
