#pragma once

#include <filesystem>
#include <stdexcept>

#include "puzzleboard/image.hpp"

namespace puzzleboard {

class ImageIOError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// 8-bit grayscale only. Intensities are quantised as round(255 * clamp(v)).
// Readers map 0..maxval onto [0, 1].

GrayImage read_pgm(const std::filesystem::path& path);
void write_pgm(const std::filesystem::path& path, const GrayImage& img);

/// Colour PNGs are converted to gray; 16-bit PNGs are reduced to 8 bits.
GrayImage read_png(const std::filesystem::path& path);
void write_png(const std::filesystem::path& path, const GrayImage& img);

/// Dispatches on the file signature (P5 or PNG).
GrayImage read_image(const std::filesystem::path& path);
/// Dispatches on the extension: ".png" writes PNG, anything else PGM.
void write_image(const std::filesystem::path& path, const GrayImage& img);

}  // namespace puzzleboard
