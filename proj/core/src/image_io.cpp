#include "puzzleboard/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cctype>
#include <cstdio>
#include <string>
#include <fstream>
#include <memory>
#include <vector>

namespace puzzleboard {
namespace {

std::uint8_t quantize(float v) {
  return static_cast<std::uint8_t>(std::lround(255.0f * std::clamp(v, 0.0f, 1.0f)));
}

// PGM header tokens may be separated by whitespace and '#' comments.
int read_header_int(std::istream& in, const std::filesystem::path& path) {
  int c = in.peek();
  while (c != EOF) {
    if (c == '#') {
      std::string line;
      std::getline(in, line);
    } else if (std::isspace(c)) {
      in.get();
    } else {
      break;
    }
    c = in.peek();
  }
  int value = 0;
  if (!(in >> value) || value < 0) throw ImageIOError("malformed PGM header: " + path.string());
  return value;
}

struct FileCloser {
  void operator()(std::FILE* f) const noexcept {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
  FilePtr f(std::fopen(path.c_str(), mode));
  if (!f) throw ImageIOError("cannot open " + path.string());
  return f;
}

}  // namespace

GrayImage read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ImageIOError("cannot open " + path.string());
  std::array<char, 2> magic{};
  if (!in.read(magic.data(), 2) || magic[0] != 'P' || magic[1] != '5')
    throw ImageIOError("not a binary PGM (P5) file: " + path.string());
  const int width = read_header_int(in, path);
  const int height = read_header_int(in, path);
  const int maxval = read_header_int(in, path);
  if (width <= 0 || height <= 0 || maxval <= 0 || maxval > 65535)
    throw ImageIOError("unsupported PGM dimensions or maxval: " + path.string());
  in.get();  // single whitespace before the raster

  GrayImage img(width, height);
  const std::size_t bytes_per = maxval > 255 ? 2 : 1;
  std::vector<unsigned char> raw(static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * bytes_per);
  if (!in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size())))
    throw ImageIOError("truncated PGM raster: " + path.string());
  for (std::size_t i = 0; i < img.data().size(); ++i) {
    const int v = bytes_per == 2 ? (raw[2 * i] << 8 | raw[2 * i + 1]) : raw[i];
    img.data()[i] = static_cast<float>(v) / static_cast<float>(maxval);
  }
  return img;
}

void write_pgm(const std::filesystem::path& path, const GrayImage& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ImageIOError("cannot write " + path.string());
  out << "P5\n" << img.width() << ' ' << img.height() << "\n255\n";
  std::vector<char> raw(img.data().size());
  std::transform(img.data().begin(), img.data().end(), raw.begin(),
                 [](float v) { return static_cast<char>(quantize(v)); });
  out.write(raw.data(), static_cast<std::streamsize>(raw.size()));
  if (!out) throw ImageIOError("write failed: " + path.string());
}

GrayImage read_png(const std::filesystem::path& path) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str()))
    throw ImageIOError("cannot read PNG " + path.string() + ": " + image.message);
  image.format = PNG_FORMAT_GRAY;
  std::vector<png_byte> buffer(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
    png_image_free(&image);
    throw ImageIOError("cannot decode PNG " + path.string() + ": " + image.message);
  }
  GrayImage img(static_cast<int>(image.width), static_cast<int>(image.height));
  for (std::size_t i = 0; i < img.data().size(); ++i) img.data()[i] = buffer[i] / 255.0f;
  return img;
}

void write_png(const std::filesystem::path& path, const GrayImage& img) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width());
  image.height = static_cast<png_uint_32>(img.height());
  image.format = PNG_FORMAT_GRAY;
  std::vector<png_byte> buffer(img.data().size());
  std::transform(img.data().begin(), img.data().end(), buffer.begin(), quantize);
  if (!png_image_write_to_file(&image, path.c_str(), 0, buffer.data(), 0, nullptr))
    throw ImageIOError("cannot write PNG " + path.string() + ": " + image.message);
}

GrayImage read_image(const std::filesystem::path& path) {
  std::array<unsigned char, 8> sig{};
  {
    auto f = open_file(path, "rb");
    if (std::fread(sig.data(), 1, sig.size(), f.get()) < 2)
      throw ImageIOError("file too short to be an image: " + path.string());
  }
  if (sig[0] == 'P' && sig[1] == '5') return read_pgm(path);
  if (png_sig_cmp(sig.data(), 0, sig.size()) == 0) return read_png(path);
  throw ImageIOError("unsupported image format (expected PGM P5 or PNG): " + path.string());
}

void write_image(const std::filesystem::path& path, const GrayImage& img) {
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  if (ext == ".png") write_png(path, img);
  else write_pgm(path, img);
}

}  // namespace puzzleboard
