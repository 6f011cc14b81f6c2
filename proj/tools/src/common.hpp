#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"
#include "puzzleboard/lattice.hpp"

namespace pbcli {

enum ExitCode : int { kOk = 0, kNoResult = 1, kUsage = 2 };

/// Thrown by a command to end the process with `code` and a message.
class Failure : public std::runtime_error {
 public:
  Failure(int code, const std::string& what) : std::runtime_error(what), code_(code) {}
  int code() const noexcept { return code_; }

 private:
  int code_;
};

/// Flags every subcommand understands.
struct Shared {
  int verbosity = 0;
};

using Runner = std::function<int()>;

// Each adds its subcommand to `app` and returns the function that runs it
// once parsing succeeded.
Runner add_generate(CLI::App& app, const Shared& shared);
Runner add_render(CLI::App& app, const Shared& shared);
Runner add_detect(CLI::App& app, const Shared& shared);
Runner add_bench(CLI::App& app, const Shared& shared);
Runner add_rings(CLI::App& app, const Shared& shared);

/// Messages at `level` and below are printed to stderr.
void log(const Shared& shared, int level, const std::string& message);

puzzleboard::Orientation orientation_from_degrees(int deg);

/// Writes to `path`, or stdout for "-". Throws Failure(kUsage) on I/O errors.
void write_text(const std::string& path, const std::string& text);

/// Window of the board: origin in [0, 501), extent in [1, 501] pieces.
void check_window(int origin_x, int origin_y, int pieces_x, int pieces_y);

}  // namespace pbcli
