#include <filesystem>
#include <sstream>
#include <vector>

#include "common.hpp"
#include "puzzleboard/board_code.hpp"
#include "puzzleboard/decoder.hpp"
#include "puzzleboard/orientation_analysis.hpp"
#include "puzzleboard/ring.hpp"

namespace pbcli {
namespace {

namespace pb = puzzleboard;

struct RingsOptions {
  bool verify = false;
  bool regenerate = false;
  std::uint64_t seed = 2024;
  int iterations = 20000;
  std::string ring_a;
  std::string ring_b;
  std::string out_dir = ".";
};

struct Check {
  std::string name;
  bool ok = true;
  std::string detail;
};

std::string percent(double ratio) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(3);
  s << 100.0 * ratio << '%';
  return s.str();
}

std::vector<Check> verify(const pb::DeBruijnRing& a, const pb::DeBruijnRing& b) {
  std::vector<Check> checks;
  for (const auto& [name, ring] : {std::pair{"ring A sub-perfect", &a}, std::pair{"ring B sub-perfect", &b}}) {
    const auto r = pb::validate_subperfect(*ring);
    std::string detail = std::to_string(r.distinct_windows) + "/501 distinct windows";
    for (const auto& c : r.collisions)
      detail += "; window (" + std::to_string(c.repeat.row) + "," + std::to_string(c.repeat.col) + ") repeats (" +
                std::to_string(c.first.row) + "," + std::to_string(c.first.col) + ")";
    checks.push_back({name, r.ok, detail});
  }
  if (!checks[0].ok || !checks[1].ok) return checks;

  const pb::BoardCode board(a, b);
  std::vector<bool> seen(1u << 18, false);
  int unique = 0;
  for (int y = 0; y < pb::kBoardSize; ++y) {
    for (int x = 0; x < pb::kBoardSize; ++x) {
      const auto code = board.piece_code18({x, y});
      if (!seen[code]) ++unique;
      seen[code] = true;
    }
  }
  constexpr int kPositions = pb::kBoardSize * pb::kBoardSize;
  checks.push_back({"3x3 windows unique at known orientation", unique == kPositions,
                    std::to_string(unique) + "/" + std::to_string(kPositions) + " distinct 18-bit codes"});

  const auto c4 = pb::orientation_collisions(board, 4);
  checks.push_back({"4x4 windows unique under rotation", c4.colliding == 0,
                    std::to_string(c4.colliding) + " of " + std::to_string(c4.total) + " keys collide"});
  const auto c3 = pb::orientation_collisions(board, 3);
  checks.push_back({"3x3 rotational uniqueness", true, percent(c3.unique_ratio)});

  const auto hp = pb::hamming_profile(a, b);
  checks.push_back({"Hamming profile", true,
                    "min pair distance " + std::to_string(hp.min_pair_distance) + ", min wrong-placement distance " +
                        std::to_string(hp.min_wrong_placement_hamming) + " bits, " +
                        std::to_string(hp.guaranteed_correctable_bits) + " correctable folded bits"});
  return checks;
}

int report(const std::vector<Check>& checks) {
  std::ostringstream out;
  bool ok = true;
  for (const auto& c : checks) {
    out << (c.ok ? "ok    " : "FAIL  ") << c.name << ": " << c.detail << '\n';
    ok = ok && c.ok;
  }
  out << (ok ? "rings verified\n" : "rings FAILED verification\n");
  write_text("-", out.str());
  return ok ? kOk : kNoResult;
}

pb::DeBruijnRing load(const std::string& path) {
  if (!std::filesystem::exists(path)) throw Failure(kUsage, "cannot open ring file " + path);
  try {
    return pb::read_ring_file(path);
  } catch (const std::invalid_argument& e) {
    // Readable but malformed counts as a failed verification.
    throw Failure(kNoResult, path + ": " + e.what());
  } catch (const std::runtime_error& e) {
    throw Failure(kUsage, e.what());
  }
}

int run(const RingsOptions& o, const Shared& shared) {
  if (o.regenerate) {
    log(shared, 1, "rings: searching " + std::to_string(o.iterations) + " iterations, seed " + std::to_string(o.seed));
    pb::RingPairSearch found;
    try {
      found = pb::optimize_ring_pair(o.iterations, o.seed);
    } catch (const pb::RingSearchError& e) {
      std::ostringstream msg;
      msg << e.what() << " (best: " << e.best().collisions4.colliding << " 4x4 collisions)";
      throw Failure(kNoResult, msg.str());
    }
    const std::filesystem::path dir(o.out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    const std::string comment = "seed " + std::to_string(o.seed) + ", " + std::to_string(o.iterations) + " iterations";
    try {
      pb::write_ring_file(dir / "ring_a.txt", found.rings.a, "ring A, " + comment);
      pb::write_ring_file(dir / "ring_b.txt", found.rings.b, "ring B, " + comment);
    } catch (const std::runtime_error& e) {
      throw Failure(kUsage, e.what());
    }
    return report(verify(found.rings.a, found.rings.b));
  }
  if (o.ring_a.empty()) {
    const auto& board = pb::BoardCode::canonical();
    return report(verify(board.ring_a(), board.ring_b()));
  }
  return report(verify(load(o.ring_a), load(o.ring_b)));
}

}  // namespace

Runner add_rings(CLI::App& app, const Shared& shared) {
  auto opts = std::make_shared<RingsOptions>();
  auto* cmd = app.add_subcommand("rings", "Verify the shipped ring pair or search for a new one");
  auto* verify_flag = cmd->add_flag("--verify", opts->verify, "Check sub-perfectness, uniqueness and distances");
  auto* regen = cmd->add_flag("--regenerate", opts->regenerate, "Hill-climb a new ring pair and write it");
  regen->excludes(verify_flag);
  cmd->add_option("--seed", opts->seed, "Search seed")->needs(regen);
  cmd->add_option("--iterations", opts->iterations, "Hill-climbing iterations")->needs(regen)->check(CLI::PositiveNumber);
  cmd->add_option("--out-dir", opts->out_dir, "Directory for ring_a.txt and ring_b.txt")->needs(regen);
  auto* a = cmd->add_option("--ring-a", opts->ring_a, "Ring A file to verify (default: shipped pair)")->excludes(regen);
  auto* b = cmd->add_option("--ring-b", opts->ring_b, "Ring B file to verify")->excludes(regen);
  a->needs(b);
  b->needs(a);
  return [opts, &shared] { return run(*opts, shared); };
}

}  // namespace pbcli
