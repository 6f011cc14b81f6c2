#include <benchmark/benchmark.h>

#include <map>
#include <random>
#include <utility>

#include "oracles.hpp"
#include "puzzleboard/decoder.hpp"
#include "puzzleboard/pipeline.hpp"
#include "scenes.hpp"

namespace pb = puzzleboard;

namespace {

// Frames are rendered once per size; rendering dominates otherwise.
const scene::Scene& frame(int width, int height) {
  static std::map<std::pair<int, int>, scene::Scene> cache;
  auto it = cache.find({width, height});
  if (it == cache.end()) it = cache.emplace(std::pair{width, height}, scene::bench_frame(width, height)).first;
  return it->second;
}

void sizes(benchmark::internal::Benchmark* b) {
  for (const auto& [w, h] : {std::pair{232, 174}, {464, 348}, {928, 696}, {1392, 1044}, {1920, 1080}, {2188, 1640}})
    b->Args({w, h});
}

}  // namespace

static void BM_HessianResponse(benchmark::State& state) {
  const auto& img = frame(static_cast<int>(state.range(0)), static_cast<int>(state.range(1))).image;
  for (auto _ : state) benchmark::DoNotOptimize(pb::hessian_response(img));
  state.SetItemsProcessed(state.iterations() * img.width() * img.height());
}
BENCHMARK(BM_HessianResponse)->Apply(sizes)->Unit(benchmark::kMillisecond);

static void BM_DetectCorners(benchmark::State& state) {
  const auto& img = frame(static_cast<int>(state.range(0)), static_cast<int>(state.range(1))).image;
  for (auto _ : state) benchmark::DoNotOptimize(pb::detect_corners(img));
  state.SetItemsProcessed(state.iterations() * img.width() * img.height());
}
BENCHMARK(BM_DetectCorners)->Apply(sizes)->Unit(benchmark::kMillisecond);

static void BM_BuildGrid(benchmark::State& state) {
  const auto& img = frame(static_cast<int>(state.range(0)), static_cast<int>(state.range(1))).image;
  const auto corners = pb::detect_corners(img);
  for (auto _ : state) {
    state.PauseTiming();
    auto copy = corners;
    state.ResumeTiming();
    benchmark::DoNotOptimize(pb::build_grid(copy));
  }
  state.counters["corners"] = static_cast<double>(corners.size());
}
BENCHMARK(BM_BuildGrid)->Apply(sizes)->Unit(benchmark::kMillisecond);

static void BM_Detect(benchmark::State& state) {
  const auto& img = frame(static_cast<int>(state.range(0)), static_cast<int>(state.range(1))).image;
  const pb::Pipeline pipeline;
  std::size_t corners = 0;
  for (auto _ : state) corners = pipeline.detect(img).corners.size();
  state.counters["corners"] = static_cast<double>(corners);
  state.SetItemsProcessed(state.iterations() * img.width() * img.height());
}
BENCHMARK(BM_Detect)->Apply(sizes)->Unit(benchmark::kMillisecond);

// Decoding alone, on error-free windows of k x k pieces.
static void BM_DecodePosition(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  std::mt19937 rng(1);
  std::vector<pb::ObservedCode> windows;
  for (int i = 0; i < 16; ++i)
    windows.push_back(pb::expected_bits(pb::BoardCode::canonical(), {static_cast<int>(rng() % 501), static_cast<int>(rng() % 501)},
                                        pb::orientation_from_turns(static_cast<int>(rng() % 4)), k, k));
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(pb::decode_position(windows[i++ % windows.size()], pb::BoardCode::canonical()));
}
BENCHMARK(BM_DecodePosition)->Arg(4)->Arg(10)->Arg(22)->Arg(70)->Unit(benchmark::kMicrosecond);

static void BM_DecodeFullPeriod(benchmark::State& state) {
  const auto obs = oracle::full_period(pb::BoardCode::canonical(), 17, 301);
  for (auto _ : state) benchmark::DoNotOptimize(pb::decode_position(obs, pb::BoardCode::canonical()));
}
BENCHMARK(BM_DecodeFullPeriod)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
