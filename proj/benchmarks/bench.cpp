#include "vai/filters.hpp"
#include "vai/image_io.hpp"
#include "vai/metrics.hpp"
#include "vai/raster.hpp"
#include "vai/texture.hpp"

#include <benchmark/benchmark.h>

#include <cstdint>
#include <random>

namespace {

vai::PixelBuffer test_image(int side) {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> noise(0, 40);
    vai::PixelBuffer img(side, side, 3);
    for (int y = 0; y < side; ++y)
        for (int x = 0; x < side; ++x)
            for (int c = 0; c < 3; ++c)
                img.at(x, y, c) = static_cast<std::uint8_t>(((x / 16 + y / 16) % 2) * 150 + c * 20 + noise(rng));
    return img;
}

void BM_Decode(benchmark::State& state) {
    const auto png = vai::encode_png(test_image(static_cast<int>(state.range(0))));
    for (auto _ : state) benchmark::DoNotOptimize(vai::decode_image(png));
}

void BM_Grayscale(benchmark::State& state) {
    const auto img = test_image(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(vai::to_grayscale(img));
}

void BM_Hsv(benchmark::State& state) {
    const auto img = test_image(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(vai::to_hsv(img));
}

void BM_Blur(benchmark::State& state) {
    const auto gray = vai::to_grayscale(test_image(static_cast<int>(state.range(0))));
    const auto k = vai::gaussian_kernel(1.0);
    for (auto _ : state) benchmark::DoNotOptimize(vai::gaussian_blur(gray, k));
}

void BM_Canny(benchmark::State& state) {
    const auto gray = vai::to_grayscale(test_image(static_cast<int>(state.range(0))));
    for (auto _ : state) benchmark::DoNotOptimize(vai::canny(gray));
}

void BM_Lbp(benchmark::State& state) {
    const auto gray = vai::to_grayscale(test_image(static_cast<int>(state.range(0))));
    for (auto _ : state) benchmark::DoNotOptimize(vai::texture_complexity(gray));
}

void BM_Sobel(benchmark::State& state) {
    const auto gray = vai::to_grayscale(test_image(static_cast<int>(state.range(0))));
    for (auto _ : state) benchmark::DoNotOptimize(vai::contextual_relevance(gray));
}

void BM_Sharpness(benchmark::State& state) {
    const auto gray = vai::to_grayscale(test_image(static_cast<int>(state.range(0))));
    for (auto _ : state) benchmark::DoNotOptimize(vai::image_sharpness(gray));
}

void BM_Smoothness(benchmark::State& state) {
    const auto gray = vai::to_grayscale(test_image(static_cast<int>(state.range(0))));
    for (auto _ : state) benchmark::DoNotOptimize(vai::image_smoothness(gray));
}

void BM_ComputeAll(benchmark::State& state) {
    const auto img = test_image(static_cast<int>(state.range(0)));
    vai::MetricConfig cfg;
    cfg.resize_longest = 0;
    for (auto _ : state) benchmark::DoNotOptimize(vai::compute_all(img, cfg));
    state.SetItemsProcessed(state.iterations());
}

}  // namespace

BENCHMARK(BM_Decode)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Grayscale)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Hsv)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Blur)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Canny)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Lbp)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Sobel)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Sharpness)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Smoothness)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ComputeAll)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
