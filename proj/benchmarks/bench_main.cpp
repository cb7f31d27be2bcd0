#include <benchmark/benchmark.h>

#include <cstdint>

#include "texclass/features.hpp"
#include "texclass/fractal.hpp"
#include "texclass/glcm.hpp"
#include "texclass/gmrf.hpp"
#include "texclass/image.hpp"
#include "texclass/morphology.hpp"
#include "texclass/rlm.hpp"

namespace {

std::uint64_t mix(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

texclass::GrayImage noise_image(int size, std::uint64_t seed) {
    texclass::GrayImage img(size, size);
    for (std::size_t i = 0; i < img.data.size(); ++i)
        img.data[i] = static_cast<double>(mix(seed + i) & 0xFF);
    return img;
}

const texclass::GrayImage& img256() {
    static const texclass::GrayImage img = noise_image(256, 7);
    return img;
}

const texclass::GrayImage& img512() {
    static const texclass::GrayImage img = noise_image(512, 7);
    return img;
}

void bm_quantize(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(texclass::quantize(img256(), 32));
}
BENCHMARK(bm_quantize);

void bm_glcm_haralick(benchmark::State& state) {
    const texclass::QuantizedImage q = texclass::quantize(img256(), 32);
    for (auto _ : state)
        for (texclass::Angle a : texclass::kAngles)
            benchmark::DoNotOptimize(texclass::haralick(texclass::glcm(q, 1, a)));
}
BENCHMARK(bm_glcm_haralick);

void bm_rlm(benchmark::State& state) {
    const texclass::QuantizedImage q = texclass::quantize(img256(), 32);
    const std::int64_t pixels = static_cast<std::int64_t>(q.width) * q.height;
    for (auto _ : state)
        for (texclass::Angle a : texclass::kAngles)
            benchmark::DoNotOptimize(texclass::rlm_features(texclass::rlm(q, a), pixels));
}
BENCHMARK(bm_rlm);

void bm_gradient(benchmark::State& state) {
    const texclass::StructuringElement se = texclass::StructuringElement::square(5);
    for (auto _ : state) benchmark::DoNotOptimize(texclass::gradient(img512(), se));
}
BENCHMARK(bm_gradient);

void bm_gmrf(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(texclass::gmrf_estimate(img256()));
}
BENCHMARK(bm_gmrf);

void bm_fd_image(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(texclass::fbm_fd_image(img256(), {}));
}
BENCHMARK(bm_fd_image);

void bm_extract_all(benchmark::State& state) {
    const std::vector<texclass::Measure> all(std::begin(texclass::kAllMeasures),
                                             std::end(texclass::kAllMeasures));
    for (auto _ : state)
        benchmark::DoNotOptimize(texclass::extract_measures(img256(), all, {}));
}
BENCHMARK(bm_extract_all);

}  // namespace

BENCHMARK_MAIN();
