#include <benchmark/benchmark.h>

#include <random>

#include "semaug/affinity.hpp"
#include "semaug/alignment.hpp"
#include "semaug/ddim.hpp"
#include "semaug/schedule.hpp"
#include "semaug/strategy.hpp"

using namespace semaug;

namespace {

EmbeddingTable random_table(std::size_t categories, std::size_t dimension) {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    EmbeddingTable table;
    table.dimension = dimension;
    for (std::size_t i = 0; i < categories; ++i) {
        table.names.push_back("c" + std::to_string(i));
        std::vector<double> v(dimension);
        for (auto& x : v) x = dist(gen);
        table.vectors.push_back(std::move(v));
    }
    return table;
}

void BM_BuildAffinityMatrix(benchmark::State& state) {
    const auto table = random_table(state.range(0), 512);
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_affinity_matrix(table));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_BuildAffinityMatrix)->Range(8, 512)->Complexity();

void BM_AffinityThreshold(benchmark::State& state) {
    const auto matrix = build_affinity_matrix(random_table(state.range(0), 64));
    for (auto _ : state) {
        benchmark::DoNotOptimize(affinity_threshold(matrix, 0.03));
    }
}
BENCHMARK(BM_AffinityThreshold)->Range(8, 512);

void BM_SelectionProbabilities(benchmark::State& state) {
    const auto matrix = build_affinity_matrix(random_table(32, 64));
    std::vector<ObjectAnnotation> objects(state.range(0));
    for (std::size_t i = 0; i < objects.size(); ++i) {
        objects[i].annotation_id = static_cast<std::int64_t>(i);
        objects[i].category = "c" + std::to_string(i % 32);
        objects[i].bbox = BBox{0, 0, 10.0 + i, 12.0};
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(selection_probabilities(objects, matrix, 0.35, 640.0 * 480.0));
    }
}
BENCHMARK(BM_SelectionProbabilities)->Range(2, 64);

void BM_InvertTrajectory(benchmark::State& state) {
    const auto schedule = make_schedule(static_cast<int>(state.range(0)));
    ConstantDenoiser denoiser(0.1);
    Latent z0(4, 64, 64, 0.5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(invert(z0, denoiser, schedule));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_InvertTrajectory)->Arg(10)->Arg(50);

void BM_AlignStep(benchmark::State& state) {
    const int side = static_cast<int>(state.range(0));
    Latent a(4, side, side, 1.0);
    Latent b(4, side, side, 2.0);
    RegionMask mask;
    mask.height = side;
    mask.width = side;
    mask.values.assign(static_cast<std::size_t>(side) * side, 0);
    for (int i = 0; i < side * side / 2; ++i) mask.values[i] = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(align_step(a, b, mask));
    }
    state.SetBytesProcessed(state.iterations() * a.size() * sizeof(double));
}
BENCHMARK(BM_AlignStep)->Arg(32)->Arg(64)->Arg(128);

void BM_BBoxToLatentMask(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            bbox_to_latent_mask(BBox{37.5, 12.25, 130.0, 220.0}, 512, 512, 64, 64));
    }
}
BENCHMARK(BM_BBoxToLatentMask);

}  // namespace

BENCHMARK_MAIN();
