// Serial reference kernels against the OpenMP fast path on phantom stacks.
//   mprad_bench --benchmark_filter=tscm
#include <benchmark/benchmark.h>

#include <omp.h>

#include <map>

#include "mprad/featuremap.hpp"
#include "mprad/phantom.hpp"

using namespace mprad;

namespace {

const QuantizedStack& stack(int size, int levels) {
    static std::map<std::pair<int, int>, QuantizedStack> cache;
    auto it = cache.find({size, levels});
    if (it == cache.end()) {
        const auto ph = phantom::generate(phantom::preset("two-texture", size, 7));
        it = cache.emplace(std::pair{size, levels}, quantize(ph.stack, levels)).first;
    }
    return it->second;
}

KernelConfig config(Family family, const char* preset) {
    KernelConfig cfg = preset_config(preset);
    cfg.family = family;
    cfg.feature = "entropy";
    return cfg;
}

void reference(benchmark::State& state, Family family, const char* preset) {
    const KernelConfig cfg = config(family, preset);
    const auto& q = stack(static_cast<int>(state.range(0)), cfg.levels);
    for (auto _ : state) benchmark::DoNotOptimize(compute_map_reference(q, cfg));
    state.SetItemsProcessed(state.iterations() * q.width() * q.height());
}

void parallel(benchmark::State& state, Family family, const char* preset) {
    const KernelConfig cfg = config(family, preset);
    const auto& q = stack(static_cast<int>(state.range(0)), cfg.levels);
    const int threads = static_cast<int>(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(compute_map(q, cfg, {threads}));
    state.SetItemsProcessed(state.iterations() * q.width() * q.height());
    state.counters["threads"] = threads;
}

void thread_args(benchmark::internal::Benchmark* b) {
    const int max_threads = omp_get_max_threads();
    for (int size : {64, 128}) {
        for (int t = 1; t <= max_threads; t *= 2) b->Args({size, t});
        if ((max_threads & (max_threads - 1)) != 0) b->Args({size, max_threads});
    }
}

}  // namespace

BENCHMARK_CAPTURE(reference, tspm_usc, Family::tspm, "usc")->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(parallel, tspm_usc, Family::tspm, "usc")->Apply(thread_args)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(reference, tscm_usc, Family::tscm, "usc")->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(parallel, tscm_usc, Family::tscm, "usc")->Apply(thread_args)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(reference, glcm_breast, Family::glcm, "breast")->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(parallel, glcm_breast, Family::glcm, "breast")->Apply(thread_args)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(reference, tsrm_stroke, Family::tsrm, "stroke")->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(parallel, tsrm_stroke, Family::tsrm, "stroke")->Apply(thread_args)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
