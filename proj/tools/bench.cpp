// Timing comparison of the serial reference implementations against the
// OpenMP-parallel ones. Not part of the test suite; build and run by hand.
#include <chrono>
#include <cstdio>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "pimmap/array_sim.hpp"
#include "pimmap/planner.hpp"

using namespace pimmap;

namespace {

template <typename F>
double time_ms(int repeats, F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < repeats; ++i) f();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / repeats;
}

void report(const char* name, double serial_ms, double parallel_ms) {
    std::printf("%-22s serial %9.3f ms   parallel %9.3f ms   speedup %.2fx\n", name, serial_ms,
                parallel_ms, serial_ms / parallel_ms);
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP disabled; both columns run the same serial code\n");
#endif

    {
        const LayerSpec layer{"search", 224, 224, 3, 3, 64, 64};
        const ArraySpec array{512, 512};
        volatile i64 sink = 0;
        const double serial =
            time_ms(10, [&] { sink = sink + plan_vwsdk_serial(layer, array).plan.total_cycles; });
        const double parallel =
            time_ms(10, [&] { sink = sink + plan_vwsdk(layer, array).plan.total_cycles; });
        report("variable-window search", serial, parallel);
    }

    {
        const LayerSpec layer{"sim", 32, 32, 3, 3, 8, 16};
        const ArraySpec array{128, 64};
        const MappingPlan plan = plan_vwsdk(layer, array).plan;
        const ArrayLayout layout = build_layout(layer, array, plan);
        std::mt19937_64 rng(7);
        std::uniform_int_distribution<i64> dist(-4, 4);
        Tensor3 ifm(layer.in_ch, layer.ifm_h, layer.ifm_w);
        Tensor4 weights(layer.out_ch, layer.in_ch, layer.k_h, layer.k_w);
        for (auto& v : ifm.data) v = dist(rng);
        for (auto& v : weights.data) v = dist(rng);

        volatile i64 sink = 0;
        SimOptions serial_opts{false, {}};
        SimOptions parallel_opts{true, {}};
        const double serial = time_ms(
            5, [&] { sink = sink + simulate(layer, layout, ifm, weights, serial_opts).ofm.data[0]; });
        const double parallel = time_ms(
            5, [&] { sink = sink + simulate(layer, layout, ifm, weights, parallel_opts).ofm.data[0]; });
        report("cycle simulation", serial, parallel);
    }

    {
        Tensor3 ifm(16, 64, 64);
        Tensor4 weights(32, 16, 3, 3);
        std::mt19937_64 rng(11);
        std::uniform_int_distribution<i64> dist(-4, 4);
        for (auto& v : ifm.data) v = dist(rng);
        for (auto& v : weights.data) v = dist(rng);

        volatile i64 sink = 0;
#ifdef _OPENMP
        const int max_threads = omp_get_max_threads();
        omp_set_num_threads(1);
        const double serial = time_ms(5, [&] { sink = sink + reference_conv(ifm, weights).data[0]; });
        omp_set_num_threads(max_threads);
#else
        const double serial = time_ms(5, [&] { sink = sink + reference_conv(ifm, weights).data[0]; });
#endif
        const double parallel = time_ms(5, [&] { sink = sink + reference_conv(ifm, weights).data[0]; });
        report("direct convolution", serial, parallel);
    }
    return 0;
}
