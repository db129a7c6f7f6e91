#include "pimmap/planner.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <tuple>

namespace pimmap {

namespace {

MappingPlan make_full_channel_plan(Method method, const LayerSpec& layer, const WindowShape& w,
                                   const CycleBreakdown& b) {
    MappingPlan p;
    p.method = method;
    p.window = w;
    p.ic_tile = layer.in_ch;
    p.oc_tile = layer.out_ch;
    p.windows_per_pw = windows_per_pw(layer, w);
    p.num_pw = b.num_pw;
    p.ar_cycles = b.ar_cycles;
    p.ac_cycles = b.ac_cycles;
    p.total_cycles = b.total;
    return p;
}

// Scan order of Algorithm-style search, linearized. The first row starts
// one past the kernel width (the kernel-sized window itself is the im2col
// seed); every later row starts at the kernel width.
struct ScanSpace {
    int k_w, k_h, ifm_w, ifm_h;

    i64 size() const {
        return i64(ifm_w - k_w) + i64(ifm_h - k_h) * i64(ifm_w - k_w + 1);
    }
    WindowShape at(i64 idx) const {
        const i64 first_row = ifm_w - k_w;
        if (idx < first_row) return {k_w + 1 + int(idx), k_h};
        const i64 rest = idx - first_row;
        const i64 row_len = ifm_w - k_w + 1;
        return {k_w + int(rest % row_len), k_h + 1 + int(rest / row_len)};
    }
};

VwSearchResult finish_search(const LayerSpec& layer, const ArraySpec& array,
                             SearchTrace trace) {
    // Entry 0 is the seed; candidates win only on strict improvement, and
    // among candidates the earliest scanned one wins ties.
    i64 best_idx = 0;
    for (i64 i = 1; i < i64(trace.entries.size()); ++i) {
        const auto& e = trace.entries[i];
        if (e.cycles && e.cycles->total < trace.entries[best_idx].cycles->total) best_idx = i;
    }

    const auto& best = trace.entries[best_idx];
    MappingPlan plan;
    if (best_idx == 0) {
        plan = make_full_channel_plan(Method::VWSDK, layer, best.window, *best.cycles);
    } else {
        plan.method = Method::VWSDK;
        plan.window = best.window;
        plan.ic_tile = tiled_ic(array, best.window, layer.in_ch);
        plan.oc_tile = tiled_oc(array, layer, best.window);
        plan.windows_per_pw = windows_per_pw(layer, best.window);
        plan.num_pw = best.cycles->num_pw;
        plan.ar_cycles = best.cycles->ar_cycles;
        plan.ac_cycles = best.cycles->ac_cycles;
        plan.total_cycles = best.cycles->total;
    }
    return {plan, std::move(trace)};
}

}  // namespace

MappingPlan plan_im2col(const LayerSpec& layer, const ArraySpec& array) {
    validate_layer(layer);
    validate_array(array);
    const WindowShape kernel{layer.k_w, layer.k_h};
    return make_full_channel_plan(Method::Im2col, layer, kernel, im2col_cycles(layer, array));
}

MappingPlan plan_sdk(const LayerSpec& layer, const ArraySpec& array) {
    validate_layer(layer);
    validate_array(array);
    const CycleBreakdown base = im2col_cycles(layer, array);
    MappingPlan best =
        make_full_channel_plan(Method::SDK, layer, {layer.k_w, layer.k_h}, base);

    const int pw_lo = std::max(layer.k_w, layer.k_h);
    const int pw_hi = std::min(layer.ifm_w, layer.ifm_h);
    for (int pw = pw_lo; pw <= pw_hi; ++pw) {
        if (pw == layer.k_w && pw == layer.k_h) continue;  // the im2col baseline itself
        const CycleBreakdown b = sdk_window_cycles(layer, array, pw);
        if (b.ar_cycles > base.ar_cycles || b.ac_cycles > base.ac_cycles) continue;
        if (b.total < best.total_cycles)
            best = make_full_channel_plan(Method::SDK, layer, {pw, pw}, b);
    }
    return best;
}

VwSearchResult plan_vwsdk_serial(const LayerSpec& layer, const ArraySpec& array) {
    validate_layer(layer);
    validate_array(array);
    SearchTrace trace;
    trace.entries.push_back({{layer.k_w, layer.k_h}, im2col_cycles(layer, array)});

    int pw_w = layer.k_w;
    int pw_h = layer.k_h;
    while (true) {
        ++pw_w;
        if (pw_w > layer.ifm_w) {
            pw_w = layer.k_w;
            ++pw_h;
            if (pw_h > layer.ifm_h) break;
        }
        const WindowShape w{pw_w, pw_h};
        trace.entries.push_back({w, try_vw_cycles(layer, array, w)});
    }
    return finish_search(layer, array, std::move(trace));
}

VwSearchResult plan_vwsdk(const LayerSpec& layer, const ArraySpec& array) {
    validate_layer(layer);
    validate_array(array);
    const ScanSpace scan{layer.k_w, layer.k_h, layer.ifm_w, layer.ifm_h};
    const i64 n = scan.size();

    SearchTrace trace;
    trace.entries.resize(n + 1);
    trace.entries[0] = {{layer.k_w, layer.k_h}, im2col_cycles(layer, array)};

#pragma omp parallel for schedule(static)
    for (i64 i = 0; i < n; ++i) {
        const WindowShape w = scan.at(i);
        trace.entries[i + 1] = {w, try_vw_cycles(layer, array, w)};
    }
    return finish_search(layer, array, std::move(trace));
}

MappingPlan plan_oracle(const LayerSpec& layer, const ArraySpec& array, i64 budget) {
    validate_layer(layer);
    validate_array(array);

    // Count scored tuples up front so oversized instances fail fast.
    i64 tuples = 0;
    for (int ph = layer.k_h; ph <= layer.ifm_h; ++ph) {
        for (int pw = layer.k_w; pw <= layer.ifm_w; ++pw) {
            const WindowShape w{pw, ph};
            const auto ict = try_tiled_ic(array, w, layer.in_ch);
            const auto oct = try_tiled_oc(array, layer, w);
            if (!ict || !oct) continue;
            tuples += i64(*ict) * i64(*oct);
            if (tuples > budget)
                throw std::length_error("oracle enumeration would exceed budget of " +
                                        std::to_string(budget) + " tuples");
        }
    }

    const MappingPlan seed = plan_im2col(layer, array);
    struct Best {
        i64 total;
        int pw, ph, ict, oct;
    };
    Best best{seed.total_cycles, 0, 0, 0, 0};  // pw==0 marks the im2col seed

    const int n_ph = layer.ifm_h - layer.k_h + 1;
    const int n_pw = layer.ifm_w - layer.k_w + 1;
#pragma omp parallel
    {
        Best local = best;
#pragma omp for schedule(static) collapse(2) nowait
        for (int yi = 0; yi < n_ph; ++yi) {
            for (int xi = 0; xi < n_pw; ++xi) {
                const WindowShape w{layer.k_w + xi, layer.k_h + yi};
                const auto max_ic = try_tiled_ic(array, w, layer.in_ch);
                const auto max_oc = try_tiled_oc(array, layer, w);
                if (!max_ic || !max_oc) continue;
                const i64 npw = num_parallel_windows(layer, w);
                for (int ic = 1; ic <= *max_ic; ++ic) {
                    const i64 ar = ar_cycles_tiled(layer.in_ch, ic);
                    for (int oc = 1; oc <= *max_oc; ++oc) {
                        const i64 t = npw * ar * ac_cycles_tiled(layer.out_ch, oc);
                        const Best cand{t, w.pw_w, w.pw_h, ic, oc};
                        if (cand.total < local.total ||
                            (cand.total == local.total &&
                             std::tie(cand.ph, cand.pw, cand.ict, cand.oct) <
                                 std::tie(local.ph, local.pw, local.ict, local.oct)))
                            local = cand;
                    }
                }
            }
        }
#pragma omp critical
        {
            if (local.total < best.total ||
                (local.total == best.total &&
                 std::tie(local.ph, local.pw, local.ict, local.oct) <
                     std::tie(best.ph, best.pw, best.ict, best.oct)))
                best = local;
        }
    }

    if (best.pw == 0) return seed;
    MappingPlan p;
    p.method = Method::VWSDK;
    p.window = {best.pw, best.ph};
    p.ic_tile = best.ict;
    p.oc_tile = best.oct;
    p.windows_per_pw = windows_per_pw(layer, p.window);
    p.num_pw = num_parallel_windows(layer, p.window);
    p.ar_cycles = ar_cycles_tiled(layer.in_ch, best.ict);
    p.ac_cycles = ac_cycles_tiled(layer.out_ch, best.oct);
    p.total_cycles = p.num_pw * p.ar_cycles * p.ac_cycles;
    return p;
}

MappingPlan plan_for_method(const LayerSpec& layer, const ArraySpec& array, Method method) {
    switch (method) {
    case Method::Im2col: return plan_im2col(layer, array);
    case Method::SDK: return plan_sdk(layer, array);
    case Method::VWSDK: return plan_vwsdk(layer, array).plan;
    }
    throw std::logic_error("unreachable");
}

NetworkPlan plan_network(const NetworkSpec& net, const ArraySpec& array, Method method) {
    validate_network(net);
    validate_array(array);
    NetworkPlan result;
    result.plans.reserve(net.layers.size());
    for (const auto& layer : net.layers) {
        try {
            result.plans.push_back(plan_for_method(layer, array, method));
        } catch (const std::exception& e) {
            throw std::runtime_error("layer '" + layer.name + "': " + e.what());
        }
        result.total_cycles += result.plans.back().total_cycles;
    }
    return result;
}

}  // namespace pimmap
