#include "pimmap/cycle_model.hpp"

#include <algorithm>
#include <string>

namespace pimmap {

i64 windows_per_pw(const LayerSpec& layer, const WindowShape& w) {
    return i64(w.pw_w - layer.k_w + 1) * i64(w.pw_h - layer.k_h + 1);
}

i64 num_parallel_windows(const LayerSpec& layer, const WindowShape& w) {
    const i64 step_x = w.pw_w - layer.k_w + 1;
    const i64 step_y = w.pw_h - layer.k_h + 1;
    const i64 nx = ceil_div(layer.ifm_w - w.pw_w, step_x) + 1;
    const i64 ny = ceil_div(layer.ifm_h - w.pw_h, step_y) + 1;
    return nx * ny;
}

std::optional<int> try_tiled_ic(const ArraySpec& array, const WindowShape& w, int in_ch) {
    const i64 area = i64(w.pw_w) * i64(w.pw_h);
    const i64 fit = array.rows / area;
    if (fit == 0) return std::nullopt;
    return int(std::min<i64>(in_ch, fit));
}

int tiled_ic(const ArraySpec& array, const WindowShape& w, int in_ch) {
    auto v = try_tiled_ic(array, w, in_ch);
    if (!v)
        throw InfeasibleWindowError("window " + std::to_string(w.pw_w) + "x" +
                                    std::to_string(w.pw_h) + " needs " +
                                    std::to_string(i64(w.pw_w) * w.pw_h) +
                                    " rows per channel but the array has only " +
                                    std::to_string(array.rows));
    return *v;
}

std::optional<int> try_tiled_oc(const ArraySpec& array, const LayerSpec& layer,
                                const WindowShape& w) {
    const i64 nwp = windows_per_pw(layer, w);
    const i64 fit = array.cols / nwp;
    if (fit == 0) return std::nullopt;
    return int(std::min<i64>(layer.out_ch, fit));
}

int tiled_oc(const ArraySpec& array, const LayerSpec& layer, const WindowShape& w) {
    auto v = try_tiled_oc(array, layer, w);
    if (!v)
        throw InfeasibleWindowError("window " + std::to_string(w.pw_w) + "x" +
                                    std::to_string(w.pw_h) + " duplicates " +
                                    std::to_string(windows_per_pw(layer, w)) +
                                    " kernels per output channel but the array has only " +
                                    std::to_string(array.cols) + " columns");
    return *v;
}

i64 ar_cycles_tiled(int in_ch, int ic_tile) { return ceil_div(in_ch, ic_tile); }

i64 ac_cycles_tiled(int out_ch, int oc_tile) { return ceil_div(out_ch, oc_tile); }

CycleBreakdown im2col_cycles(const LayerSpec& layer, const ArraySpec& array) {
    CycleBreakdown b;
    b.num_pw = i64(layer.ofm_w()) * i64(layer.ofm_h());
    b.ar_cycles = ceil_div(i64(layer.k_w) * layer.k_h * layer.in_ch, array.rows);
    b.ac_cycles = ceil_div(layer.out_ch, array.cols);
    b.total = b.num_pw * b.ar_cycles * b.ac_cycles;
    return b;
}

CycleBreakdown sdk_window_cycles(const LayerSpec& layer, const ArraySpec& array, int pw) {
    const WindowShape w{pw, pw};
    CycleBreakdown b;
    b.num_pw = num_parallel_windows(layer, w);
    b.ar_cycles = ceil_div(i64(pw) * pw * layer.in_ch, array.rows);
    b.ac_cycles = ceil_div(layer.out_ch * windows_per_pw(layer, w), array.cols);
    b.total = b.num_pw * b.ar_cycles * b.ac_cycles;
    return b;
}

std::optional<CycleBreakdown> try_vw_cycles(const LayerSpec& layer, const ArraySpec& array,
                                            const WindowShape& w) {
    const auto ict = try_tiled_ic(array, w, layer.in_ch);
    if (!ict) return std::nullopt;
    const auto oct = try_tiled_oc(array, layer, w);
    if (!oct) return std::nullopt;
    CycleBreakdown b;
    b.num_pw = num_parallel_windows(layer, w);
    b.ar_cycles = ar_cycles_tiled(layer.in_ch, *ict);
    b.ac_cycles = ac_cycles_tiled(layer.out_ch, *oct);
    b.total = b.num_pw * b.ar_cycles * b.ac_cycles;
    return b;
}

CycleBreakdown vw_cycles(const LayerSpec& layer, const ArraySpec& array, const WindowShape& w) {
    tiled_ic(array, w, layer.in_ch);
    tiled_oc(array, layer, w);
    return *try_vw_cycles(layer, array, w);
}

}  // namespace pimmap
