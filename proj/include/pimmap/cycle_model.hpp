// Analytic cycle-count model.
//
// Pure integer functions; no floating point anywhere so layer/network
// totals are bit-exact. All functions assume validated inputs.
//
// Two row/column accounting modes exist:
//   * continuous packing: the unrolled weight rows (and output columns)
//     are split into array-sized chunks, splitting channels mid-way when
//     needed. This is the im2col and square-window SDK cost model.
//   * whole-channel tiling: a window larger than the kernel maps
//     ic_tile = floor(rows / window_area) whole channels per AR cycle and
//     oc_tile = floor(cols / windows_per_pw) whole output channels per AC
//     cycle. This is the variable-window cost model.
// Both modes agree that total cycles = num_pw * ar * ac.
#pragma once

#include <optional>

#include "pimmap/types.hpp"

namespace pimmap {

inline i64 ceil_div(i64 a, i64 b) { return (a + b - 1) / b; }

struct CycleBreakdown {
    i64 num_pw = 0;
    i64 ar_cycles = 0;
    i64 ac_cycles = 0;
    i64 total = 0;  // num_pw * ar_cycles * ac_cycles

    bool operator==(const CycleBreakdown&) const = default;
};

// Kernel-sized windows inside one parallel window.
i64 windows_per_pw(const LayerSpec& layer, const WindowShape& w);

// Parallel-window positions needed to cover the IFM. Edge windows implied
// by the ceilings are clamped to the IFM boundary, so every position stays
// in bounds. With w equal to the kernel this reduces to the plain sliding
// window count.
i64 num_parallel_windows(const LayerSpec& layer, const WindowShape& w);

// Whole input channels mapped per AR cycle: min(in_ch, rows / window_area).
// Empty optional when the window area alone exceeds the array rows.
std::optional<int> try_tiled_ic(const ArraySpec& array, const WindowShape& w, int in_ch);
int tiled_ic(const ArraySpec& array, const WindowShape& w, int in_ch);  // throws

// Output channels mapped per AC cycle: min(out_ch, cols / windows_per_pw).
std::optional<int> try_tiled_oc(const ArraySpec& array, const LayerSpec& layer,
                                const WindowShape& w);
int tiled_oc(const ArraySpec& array, const LayerSpec& layer, const WindowShape& w);

i64 ar_cycles_tiled(int in_ch, int ic_tile);
i64 ac_cycles_tiled(int out_ch, int oc_tile);

// im2col cost: plain window count, continuously packed rows and columns.
CycleBreakdown im2col_cycles(const LayerSpec& layer, const ArraySpec& array);

// Square-window SDK cost (entire channels, continuous packing).
CycleBreakdown sdk_window_cycles(const LayerSpec& layer, const ArraySpec& array, int pw);

// Variable-window cost (whole-channel tiling). The window must be strictly
// larger than the kernel on at least one axis; the kernel-sized window is
// costed by im2col_cycles.
std::optional<CycleBreakdown> try_vw_cycles(const LayerSpec& layer, const ArraySpec& array,
                                            const WindowShape& w);
CycleBreakdown vw_cycles(const LayerSpec& layer, const ArraySpec& array, const WindowShape& w);

}  // namespace pimmap
