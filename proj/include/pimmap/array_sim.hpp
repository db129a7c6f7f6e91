// Physical layout construction and functional simulation of a mapping plan.
// The simulator executes the layer one vector-matrix product at a time and
// is checked element-exactly against a direct convolution.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pimmap/tensor.hpp"
#include "pimmap/types.hpp"

namespace pimmap {

// One memory cell. A used cell stores kernel element W[oc][ic][ky][kx];
// oc < 0 marks an unused cell.
struct CellRef {
    int oc = -1;
    int ic = 0, ky = 0, kx = 0;
    bool used() const { return oc >= 0; }
};

// Row r carries input pixel (ic, wy, wx) relative to the parallel-window
// origin; column j drives output offset (dy, dx) of out-channel oc.
struct RowRole {
    bool used = false;
    int ic = 0, wy = 0, wx = 0;
};
struct ColRole {
    bool used = false;
    int dy = 0, dx = 0, oc = 0;
};

struct LayoutCycle {
    std::vector<CellRef> cells;  // rows*cols, row-major
    std::vector<RowRole> rows;
    std::vector<ColRole> cols;
    i64 used_cells = 0;
};

// Cell assignments for every (AR, AC) cycle pair of one plan.
//
// Plans that keep entire channels per cycle (the tiled variable-window
// mappings) place channel tile a against out-channel tile c. Plans that
// pack continuously (im2col and square-window duplication with full
// channels) chunk the flattened row space (ic, wy, wx) and column space
// (dy, dx, oc) by the array dimensions, so a channel may straddle two AR
// cycles.
struct ArrayLayout {
    ArraySpec array;
    WindowShape window;
    int ar = 0, ac = 0;
    std::vector<LayoutCycle> cycles;  // ar*ac entries, AR-major

    const LayoutCycle& at(int a, int c) const {
        return cycles[std::size_t(a) * std::size_t(ac) + std::size_t(c)];
    }
    LayoutCycle& at(int a, int c) {
        return cycles[std::size_t(a) * std::size_t(ac) + std::size_t(c)];
    }
    i64 total_used_cells() const;
};

ArrayLayout build_layout(const LayerSpec& layer, const ArraySpec& array, const MappingPlan& plan);

// Plain matrix duplication: `copies` independent im2col blocks placed
// block-diagonally in a single cycle, copy d computing the window at
// horizontal offset d. No rows are shared between copies, so every
// off-diagonal block stays unused.
ArrayLayout build_submatrix_layout(const LayerSpec& layer, const ArraySpec& array, int copies);

// Overwrites the stored weight of one cell with (weight + delta) for the
// duration of a simulation; used to prove the equivalence check catches
// physical defects.
struct Fault {
    int ar_cycle = 0, ac_cycle = 0;
    int row = 0, col = 0;
    i64 delta = 1;
};

struct SimOptions {
    bool parallel = true;  // evaluate the columns of each cycle concurrently
    std::optional<Fault> fault;
};

struct SimResult {
    Tensor3 ofm;
    i64 measured_cycles = 0;  // vector-matrix products executed
};

SimResult simulate(const LayerSpec& layer, const ArrayLayout& layout, const Tensor3& ifm,
                   const Tensor4& weights, const SimOptions& opts = {});
SimResult simulate(const LayerSpec& layer, const ArraySpec& array, const MappingPlan& plan,
                   const Tensor3& ifm, const Tensor4& weights, const SimOptions& opts = {});

// Direct stride-1 valid convolution (cross-correlation orientation), the
// equivalence oracle for the simulator.
Tensor3 reference_conv(const Tensor3& ifm, const Tensor4& weights);

struct UtilizationReport {
    std::vector<double> ratios;  // used cells / (rows*cols) per cycle, in [0,1]
    double mean_pct = 0.0;
    double peak_pct = 0.0;
};

UtilizationReport utilization(const LayerSpec& layer, const ArraySpec& array,
                              const MappingPlan& plan);

// Clamped start offsets of the parallel windows along one axis: stepping by
// (window - kernel + 1) and shifting the final window back inside the
// extent, duplicates removed.
std::vector<int> window_origins(int extent, int window, int kernel);

// Textual per-cycle grid, '#' for used cells, '.' for unused.
std::string render_layout(const ArrayLayout& layout);

}  // namespace pimmap
