// Human-readable tables and machine-readable CSV for plans, network runs,
// array sweeps, and utilization reports.
#pragma once

#include <string>
#include <vector>

#include "pimmap/array_sim.hpp"
#include "pimmap/planner.hpp"
#include "pimmap/types.hpp"

namespace pimmap {

// All three methods planned for one layer; index by Method cast to int
// (im2col, sdk, vwsdk).
struct ReportRow {
    std::string layer;
    MappingPlan plans[3];
};

// Cycle ratio base/cycles with fixed two-decimal rendering ("3.16").
std::string format_speedup(i64 base, i64 cycles);

// Shape label in PWw x PWh x IC_t x OC_t form, e.g. "4x3x42x256".
std::string plan_shape_label(const MappingPlan& plan);

std::string render_plan(const LayerSpec& layer, const ArraySpec& array, const MappingPlan& plan);
std::string render_trace(const SearchTrace& trace);

std::vector<ReportRow> plan_report_rows(const NetworkSpec& net, const ArraySpec& array);

std::string render_network_table(const NetworkSpec& net, const ArraySpec& array,
                                 const std::vector<ReportRow>& rows);

// Header name,method,pw_w,pw_h,ic_t,oc_t,num_pw,ar,ac,cycles,speedup; one
// record per (layer, method), methods in im2col/sdk/vwsdk order. Speedup is
// relative to the same layer's im2col cycles.
std::string network_csv(const std::vector<ReportRow>& rows);

struct SweepRow {
    ArraySpec array;
    Method method = Method::Im2col;
    i64 total_cycles = 0;
    i64 im2col_cycles = 0;  // baseline at the same array size
};

std::string render_sweep_table(const NetworkSpec& net, const std::vector<SweepRow>& rows);

// Header array,method,total_cycles,speedup.
std::string sweep_csv(const std::vector<SweepRow>& rows);

struct UtilizationRow {
    std::string layer;
    Method method = Method::Im2col;
    double mean_pct = 0.0;
    double peak_pct = 0.0;
};

std::string render_utilization_table(const NetworkSpec& net, const ArraySpec& array,
                                     const std::vector<UtilizationRow>& rows);

}  // namespace pimmap
