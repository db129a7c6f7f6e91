// Mapping planners: im2col baseline, square-window SDK, the variable-window
// search, and a brute-force oracle for cross-checking the search.
#pragma once

#include <optional>
#include <vector>

#include "pimmap/cycle_model.hpp"
#include "pimmap/types.hpp"

namespace pimmap {

// One candidate visited by the variable-window search. `cycles` is empty
// when the window was infeasible for the array.
struct TraceEntry {
    WindowShape window;
    std::optional<CycleBreakdown> cycles;
};

// Complete scan record of a variable-window search. Entry 0 is always the
// im2col baseline that seeds the minimum; the remaining entries follow the
// width-major scan order.
struct SearchTrace {
    std::vector<TraceEntry> entries;
};

struct VwSearchResult {
    MappingPlan plan;
    SearchTrace trace;
};

MappingPlan plan_im2col(const LayerSpec& layer, const ArraySpec& array);

// Square windows with entire channels, admissible only while neither AR nor
// AC exceeds the im2col baseline; the best admissible candidate wins, ties
// broken toward the smaller window. Falls back to im2col when no larger
// window is admissible.
MappingPlan plan_sdk(const LayerSpec& layer, const ArraySpec& array);

// Variable-window search. Seeds the minimum with im2col, scans windows
// width-major (pw_w inner, pw_h outer) and keeps the first strictly better
// candidate, so the earliest-scanned shape wins ties.
//
// plan_vwsdk evaluates candidates in parallel when OpenMP is enabled;
// plan_vwsdk_serial is the direct transcription of the sequential loop and
// is kept as the reference implementation. Both return identical results.
VwSearchResult plan_vwsdk(const LayerSpec& layer, const ArraySpec& array);
VwSearchResult plan_vwsdk_serial(const LayerSpec& layer, const ArraySpec& array);

// Exhaustive enumeration over every window shape and every sub-maximal
// channel tile, scored with the same cycle formulas. Intended for small
// instances; throws when the tuple count exceeds `budget`.
MappingPlan plan_oracle(const LayerSpec& layer, const ArraySpec& array,
                        i64 budget = 5'000'000);

MappingPlan plan_for_method(const LayerSpec& layer, const ArraySpec& array, Method method);

struct NetworkPlan {
    std::vector<MappingPlan> plans;  // one per layer, in network order
    i64 total_cycles = 0;
};

NetworkPlan plan_network(const NetworkSpec& net, const ArraySpec& array, Method method);

}  // namespace pimmap
