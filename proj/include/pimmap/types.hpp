// Core domain types for PIM crossbar convolution mapping.
//
// All values are plain immutable-after-validation structs; they carry no
// behavior beyond validation and can be shared freely across threads.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace pimmap {

using i64 = std::int64_t;

// Raised when a layer/array/window violates a structural invariant.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised when a parallel window cannot be placed on the array at all
// (window area exceeds the row count, or one column cannot hold a group).
class InfeasibleWindowError : public std::runtime_error {
public:
    explicit InfeasibleWindowError(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised when a mapping plan is inconsistent with the layer/array it is
// applied to (layout construction or simulation).
class InvalidPlanError : public std::runtime_error {
public:
    explicit InvalidPlanError(const std::string& msg) : std::runtime_error(msg) {}
};

// One convolutional layer. Stride is always 1 and there is no padding;
// the cycle formulas carry no stride term.
struct LayerSpec {
    std::string name;
    int ifm_w = 0;   // input feature map width
    int ifm_h = 0;   // input feature map height
    int k_w = 0;     // kernel width
    int k_h = 0;     // kernel height
    int in_ch = 0;   // input channels
    int out_ch = 0;  // output channels

    int ofm_w() const { return ifm_w - k_w + 1; }
    int ofm_h() const { return ifm_h - k_h + 1; }

    bool operator==(const LayerSpec&) const = default;
};

// PIM array geometry. Arbitrary positive sizes are accepted; nothing in
// the cycle math requires powers of two.
struct ArraySpec {
    int rows = 0;
    int cols = 0;

    bool operator==(const ArraySpec&) const = default;
};

// A candidate parallel window, in IFM elements per axis.
struct WindowShape {
    int pw_w = 0;
    int pw_h = 0;

    bool operator==(const WindowShape&) const = default;
};

enum class Method { Im2col, SDK, VWSDK };

const char* method_name(Method m);
// Parses "im2col" / "sdk" / "vwsdk"; throws ValidationError otherwise.
Method method_from_name(const std::string& s);

// A fully resolved mapping of one layer onto one array.
//
// ic_tile/oc_tile are the channels mapped per AR/AC cycle. Plans whose
// window equals the kernel (im2col, and SDK or VW-SDK falling back to it)
// pack rows continuously instead of tiling whole channels; those plans
// report the full channel counts here.
struct MappingPlan {
    Method method = Method::Im2col;
    WindowShape window;
    int ic_tile = 0;
    int oc_tile = 0;
    i64 windows_per_pw = 0;  // kernel-sized windows inside one parallel window
    i64 num_pw = 0;          // parallel-window positions over the IFM
    i64 ar_cycles = 0;
    i64 ac_cycles = 0;
    i64 total_cycles = 0;    // num_pw * ar_cycles * ac_cycles

    bool operator==(const MappingPlan&) const = default;
};

// True when the plan tiles whole channels per cycle (VW-SDK with a window
// strictly larger than the kernel). False means continuous row/column
// packing per the im2col/SDK cost model.
bool uses_channel_tiling(const MappingPlan& plan, const LayerSpec& layer);

struct NetworkSpec {
    std::string name;
    std::vector<LayerSpec> layers;

    bool operator==(const NetworkSpec&) const = default;
};

// Validation is total: each function either returns the validated value or
// throws ValidationError naming the violated invariant.
LayerSpec validate_layer(const LayerSpec& layer);
WindowShape validate_window(const LayerSpec& layer, const WindowShape& w);
ArraySpec validate_array(const ArraySpec& array);
NetworkSpec validate_network(const NetworkSpec& net);

}  // namespace pimmap
