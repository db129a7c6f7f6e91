#include "pimmap/types.hpp"

#include <set>
#include <sstream>

namespace pimmap {

const char* method_name(Method m) {
    switch (m) {
    case Method::Im2col: return "im2col";
    case Method::SDK: return "sdk";
    case Method::VWSDK: return "vwsdk";
    }
    return "?";
}

Method method_from_name(const std::string& s) {
    if (s == "im2col") return Method::Im2col;
    if (s == "sdk") return Method::SDK;
    if (s == "vwsdk") return Method::VWSDK;
    throw ValidationError("unknown method '" + s + "' (expected im2col, sdk or vwsdk)");
}

bool uses_channel_tiling(const MappingPlan& plan, const LayerSpec& layer) {
    return plan.method == Method::VWSDK &&
           !(plan.window.pw_w == layer.k_w && plan.window.pw_h == layer.k_h);
}

namespace {

[[noreturn]] void fail(const std::string& what, const std::string& detail) {
    throw ValidationError(what + ": " + detail);
}

}  // namespace

LayerSpec validate_layer(const LayerSpec& layer) {
    const std::string who = layer.name.empty() ? "layer" : "layer '" + layer.name + "'";
    if (layer.k_w < 1 || layer.k_h < 1)
        fail(who, "kernel must be at least 1x1, got " + std::to_string(layer.k_w) + "x" +
                      std::to_string(layer.k_h));
    if (layer.ifm_w < layer.k_w || layer.ifm_h < layer.k_h)
        fail(who, "kernel exceeds IFM (" + std::to_string(layer.k_w) + "x" +
                      std::to_string(layer.k_h) + " vs " + std::to_string(layer.ifm_w) + "x" +
                      std::to_string(layer.ifm_h) + ")");
    if (layer.in_ch < 1) fail(who, "in_ch must be positive");
    if (layer.out_ch < 1) fail(who, "out_ch must be positive");
    return layer;
}

WindowShape validate_window(const LayerSpec& layer, const WindowShape& w) {
    if (w.pw_w < layer.k_w || w.pw_h < layer.k_h)
        fail("window", "parallel window " + std::to_string(w.pw_w) + "x" +
                           std::to_string(w.pw_h) + " smaller than kernel");
    if (w.pw_w > layer.ifm_w || w.pw_h > layer.ifm_h)
        fail("window", "parallel window " + std::to_string(w.pw_w) + "x" +
                           std::to_string(w.pw_h) + " exceeds IFM " +
                           std::to_string(layer.ifm_w) + "x" + std::to_string(layer.ifm_h));
    return w;
}

ArraySpec validate_array(const ArraySpec& array) {
    if (array.rows < 1 || array.cols < 1)
        fail("array", "rows and cols must be positive, got " + std::to_string(array.rows) +
                          "x" + std::to_string(array.cols));
    return array;
}

NetworkSpec validate_network(const NetworkSpec& net) {
    if (net.layers.empty()) fail("network '" + net.name + "'", "no layers");
    std::set<std::string> seen;
    for (const auto& layer : net.layers) {
        validate_layer(layer);
        if (!seen.insert(layer.name).second)
            fail("network '" + net.name + "'", "duplicate layer name '" + layer.name + "'");
    }
    return net;
}

}  // namespace pimmap
