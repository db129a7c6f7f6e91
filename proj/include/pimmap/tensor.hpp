// Dense integer tensors used as IFM/OFM and weight carriers. Exact integer
// arithmetic keeps simulator-vs-reference comparisons equality-based.
#pragma once

#include <cstddef>
#include <vector>

#include "pimmap/types.hpp"

namespace pimmap {

struct Tensor3 {
    int ch = 0, h = 0, w = 0;
    std::vector<i64> data;

    Tensor3() = default;
    Tensor3(int ch_, int h_, int w_)
        : ch(ch_), h(h_), w(w_), data(std::size_t(ch_) * h_ * w_, 0) {}

    i64& at(int c, int y, int x) { return data[(std::size_t(c) * h + y) * w + x]; }
    i64 at(int c, int y, int x) const { return data[(std::size_t(c) * h + y) * w + x]; }

    bool operator==(const Tensor3&) const = default;
};

// Weight bank, shape (out_ch, in_ch, k_h, k_w).
struct Tensor4 {
    int oc = 0, ic = 0, h = 0, w = 0;
    std::vector<i64> data;

    Tensor4() = default;
    Tensor4(int oc_, int ic_, int h_, int w_)
        : oc(oc_), ic(ic_), h(h_), w(w_),
          data(std::size_t(oc_) * ic_ * h_ * w_, 0) {}

    i64& at(int o, int i, int y, int x) {
        return data[((std::size_t(o) * ic + i) * h + y) * w + x];
    }
    i64 at(int o, int i, int y, int x) const {
        return data[((std::size_t(o) * ic + i) * h + y) * w + x];
    }

    bool operator==(const Tensor4&) const = default;
};

}  // namespace pimmap
