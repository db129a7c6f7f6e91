#include <doctest.h>

#include <algorithm>

#include "pimmap/cycle_model.hpp"
#include "testutil.hpp"

using namespace pimmap;
using testutil::Rng;

TEST_CASE("ceil_div") {
    CHECK(ceil_div(0, 4) == 0);
    CHECK(ceil_div(1, 4) == 1);
    CHECK(ceil_div(4, 4) == 1);
    CHECK(ceil_div(5, 4) == 2);
    CHECK(ceil_div(128, 42) == 4);
}

TEST_CASE("windows per parallel window") {
    const LayerSpec l{"l", 56, 56, 3, 3, 1, 1};
    CHECK(windows_per_pw(l, {3, 3}) == 1);
    CHECK(windows_per_pw(l, {4, 3}) == 2);
    CHECK(windows_per_pw(l, {4, 4}) == 4);
    CHECK(windows_per_pw(l, {10, 3}) == 8);
}

TEST_CASE("parallel window count examples") {
    CHECK(num_parallel_windows({"l", 224, 224, 3, 3, 1, 1}, {4, 4}) == 12321);
    CHECK(num_parallel_windows({"l", 224, 224, 3, 3, 1, 1}, {3, 3}) == 49284);
    CHECK(num_parallel_windows({"l", 112, 112, 7, 7, 1, 1}, {10, 8}) == 1431);
}

TEST_CASE("kernel-sized window reduces to the plain sliding count") {
    Rng rng(101);
    for (int it = 0; it < 300; ++it) {
        const LayerSpec l = testutil::random_layer(rng, 32, 5, 4);
        CHECK(num_parallel_windows(l, {l.k_w, l.k_h}) == i64(l.ofm_w()) * l.ofm_h());
    }
}

TEST_CASE("parallel windows cover every output exactly when steps divide") {
    Rng rng(102);
    for (int it = 0; it < 300; ++it) {
        const LayerSpec l = testutil::random_layer(rng, 24, 4, 3);
        const WindowShape w{rng.pick(l.k_w, l.ifm_w), rng.pick(l.k_h, l.ifm_h)};
        const auto xs = testutil::covered_outputs_1d(l.ifm_w, w.pw_w, l.k_w);
        const auto ys = testutil::covered_outputs_1d(l.ifm_h, w.pw_h, l.k_h);
        // clamped stepping covers the whole output grid
        CHECK(int(xs.size()) == l.ofm_w());
        CHECK(int(ys.size()) == l.ofm_h());

        const i64 slots = num_parallel_windows(l, w) * windows_per_pw(l, w);
        const i64 outputs = i64(l.ofm_w()) * l.ofm_h();
        CHECK(slots >= outputs);
        const bool divides = (l.ifm_w - w.pw_w) % (w.pw_w - l.k_w + 1) == 0 &&
                             (l.ifm_h - w.pw_h) % (w.pw_h - l.k_h + 1) == 0;
        if (divides) CHECK(slots == outputs);
    }
}

TEST_CASE("tiled input channels") {
    CHECK(tiled_ic({512, 512}, {4, 3}, 128) == 42);
    CHECK(tiled_ic({512, 512}, {4, 4}, 64) == 32);
    CHECK(tiled_ic({512, 512}, {10, 3}, 3) == 3);  // clamped to the layer's channel count

    CHECK(try_tiled_ic({9, 1}, {4, 4}, 1) == std::nullopt);
    CHECK_THROWS_AS(tiled_ic({9, 1}, {4, 4}, 1), InfeasibleWindowError);
    try {
        tiled_ic({9, 1}, {4, 4}, 1);
    } catch (const InfeasibleWindowError& e) {
        CHECK(std::string(e.what()).find("9") != std::string::npos);
    }
}

TEST_CASE("tiled output channels") {
    const LayerSpec k3{"l", 56, 56, 3, 3, 1, 256};
    CHECK(tiled_oc({512, 512}, k3, {4, 3}) == 256);

    LayerSpec l128 = k3;
    l128.out_ch = 128;
    CHECK(tiled_oc({512, 512}, l128, {4, 4}) == 128);

    LayerSpec l96 = k3;
    l96.out_ch = 96;
    CHECK(tiled_oc({512, 256}, l96, {4, 4}) == 64);

    // a 33x3 window holds 31 duplicated kernels, more than 16 columns
    LayerSpec wide{"l", 64, 64, 3, 3, 1, 4};
    CHECK(try_tiled_oc({512, 16}, wide, {33, 3}) == std::nullopt);
    CHECK_THROWS_AS(tiled_oc({512, 16}, wide, {33, 3}), InfeasibleWindowError);
}

TEST_CASE("tiled cycle counts") {
    CHECK(ar_cycles_tiled(128, 42) == 4);
    CHECK(ar_cycles_tiled(3, 3) == 1);
    CHECK(ar_cycles_tiled(512, 42) == 13);
    CHECK(ac_cycles_tiled(256, 256) == 1);
    CHECK(ac_cycles_tiled(96, 64) == 2);
    CHECK(ac_cycles_tiled(512, 256) == 2);
}

TEST_CASE("monotonicity of tiling") {
    Rng rng(103);
    for (int it = 0; it < 200; ++it) {
        const int in_ch = rng.pick(1, 512);
        const int tile = rng.pick(1, in_ch);
        if (tile < in_ch) CHECK(ar_cycles_tiled(in_ch, tile + 1) <= ar_cycles_tiled(in_ch, tile));

        const ArraySpec array{rng.pick(1, 512), rng.pick(1, 512)};
        const WindowShape w{rng.pick(1, 20), rng.pick(1, 20)};
        const WindowShape grown{w.pw_w + rng.pick(0, 3), w.pw_h + rng.pick(0, 3)};
        const auto a = try_tiled_ic(array, w, in_ch);
        const auto b = try_tiled_ic(array, grown, in_ch);
        if (b) {
            REQUIRE(a);
            CHECK(*b <= *a);
        }
    }
}

TEST_CASE("maximal channel tile dominates every smaller tile") {
    for (int in_ch = 1; in_ch <= 24; ++in_ch)
        for (int max_tile = 1; max_tile <= in_ch; ++max_tile)
            for (int tile = 1; tile <= max_tile; ++tile)
                CHECK(ar_cycles_tiled(in_ch, tile) >= ar_cycles_tiled(in_ch, max_tile));
}

TEST_CASE("im2col cycle examples") {
    const CycleBreakdown l4 = im2col_cycles({"L4", 112, 112, 3, 3, 128, 128}, {512, 512});
    CHECK(l4.num_pw == 12100);
    CHECK(l4.ar_cycles == 3);
    CHECK(l4.ac_cycles == 1);
    CHECK(l4.total == 36300);

    const CycleBreakdown r5 = im2col_cycles({"L5", 7, 7, 3, 3, 512, 512}, {512, 512});
    CHECK(r5.total == 225);

    const CycleBreakdown tiny = im2col_cycles({"t", 3, 3, 3, 3, 1, 1}, {9, 1});
    CHECK(tiny.num_pw == 1);
    CHECK(tiny.ar_cycles == 1);
    CHECK(tiny.ac_cycles == 1);
    CHECK(tiny.total == 1);
}

TEST_CASE("square window cycle examples") {
    CHECK(sdk_window_cycles({"L4", 112, 112, 3, 3, 128, 128}, {512, 512}, 3).total == 36300);
    CHECK(sdk_window_cycles({"L2", 224, 224, 3, 3, 64, 64}, {512, 512}, 4).total == 24642);
    CHECK(sdk_window_cycles({"R1", 112, 112, 7, 7, 3, 64}, {512, 512}, 8).total == 2809);
}

TEST_CASE("variable window cycle examples") {
    const CycleBreakdown r4 = vw_cycles({"R4", 14, 14, 3, 3, 256, 256}, {512, 512}, {4, 3});
    CHECK(r4.num_pw == 72);
    CHECK(r4.ar_cycles == 7);
    CHECK(r4.ac_cycles == 1);
    CHECK(r4.total == 504);

    const CycleBreakdown v1 = vw_cycles({"L1", 224, 224, 3, 3, 3, 64}, {512, 512}, {10, 3});
    CHECK(v1.num_pw == 6216);
    CHECK(v1.ar_cycles == 1);
    CHECK(v1.ac_cycles == 1);
    CHECK(v1.total == 6216);

    CHECK_THROWS_AS(vw_cycles({"t", 5, 5, 3, 3, 1, 1}, {9, 1}, {4, 4}), InfeasibleWindowError);
    CHECK(try_vw_cycles({"t", 5, 5, 3, 3, 1, 1}, {9, 1}, {4, 4}) == std::nullopt);
}

TEST_CASE("cycle breakdown fields stay positive and consistent") {
    Rng rng(104);
    for (int it = 0; it < 300; ++it) {
        const LayerSpec l = testutil::random_layer(rng, 20, 4, 8);
        const ArraySpec array{rng.pick(1, 64), rng.pick(1, 64)};
        const WindowShape w{rng.pick(l.k_w, l.ifm_w), rng.pick(l.k_h, l.ifm_h)};
        for (const auto& b :
             {im2col_cycles(l, array), sdk_window_cycles(l, array, std::max(l.k_w, l.k_h))}) {
            CHECK(b.num_pw >= 1);
            CHECK(b.ar_cycles >= 1);
            CHECK(b.ac_cycles >= 1);
            CHECK(b.total == b.num_pw * b.ar_cycles * b.ac_cycles);
        }
        if (const auto b = try_vw_cycles(l, array, w)) {
            CHECK(b->num_pw >= 1);
            CHECK(b->ar_cycles >= 1);
            CHECK(b->ac_cycles >= 1);
            CHECK(b->total == b->num_pw * b->ar_cycles * b->ac_cycles);
        }
    }
}

TEST_CASE("reference table totals from pinned window shapes") {
    const ArraySpec array{512, 512};
    auto check_rows = [&](const std::vector<testutil::TableRow>& rows, i64 im2col_sum,
                          i64 sdk_sum, i64 vw_sum) {
        i64 ims = 0, sdks = 0, vws = 0;
        for (const auto& row : rows) {
            const i64 im = im2col_cycles(row.layer, array).total;
            CHECK(im == row.im2col_total);
            ims += im;

            const i64 sdk = sdk_window_cycles(row.layer, array, row.sdk_pw).total;
            CHECK(sdk == row.sdk_total);
            sdks += sdk;

            const bool kernel_win =
                row.vw.pw_w == row.layer.k_w && row.vw.pw_h == row.layer.k_h;
            const i64 vw = kernel_win ? im2col_cycles(row.layer, array).total
                                      : vw_cycles(row.layer, array, row.vw).total;
            CHECK(vw == row.vw_total);
            vws += vw;
        }
        CHECK(ims == im2col_sum);
        CHECK(sdks == sdk_sum);
        CHECK(vws == vw_sum);
    };
    check_rows(testutil::vgg13_rows(), testutil::kVggIm2colTotal, testutil::kVggSdkTotal,
               testutil::kVggVwTotal);
    check_rows(testutil::resnet18_rows(), testutil::kResnetIm2colTotal, testutil::kResnetSdkTotal,
               testutil::kResnetVwTotal);
}

TEST_CASE("half cycles per window for 4x3 against 4x4 on the narrow array") {
    const LayerSpec l{"fig5", 14, 14, 3, 3, 42, 96};
    const ArraySpec array{512, 256};
    const CycleBreakdown c43 = vw_cycles(l, array, {4, 3});
    const CycleBreakdown c44 = vw_cycles(l, array, {4, 4});
    CHECK(c43.ar_cycles == 1);
    CHECK(c43.ac_cycles == 1);
    CHECK(c44.ar_cycles == 2);
    CHECK(c44.ac_cycles == 2);
    // cost per output window: (ar*ac)/nwp; the 4x4 window costs exactly twice
    const i64 nwp43 = windows_per_pw(l, {4, 3});
    const i64 nwp44 = windows_per_pw(l, {4, 4});
    CHECK(c44.ar_cycles * c44.ac_cycles * nwp43 == 2 * c43.ar_cycles * c43.ac_cycles * nwp44);
}
