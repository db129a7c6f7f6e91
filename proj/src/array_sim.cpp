#include "pimmap/array_sim.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>
#include <string>

#include "pimmap/cycle_model.hpp"

namespace pimmap {

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw InvalidPlanError(msg);
}

LayoutCycle empty_cycle(const ArraySpec& array) {
    LayoutCycle c;
    c.cells.assign(std::size_t(array.rows) * std::size_t(array.cols), CellRef{});
    c.rows.assign(std::size_t(array.rows), RowRole{});
    c.cols.assign(std::size_t(array.cols), ColRole{});
    return c;
}

// Assign every cell whose row pixel (wy, wx) lands inside the kernel
// footprint of its column offset (dy, dx).
void fill_cells(LayoutCycle& cyc, const LayerSpec& layer, const ArraySpec& array) {
    for (int r = 0; r < array.rows; ++r) {
        const RowRole& row = cyc.rows[r];
        if (!row.used) continue;
        for (int j = 0; j < array.cols; ++j) {
            const ColRole& col = cyc.cols[j];
            if (!col.used) continue;
            const int ky = row.wy - col.dy;
            const int kx = row.wx - col.dx;
            if (ky < 0 || ky >= layer.k_h || kx < 0 || kx >= layer.k_w) continue;
            cyc.cells[std::size_t(r) * array.cols + j] = CellRef{col.oc, row.ic, ky, kx};
            ++cyc.used_cells;
        }
    }
}

ArrayLayout build_continuous(const LayerSpec& layer, const ArraySpec& array,
                             const MappingPlan& plan) {
    const int pw = plan.window.pw_w, ph = plan.window.pw_h;
    const int nwx = pw - layer.k_w + 1;
    const i64 nw = plan.windows_per_pw;
    const i64 abs_rows = i64(layer.in_ch) * ph * pw;
    const i64 abs_cols = i64(layer.out_ch) * nw;
    require(plan.ic_tile == layer.in_ch && plan.oc_tile == layer.out_ch,
            "continuous-packing plan must carry full channel counts");
    require(plan.ar_cycles == ceil_div(abs_rows, array.rows),
            "plan AR cycles disagree with continuous row packing");
    require(plan.ac_cycles == ceil_div(abs_cols, array.cols),
            "plan AC cycles disagree with continuous column packing");

    ArrayLayout out;
    out.array = array;
    out.window = plan.window;
    out.ar = int(plan.ar_cycles);
    out.ac = int(plan.ac_cycles);
    out.cycles.reserve(std::size_t(out.ar) * out.ac);

    for (int a = 0; a < out.ar; ++a) {
        for (int c = 0; c < out.ac; ++c) {
            LayoutCycle cyc = empty_cycle(array);
            for (int r = 0; r < array.rows; ++r) {
                const i64 abs_r = i64(a) * array.rows + r;
                if (abs_r >= abs_rows) break;
                const int i = int(abs_r / (i64(ph) * pw));
                const int rem = int(abs_r % (i64(ph) * pw));
                cyc.rows[r] = RowRole{true, i, rem / pw, rem % pw};
            }
            for (int j = 0; j < array.cols; ++j) {
                const i64 abs_c = i64(c) * array.cols + j;
                if (abs_c >= abs_cols) break;
                const int off = int(abs_c / layer.out_ch);
                const int o = int(abs_c % layer.out_ch);
                cyc.cols[j] = ColRole{true, off / nwx, off % nwx, o};
            }
            fill_cells(cyc, layer, array);
            out.cycles.push_back(std::move(cyc));
        }
    }
    return out;
}

ArrayLayout build_tiled(const LayerSpec& layer, const ArraySpec& array, const MappingPlan& plan) {
    const int pw = plan.window.pw_w, ph = plan.window.pw_h;
    const int nwx = pw - layer.k_w + 1;
    const i64 nw = plan.windows_per_pw;
    require(plan.ic_tile >= 1 && plan.ic_tile <= layer.in_ch &&
                plan.oc_tile >= 1 && plan.oc_tile <= layer.out_ch,
            "channel tiles out of range");
    require(i64(plan.ic_tile) * ph * pw <= array.rows,
            "channel tile does not fit the array rows");
    require(i64(plan.oc_tile) * nw <= array.cols,
            "out-channel tile does not fit the array columns");
    require(plan.ar_cycles == ceil_div(layer.in_ch, plan.ic_tile) &&
                plan.ac_cycles == ceil_div(layer.out_ch, plan.oc_tile),
            "plan cycle counts disagree with its channel tiles");

    ArrayLayout out;
    out.array = array;
    out.window = plan.window;
    out.ar = int(plan.ar_cycles);
    out.ac = int(plan.ac_cycles);
    out.cycles.reserve(std::size_t(out.ar) * out.ac);

    for (int a = 0; a < out.ar; ++a) {
        const int ic0 = a * plan.ic_tile;
        const int ic_n = std::min(layer.in_ch - ic0, plan.ic_tile);
        for (int c = 0; c < out.ac; ++c) {
            const int oc0 = c * plan.oc_tile;
            const int oc_n = std::min(layer.out_ch - oc0, plan.oc_tile);
            LayoutCycle cyc = empty_cycle(array);
            for (int r = 0; r < ic_n * ph * pw; ++r) {
                const int i_local = r / (ph * pw);
                const int rem = r % (ph * pw);
                cyc.rows[r] = RowRole{true, ic0 + i_local, rem / pw, rem % pw};
            }
            for (int j = 0; j < int(nw) * oc_n; ++j) {
                const int off = j / oc_n;
                cyc.cols[j] = ColRole{true, off / nwx, off % nwx, oc0 + j % oc_n};
            }
            fill_cells(cyc, layer, array);
            out.cycles.push_back(std::move(cyc));
        }
    }
    return out;
}

}  // namespace

i64 ArrayLayout::total_used_cells() const {
    i64 total = 0;
    for (const auto& c : cycles) total += c.used_cells;
    return total;
}

ArrayLayout build_layout(const LayerSpec& layer, const ArraySpec& array, const MappingPlan& plan) {
    validate_layer(layer);
    validate_array(array);
    validate_window(layer, plan.window);
    require(plan.windows_per_pw == windows_per_pw(layer, plan.window),
            "plan windows_per_pw disagrees with its window shape");
    require(plan.num_pw == num_parallel_windows(layer, plan.window),
            "plan num_pw disagrees with its window shape");
    require(plan.total_cycles == plan.num_pw * plan.ar_cycles * plan.ac_cycles,
            "plan total_cycles is not num_pw * ar * ac");
    return uses_channel_tiling(plan, layer) ? build_tiled(layer, array, plan)
                                            : build_continuous(layer, array, plan);
}

ArrayLayout build_submatrix_layout(const LayerSpec& layer, const ArraySpec& array, int copies) {
    validate_layer(layer);
    validate_array(array);
    if (copies < 1) throw ValidationError("duplication count must be positive");
    const WindowShape w{layer.k_w + copies - 1, layer.k_h};
    validate_window(layer, w);
    const int block_rows = layer.k_h * layer.k_w * layer.in_ch;
    if (i64(copies) * block_rows > array.rows)
        throw InfeasibleWindowError(std::to_string(copies) + " duplicated blocks need " +
                                    std::to_string(i64(copies) * block_rows) + " rows, array has " +
                                    std::to_string(array.rows));
    if (i64(copies) * layer.out_ch > array.cols)
        throw InfeasibleWindowError(std::to_string(copies) + " duplicated blocks need " +
                                    std::to_string(i64(copies) * layer.out_ch) +
                                    " columns, array has " + std::to_string(array.cols));

    ArrayLayout out;
    out.array = array;
    out.window = w;
    out.ar = out.ac = 1;
    LayoutCycle cyc = empty_cycle(array);
    for (int r = 0; r < copies * block_rows; ++r) {
        const int d = r / block_rows;
        const int rem = r % block_rows;
        const int i = rem / (layer.k_h * layer.k_w);
        const int rr = rem % (layer.k_h * layer.k_w);
        cyc.rows[r] = RowRole{true, i, rr / layer.k_w, d + rr % layer.k_w};
    }
    for (int j = 0; j < copies * layer.out_ch; ++j)
        cyc.cols[j] = ColRole{true, 0, j / layer.out_ch, j % layer.out_ch};
    // fill_cells would also wire cross-copy cells (the copies' windows share
    // input pixels, but this layout keeps each copy's rows private), so place
    // the diagonal blocks directly.
    for (int r = 0; r < copies * block_rows; ++r) {
        const int d = r / block_rows;
        const RowRole& row = cyc.rows[r];
        for (int o = 0; o < layer.out_ch; ++o) {
            const int j = d * layer.out_ch + o;
            cyc.cells[std::size_t(r) * array.cols + j] =
                CellRef{o, row.ic, row.wy, row.wx - d};
            ++cyc.used_cells;
        }
    }
    out.cycles.push_back(std::move(cyc));
    return out;
}

std::vector<int> window_origins(int extent, int window, int kernel) {
    const int step = window - kernel + 1;
    std::vector<int> origins;
    const i64 n = ceil_div(extent - window, step) + 1;
    for (i64 j = 0; j < n; ++j) {
        const int pos = std::min(int(j) * step, extent - window);
        if (origins.empty() || origins.back() != pos) origins.push_back(pos);
    }
    return origins;
}

Tensor3 reference_conv(const Tensor3& ifm, const Tensor4& weights) {
    if (ifm.ch != weights.ic)
        throw ValidationError("ifm has " + std::to_string(ifm.ch) + " channels, weights expect " +
                              std::to_string(weights.ic));
    if (ifm.h < weights.h || ifm.w < weights.w)
        throw ValidationError("kernel exceeds IFM extent");
    const int oh = ifm.h - weights.h + 1;
    const int ow = ifm.w - weights.w + 1;
    Tensor3 ofm(weights.oc, oh, ow);
#pragma omp parallel for schedule(static)
    for (int o = 0; o < weights.oc; ++o) {
        for (int oy = 0; oy < oh; ++oy) {
            for (int ox = 0; ox < ow; ++ox) {
                i64 sum = 0;
                for (int i = 0; i < weights.ic; ++i)
                    for (int ky = 0; ky < weights.h; ++ky)
                        for (int kx = 0; kx < weights.w; ++kx)
                            sum += ifm.at(i, oy + ky, ox + kx) * weights.at(o, i, ky, kx);
                ofm.at(o, oy, ox) = sum;
            }
        }
    }
    return ofm;
}

SimResult simulate(const LayerSpec& layer, const ArrayLayout& layout, const Tensor3& ifm,
                   const Tensor4& weights, const SimOptions& opts) {
    if (ifm.ch != layer.in_ch || ifm.h != layer.ifm_h || ifm.w != layer.ifm_w)
        throw ValidationError("ifm shape " + std::to_string(ifm.ch) + "x" +
                              std::to_string(ifm.h) + "x" + std::to_string(ifm.w) +
                              " does not match layer '" + layer.name + "'");
    if (weights.oc != layer.out_ch || weights.ic != layer.in_ch || weights.h != layer.k_h ||
        weights.w != layer.k_w)
        throw ValidationError("weight shape does not match layer '" + layer.name + "'");

    const int nwy = layout.window.pw_h - layer.k_h + 1;
    const int nwx = layout.window.pw_w - layer.k_w + 1;
    const auto ys = window_origins(layer.ifm_h, layout.window.pw_h, layer.k_h);
    const auto xs = window_origins(layer.ifm_w, layout.window.pw_w, layer.k_w);

    SimResult res;
    res.ofm = Tensor3(layer.out_ch, layer.ofm_h(), layer.ofm_w());
    res.measured_cycles = i64(ys.size()) * i64(xs.size()) * layout.ar * layout.ac;
    std::vector<char> written(res.ofm.data.size(), 0);

    std::vector<i64> in(layout.array.rows);
    std::vector<i64> acc(std::size_t(layer.out_ch) * nwy * nwx);

    for (int py : ys) {
        for (int px : xs) {
            std::fill(acc.begin(), acc.end(), 0);
            for (int a = 0; a < layout.ar; ++a) {
                for (int c = 0; c < layout.ac; ++c) {
                    const LayoutCycle& cyc = layout.at(a, c);
                    for (int r = 0; r < layout.array.rows; ++r) {
                        const RowRole& row = cyc.rows[r];
                        in[r] = row.used ? ifm.at(row.ic, py + row.wy, px + row.wx) : 0;
                    }
                    const bool faulted = opts.fault && opts.fault->ar_cycle == a &&
                                         opts.fault->ac_cycle == c;
#pragma omp parallel for if (opts.parallel) schedule(static)
                    for (int j = 0; j < layout.array.cols; ++j) {
                        const ColRole& col = cyc.cols[j];
                        if (!col.used) continue;
                        i64 sum = 0;
                        for (int r = 0; r < layout.array.rows; ++r) {
                            const CellRef& ref = cyc.cells[std::size_t(r) * layout.array.cols + j];
                            if (ref.used())
                                sum += in[r] * weights.at(ref.oc, ref.ic, ref.ky, ref.kx);
                        }
                        if (faulted && j == opts.fault->col)
                            sum += opts.fault->delta * in[opts.fault->row];
                        acc[(std::size_t(col.oc) * nwy + col.dy) * nwx + col.dx] += sum;
                    }
                }
            }
            for (int o = 0; o < layer.out_ch; ++o) {
                for (int dy = 0; dy < nwy; ++dy) {
                    for (int dx = 0; dx < nwx; ++dx) {
                        const i64 val = acc[(std::size_t(o) * nwy + dy) * nwx + dx];
                        i64& slot = res.ofm.at(o, py + dy, px + dx);
                        char& seen = written[&slot - res.ofm.data.data()];
                        // clamped windows recompute some outputs; the values
                        // must agree unless a fault was injected
                        assert(!seen || opts.fault || slot == val);
                        (void)seen;
                        slot = val;
                        seen = 1;
                    }
                }
            }
        }
    }
    return res;
}

SimResult simulate(const LayerSpec& layer, const ArraySpec& array, const MappingPlan& plan,
                   const Tensor3& ifm, const Tensor4& weights, const SimOptions& opts) {
    return simulate(layer, build_layout(layer, array, plan), ifm, weights, opts);
}

UtilizationReport utilization(const LayerSpec& layer, const ArraySpec& array,
                              const MappingPlan& plan) {
    const ArrayLayout layout = build_layout(layer, array, plan);
    UtilizationReport rep;
    const double total = double(array.rows) * double(array.cols);
    rep.ratios.reserve(layout.cycles.size());
    double sum = 0.0, peak = 0.0;
    for (const auto& cyc : layout.cycles) {
        const double ratio = double(cyc.used_cells) / total;
        rep.ratios.push_back(ratio);
        sum += ratio;
        peak = std::max(peak, ratio);
    }
    rep.mean_pct = 100.0 * sum / double(rep.ratios.size());
    rep.peak_pct = 100.0 * peak;
    return rep;
}

std::string render_layout(const ArrayLayout& layout) {
    std::ostringstream os;
    for (int a = 0; a < layout.ar; ++a) {
        for (int c = 0; c < layout.ac; ++c) {
            const LayoutCycle& cyc = layout.at(a, c);
            os << "cycle ar=" << a << " ac=" << c << " used=" << cyc.used_cells << "/"
               << i64(layout.array.rows) * layout.array.cols << "\n";
            for (int r = 0; r < layout.array.rows; ++r) {
                for (int j = 0; j < layout.array.cols; ++j)
                    os << (cyc.cells[std::size_t(r) * layout.array.cols + j].used() ? '#' : '.');
                os << "\n";
            }
        }
    }
    return os.str();
}

}  // namespace pimmap
