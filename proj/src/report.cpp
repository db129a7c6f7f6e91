#include "pimmap/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace pimmap {

namespace {

constexpr Method kMethods[] = {Method::Im2col, Method::SDK, Method::VWSDK};

std::string format_pct(double pct) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", pct);
    return buf;
}

// Pads cells so each column is as wide as its widest entry; columns listed
// in `right` are right-aligned (numbers), the rest left-aligned.
std::string align_table(const std::vector<std::vector<std::string>>& cells,
                        const std::vector<bool>& right) {
    std::vector<std::size_t> width(right.size(), 0);
    for (const auto& row : cells)
        for (std::size_t i = 0; i < row.size(); ++i)
            width[i] = std::max(width[i], row[i].size());
    std::string out;
    for (const auto& row : cells) {
        std::string line;
        for (std::size_t i = 0; i < row.size(); ++i) {
            const std::string pad(width[i] - row[i].size(), ' ');
            if (i) line += "  ";
            line += right[i] ? pad + row[i] : row[i] + pad;
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out += line;
        out += "\n";
    }
    return out;
}

}  // namespace

std::string format_speedup(i64 base, i64 cycles) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", double(base) / double(cycles));
    return buf;
}

std::string plan_shape_label(const MappingPlan& plan) {
    std::ostringstream os;
    os << plan.window.pw_w << "x" << plan.window.pw_h << "x" << plan.ic_tile << "x"
       << plan.oc_tile;
    return os.str();
}

std::string render_plan(const LayerSpec& layer, const ArraySpec& array, const MappingPlan& plan) {
    std::ostringstream os;
    os << "layer           " << (layer.name.empty() ? "(unnamed)" : layer.name) << " ("
       << layer.ifm_w << "x" << layer.ifm_h << " ifm, " << layer.k_w << "x" << layer.k_h
       << " kernel, " << layer.in_ch << " -> " << layer.out_ch << " ch)\n"
       << "array           " << array.rows << "x" << array.cols << "\n"
       << "method          " << method_name(plan.method) << "\n"
       << "window          " << plan.window.pw_w << "x" << plan.window.pw_h << "\n"
       << "ic_tile         " << plan.ic_tile << "\n"
       << "oc_tile         " << plan.oc_tile << "\n"
       << "windows_per_pw  " << plan.windows_per_pw << "\n"
       << "num_pw          " << plan.num_pw << "\n"
       << "ar_cycles       " << plan.ar_cycles << "\n"
       << "ac_cycles       " << plan.ac_cycles << "\n"
       << "total_cycles    " << plan.total_cycles << "\n";
    return os.str();
}

std::string render_trace(const SearchTrace& trace) {
    std::vector<std::vector<std::string>> cells;
    cells.push_back({"scan", "window", "num_pw", "ar", "ac", "total"});
    for (std::size_t i = 0; i < trace.entries.size(); ++i) {
        const auto& e = trace.entries[i];
        std::vector<std::string> row;
        row.push_back(i == 0 ? "seed" : std::to_string(i));
        row.push_back(std::to_string(e.window.pw_w) + "x" + std::to_string(e.window.pw_h));
        if (e.cycles) {
            row.push_back(std::to_string(e.cycles->num_pw));
            row.push_back(std::to_string(e.cycles->ar_cycles));
            row.push_back(std::to_string(e.cycles->ac_cycles));
            row.push_back(std::to_string(e.cycles->total));
        } else {
            row.insert(row.end(), {"-", "-", "-", "infeasible"});
        }
        cells.push_back(std::move(row));
    }
    return align_table(cells, {false, false, true, true, true, true});
}

std::vector<ReportRow> plan_report_rows(const NetworkSpec& net, const ArraySpec& array) {
    std::vector<ReportRow> rows;
    rows.reserve(net.layers.size());
    for (const auto& layer : net.layers) {
        ReportRow row;
        row.layer = layer.name;
        for (Method m : kMethods) row.plans[int(m)] = plan_for_method(layer, array, m);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string render_network_table(const NetworkSpec& net, const ArraySpec& array,
                                 const std::vector<ReportRow>& rows) {
    std::vector<std::vector<std::string>> cells;
    cells.push_back({"layer", "im2col", "cycles", "sdk", "cycles", "vwsdk", "cycles"});
    i64 totals[3] = {0, 0, 0};
    for (const auto& row : rows) {
        std::vector<std::string> line{row.layer};
        for (Method m : kMethods) {
            const auto& p = row.plans[int(m)];
            line.push_back(plan_shape_label(p));
            line.push_back(std::to_string(p.total_cycles));
            totals[int(m)] += p.total_cycles;
        }
        cells.push_back(std::move(line));
    }
    cells.push_back({"total", "", std::to_string(totals[0]), "", std::to_string(totals[1]), "",
                     std::to_string(totals[2])});
    cells.push_back({"speedup", "", format_speedup(totals[0], totals[0]), "",
                     format_speedup(totals[0], totals[1]), "",
                     format_speedup(totals[0], totals[2])});

    std::ostringstream os;
    os << "network " << net.name << " on " << array.rows << "x" << array.cols << "\n"
       << align_table(cells, {false, false, true, false, true, false, true});
    return os.str();
}

std::string network_csv(const std::vector<ReportRow>& rows) {
    std::ostringstream os;
    os << "name,method,pw_w,pw_h,ic_t,oc_t,num_pw,ar,ac,cycles,speedup\n";
    for (const auto& row : rows) {
        const i64 base = row.plans[int(Method::Im2col)].total_cycles;
        for (Method m : kMethods) {
            const auto& p = row.plans[int(m)];
            os << row.layer << "," << method_name(m) << "," << p.window.pw_w << ","
               << p.window.pw_h << "," << p.ic_tile << "," << p.oc_tile << "," << p.num_pw << ","
               << p.ar_cycles << "," << p.ac_cycles << "," << p.total_cycles << ","
               << format_speedup(base, p.total_cycles) << "\n";
        }
    }
    return os.str();
}

std::string render_sweep_table(const NetworkSpec& net, const std::vector<SweepRow>& rows) {
    std::vector<std::vector<std::string>> cells;
    cells.push_back({"array", "method", "total_cycles", "speedup"});
    for (const auto& r : rows) {
        cells.push_back({std::to_string(r.array.rows) + "x" + std::to_string(r.array.cols),
                         method_name(r.method), std::to_string(r.total_cycles),
                         format_speedup(r.im2col_cycles, r.total_cycles)});
    }
    std::ostringstream os;
    os << "network " << net.name << "\n" << align_table(cells, {false, false, true, true});
    return os.str();
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    os << "array,method,total_cycles,speedup\n";
    for (const auto& r : rows) {
        os << r.array.rows << "x" << r.array.cols << "," << method_name(r.method) << ","
           << r.total_cycles << "," << format_speedup(r.im2col_cycles, r.total_cycles) << "\n";
    }
    return os.str();
}

std::string render_utilization_table(const NetworkSpec& net, const ArraySpec& array,
                                     const std::vector<UtilizationRow>& rows) {
    std::vector<std::vector<std::string>> cells;
    cells.push_back({"layer", "method", "mean%", "peak%"});
    for (const auto& r : rows) {
        cells.push_back(
            {r.layer, method_name(r.method), format_pct(r.mean_pct), format_pct(r.peak_pct)});
    }
    std::ostringstream os;
    os << "network " << net.name << " on " << array.rows << "x" << array.cols << "\n"
       << align_table(cells, {false, false, true, true});
    return os.str();
}

}  // namespace pimmap
