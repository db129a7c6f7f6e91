#include "pimmap/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "pimmap/array_sim.hpp"
#include "pimmap/netfile.hpp"
#include "pimmap/planner.hpp"
#include "pimmap/report.hpp"

namespace pimmap {

namespace {

std::pair<int, int> parse_pair(const std::string& s, const std::string& flag) {
    const auto x = s.find('x');
    int a = 0, b = 0;
    if (x != std::string::npos && x > 0 && x + 1 < s.size()) {
        try {
            std::size_t used = 0;
            a = std::stoi(s.substr(0, x), &used);
            if (used != x) throw std::invalid_argument(s);
            b = std::stoi(s.substr(x + 1), &used);
            if (used != s.size() - x - 1) throw std::invalid_argument(s);
            return {a, b};
        } catch (const std::exception&) {
        }
    }
    throw ValidationError(flag + " expects two integers as WxH, got '" + s + "'");
}

ArraySpec parse_array(const std::string& s) {
    const auto [rows, cols] = parse_pair(s, "--array");
    return validate_array(ArraySpec{rows, cols});
}

struct LayerFlags {
    std::string ifm, kernel;
    int ic = 0, oc = 0;

    LayerSpec to_layer() const {
        LayerSpec layer;
        std::tie(layer.ifm_w, layer.ifm_h) = parse_pair(ifm, "--ifm");
        std::tie(layer.k_w, layer.k_h) = parse_pair(kernel, "--kernel");
        layer.in_ch = ic;
        layer.out_ch = oc;
        return validate_layer(layer);
    }
};

void add_layer_flags(CLI::App* cmd, LayerFlags& f) {
    cmd->add_option("--ifm", f.ifm, "input feature map size WxH")->required();
    cmd->add_option("--kernel", f.kernel, "kernel size WxH")->required();
    cmd->add_option("--ic", f.ic, "input channels")->required();
    cmd->add_option("--oc", f.oc, "output channels")->required();
}

std::vector<Method> methods_from_flag(const std::string& flag) {
    if (flag == "all") return {Method::Im2col, Method::SDK, Method::VWSDK};
    return {method_from_name(flag)};
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot open '" + path + "' for writing");
    out << content;
}

int cmd_plan(const LayerFlags& lf, const std::string& array_s, const std::string& method_s,
             bool verbose, std::ostream& out) {
    const LayerSpec layer = lf.to_layer();
    const ArraySpec array = parse_array(array_s);
    bool first = true;
    for (Method m : methods_from_flag(method_s)) {
        if (!first) out << "\n";
        first = false;
        if (m == Method::VWSDK && verbose) {
            const VwSearchResult res = plan_vwsdk(layer, array);
            out << render_plan(layer, array, res.plan) << "\n" << render_trace(res.trace);
        } else {
            out << render_plan(layer, array, plan_for_method(layer, array, m));
        }
    }
    return 0;
}

int cmd_network(const std::string& file, const std::string& array_s, const std::string& csv,
                std::ostream& out) {
    const NetworkSpec net = parse_network_file(file);
    const ArraySpec array = parse_array(array_s);
    const auto rows = plan_report_rows(net, array);
    out << render_network_table(net, array, rows);
    if (!csv.empty()) write_file(csv, network_csv(rows));
    return 0;
}

int cmd_sweep(const std::string& file, const std::vector<std::string>& array_flags,
              const std::string& csv, std::ostream& out) {
    const NetworkSpec net = parse_network_file(file);
    std::vector<SweepRow> rows;
    for (const auto& s : array_flags) {
        const ArraySpec array = parse_array(s);
        const i64 base = plan_network(net, array, Method::Im2col).total_cycles;
        for (Method m : {Method::Im2col, Method::SDK, Method::VWSDK}) {
            SweepRow row;
            row.array = array;
            row.method = m;
            row.total_cycles = plan_network(net, array, m).total_cycles;
            row.im2col_cycles = base;
            rows.push_back(row);
        }
    }
    out << render_sweep_table(net, rows);
    if (!csv.empty()) write_file(csv, sweep_csv(rows));
    return 0;
}

int cmd_utilization(const std::string& file, const std::string& array_s, std::ostream& out) {
    const NetworkSpec net = parse_network_file(file);
    const ArraySpec array = parse_array(array_s);
    std::vector<UtilizationRow> rows;
    for (const auto& layer : net.layers) {
        for (Method m : {Method::Im2col, Method::SDK, Method::VWSDK}) {
            const MappingPlan plan = plan_for_method(layer, array, m);
            const UtilizationReport rep = utilization(layer, array, plan);
            rows.push_back({layer.name, m, rep.mean_pct, rep.peak_pct});
        }
    }
    out << render_utilization_table(net, array, rows);
    return 0;
}

Tensor3 random_ifm(const LayerSpec& layer, std::mt19937_64& rng) {
    // positive values so an injected weight fault can never be masked by a
    // zero input line
    std::uniform_int_distribution<i64> dist(1, 9);
    Tensor3 t(layer.in_ch, layer.ifm_h, layer.ifm_w);
    for (auto& v : t.data) v = dist(rng);
    return t;
}

Tensor4 random_weights(const LayerSpec& layer, std::mt19937_64& rng) {
    std::uniform_int_distribution<i64> dist(-4, 4);
    Tensor4 t(layer.out_ch, layer.in_ch, layer.k_h, layer.k_w);
    for (auto& v : t.data) v = dist(rng);
    return t;
}

int cmd_verify(const LayerFlags& lf, const std::string& array_s, const std::string& method_s,
               unsigned long long seed, bool inject_fault, bool dump, std::ostream& out) {
    const LayerSpec layer = lf.to_layer();
    const ArraySpec array = parse_array(array_s);
    std::mt19937_64 rng(seed);
    const Tensor3 ifm = random_ifm(layer, rng);
    const Tensor4 weights = random_weights(layer, rng);
    const Tensor3 want = reference_conv(ifm, weights);

    bool all_ok = true;
    for (Method m : methods_from_flag(method_s)) {
        const MappingPlan plan = plan_for_method(layer, array, m);
        const ArrayLayout layout = build_layout(layer, array, plan);
        if (dump) out << method_name(m) << " layout:\n" << render_layout(layout);

        SimOptions opts;
        if (inject_fault) {
            const LayoutCycle& cyc = layout.at(0, 0);
            Fault f;
            bool found = false;
            for (int r = 0; r < array.rows && !found; ++r)
                for (int j = 0; j < array.cols && !found; ++j)
                    if (cyc.cells[std::size_t(r) * array.cols + j].used()) {
                        f = Fault{0, 0, r, j, 1};
                        found = true;
                    }
            opts.fault = f;
            out << "injected fault: ar 0 ac 0 row " << f.row << " col " << f.col
                << " (weight +1)\n";
        }

        const SimResult got = simulate(layer, layout, ifm, weights, opts);
        std::string status = "PASS";
        std::string detail;
        if (got.measured_cycles > plan.total_cycles) {
            status = "FAIL";
            detail = " (measured cycles exceed analytic)";
        }
        for (std::size_t i = 0; i < want.data.size() && status == "PASS"; ++i) {
            if (got.ofm.data[i] == want.data[i]) continue;
            status = "FAIL";
            const int o = int(i / (std::size_t(want.h) * want.w));
            const int rem = int(i % (std::size_t(want.h) * want.w));
            detail = " (output mismatch at oc " + std::to_string(o) + " y " +
                     std::to_string(rem / want.w) + " x " + std::to_string(rem % want.w) +
                     ": got " + std::to_string(got.ofm.data[i]) + ", want " +
                     std::to_string(want.data[i]) + ")";
        }
        out << "method " << method_name(m) << ": window " << plan.window.pw_w << "x"
            << plan.window.pw_h << ", analytic " << plan.total_cycles << " cycles, measured "
            << got.measured_cycles << ", output " << status << detail << "\n";
        if (status != "PASS") all_ok = false;
    }
    return all_ok ? 0 : 1;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"planner and simulator for CNN layers on size-limited PIM crossbar arrays"};
    app.require_subcommand(1);

    LayerFlags plan_lf;
    std::string plan_array, plan_method = "vwsdk";
    bool plan_verbose = false;
    auto* plan_cmd = app.add_subcommand("plan", "map one layer onto one array");
    add_layer_flags(plan_cmd, plan_lf);
    plan_cmd->add_option("--array", plan_array, "array size RxC")->required();
    plan_cmd->add_option("--method", plan_method, "im2col, sdk, vwsdk or all");
    plan_cmd->add_flag("--verbose", plan_verbose, "print the full search trace");

    std::string net_file, net_array, net_csv;
    auto* net_cmd = app.add_subcommand("network", "plan every layer of a network file");
    net_cmd->add_option("file", net_file, "network description file")->required();
    net_cmd->add_option("--array", net_array, "array size RxC")->required();
    net_cmd->add_option("--csv", net_csv, "write per-layer results as CSV");

    std::string sweep_file, sweep_csv_path;
    std::vector<std::string> sweep_arrays;
    auto* sweep_cmd = app.add_subcommand("sweep", "compare methods across array sizes");
    sweep_cmd->add_option("file", sweep_file, "network description file")->required();
    sweep_cmd->add_option("--array", sweep_arrays, "array size RxC (repeatable)")->required();
    sweep_cmd->add_option("--csv", sweep_csv_path, "write sweep results as CSV");

    LayerFlags verify_lf;
    std::string verify_array, verify_method = "all";
    unsigned long long verify_seed = 1;
    bool verify_fault = false, verify_dump = false;
    auto* verify_cmd =
        app.add_subcommand("verify", "simulate plans against a direct convolution");
    add_layer_flags(verify_cmd, verify_lf);
    verify_cmd->add_option("--array", verify_array, "array size RxC")->required();
    verify_cmd->add_option("--method", verify_method, "im2col, sdk, vwsdk or all");
    verify_cmd->add_option("--seed", verify_seed, "random tensor seed");
    verify_cmd->add_flag("--inject-fault", verify_fault,
                         "corrupt one weight cell to prove the check bites");
    verify_cmd->add_flag("--dump-layout", verify_dump, "print per-cycle cell grids");

    std::string util_file, util_array;
    auto* util_cmd =
        app.add_subcommand("utilization", "per-layer array utilization for each method");
    util_cmd->add_option("file", util_file, "network description file")->required();
    util_cmd->add_option("--array", util_array, "array size RxC")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (app.got_subcommand(plan_cmd))
            return cmd_plan(plan_lf, plan_array, plan_method, plan_verbose, out);
        if (app.got_subcommand(net_cmd)) return cmd_network(net_file, net_array, net_csv, out);
        if (app.got_subcommand(sweep_cmd))
            return cmd_sweep(sweep_file, sweep_arrays, sweep_csv_path, out);
        if (app.got_subcommand(verify_cmd))
            return cmd_verify(verify_lf, verify_array, verify_method, verify_seed, verify_fault,
                              verify_dump, out);
        if (app.got_subcommand(util_cmd)) return cmd_utilization(util_file, util_array, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace pimmap
