#include "pimmap/netfile.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string_view>
#include <tuple>
#include <vector>

namespace pimmap {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

struct LineContext {
    const std::string& source;
    int line;

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(source + ":" + std::to_string(line) + ": " + msg);
    }
};

int parse_int(std::string_view s, const LineContext& ctx, const std::string& field) {
    int value = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        ctx.fail("field '" + field + "': '" + std::string(s) + "' is not an integer");
    return value;
}

std::pair<int, int> parse_dims(std::string_view s, const LineContext& ctx,
                               const std::string& field) {
    const auto x = s.find('x');
    if (x == std::string_view::npos || x == 0 || x + 1 == s.size())
        ctx.fail("field '" + field + "': expected WxH, got '" + std::string(s) + "'");
    return {parse_int(s.substr(0, x), ctx, field), parse_int(s.substr(x + 1), ctx, field)};
}

LayerSpec parse_layer_fields(const std::vector<std::string_view>& tokens,
                             const LineContext& ctx) {
    LayerSpec layer;
    bool seen_name = false, seen_ifm = false, seen_kernel = false, seen_ic = false,
         seen_oc = false;
    for (std::size_t t = 1; t < tokens.size(); ++t) {
        const auto tok = tokens[t];
        const auto eq = tok.find('=');
        if (eq == std::string_view::npos)
            ctx.fail("expected key=value, got '" + std::string(tok) + "'");
        const std::string key(tok.substr(0, eq));
        const auto value = tok.substr(eq + 1);
        bool* seen = nullptr;
        if (key == "name") {
            seen = &seen_name;
            layer.name = std::string(value);
        } else if (key == "ifm") {
            seen = &seen_ifm;
            std::tie(layer.ifm_w, layer.ifm_h) = parse_dims(value, ctx, key);
        } else if (key == "kernel") {
            seen = &seen_kernel;
            std::tie(layer.k_w, layer.k_h) = parse_dims(value, ctx, key);
        } else if (key == "ic") {
            seen = &seen_ic;
            layer.in_ch = parse_int(value, ctx, key);
        } else if (key == "oc") {
            seen = &seen_oc;
            layer.out_ch = parse_int(value, ctx, key);
        } else {
            ctx.fail("unknown field '" + key + "'");
        }
        if (*seen) ctx.fail("duplicate field '" + key + "'");
        *seen = true;
    }
    if (!seen_name) ctx.fail("layer missing field 'name'");
    if (!seen_ifm) ctx.fail("layer missing field 'ifm'");
    if (!seen_kernel) ctx.fail("layer missing field 'kernel'");
    if (!seen_ic) ctx.fail("layer missing field 'ic'");
    if (!seen_oc) ctx.fail("layer missing field 'oc'");
    return layer;
}

}  // namespace

NetworkSpec parse_network_text(const std::string& text, const std::string& source) {
    NetworkSpec net;
    bool have_network = false;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const LineContext ctx{source, line_no};
        std::string_view line(raw);
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto tokens = split_ws(line);
        if (tokens[0] == "network") {
            if (have_network) ctx.fail("duplicate 'network' line");
            if (tokens.size() != 2) ctx.fail("expected 'network <name>'");
            net.name = std::string(tokens[1]);
            have_network = true;
        } else if (tokens[0] == "layer") {
            if (!have_network) ctx.fail("'layer' before 'network' line");
            net.layers.push_back(parse_layer_fields(tokens, ctx));
        } else {
            ctx.fail("unknown directive '" + std::string(tokens[0]) + "'");
        }
    }
    if (!have_network)
        throw ParseError(source + ": no 'network' line found");
    return validate_network(net);
}

NetworkSpec parse_network_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_network_text(buf.str(), path);
}

std::string render_network(const NetworkSpec& net) {
    std::ostringstream os;
    os << "network " << net.name << "\n";
    for (const auto& l : net.layers) {
        os << "layer name=" << l.name << " ifm=" << l.ifm_w << "x" << l.ifm_h << " kernel="
           << l.k_w << "x" << l.k_h << " ic=" << l.in_ch << " oc=" << l.out_ch << "\n";
    }
    return os.str();
}

}  // namespace pimmap
