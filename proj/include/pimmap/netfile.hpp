// Line-oriented network description files.
//
//   # comment
//   network vgg13
//   layer name=conv1 ifm=224x224 kernel=3x3 ic=3 oc=64
//
// One layer per line, all five fields required. '#' starts a comment
// anywhere on a line.
#pragma once

#include <stdexcept>
#include <string>

#include "pimmap/types.hpp"

namespace pimmap {

// Carries "source:line: message" for malformed input.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

NetworkSpec parse_network_text(const std::string& text, const std::string& source = "<input>");
NetworkSpec parse_network_file(const std::string& path);

// Inverse of parsing: parse_network_text(render_network(net)) == net.
std::string render_network(const NetworkSpec& net);

}  // namespace pimmap
