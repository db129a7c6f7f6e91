// Command-line front end. run_cli is the whole program minus main() so
// tests can drive it with argv vectors and capture the streams.
#pragma once

#include <ostream>

namespace pimmap {

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pimmap
