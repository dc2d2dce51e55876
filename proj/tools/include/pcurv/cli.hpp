#pragma once

#include <ostream>
#include <string>

#include "pcurv/surfaces.hpp"

namespace pcurv::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;

// "kind:key=value,..." with kinds sphere, torus, clifford, catenoid, neck,
// graph-flat, paraboloid, graph-random. Any kind accepts perturb=<amplitude>
// and pseed=<seed>. Throws InvalidArgument on unknown kinds or keys.
Surface parse_shape(const std::string& spec);

// Full command-line entry point. Normal output goes to `out` when no output
// path is given; diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pcurv::cli
