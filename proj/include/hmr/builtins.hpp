#pragma once

#include <string>
#include <vector>

#include "hmr/config.hpp"
#include "hmr/rational_map.hpp"

namespace hmr {

// Named example maps, selectable as "name" or "name:k=v,k=v":
//   example-4.1                   1/(3 - z - z^2)
//   example-4.2                   z^2/(3 - z - z^2)
//   blaschke-2.6                  z(1 - 2z)/(2 - z)
//   family-5.3:d=<int>            1/((d+1) - z - z^2 - ... - z^d)
//   z-pow:n=<int>                 z^n
//   z-over-a-minus-zn:a=<real>,n=<int>   z/(a - z^n)
// Integer parameters are capped at 12 to stay inside the degree range the
// numerics are tuned for.  Throws MapParseError on unknown names or bad
// parameters; the returned map is NOT certified here (callers certify).
RationalMap builtin_map(const std::string& spec,
                        const Tolerances& tol = default_tolerances());

// Canonical spelling of every builtin, with parameter placeholders.
std::vector<std::string> builtin_names();

}  // namespace hmr
