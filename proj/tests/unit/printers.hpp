#pragma once

#include <ostream>

#include "porosplit/time_basis.hpp"

namespace porosplit {

// Readable parameter values in gtest names and failure messages.
inline void PrintTo(TimeScheme scheme, std::ostream* os) {
  *os << (scheme == TimeScheme::Continuous ? "cGP" : "dG");
}

}  // namespace porosplit
