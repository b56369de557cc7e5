// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "cbreak/config.hpp"

#include <cstdint>
#include <ostream>

namespace cbreak::tools {

/*!
 * Compare the solver against the brute-force oracle on an 8-cell mesh over
 * the configured domain, with the configured kernel and breakage and a
 * seeded random state. Returns true when rhs and one Euler step agree to
 * 1e-12 relative to the instance scale (the size of the loss term for rates,
 * the largest concentration for steps).
 */
bool seed_check(RunConfig const& config, std::ostream& log, std::uint64_t seed = 20240611);

}  // namespace cbreak::tools
