// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pinch
{

struct ValidationCheck
{
    std::string name;
    bool ok = false;
    std::string detail;
};

/// Quick self-checks of the solvers against closed forms and invariants on
/// small random instances.
std::vector<ValidationCheck> run_validation(std::uint64_t seed);

} // namespace pinch
