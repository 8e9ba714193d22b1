#pragma once

#include <string>
#include <string_view>

#include "permlocal/permutation.hpp"

namespace permlocal {

// Accepts whitespace- or comma-separated one-based values, or a compact
// digit word like "2341" for lengths up to 9.
Permutation parse_permutation(std::string_view text);

std::string format_permutation(const Permutation& p, char sep = ' ');

}  // namespace permlocal
