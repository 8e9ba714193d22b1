#pragma once

#include <string>

#include "permlocal/permutation.hpp"

namespace permlocal {

// Scatter plot of the points (i, p(i)) on a fixed 1000x1000 canvas with
// radius-2 dots, origin at the bottom-left, position axis horizontal.
// Deterministic: identical permutations give identical bytes.
std::string svg_plot(const Permutation& p);

}  // namespace permlocal
