// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

namespace emskin {

/// Gauss-Legendre rule on [-1, 1]; weights sum to 2.
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussLegendre gauss_legendre(int order);

}  // namespace emskin
