// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "emskin/vec3.hpp"

namespace emskin {

/// Diagonal surface susceptibilities in metres.
struct SusceptibilityTensors {
  cd e_xx{}, e_yy{}, e_zz{};
  cd h_xx{}, h_yy{}, h_zz{};
};

/// Local reflection operator on tangential E in the (perp, par) basis:
///   [E_r,perp]   [pp ps] [E_i,perp]
///   [E_r,par ] = [sp ss] [E_i,par ]
struct ReflectionTensor {
  cd pp{}, ps{}, sp{}, ss{};

  static ReflectionTensor diagonal(cd value) { return {value, cd{}, cd{}, value}; }
};

}  // namespace emskin
