#pragma once

#include <limits>

#include "fsel/fbm/grid.h"

namespace fsel {

/// L(U,T) = sup_{r in [U,T]} |B_r - B_T| / (1 + T - r)^{1/2+delta}, over nodes.
double norm_L(const Path& brownian, double U, double T, double delta);

/// S(T-1,T) = sup_{r in [T-1,T)} |B_r - B_T| / (T - r)^{1/2-delta}, over nodes.
double norm_S(const Path& brownian, double T, double delta);

/// M(a,b) = |b-a|^{-delta} sup_{u<v in [a,b]} |B_v - B_u| / (v-u)^{1/2-delta},
/// the supremum running over node pairs.
double norm_M(const Path& brownian, double a, double b, double delta);

/// Hölder seminorm sup |B_v - B_u| / (v-u)^exponent over node pairs with
/// first <= u < v <= last. Exact over nodes; blocks whose range bound cannot
/// beat the running maximum are skipped. Returns as soon as the running
/// maximum exceeds `stop_above`.
double holder_seminorm(const Path& path, std::size_t first, std::size_t last, double exponent,
                       double stop_above = std::numeric_limits<double>::infinity());

}  // namespace fsel
