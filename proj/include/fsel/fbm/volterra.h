#pragma once

#include <span>
#include <vector>

#include "fsel/fbm/grid.h"

namespace fsel {

/// G(u,s,r) = (s+u-r)^{H-1/2} - (s-r)^{H-1/2}, for r < s and u >= 0.
double kernel_G(double u, double s, double r, double H);

/// dG/dr = (1/2-H) ((s+u-r)^{H-3/2} - (s-r)^{H-3/2}).
double kernel_G_dr(double u, double s, double r, double H);

/// int_a^b (c - r)^{q-1} dr for a < b <= c and q > 0, evaluated without
/// cancellation when c - b is small relative to b - a.
double power_cell_integral(double c, double a, double b, double q);

/// N_t = int_{t0}^t (t-r)^{H-1/2} dB_r on the grid of `brownian`.
///
/// B is taken piecewise linear between nodes and each cell is integrated in
/// closed form. This is the integration-by-parts representation evaluated
/// exactly for the interpolant, so the kernel singularity at r = t never
/// enters a quadrature. At H = 1/2 the result is B - B(t0) exactly.
Path riemann_liouville(const Path& brownian, double H);

/// int_from^to (to + shift - r)^{H-1/2} dB_r, same discretization.
/// `from` and `to` must be grid nodes; shift >= 0.
double volterra_integral(const Path& brownian, double H, double from, double to, double shift = 0.0);

/// Past window (u, v) seen from the restart time s; requires u <= v <= s.
struct PastWindow {
  double u = 0.0;
  double v = 0.0;
  double s = 0.0;
};

/// h -> P^{(u,v),s}_h = int_u^v G(h, s, r) dB_r at each requested h >= 0.
/// u and v must be nodes of the Brownian grid.
std::vector<double> past_process_at(const Path& brownian, double H, const PastWindow& w,
                                    std::span<const double> h);

/// past_process_at over every node of `horizon` (a grid of elapsed times h).
Path past_process(const Path& brownian, double H, const PastWindow& w, const TimeGrid& horizon);

struct BridgeDecomposition {
  double Z = 0.0;
  Path bridge;
};

/// B_t = B_a + (t-a) Z + b_t on a path spanning exactly one time unit.
BridgeDecomposition bridge_decompose(const Path& brownian_unit);

/// Constant C_H for which, on grid data,
///   sup_{u<=1} sup_{v in [s,t]} |int_s^v (v+u-r)^{H-1/2} dB_r| / (1+v-s)^{H+delta}
///     <= C_H (1+t-s)^{2 delta} M(s,t).
/// Requires 0 < delta < H. The factor 3 bounds the Hölder seminorm of the
/// linear interpolant by the seminorm over nodes.
double ibp_long_term_constant(double H, double delta);

}  // namespace fsel
