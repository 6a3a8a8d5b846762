#pragma once

#include "fsel/constants/ledger.h"

namespace fsel {

/// sigma = 1, xi from alpha = sigma + xi (H - sigma); 1/(1+theta) = kappa/r
/// and 1/mu_g = kappa/(2r) with r mid-way through its feasible interval;
/// delta half of the largest value keeping fixed_one strict.
/// Throws InfeasibleError naming the violated precondition
/// (0 < kappa < 1, 3/2 kappa + H < alpha < 1/(1-gamma), gamma > 1 - 1/(2H)).
FixedConstants solve_fixed(double gamma, double H, double alpha, double kappa);

/// Completes the ledger. vartheta, beta and q are placed mid-range, U is
/// fixed from the second term of teu, and the remaining freedom is one
/// scale L = ln(U t_e^{-1/2-delta}) found by bisection (delta, t_e, t*,
/// c_Af and C_W are explicit functions of L). Throws InfeasibleError with
/// the binding relations if no L works, or if vartheta >= 2 is requested.
ConstantsLedger solve_stage2(const FixedConstants& fixed, const Stage2Options& opt = {});

/// Largest kappa (by bisection) for which both stages succeed and the
/// independent verifier accepts, with alpha mid-way in (3/2 kappa + H, 1/(1-gamma)).
double max_feasible_kappa(double gamma, double H, const Stage2Options& opt = {}, double tol = 1e-4);

struct ClosedFormTe {
  double U = 0.0;
  double t_e = 0.0;
};

/// The explicit choice U = (3/2)^{2/vartheta},
/// t_e^{-1} = (5^{1/alpha} (3/2)^{1-2H})^{1/(vartheta (H+delta)(1/2+delta))} v 3^{1/(vartheta(H-1/2-beta)+1)}.
ClosedFormTe closed_form_te(double H, double alpha, double vartheta, double delta, double beta);

}  // namespace fsel
