#pragma once

#include "fsel/constants/ledger.h"

namespace fsel {

/// Re-evaluates every relation on a complete ledger directly from its
/// values. Shares no code with the solver. ok iff every relation holds.
VerificationReport verify_ledger(const ConstantsLedger& ledger, double gamma, double H);

}  // namespace fsel
