#pragma once

#include <limits>
#include <vector>

#include "fsel/fbm/grid.h"
#include "fsel/flow/flow.h"

namespace fsel {

enum class MarginMode {
  /// E(h) = phi(x_eps, A h) - eps t_eps^{H-alpha} h^alpha
  paper,
  /// E(h) = (1 - relative_delta) phi(x_eps, A h)
  relative,
};

enum class Selected { plus, minus, undecided };

struct Violation {
  double time = 0.0;
  double deficit = 0.0;
};

struct SelectionOutcome {
  Selected sign = Selected::undecided;
  /// Start of the final stretch on which the envelope holds; NaN if undecided.
  double psi_hat = std::numeric_limits<double>::quiet_NaN();
  std::vector<Violation> violations;
};

struct DetectOptions {
  MarginMode margin_mode = MarginMode::paper;
  double relative_delta = 0.1;
  /// Candidates need at least this much future, in units of t_eps.
  double min_tail = 10.0;
};

/// Finite-horizon selection time.
///
/// A node i with sigma = sign(X_i) != 0 is a valid start if
/// sigma X_j > E_sigma(t_j - t_i) for every later node j, where E uses
/// A^{sigma}. Only nodes with at least min_tail * t_eps of future are
/// candidates; the last of them is i_max. If i_max is not valid the path is
/// undecided. Otherwise psi_hat is the time of the node after the last
/// invalid candidate (t0 if there is none) and the sign is that of X there.
///
/// Violations are the runs of nodes j after the last invalid candidate i*
/// on which the envelope anchored at i* fails, one entry per run: time where
/// the run starts and its largest deficit E - sigma X_j. sigma is the sign
/// of X at i*, or the selected sign when X vanishes there.
///
/// The envelope does not depend on the path, so a detector is built once per
/// (model, grid, alpha) and reused. detect() is reentrant.
class SelectionDetector {
 public:
  SelectionDetector(const ModelParams& p, const TimeGrid& grid, double alpha, const DetectOptions& opt = {});

  SelectionOutcome detect(const Path& x) const;

  /// Envelope value at lag k (k steps of dt) for the given side.
  double envelope(std::size_t lag, Side side) const noexcept;

  const TimeGrid& grid() const noexcept { return grid_; }
  std::size_t last_candidate() const noexcept { return i_max_; }

 private:
  struct SparseMax {
    std::vector<std::vector<double>> table;
    void build(const std::vector<double>& v);
    double max(std::size_t lo, std::size_t hi) const noexcept;
  };

  ModelParams p_;
  TimeGrid grid_;
  double alpha_;
  DetectOptions opt_;
  std::size_t i_max_ = 0;
  std::vector<double> env_plus_, env_minus_;
  SparseMax max_plus_, max_minus_;

  friend struct DetectRun;
};

SelectionOutcome detect_selection(const Path& x, const ModelParams& p, double alpha, const DetectOptions& opt = {});

}  // namespace fsel
