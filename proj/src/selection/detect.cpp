#include "fsel/selection/detect.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <optional>

#include "fsel/common/error.h"

namespace fsel {

void SelectionDetector::SparseMax::build(const std::vector<double>& v) {
  table.clear();
  table.push_back(v);
  for (std::size_t w = 1; 2 * w <= v.size(); w *= 2) {
    const auto& prev = table.back();
    std::vector<double> next(v.size() - 2 * w + 1);
    for (std::size_t i = 0; i < next.size(); ++i) next[i] = std::max(prev[i], prev[i + w]);
    table.push_back(std::move(next));
  }
}

double SelectionDetector::SparseMax::max(std::size_t lo, std::size_t hi) const noexcept {
  const std::size_t len = hi - lo + 1;
  const auto l = static_cast<std::size_t>(std::bit_width(len) - 1);
  return std::max(table[l][lo], table[l][hi + 1 - (std::size_t{1} << l)]);
}

SelectionDetector::SelectionDetector(const ModelParams& p, const TimeGrid& grid, double alpha,
                                     const DetectOptions& opt)
    : p_(p), grid_(grid), alpha_(alpha), opt_(opt) {
  validate(p);
  if (!(alpha > 0.0)) throw DomainError("detect_selection: alpha must be > 0");
  if (opt.margin_mode == MarginMode::relative && !(opt.relative_delta > 0.0 && opt.relative_delta < 1.0))
    throw DomainError("detect_selection: relative_delta must lie in (0, 1)");
  if (!(opt.min_tail >= 0.0)) throw DomainError("detect_selection: min_tail must be >= 0");

  const TransitionPoint tp = transition_point(p);
  const std::size_t n = grid.steps();
  const double dt = grid.dt();
  const double horizon = static_cast<double>(n) * dt;
  const double need = std::max(10.0, opt.min_tail) * tp.t_eps;
  if (horizon < need * (1.0 - 1e-9))
    throw RefusalError("detect_selection: horizon " + std::to_string(horizon / tp.t_eps) +
                       " t_eps is too short to decide (need " + std::to_string(need / tp.t_eps) + ")");
  const auto tail_steps = static_cast<std::size_t>(std::ceil(opt.min_tail * tp.t_eps / dt * (1.0 - 1e-9)));
  i_max_ = n - std::min(n, tail_steps);

  const double margin = p.epsilon * std::pow(tp.t_eps, p.hurst - alpha);
  env_plus_.resize(n + 1);
  env_minus_.resize(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const double h = static_cast<double>(k) * dt;
    double ep = flow_phi(tp.x_eps, p.a_plus * h, p.gamma);
    double em = flow_phi(tp.x_eps, p.a_minus * h, p.gamma);
    if (opt.margin_mode == MarginMode::paper) {
      const double m = margin * std::pow(h, alpha);
      ep -= m;
      em -= m;
    } else {
      ep *= 1.0 - opt.relative_delta;
      em *= 1.0 - opt.relative_delta;
    }
    env_plus_[k] = ep;
    env_minus_[k] = em;
  }
  max_plus_.build(env_plus_);
  max_minus_.build(env_minus_);
}

double SelectionDetector::envelope(std::size_t lag, Side side) const noexcept {
  return side == Side::plus ? env_plus_[lag] : env_minus_[lag];
}

// Per-path state: min/max of X over aligned dyadic blocks, level l holding
// blocks of 2^l nodes. Validity of whole candidate blocks is decided by
// comparing block extrema of X against the envelope maximum over the block
// pair's lag range, splitting until the comparison is conclusive; single
// node pairs are compared exactly, so the result equals the brute-force scan.
struct DetectRun {
  const SelectionDetector& d;
  std::span<const double> x;
  std::size_t nodes;
  std::vector<std::vector<double>> mn, mx;

  DetectRun(const SelectionDetector& det, std::span<const double> values)
      : d(det), x(values), nodes(values.size()) {
    mn.emplace_back(x.begin(), x.end());
    mx.emplace_back(x.begin(), x.end());
    while (mn.back().size() > 1) {
      const auto& pn = mn.back();
      const auto& px = mx.back();
      const std::size_t m = (pn.size() + 1) / 2;
      std::vector<double> nn(m), nx(m);
      for (std::size_t k = 0; k < m; ++k) {
        const std::size_t a = 2 * k, b = std::min(2 * k + 1, pn.size() - 1);
        nn[k] = std::min(pn[a], pn[b]);
        nx[k] = std::max(px[a], px[b]);
      }
      mn.push_back(std::move(nn));
      mx.push_back(std::move(nx));
    }
  }

  std::size_t top() const { return mn.size() - 1; }
  std::size_t lo(std::size_t l, std::size_t k) const { return k << l; }
  std::size_t hi(std::size_t l, std::size_t k) const { return std::min(((k + 1) << l) - 1, nodes - 1); }
  bool exists(std::size_t l, std::size_t k) const { return lo(l, k) < nodes; }

  double env_max(std::size_t a, std::size_t b, int sigma) const {
    return sigma > 0 ? d.max_plus_.max(a, b) : d.max_minus_.max(a, b);
  }

  // Every i in block I and j in block J (J after I) satisfy sigma X_j > E(j - i).
  bool pairs_ok(std::size_t il, std::size_t ik, std::size_t jl, std::size_t jk, int sigma) const {
    const std::size_t lag_lo = lo(jl, jk) - hi(il, ik);
    const std::size_t lag_hi = hi(jl, jk) - lo(il, ik);
    const double val = sigma > 0 ? mn[jl][jk] : -mx[jl][jk];
    if (val > env_max(lag_lo, lag_hi, sigma)) return true;
    if (il == 0 && jl == 0) return false;
    if (jl >= il) {
      if (!pairs_ok(il, ik, jl - 1, 2 * jk, sigma)) return false;
      return !exists(jl - 1, 2 * jk + 1) || pairs_ok(il, ik, jl - 1, 2 * jk + 1, sigma);
    }
    if (exists(il - 1, 2 * ik + 1) && !pairs_ok(il - 1, 2 * ik + 1, jl, jk, sigma)) return false;
    return pairs_ok(il - 1, 2 * ik, jl, jk, sigma);
  }

  bool intra_ok(std::size_t l, std::size_t k, int sigma) const {
    if (l == 0) return true;
    if (!exists(l - 1, 2 * k + 1)) return intra_ok(l - 1, 2 * k, sigma);
    return pairs_ok(l - 1, 2 * k, l - 1, 2 * k + 1, sigma) && intra_ok(l - 1, 2 * k + 1, sigma) &&
           intra_ok(l - 1, 2 * k, sigma);
  }

  bool all_valid(std::size_t l, std::size_t k) const {
    int sigma = 0;
    if (mn[l][k] > 0.0)
      sigma = 1;
    else if (mx[l][k] < 0.0)
      sigma = -1;
    else
      return false;
    // Later nodes, covered by maximal aligned blocks.
    std::size_t start = hi(l, k) + 1;
    while (start < nodes) {
      std::size_t jl = 0;
      while (jl < top() && start % (std::size_t{1} << (jl + 1)) == 0) ++jl;
      if (!pairs_ok(l, k, jl, start >> jl, sigma)) return false;
      start += std::size_t{1} << jl;
    }
    return intra_ok(l, k, sigma);
  }

  // Largest invalid candidate index <= limit inside block (l, k).
  std::optional<std::size_t> last_invalid(std::size_t l, std::size_t k, std::size_t limit) const {
    if (lo(l, k) > limit) return std::nullopt;
    if (hi(l, k) <= limit && all_valid(l, k)) return std::nullopt;
    if (l == 0) return lo(l, k);
    if (exists(l - 1, 2 * k + 1))
      if (auto r = last_invalid(l - 1, 2 * k + 1, limit)) return r;
    return last_invalid(l - 1, 2 * k, limit);
  }
};

SelectionOutcome SelectionDetector::detect(const Path& path) const {
  if (!(path.grid() == grid_)) throw DomainError("detect_selection: path grid differs from the detector grid");
  const auto x = path.values();
  const std::size_t n = grid_.steps();
  const DetectRun run(*this, x);
  const auto bad = run.last_invalid(run.top(), 0, i_max_);

  SelectionOutcome out;
  std::size_t psi = 0;
  if (bad && *bad == i_max_) {
    out.sign = Selected::undecided;
  } else {
    psi = bad ? *bad + 1 : 0;
    out.sign = x[psi] > 0.0 ? Selected::plus : Selected::minus;
    out.psi_hat = grid_.time(psi);
  }

  if (bad) {
    const std::size_t a = *bad;
    int sigma = x[a] > 0.0 ? 1 : (x[a] < 0.0 ? -1 : 0);
    if (sigma == 0) sigma = out.sign == Selected::minus ? -1 : 1;
    const auto& env = sigma > 0 ? env_plus_ : env_minus_;
    bool in_run = false;
    for (std::size_t j = a + 1; j <= n; ++j) {
      const double deficit = env[j - a] - sigma * x[j];
      if (deficit >= 0.0) {
        if (!in_run) out.violations.push_back({grid_.time(j), deficit});
        out.violations.back().deficit = std::max(out.violations.back().deficit, deficit);
        in_run = true;
      } else {
        in_run = false;
      }
    }
    // X vanished at the failing candidate and nothing later crossed.
    if (out.violations.empty()) out.violations.push_back({grid_.time(a), env[0] - sigma * x[a]});
  }
  return out;
}

SelectionOutcome detect_selection(const Path& x, const ModelParams& p, double alpha, const DetectOptions& opt) {
  return SelectionDetector(p, x.grid(), alpha, opt).detect(x);
}

}  // namespace fsel
