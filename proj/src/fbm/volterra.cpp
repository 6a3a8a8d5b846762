#include "fsel/fbm/volterra.h"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <string>

#include "fsel/common/error.h"

namespace fsel {
namespace {

std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

void check_hurst(double H) {
  if (!(H > 0.0 && H < 1.0)) throw DomainError("Hurst index must lie in (0, 1)");
}

std::vector<double> increments(std::span<const double> b) {
  std::vector<double> d(b.size() - 1);
  for (std::size_t k = 0; k + 1 < b.size(); ++k) d[k] = b[k + 1] - b[k];
  return d;
}

// out[j] = sum_{k<=j} x[k] y[j-k], j = 0..len-1, for len = x.size() = y.size().
std::vector<double> causal_convolution(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t len = x.size();
  std::vector<double> out(len, 0.0);
  if (len <= 2048) {
    for (std::size_t j = 0; j < len; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k <= j; ++k) acc += x[k] * y[j - k];
      out[j] = acc;
    }
    return out;
  }
  std::size_t m = 1;
  while (m < 2 * len) m <<= 1;
  const std::size_t mc = m / 2 + 1;
  double* rx = fftw_alloc_real(m);
  double* ry = fftw_alloc_real(m);
  fftw_complex* cx = fftw_alloc_complex(mc);
  fftw_complex* cy = fftw_alloc_complex(mc);
  fftw_plan fx, fy, inv;
  {
    std::lock_guard lock(plan_mutex());
    fx = fftw_plan_dft_r2c_1d(static_cast<int>(m), rx, cx, FFTW_ESTIMATE);
    fy = fftw_plan_dft_r2c_1d(static_cast<int>(m), ry, cy, FFTW_ESTIMATE);
    inv = fftw_plan_dft_c2r_1d(static_cast<int>(m), cx, rx, FFTW_ESTIMATE);
  }
  for (std::size_t i = 0; i < m; ++i) {
    rx[i] = i < len ? x[i] : 0.0;
    ry[i] = i < len ? y[i] : 0.0;
  }
  fftw_execute(fx);
  fftw_execute(fy);
  for (std::size_t i = 0; i < mc; ++i) {
    const double re = cx[i][0] * cy[i][0] - cx[i][1] * cy[i][1];
    const double im = cx[i][0] * cy[i][1] + cx[i][1] * cy[i][0];
    cx[i][0] = re;
    cx[i][1] = im;
  }
  fftw_execute(inv);
  for (std::size_t j = 0; j < len; ++j) out[j] = rx[j] / static_cast<double>(m);
  {
    std::lock_guard lock(plan_mutex());
    fftw_destroy_plan(fx);
    fftw_destroy_plan(fy);
    fftw_destroy_plan(inv);
  }
  fftw_free(rx);
  fftw_free(ry);
  fftw_free(cx);
  fftw_free(cy);
  return out;
}

}  // namespace

double kernel_G(double u, double s, double r, double H) {
  check_hurst(H);
  if (!(r < s)) throw DomainError("kernel_G: need r < s");
  if (!(u >= 0.0)) throw DomainError("kernel_G: need u >= 0");
  if (u == 0.0 || H == 0.5) return 0.0;
  return std::pow(s + u - r, H - 0.5) - std::pow(s - r, H - 0.5);
}

double kernel_G_dr(double u, double s, double r, double H) {
  check_hurst(H);
  if (!(r < s)) throw DomainError("kernel_G_dr: need r < s");
  if (!(u >= 0.0)) throw DomainError("kernel_G_dr: need u >= 0");
  if (u == 0.0 || H == 0.5) return 0.0;
  return (0.5 - H) * (std::pow(s + u - r, H - 1.5) - std::pow(s - r, H - 1.5));
}

double power_cell_integral(double c, double a, double b, double q) {
  const double x = c - b;
  const double d = b - a;
  if (x <= 0.0) return std::pow(d, q) / q;
  // ((x+d)^q - x^q)/q = x^q ((1 + d/x)^q - 1)/q
  return std::pow(x, q) * std::expm1(q * std::log1p(d / x)) / q;
}

Path riemann_liouville(const Path& brownian, double H) {
  check_hurst(H);
  const auto b = brownian.values();
  const std::size_t n = brownian.grid().steps();
  std::vector<double> out(n + 1, 0.0);
  if (H == 0.5) {
    for (std::size_t j = 0; j <= n; ++j) out[j] = b[j] - b[0];
    return Path(brownian.grid(), std::move(out));
  }
  // N(t_j) = sum_{k<j} dB_k w(j-1-k), w(m) = cell integral over a cell whose
  // right edge sits m steps before t_j, divided by dt.
  const double dt = brownian.grid().dt();
  const double q = H + 0.5;
  std::vector<double> w(n);
  for (std::size_t m = 0; m < n; ++m) {
    const double md = static_cast<double>(m);
    w[m] = std::pow(dt, q - 1.0) * power_cell_integral(md + 1.0, 0.0, 1.0, q);
  }
  const auto conv = causal_convolution(increments(b), w);
  for (std::size_t j = 1; j <= n; ++j) out[j] = conv[j - 1];
  return Path(brownian.grid(), std::move(out));
}

double volterra_integral(const Path& brownian, double H, double from, double to, double shift) {
  check_hurst(H);
  if (!(shift >= 0.0)) throw DomainError("volterra_integral: shift must be >= 0");
  const auto& g = brownian.grid();
  const std::size_t i0 = g.require_index(from, "volterra_integral: from");
  const std::size_t i1 = g.require_index(to, "volterra_integral: to");
  if (i0 > i1) throw DomainError("volterra_integral: need from <= to");
  const auto b = brownian.values();
  if (H == 0.5) return b[i1] - b[i0];
  const double q = H + 0.5;
  const double dt = g.dt();
  const double c = static_cast<double>(i1) + shift / dt;  // in step units
  double acc = 0.0;
  for (std::size_t k = i0; k < i1; ++k) {
    const double cell = power_cell_integral(c, static_cast<double>(k), static_cast<double>(k + 1), q);
    acc += (b[k + 1] - b[k]) * cell;
  }
  return acc * std::pow(dt, q - 1.0);
}

std::vector<double> past_process_at(const Path& brownian, double H, const PastWindow& w,
                                    std::span<const double> h) {
  check_hurst(H);
  if (!(w.u <= w.v && w.v <= w.s)) throw DomainError("past_process: need u <= v <= s");
  const auto& g = brownian.grid();
  const auto iu = g.index_of(w.u);
  const auto iv = g.index_of(w.v);
  if (!iu || !iv)
    throw DomainError("past_process: window (" + std::to_string(w.u) + ", " + std::to_string(w.v) +
                      ") is not covered by the Brownian grid");
  for (double x : h)
    if (!(x >= 0.0)) throw DomainError("past_process: elapsed time h must be >= 0");
  std::vector<double> out(h.size(), 0.0);
  if (H == 0.5 || *iu == *iv) return out;

  // Work in step units relative to the grid origin: P_h = dt^{H-1/2}
  // sum_k dB_k [I(s+h) - I(s)] with I(c) the cell integral of (c-r)^{H-1/2}.
  const auto b = brownian.values();
  const double dt = g.dt();
  const double q = H + 0.5;
  const double sc = (w.s - g.t0()) / dt;
  const double scale = std::pow(dt, q - 1.0);
  for (std::size_t j = 0; j < h.size(); ++j) {
    if (h[j] == 0.0) continue;
    const double c1 = sc + h[j] / dt;
    double acc = 0.0;
    for (std::size_t k = *iu; k < *iv; ++k) {
      const double a = static_cast<double>(k);
      const double e = static_cast<double>(k + 1);
      acc += (b[k + 1] - b[k]) * (power_cell_integral(c1, a, e, q) - power_cell_integral(sc, a, e, q));
    }
    out[j] = acc * scale;
  }
  return out;
}

Path past_process(const Path& brownian, double H, const PastWindow& w, const TimeGrid& horizon) {
  std::vector<double> h(horizon.nodes());
  for (std::size_t k = 0; k < h.size(); ++k) h[k] = horizon.time(k);
  return Path(horizon, past_process_at(brownian, H, w, h));
}

BridgeDecomposition bridge_decompose(const Path& brownian_unit) {
  const auto& g = brownian_unit.grid();
  const double len = g.end() - g.t0();
  if (std::abs(len - 1.0) > 1e-9) throw DomainError("bridge_decompose: path must span exactly one time unit");
  const auto b = brownian_unit.values();
  const double Z = b.back() - b.front();
  const std::size_t n = g.steps();
  std::vector<double> br(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const double frac = static_cast<double>(k) / static_cast<double>(n);
    br[k] = b[k] - b[0] - frac * Z;
  }
  br[0] = 0.0;
  br[n] = 0.0;
  return {Z, Path(g, std::move(br))};
}

double ibp_long_term_constant(double H, double delta) {
  check_hurst(H);
  if (!(delta > 0.0 && delta < H)) throw DomainError("ibp_long_term_constant: need 0 < delta < H");
  return 3.0 * (1.0 + std::abs(H - 0.5) / (H - delta));
}

}  // namespace fsel
