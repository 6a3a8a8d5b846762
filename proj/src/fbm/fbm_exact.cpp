#include "fsel/fbm/fbm_exact.h"

#include <fftw3.h>

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <mutex>
#include <string>

#include "fsel/common/error.h"

namespace fsel {
namespace {

// FFTW planning is not thread-safe; execution of an existing plan is.
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

void check_hurst(double H) {
  if (!(H > 0.0 && H < 1.0)) throw DomainError("Hurst index must lie in (0, 1)");
}

enum class Method { brownian, cholesky, circulant };

}  // namespace

double fbm_covariance(double s, double t, double H) {
  check_hurst(H);
  const double e = 2.0 * H;
  return 0.5 * (std::pow(std::abs(s), e) + std::pow(std::abs(t), e) - std::pow(std::abs(t - s), e));
}

double fgn_autocovariance(std::size_t k, double H) {
  if (k == 0) return 1.0;
  const double e = 2.0 * H;
  const double x = static_cast<double>(k);
  return 0.5 * (std::pow(x + 1.0, e) - 2.0 * std::pow(x, e) + std::pow(x - 1.0, e));
}

struct FbmSampler::Impl {
  Method method = Method::brownian;
  std::size_t n = 0;
  // Cholesky: lower factor of the n x n fGn covariance.
  Eigen::MatrixXd chol;
  // Circulant: sqrt(lambda_j / m) for the size-m embedding, and a plan.
  std::size_t m = 0;
  std::vector<double> sqrt_eig;
  fftw_plan plan = nullptr;

  ~Impl() {
    if (plan) {
      std::lock_guard lock(plan_mutex());
      fftw_destroy_plan(plan);
    }
  }
};

FbmSampler::FbmSampler(const TimeGrid& grid, double H) : grid_(grid), H_(H), impl_(std::make_unique<Impl>()) {
  check_hurst(H);
  const std::size_t n = grid.steps();
  if (n > kExactFbmMaxSteps)
    throw RefusalError("exact fBm: " + std::to_string(n) + " steps exceeds the cap of " +
                       std::to_string(kExactFbmMaxSteps));
  impl_->n = n;

  if (H == 0.5) {
    impl_->method = Method::brownian;
    return;
  }

  if (n <= kCholeskyMaxSteps) {
    impl_->method = Method::cholesky;
    Eigen::MatrixXd cov(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) cov(i, j) = fgn_autocovariance(i > j ? i - j : j - i, H);
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success)
      throw NumericError("exact fBm: fGn covariance is not positive definite (n = " + std::to_string(n) + ")");
    impl_->chol = llt.matrixL();
    return;
  }

  // Circulant embedding of size m = 2n: first row c_0..c_n, c_{n-1}..c_1.
  impl_->method = Method::circulant;
  const std::size_t m = 2 * n;
  impl_->m = m;
  auto* buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * m));
  if (!buf) throw std::bad_alloc();
  for (std::size_t j = 0; j < m; ++j) {
    const std::size_t lag = j <= n ? j : m - j;
    buf[j][0] = fgn_autocovariance(lag, H);
    buf[j][1] = 0.0;
  }
  {
    std::lock_guard lock(plan_mutex());
    fftw_plan p = fftw_plan_dft_1d(static_cast<int>(m), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    fftw_execute(p);
    fftw_destroy_plan(p);
  }
  double max_eig = 0.0;
  for (std::size_t j = 0; j < m; ++j) max_eig = std::max(max_eig, buf[j][0]);
  impl_->sqrt_eig.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    double lam = buf[j][0];
    if (lam < 0.0) {
      if (lam < -1e-10 * max_eig) {
        fftw_free(buf);
        throw NumericError("exact fBm: circulant embedding has negative eigenvalue " + std::to_string(lam) +
                           " at n = " + std::to_string(n));
      }
      lam = 0.0;  // roundoff
    }
    impl_->sqrt_eig[j] = std::sqrt(lam / static_cast<double>(m));
  }
  {
    std::lock_guard lock(plan_mutex());
    impl_->plan = fftw_plan_dft_1d(static_cast<int>(m), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  fftw_free(buf);
  if (!impl_->plan) throw NumericError("exact fBm: FFT planning failed");
}

FbmSampler::~FbmSampler() = default;
FbmSampler::FbmSampler(FbmSampler&&) noexcept = default;
FbmSampler& FbmSampler::operator=(FbmSampler&&) noexcept = default;

std::vector<double> FbmSampler::sample_increments(Engine& rng) const {
  const std::size_t n = impl_->n;
  std::normal_distribution<double> normal;
  std::vector<double> z(n);
  switch (impl_->method) {
    case Method::brownian:
      for (auto& v : z) v = normal(rng);
      break;
    case Method::cholesky: {
      Eigen::VectorXd g(n);
      for (std::size_t i = 0; i < n; ++i) g[i] = normal(rng);
      const Eigen::VectorXd y = impl_->chol * g;
      for (std::size_t i = 0; i < n; ++i) z[i] = y[i];
      break;
    }
    case Method::circulant: {
      const std::size_t m = impl_->m;
      auto* buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * m));
      if (!buf) throw std::bad_alloc();
      for (std::size_t j = 0; j < m; ++j) {
        buf[j][0] = impl_->sqrt_eig[j] * normal(rng);
        buf[j][1] = impl_->sqrt_eig[j] * normal(rng);
      }
      fftw_execute_dft(impl_->plan, buf, buf);
      // Real and imaginary parts are independent exact samples; the real
      // part is used so every draw consumes the same number of normals.
      for (std::size_t i = 0; i < n; ++i) z[i] = buf[i][0];
      fftw_free(buf);
      break;
    }
  }
  return z;
}

Path FbmSampler::sample(Engine& rng) const {
  const auto z = sample_increments(rng);
  const double scale = std::pow(grid_.dt(), H_);
  std::vector<double> w(z.size() + 1);
  w[0] = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) w[i + 1] = w[i] + scale * z[i];
  return Path(grid_, std::move(w));
}

Path FbmSampler::sample(std::uint64_t seed) const {
  Engine rng(seed);
  return sample(rng);
}

Path generate_fbm_exact(const TimeGrid& grid, double H, std::uint64_t seed) {
  return FbmSampler(grid, H).sample(seed);
}

}  // namespace fsel
