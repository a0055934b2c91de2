#include "wpr/corpus.hpp"

#include <cmath>

namespace wpr {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

BandlimitedSignal random_uniform_signal(const UniformEnsemble& ens, Rng& rng) {
  if (ens.m_max < ens.m_min) throw InvalidParameter("random_uniform_signal: bad window");
  const int n = ens.m_max - ens.m_min + 1;
  std::vector<double> c(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double w = 1.0;
    if (ens.taper) {
      const double s = std::sin(kPi * (i + 1.0) / (n + 1.0));
      w = s * s;
    }
    c[static_cast<std::size_t>(i)] = rng.symmetric() * w;
  }
  return BandlimitedSignal::from_real(ens.omega, ens.m_min, c);
}

BandlimitedSignal random_smooth_signal(const SmoothEnsemble& ens, Rng& rng) {
  if (ens.bumps < 1) throw InvalidParameter("random_smooth_signal: need at least one bump");
  struct Bump {
    double amp, mu, sigma, theta;
  };
  std::vector<Bump> bumps(static_cast<std::size_t>(ens.bumps));
  double sigma_min = ens.sigma_hi * ens.omega;
  for (auto& b : bumps) {
    b.amp = rng.uniform(0.5, 1.0);
    b.mu = rng.uniform(ens.center_lo, ens.center_hi) * ens.omega;
    b.sigma = rng.uniform(ens.sigma_lo, ens.sigma_hi) * ens.omega;
    b.theta = rng.uniform(0.0, 2.0 * kPi);
    sigma_min = std::min(sigma_min, b.sigma);
  }
  // Gaussian envelope e^{-2 pi^2 sigma^2 x^2} reaches the cutoff at x_max.
  const double x_max =
      std::sqrt(std::log(1.0 / ens.cutoff) / (2.0 * kPi * kPi * sigma_min * sigma_min));
  const int m_max = (ens.hard_window > 0) ? ens.hard_window
                                          : static_cast<int>(std::ceil(2.0 * ens.omega * x_max));
  const int n = 2 * m_max + 1;
  std::vector<cplx> c(static_cast<std::size_t>(n));
  for (int m = -m_max; m <= m_max; ++m) {
    const double x = m / (2.0 * ens.omega);
    cplx acc(0.0, 0.0);
    for (const auto& b : bumps) {
      const double env = b.amp * b.sigma * std::sqrt(2.0 * kPi) *
                         std::exp(-2.0 * kPi * kPi * b.sigma * b.sigma * x * x);
      const double phase = 2.0 * kPi * b.mu * x + b.theta;
      if (ens.analytic)
        acc += env * std::polar(1.0, phase);
      else
        acc += 2.0 * env * std::cos(phase);
    }
    c[static_cast<std::size_t>(m + m_max)] = acc;
  }
  BandlimitedSignal out(ens.omega, -m_max, std::move(c), !ens.analytic);
  return (ens.hard_window > 0) ? out : out.trimmed(ens.cutoff);
}

}  // namespace wpr
