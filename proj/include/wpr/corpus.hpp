#pragma once

#include "wpr/rng.hpp"
#include "wpr/signal.hpp"

namespace wpr {

/// Coefficients i.i.d. uniform[-1, 1], tapered by a raised-cosine window
/// w_i = sin^2(pi (i+1) / (N+1)) so the sequence decays toward the window
/// edges. One uniform draw per coefficient, ascending m.
struct UniformEnsemble {
  double omega = 1.0;
  int m_min = -10;
  int m_max = 10;
  bool taper = true;
};

BandlimitedSignal random_uniform_signal(const UniformEnsemble& ens, Rng& rng);

/// Random superpositions of Gaussian spectral bumps. The Nyquist samples have
/// the closed form 2 A sigma sqrt(2 pi) cos(2 pi mu x + theta) e^{-2 pi^2
/// sigma^2 x^2}, so the coefficient sequence decays like a Gaussian and the
/// stored window carries the signal to ~cutoff relative accuracy. Keeping the
/// bump centers several sigma away from 0 and from the band edge makes the
/// spectrum vanish there to machine precision, which the Hilbert-transform
/// and analyticity checks rely on.
struct SmoothEnsemble {
  double omega = 1.0;
  int bumps = 3;
  double center_lo = 0.40;  // fractions of omega
  double center_hi = 0.60;
  double sigma_lo = 0.035;
  double sigma_hi = 0.045;
  double cutoff = 1e-13;  // relative coefficient cutoff for the window
  bool analytic = false;  // one-sided spectrum (complex-valued signal)
  int hard_window = 0;    // when > 0, keep exactly m in [-hard_window, hard_window]
};

BandlimitedSignal random_smooth_signal(const SmoothEnsemble& ens, Rng& rng);

}  // namespace wpr
