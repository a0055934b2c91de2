#pragma once

#include <functional>
#include <string>

#include "json.hpp"
#include "wpr/quadrature.hpp"

namespace wpr {

enum class WaveletKind { morlet, chirp, cauchy, gauss_lowpass, custom };

/// Frequency-domain wavelet descriptor. The time-domain waveform is never
/// materialized; every consumer works with the closed-form Fourier transform.
/// For all kinds except the Gaussian low-pass, fourier(0) == 0 exactly.
class Wavelet {
 public:
  static Wavelet morlet(double xi0);
  static Wavelet chirp(double xi0, double beta);
  static Wavelet cauchy(double p, double rho_const = 1.0);
  /// Non-constant rho: the caller asserts rho is bounded, nonvanishing and
  /// scale-invariant (rho(a xi) = rho(xi)) for every scale it will be used at.
  static Wavelet cauchy(double p, std::function<double(double)> rho);
  static Wavelet gauss_lowpass();
  static Wavelet custom(std::function<cplx(double)> fourier, bool progressive,
                        bool lowpass = false);

  cplx fourier(double xi) const;

  WaveletKind kind() const { return kind_; }
  /// True iff the spectrum vanishes identically for xi <= 0.
  bool progressive() const { return progressive_; }
  /// True for approximate-identity generators (fourier(0) == 1, not 0).
  bool lowpass() const { return lowpass_; }

  double xi0() const { return xi0_; }
  double beta() const { return beta_; }
  double p() const { return p_; }
  double rho_const() const { return rho_const_; }

  /// {"kind": "morlet"|"chirp"|"cauchy"|"gauss", "xi0"?, "beta"?, "p"?, "rho_const"?}
  nlohmann::json descriptor() const;
  static Wavelet from_descriptor(const nlohmann::json& j);

 private:
  Wavelet() = default;

  WaveletKind kind_ = WaveletKind::custom;
  bool progressive_ = false;
  bool lowpass_ = false;
  double xi0_ = 0.0, beta_ = 0.0, p_ = 0.0, rho_const_ = 1.0;
  std::function<double(double)> rho_;
  std::function<cplx(double)> custom_;
};

/// Smallest ell with finite nonzero two-sided limit c = lim xi^{-ell} psi^(xi),
/// as found by the geometric probe ladder.
struct MomentProfile {
  int ell = 0;
  cplx c{1.0, 0.0};
  double fit_quality = 0.0;  // relative spread of the extrapolated limit
};

/// Probes xi^{-ell} psi^(xi) on the two-sided ladder +-xi_probe * 2^-j,
/// j = 0..6, with first-order Richardson extrapolation. Throws
/// ProgressiveWaveletNoLimit when the one-sided limits disagree (progressive
/// wavelets: the left limit vanishes for every ell), NoFiniteOrder when no
/// ell <= max_ell has a finite nonzero limit.
MomentProfile probe_moment_order(const Wavelet& w, double xi_probe = 1e-3, int max_ell = 4);

/// Scales the spectrum by (-1)^ell (2 pi i)^ell / c so the re-probed limit
/// becomes (-1)^ell (2 pi i)^ell.
Wavelet normalize(const Wavelet& w, const MomentProfile& profile);

/// |(2 pi)^ell / c|: the magnitude-only version of the normalization factor.
double normalization_magnitude(const MomentProfile& profile);

}  // namespace wpr
