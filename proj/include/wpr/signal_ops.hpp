#pragma once

#include <functional>

#include "wpr/signal.hpp"

namespace wpr {

/// Options shared by the frequency-domain operators (hilbert, analytic_rep,
/// derivative, antidifferentiate). These operators leave the finite
/// coefficient window, so the output window is widened by pad_factor times
/// the input length and the residual of the truncation is recorded.
struct FreqOpOptions {
  QuadratureSpec quad{};
  double pad_factor = 4.0;
  double tau_quad = 1e-9;
  double tau_trunc = 1e-8;
  double tau_im = 1e-10;
  int max_doublings = 7;
};

struct FreqOpDiagnostics {
  double truncation_residual = 0.0;  // relative to the input L2 norm
  bool truncation_warning = false;
  int panels_used = 0;
};

/// Builds the signal with Nyquist samples g(x_n) = integral of
/// spectrum(xi) e^{2 pi i xi x_n} d xi over the given segments, for
/// n in [out_m_min, out_m_max]. Panel counts follow the oscillation of the
/// integrand and are refined by doubling until the sample vector moves by
/// less than tau_quad * max(||g||, 1e-3 * norm_scale).
BandlimitedSignal synthesize_from_spectrum(double omega, const std::function<cplx(double)>& spectrum,
                                           const std::vector<Segment>& segments, int out_m_min,
                                           int out_m_max, bool output_real, double norm_scale,
                                           const FreqOpOptions& opts = {},
                                           FreqOpDiagnostics* diag = nullptr);

/// Hilbert transform: multiplier -i sgn(xi) on the spectrum.
BandlimitedSignal hilbert(const BandlimitedSignal& f, const FreqOpOptions& opts = {},
                          FreqOpDiagnostics* diag = nullptr);

/// Analytic representation f_+: spectrum 2 f^(xi) 1_{xi > 0}; equals
/// f + i (hilbert f).
BandlimitedSignal analytic_rep(const BandlimitedSignal& f, const FreqOpOptions& opts = {},
                               FreqOpDiagnostics* diag = nullptr);

/// ell-th derivative: multiplier (2 pi i xi)^ell. ell = 0 returns f unchanged.
BandlimitedSignal derivative(const BandlimitedSignal& f, int ell, const FreqOpOptions& opts = {},
                             FreqOpDiagnostics* diag = nullptr);

}  // namespace wpr
