#pragma once

#include <complex>
#include <vector>

#include "wpr/errors.hpp"
#include "wpr/quadrature.hpp"

namespace wpr {

/// Normalized sinc: sin(pi t)/(pi t), with sinc(0) = 1 and exact zeros at the
/// nonzero integers. The argument is reduced modulo 1 before the sine call so
/// near-integer arguments do not lose precision.
double sinc(double t);

/// A bandlimited signal with band edge omega, modeled as the finite cardinal
/// series f(x) = sum_m c_m sinc(2*omega*x - m) over m in [m_min, m_max].
/// The c_m are the Nyquist samples f(m/(2*omega)); the Fourier transform is a
/// trigonometric polynomial supported on [-omega, omega]. Immutable.
class BandlimitedSignal {
 public:
  BandlimitedSignal(double omega, int m_min, std::vector<cplx> coeffs, bool is_real,
                    double tau_im = 1e-10);

  static BandlimitedSignal from_real(double omega, int m_min, const std::vector<double>& coeffs);
  static BandlimitedSignal zero(double omega);

  double omega() const { return omega_; }
  int m_min() const { return m_min_; }
  int m_max() const { return m_min_ + static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<cplx>& coeffs() const { return coeffs_; }
  bool is_real() const { return is_real_; }
  bool empty() const { return coeffs_.empty(); }

  /// Coefficient c_m, or 0 outside the stored window.
  cplx coeff(int m) const;

  /// Nyquist grid point m/(2*omega).
  double sample_point(int m) const { return m / (2.0 * omega_); }

  /// Pointwise evaluation of the cardinal series (pairwise-compensated sum).
  /// Exactly returns c_m when 2*omega*x lands on the integer m.
  cplx evaluate(double x) const;

  /// Fourier transform: (1/(2*omega)) sum_m c_m e^{-i pi xi m / omega} for
  /// |xi| <= omega, exactly 0 outside the band.
  cplx fourier(double xi) const;

  /// L2 norm: sqrt(sum |c_m|^2 / (2*omega)).
  double norm2() const;

  BandlimitedSignal scaled(cplx factor) const;

  /// Drops leading/trailing coefficients below rel_cutoff * max |c_m|.
  BandlimitedSignal trimmed(double rel_cutoff) const;

  /// Restricts/extends the window to [lo, hi] (zero fill).
  BandlimitedSignal with_window(int lo, int hi) const;

 private:
  double omega_;
  int m_min_;
  std::vector<cplx> coeffs_;
  bool is_real_;
};

/// L2 inner product <f, g>; windows need not match. Throws BandMismatch if
/// the band edges differ.
cplx inner_product(const BandlimitedSignal& f, const BandlimitedSignal& g);

BandlimitedSignal operator+(const BandlimitedSignal& f, const BandlimitedSignal& g);
BandlimitedSignal operator-(const BandlimitedSignal& f, const BandlimitedSignal& g);

/// min(||f - g||_2, ||f + g||_2) from the coefficient sequences.
double dist_up_to_sign(const BandlimitedSignal& f, const BandlimitedSignal& g);

/// min over unimodular lambda of ||f - lambda g||_2
///   = sqrt(||f||^2 + ||g||^2 - 2 |<f, g>|).
double dist_up_to_phase(const BandlimitedSignal& f, const BandlimitedSignal& g);

/// True iff the coefficient sequences agree up to one global factor in
/// {+1, -1}, within tau_coef * max|coeff| per entry.
bool equal_up_to_sign_coeffs(const BandlimitedSignal& f, const BandlimitedSignal& g,
                             double tau_coef = 1e-12);

/// Signal JSON: {"omega": w, "m_min": m, "coeffs": [[re, im], ...], "is_real": b}.
/// Written with 17 significant digits and an atomic rename.
void write_signal_json(const BandlimitedSignal& f, const std::string& path);
BandlimitedSignal read_signal_json(const std::string& path);
std::string signal_to_json_string(const BandlimitedSignal& f);
BandlimitedSignal signal_from_json_string(const std::string& text);

}  // namespace wpr
