#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "wpr/signal.hpp"
#include "wpr/wavelet.hpp"

namespace wpr {

/// Phaseless wavelet measurements |W f(m/(4 omega), a_k)| on the rectangular
/// grid (time index m in [t_min, t_max]) x (scales a_k).
struct MagnitudeMeasurements {
  double omega = 1.0;
  int t_min = 0, t_max = -1;
  std::vector<double> scales;
  std::vector<std::vector<double>> values;  // [time][scale], nonnegative
  nlohmann::json wavelet_descriptor;
  int ell = -1;  // probed moment order of the wavelet, -1 when none exists

  int times() const { return t_max - t_min + 1; }
  double time_at(int index) const { return (t_min + index) / (4.0 * omega); }
  double max_value() const;
};

/// Complex-valued variant (ground-truth phases for diagnostics).
struct ComplexMeasurements {
  double omega = 1.0;
  int t_min = 0, t_max = -1;
  std::vector<double> scales;
  std::vector<std::vector<cplx>> values;
  nlohmann::json wavelet_descriptor;
  int ell = -1;

  MagnitudeMeasurements magnitudes() const;
};

/// W f(b, a) = integral over the band of f^(xi) conj(psi^(a xi)) e^{2 pi i b xi}.
/// Composite Gauss-Legendre with panel counts tracking both the oscillation of
/// e^{2 pi i b xi} and the feature scale of psi^(a xi), refined by panel
/// doubling until the relative change falls below tau_quad.
cplx transform(const BandlimitedSignal& f, const Wavelet& w, double b, double a,
               const QuadratureSpec& spec = {}, double tau_quad = 1e-9);

ComplexMeasurements measure_complex(const BandlimitedSignal& f, const Wavelet& w, int t_min,
                                    int t_max, const std::vector<double>& scales,
                                    const QuadratureSpec& spec = {}, double tau_quad = 1e-9);

MagnitudeMeasurements measure(const BandlimitedSignal& f, const Wavelet& w, int t_min, int t_max,
                              const std::vector<double>& scales, const QuadratureSpec& spec = {},
                              double tau_quad = 1e-9);

/// CSV: "# omega=<v> wavelet=<json> ell=<v>", a column-name line, then one
/// row per (m, a_k) cell with 17-significant-digit values. Atomic writes.
void write_measurements_csv(const MagnitudeMeasurements& meas, const std::string& path);
void write_measurements_csv(const ComplexMeasurements& meas, const std::string& path);
MagnitudeMeasurements read_measurements_csv(const std::string& path);
ComplexMeasurements read_complex_measurements_csv(const std::string& path);

}  // namespace wpr
