#include <cmath>
#include <filesystem>

#include "doctest.h"
#include "wpr/corpus.hpp"
#include "wpr/cwt.hpp"
#include "wpr/rng.hpp"

using namespace wpr;

namespace {
constexpr double kPi = 3.14159265358979323846;

BandlimitedSignal test_signal(std::uint64_t seed, int half = 4) {
  Rng rng(seed);
  UniformEnsemble ens;
  ens.m_min = -half;
  ens.m_max = half;
  return random_uniform_signal(ens, rng);
}
}  // namespace

TEST_CASE("transform: linearity sends the zero signal to zero") {
  const Wavelet w = Wavelet::cauchy(2.0, 1.0);
  CHECK(transform(BandlimitedSignal::zero(1.0), w, 0.3, 1.0) == cplx(0.0, 0.0));
  CHECK_THROWS_AS(transform(test_signal(1), w, 0.0, -1.0), InvalidParameter);
}

TEST_CASE("transform: Gaussian low-pass at tiny scale approximates evaluation") {
  const BandlimitedSignal f = test_signal(2);
  const Wavelet w = Wavelet::gauss_lowpass();
  for (double b : {-1.2, 0.0, 0.7}) {
    const cplx smoothed = transform(f, w, b, 1e-4);
    CHECK(std::abs(smoothed - f.evaluate(b)) <= 1e-6 * f.norm2());
  }
}

TEST_CASE("transform: translation covariance on the Nyquist grid") {
  const BandlimitedSignal f = test_signal(3);
  const Wavelet w = Wavelet::morlet(5.0);
  const int shift = 2;  // b0 = 1 at omega = 1
  const BandlimitedSignal fs(f.omega(), f.m_min() + shift, f.coeffs(), true);
  for (double b : {-0.7, 0.4}) {
    for (double a : {0.5, 1.25}) {
      const cplx lhs = transform(fs, w, b, a);
      const cplx rhs = transform(f, w, b - 1.0, a);
      CHECK(std::abs(lhs - rhs) <= 1e-7 * std::max(std::abs(rhs), f.norm2()));
    }
  }
}

TEST_CASE("measure: sign invariance is bitwise, global phase within quadrature") {
  const BandlimitedSignal f = test_signal(4);
  const Wavelet w = Wavelet::morlet(5.0);
  const std::vector<double> scales{0.5, 0.25};
  const MagnitudeMeasurements mf = measure(f, w, -6, 6, scales);
  const MagnitudeMeasurements mneg = measure(f.scaled(cplx(-1.0, 0.0)), w, -6, 6, scales);
  CHECK(mf.values == mneg.values);

  const MagnitudeMeasurements mphase = measure(f.scaled(std::polar(1.0, 0.8)), w, -6, 6, scales);
  for (std::size_t i = 0; i < mf.values.size(); ++i)
    for (std::size_t k = 0; k < scales.size(); ++k)
      CHECK(std::abs(mf.values[i][k] - mphase.values[i][k]) <= 1e-7 * mf.max_value());
}

TEST_CASE("measure_complex: magnitudes match bitwise and the map is linear") {
  const BandlimitedSignal f = test_signal(5);
  const BandlimitedSignal g = test_signal(6);
  const Wavelet w = Wavelet::morlet(5.0);
  const std::vector<double> scales{0.5};
  const ComplexMeasurements cf = measure_complex(f, w, -5, 5, scales);
  const MagnitudeMeasurements mf = measure(f, w, -5, 5, scales);
  for (std::size_t i = 0; i < cf.values.size(); ++i)
    CHECK(std::abs(cf.values[i][0]) == mf.values[i][0]);

  const ComplexMeasurements cg = measure_complex(g, w, -5, 5, scales);
  const ComplexMeasurements csum = measure_complex(f + g, w, -5, 5, scales);
  double scale = std::max(mf.max_value(), 1e-3 * (f.norm2() + g.norm2()));
  for (std::size_t i = 0; i < csum.values.size(); ++i)
    CHECK(std::abs(csum.values[i][0] - cf.values[i][0] - cg.values[i][0]) <= 1e-7 * scale);
}

TEST_CASE("real even custom spectrum gives real transform values") {
  const BandlimitedSignal f = test_signal(7);
  const Wavelet w = Wavelet::custom(
      [](double xi) { return cplx(xi * xi * std::exp(-xi * xi), 0.0); }, false);
  for (double b : {-0.9, 0.3}) {
    const cplx v = transform(f, w, b, 1.0);
    CHECK(std::abs(v.imag()) <= 1e-12 * std::max(std::abs(v.real()), f.norm2()));
  }
}

TEST_CASE("rows of the transform interpolate as PW_omega functions") {
  Rng rng(8);
  SmoothEnsemble ens;
  const BandlimitedSignal f = random_smooth_signal(ens, rng);
  const Wavelet w = Wavelet::morlet(5.0);
  const double a = 0.7;
  const int lo = f.m_min() - 16, hi = f.m_max() + 16;
  std::vector<cplx> row(static_cast<std::size_t>(hi - lo + 1));
  double peak = 0.0;
  for (int n = lo; n <= hi; ++n) {
    row[static_cast<std::size_t>(n - lo)] = transform(f, w, n / 2.0, a);
    peak = std::max(peak, std::abs(row[static_cast<std::size_t>(n - lo)]));
  }
  const BandlimitedSignal row_signal(1.0, lo, row, false);
  for (double b : {0.13, -2.7, 4.22}) {
    const cplx direct = transform(f, w, b, a);
    CHECK(std::abs(direct - row_signal.evaluate(b)) <= 1e-7 * peak);
  }
}

TEST_CASE("panel refinement: doubling the base panel count moves results below tau_quad") {
  const BandlimitedSignal f = test_signal(9);
  const Wavelet w = Wavelet::morlet(5.0);
  QuadratureSpec coarse;
  QuadratureSpec fine;
  fine.panels = coarse.panels * 2;
  for (double b : {-1.1, 0.6}) {
    const cplx v1 = transform(f, w, b, 0.5, coarse);
    const cplx v2 = transform(f, w, b, 0.5, fine);
    CHECK(std::abs(v1 - v2) <= 1e-9 * std::max({std::abs(v1), 1e-3 * f.norm2()}));
  }
}

TEST_CASE("measurement CSV round trip") {
  const BandlimitedSignal f = test_signal(10);
  const Wavelet w = Wavelet::chirp(5.0, 1.0);
  const std::vector<double> scales{0.5, 0.125};
  const MagnitudeMeasurements meas = measure(f, w, -4, 4, scales);
  const auto path = std::filesystem::temp_directory_path() / "wpr_meas_roundtrip.csv";
  write_measurements_csv(meas, path.string());
  const MagnitudeMeasurements back = read_measurements_csv(path.string());
  CHECK(back.omega == meas.omega);
  CHECK(back.t_min == meas.t_min);
  CHECK(back.t_max == meas.t_max);
  CHECK(back.scales == meas.scales);
  CHECK(back.values == meas.values);
  CHECK(back.ell == meas.ell);
  CHECK(back.wavelet_descriptor == meas.wavelet_descriptor);
  std::filesystem::remove(path);

  const ComplexMeasurements cmeas = measure_complex(f, w, -4, 4, scales);
  const auto cpath = std::filesystem::temp_directory_path() / "wpr_cmeas_roundtrip.csv";
  write_measurements_csv(cmeas, cpath.string());
  const ComplexMeasurements cback = read_complex_measurements_csv(cpath.string());
  CHECK(cback.values == cmeas.values);
  std::filesystem::remove(cpath);
}

TEST_CASE("measurement grid metadata and validation") {
  const BandlimitedSignal f = test_signal(11);
  const Wavelet w = Wavelet::morlet(5.0);
  CHECK_THROWS_AS(measure(f, w, 3, 1, {0.5}), InvalidParameter);
  CHECK_THROWS_AS(measure(f, w, -2, 2, {}), InvalidParameter);
  CHECK_THROWS_AS(measure(f, w, -2, 2, {0.5, -0.5}), InvalidParameter);
  const MagnitudeMeasurements meas = measure(f, w, -2, 2, {0.5, 0.25});
  CHECK(meas.times() == 5);
  CHECK(meas.time_at(0) == -0.5);
  CHECK(meas.ell == 1);  // probed from the wavelet

  QuadratureSpec bad;
  bad.num_nodes = 8;
  CHECK_THROWS_AS(transform(f, w, 0.0, 1.0, bad), InvalidParameter);
}
