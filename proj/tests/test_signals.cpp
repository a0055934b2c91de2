#include <cmath>
#include <filesystem>

#include "doctest.h"
#include "wpr/corpus.hpp"
#include "wpr/rng.hpp"
#include "wpr/signal.hpp"
#include "wpr/signal_ops.hpp"

using namespace wpr;

namespace {
constexpr double kPi = 3.14159265358979323846;

BandlimitedSignal atom(double omega, int m, double value = 1.0) {
  return BandlimitedSignal::from_real(omega, m, {value});
}
}  // namespace

TEST_CASE("evaluate: cardinal series basics") {
  const BandlimitedSignal f = atom(1.0, 0);
  CHECK(f.evaluate(0.0) == cplx(1.0, 0.0));   // sinc(0) = 1
  CHECK(f.evaluate(0.5) == cplx(0.0, 0.0));   // kernel vanishes at the m=1 node
  const BandlimitedSignal g = BandlimitedSignal::from_real(1.0, 0, {1.0, 1.0});
  CHECK(g.evaluate(0.25).real() == doctest::Approx(4.0 / kPi).epsilon(1e-14));
}

TEST_CASE("fourier: trig polynomial on the band, zero outside") {
  const BandlimitedSignal f = atom(1.0, 0);
  CHECK(f.fourier(0.0) == cplx(0.5, 0.0));
  CHECK(f.fourier(2.0) == cplx(0.0, 0.0));
  const BandlimitedSignal g = atom(1.0, 1);
  const cplx v = g.fourier(0.5);
  CHECK(v.real() == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(v.imag() == doctest::Approx(-0.5).epsilon(1e-15));
}

TEST_CASE("sampling consistency: grid evaluation returns coefficients bitwise") {
  Rng rng(7);
  UniformEnsemble ens;
  ens.m_min = -9;
  ens.m_max = 9;
  for (double omega : {1.0, 0.5, 2.0}) {
    ens.omega = omega;
    const BandlimitedSignal f = random_uniform_signal(ens, rng);
    for (int m = f.m_min() - 2; m <= f.m_max() + 2; ++m)
      CHECK(f.evaluate(f.sample_point(m)) == f.coeff(m));
  }
}

TEST_CASE("Parseval: coefficient norm equals spectral energy by quadrature") {
  Rng rng(11);
  UniformEnsemble ens;
  ens.m_min = -6;
  ens.m_max = 6;
  const BandlimitedSignal f = random_uniform_signal(ens, rng);
  const cplx energy = integrate_once(QuadratureSpec{}, {{-1.0, 1.0}}, 8, [&](double xi) {
    return cplx(std::norm(f.fourier(xi)), 0.0);
  });
  const double n2 = f.norm2() * f.norm2();
  CHECK(std::abs(energy.real() - n2) <= 1e-9 * n2);
}

TEST_CASE("hilbert: involution, realness, orthogonality") {
  Rng rng(13);
  const BandlimitedSignal f = random_smooth_signal(SmoothEnsemble{}, rng);
  const BandlimitedSignal hf = hilbert(f);
  CHECK(hf.is_real());
  const BandlimitedSignal hhf = hilbert(hf);
  CHECK((hhf + f).norm2() <= 1e-9 * f.norm2());

  // even real spectrum: c_{-m} = c_m real makes <f, Hf> = 0
  std::vector<cplx> sym(11);
  Rng rng2(17);
  for (int m = 0; m <= 5; ++m) {
    const double v = rng2.symmetric();
    sym[static_cast<std::size_t>(5 + m)] = v;
    sym[static_cast<std::size_t>(5 - m)] = v;
  }
  const BandlimitedSignal even(1.0, -5, sym, true);
  const BandlimitedSignal heven = hilbert(even);
  CHECK(std::abs(inner_product(even, heven)) <= 1e-10 * even.norm2() * heven.norm2());
}

TEST_CASE("analytic_rep: one-sided spectrum and f + i Hf") {
  Rng rng(19);
  const BandlimitedSignal f = random_smooth_signal(SmoothEnsemble{}, rng);
  const BandlimitedSignal fp = analytic_rep(f);
  CHECK_FALSE(fp.is_real());
  for (double xi : {0.31, 0.52, 0.77}) {
    CHECK(std::abs(fp.fourier(xi) - 2.0 * f.fourier(xi)) <= 1e-9 * f.norm2());
    CHECK(std::abs(fp.fourier(-xi)) <= 1e-9 * f.norm2());
  }
  for (double x : {-3.4, 0.2, 5.1}) {
    CHECK(fp.evaluate(x).real() == doctest::Approx(f.evaluate(x).real()).epsilon(1e-8));
  }
  CHECK(analytic_rep(BandlimitedSignal::zero(1.0)).norm2() == 0.0);
}

TEST_CASE("derivative: identity at ell = 0, finite-difference oracle, realness") {
  Rng rng(23);
  UniformEnsemble ens;
  ens.m_min = -5;
  ens.m_max = 5;
  const BandlimitedSignal f = random_uniform_signal(ens, rng);
  const BandlimitedSignal same = derivative(f, 0);
  CHECK(same.coeffs() == f.coeffs());

  // samples of the derivative are exact regardless of the signal's tails
  const BandlimitedSignal fp = derivative(f, 1);
  CHECK(fp.is_real());
  const double h = 1e-5;
  for (int m : {-3, 0, 2, 5}) {
    const double x = m / 2.0;
    const double fd = (f.evaluate(x + h).real() - f.evaluate(x - h).real()) / (2.0 * h);
    const double exact = fp.coeff(m).real();
    CHECK(std::abs(exact - fd) <= 1e-6 * std::max(std::abs(exact), 1e-3));
  }

  // off the grid the truncated cardinal series needs fast-decaying tails
  const BandlimitedSignal g = random_smooth_signal(SmoothEnsemble{}, rng);
  const BandlimitedSignal gp = derivative(g, 1);
  for (double x : {-1.3, 0.4, 1.9}) {
    const double fd = (g.evaluate(x + h).real() - g.evaluate(x - h).real()) / (2.0 * h);
    const double exact = gp.evaluate(x).real();
    CHECK(std::abs(exact - fd) <= 1e-6 * std::max(std::abs(exact), 1e-3 * gp.norm2()));
  }
}

TEST_CASE("quadrature failure surfaces as QuadratureTooCoarse") {
  Rng rng(29);
  UniformEnsemble ens;
  ens.m_min = -8;
  ens.m_max = 8;
  const BandlimitedSignal f = random_uniform_signal(ens, rng);
  FreqOpOptions opts;
  opts.quad.num_nodes = 16;
  opts.quad.panels = 1;
  opts.max_doublings = 0;
  CHECK_THROWS_AS(hilbert(f, opts), QuadratureTooCoarse);
}

TEST_CASE("dist_up_to_sign: examples and quadrature oracle") {
  Rng rng(31);
  UniformEnsemble ens;
  ens.m_min = -6;
  ens.m_max = 6;
  BandlimitedSignal f = random_uniform_signal(ens, rng);
  f = f.scaled(cplx(1.0 / f.norm2(), 0.0));
  CHECK(dist_up_to_sign(f, f) == 0.0);
  CHECK(dist_up_to_sign(f, f.scaled(cplx(-1.0, 0.0))) == 0.0);
  CHECK(dist_up_to_sign(f, f.scaled(cplx(2.0, 0.0))) == doctest::Approx(1.0).epsilon(1e-12));

  const BandlimitedSignal g = random_uniform_signal(ens, rng);
  double oracle = std::numeric_limits<double>::infinity();
  for (double sign : {1.0, -1.0}) {
    const cplx e = integrate_once(QuadratureSpec{}, {{-1.0, 1.0}}, 8, [&](double xi) {
      return cplx(std::norm(f.fourier(xi) - sign * g.fourier(xi)), 0.0);
    });
    oracle = std::min(oracle, std::sqrt(e.real()));
  }
  CHECK(dist_up_to_sign(f, g) == doctest::Approx(oracle).epsilon(1e-9));

  const BandlimitedSignal other(2.0, 0, {cplx(1.0, 0.0)}, true);
  CHECK_THROWS_AS(dist_up_to_sign(f, other), BandMismatch);
}

TEST_CASE("dist_up_to_phase: examples and grid-search oracle") {
  Rng rng(37);
  UniformEnsemble ens;
  ens.m_min = -5;
  ens.m_max = 5;
  const BandlimitedSignal f = random_uniform_signal(ens, rng);
  CHECK(dist_up_to_phase(f, f.scaled(std::polar(1.0, kPi / 3.0))) <= 1e-12 * f.norm2());

  const BandlimitedSignal e0 = atom(1.0, 0).scaled(cplx(std::sqrt(2.0), 0.0));
  const BandlimitedSignal e1 = atom(1.0, 1).scaled(cplx(std::sqrt(2.0), 0.0));
  CHECK(dist_up_to_phase(e0, e1) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

  const BandlimitedSignal g = random_uniform_signal(ens, rng).scaled(std::polar(1.0, 0.9));
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 10000; ++k)
    best = std::min(best, (f - g.scaled(std::polar(1.0, 2.0 * kPi * k / 10000.0))).norm2());
  CHECK(std::abs(best - dist_up_to_phase(f, g)) <= 1e-6);
}

TEST_CASE("equal_up_to_sign_coeffs detects exactly the global-sign relation") {
  Rng rng(41);
  UniformEnsemble ens;
  ens.m_min = -4;
  ens.m_max = 4;
  const BandlimitedSignal f = random_uniform_signal(ens, rng);
  CHECK(equal_up_to_sign_coeffs(f, f.scaled(cplx(-1.0, 0.0))));
  CHECK(equal_up_to_sign_coeffs(f, f));
  CHECK_FALSE(equal_up_to_sign_coeffs(f, f.scaled(cplx(0.999, 0.0))));
}

TEST_CASE("is_real guards against complex coefficients") {
  CHECK_THROWS_AS(BandlimitedSignal(1.0, 0, {cplx(1.0, 0.5)}, true), InvalidParameter);
  CHECK_NOTHROW(BandlimitedSignal(1.0, 0, {cplx(1.0, 1e-12)}, true));
}

TEST_CASE("signal JSON round trip is bitwise") {
  Rng rng(43);
  UniformEnsemble ens;
  ens.omega = 0.75;
  ens.m_min = -3;
  ens.m_max = 5;
  const BandlimitedSignal f = random_uniform_signal(ens, rng);
  const auto path = std::filesystem::temp_directory_path() / "wpr_signal_roundtrip.json";
  write_signal_json(f, path.string());
  const BandlimitedSignal g = read_signal_json(path.string());
  CHECK(g.omega() == f.omega());
  CHECK(g.m_min() == f.m_min());
  CHECK(g.is_real() == f.is_real());
  CHECK(g.coeffs() == f.coeffs());
  std::filesystem::remove(path);

  CHECK_THROWS_AS(signal_from_json_string("{ not json"), ParseError);
}

TEST_CASE("truncation diagnostics flag slow tails") {
  // an iid draw has 1/x tails after the Hilbert transform; the smooth corpus
  // does not
  Rng rng(47);
  UniformEnsemble ens;
  ens.m_min = -6;
  ens.m_max = 6;
  const BandlimitedSignal rough = random_uniform_signal(ens, rng);
  FreqOpDiagnostics diag_rough, diag_smooth;
  hilbert(rough, FreqOpOptions{}, &diag_rough);
  const BandlimitedSignal smooth = random_smooth_signal(SmoothEnsemble{}, rng);
  hilbert(smooth, FreqOpOptions{}, &diag_smooth);
  CHECK(diag_rough.truncation_residual > diag_smooth.truncation_residual);
  CHECK(diag_smooth.truncation_residual <= 1e-8);
  CHECK(diag_rough.truncation_warning);
}
