#include <cmath>

#include "doctest.h"
#include "wpr/wavelet.hpp"

using namespace wpr;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("morlet: closed form, exact zero mean, small-xi limit") {
  const Wavelet w = Wavelet::morlet(5.0);
  CHECK(w.fourier(0.0) == cplx(0.0, 0.0));
  CHECK_FALSE(w.progressive());

  // value at the peak matches the printed two-term formula
  const double printed =
      std::pow(kPi, -0.25) * (std::exp(0.0) - std::exp(-12.5) * std::exp(-12.5));
  CHECK(w.fourier(5.0).real() == doctest::Approx(printed).epsilon(1e-13));
  CHECK(w.fourier(5.0).real() == doctest::Approx(0.751126).epsilon(1e-5));

  // the rearranged form agrees with the printed difference away from 0
  for (double xi : {0.7, 2.3, 7.9, -1.4}) {
    const double direct = std::pow(kPi, -0.25) * (std::exp(-0.5 * (xi - 5.0) * (xi - 5.0)) -
                                                  std::exp(-0.5 * xi * xi) * std::exp(-12.5));
    CHECK(w.fourier(xi).real() == doctest::Approx(direct).epsilon(1e-12));
  }

  const double c = std::pow(kPi, -0.25) * 5.0 * std::exp(-12.5);
  CHECK(std::abs(w.fourier(1e-6) / 1e-6 - c) <= 1e-4 * c);

  CHECK_THROWS_AS(Wavelet::morlet(0.0), InvalidParameter);
}

TEST_CASE("chirp: zero mean, beta = 0 reduction, small-xi limit") {
  const Wavelet w = Wavelet::chirp(5.0, 1.0);
  CHECK(w.fourier(0.0) == cplx(0.0, 0.0));

  // beta = 0 is the Morlet up to the sqrt(2 pi) vs pi^{-1/4} normalization
  const Wavelet w0 = Wavelet::chirp(5.0, 0.0);
  const Wavelet m = Wavelet::morlet(5.0);
  const cplx ratio0 = w0.fourier(1.0) / m.fourier(1.0);
  for (double xi : {-2.0, 0.5, 3.0, 6.5}) {
    const cplx ratio = w0.fourier(xi) / m.fourier(xi);
    CHECK(std::abs(ratio - ratio0) <= 1e-10 * std::abs(ratio0));
  }

  // printed form away from zero
  const cplx gamma(1.0, -1.0);
  for (double xi : {1.2, 4.0, -0.8}) {
    const cplx direct = std::sqrt(2.0 * kPi / gamma) *
                        (std::exp(-(xi - 5.0) * (xi - 5.0) / (2.0 * gamma)) -
                         std::exp(-25.0 / (2.0 * gamma)) * std::exp(-0.5 * xi * xi));
    CHECK(std::abs(w.fourier(xi) - direct) <= 1e-12 * std::abs(direct));
  }

  const cplx c = std::sqrt(2.0 * kPi) * std::pow(gamma, -1.5) * std::exp(-25.0 / (2.0 * gamma)) *
                 5.0;
  CHECK(std::abs(w.fourier(1e-6) / 1e-6 - c) <= 1e-4 * std::abs(c));
}

TEST_CASE("cauchy: progressive closed form") {
  const Wavelet w = Wavelet::cauchy(2.0, 1.0);
  CHECK(w.progressive());
  CHECK(w.fourier(2.0).real() == doctest::Approx(4.0 * std::exp(-2.0)).epsilon(1e-14));
  CHECK(w.fourier(2.0).real() == doctest::Approx(0.541341).epsilon(1e-5));
  CHECK(w.fourier(-1.0) == cplx(0.0, 0.0));
  CHECK(w.fourier(0.0) == cplx(0.0, 0.0));
  CHECK_THROWS_AS(Wavelet::cauchy(0.0, 1.0), InvalidParameter);
  CHECK_THROWS_AS(Wavelet::cauchy(-1.0, 1.0), InvalidParameter);
  CHECK_THROWS_AS(Wavelet::cauchy(2.0, 0.0), InvalidParameter);
}

TEST_CASE("gauss low-pass: unit mass, even, closed form") {
  const Wavelet w = Wavelet::gauss_lowpass();
  CHECK(w.fourier(0.0) == cplx(1.0, 0.0));
  CHECK(w.lowpass());
  for (double xi : {0.3, 1.7}) CHECK(w.fourier(xi) == w.fourier(-xi));
  CHECK(w.fourier(1.0).real() == doctest::Approx(std::exp(-kPi)).epsilon(1e-14));
}

TEST_CASE("probe_moment_order: orders and limits") {
  {
    const MomentProfile p = probe_moment_order(Wavelet::morlet(5.0));
    CHECK(p.ell == 1);
    const cplx c = std::pow(kPi, -0.25) * 5.0 * std::exp(-12.5);
    CHECK(std::abs(p.c - c) <= 1e-3 * std::abs(c));
    CHECK(p.fit_quality < 1e-3);
  }
  {
    const MomentProfile p = probe_moment_order(Wavelet::gauss_lowpass());
    CHECK(p.ell == 0);
    CHECK(std::abs(p.c - cplx(1.0, 0.0)) <= 1e-6);
  }
  {
    // a chirp with xi0 = 0 vanishes to second order
    const MomentProfile p = probe_moment_order(Wavelet::chirp(0.0, 1.0));
    CHECK(p.ell == 2);
  }
  CHECK_THROWS_AS(probe_moment_order(Wavelet::cauchy(2.0, 1.0)), ProgressiveWaveletNoLimit);
  CHECK_THROWS_AS(probe_moment_order(Wavelet::morlet(5.0), 1e-2), InvalidParameter);
  CHECK_THROWS_AS(probe_moment_order(Wavelet::morlet(5.0), 1e-3, 0), InvalidParameter);
}

TEST_CASE("probe is dilation-consistent") {
  const Wavelet base = Wavelet::morlet(5.0);
  const MomentProfile p0 = probe_moment_order(base);
  for (double s : {0.5, 2.0}) {
    const Wavelet scaled =
        Wavelet::custom([base, s](double xi) { return base.fourier(s * xi); }, false);
    const MomentProfile p = probe_moment_order(scaled);
    CHECK(p.ell == p0.ell);
    const cplx expected = p0.c * std::pow(s, p0.ell);
    CHECK(std::abs(p.c - expected) <= 1e-3 * std::abs(expected));
  }
}

TEST_CASE("normalize rescales the limit to (-1)^ell (2 pi i)^ell") {
  const Wavelet w = Wavelet::morlet(5.0);
  const MomentProfile p = probe_moment_order(w);
  const Wavelet phi = normalize(w, p);
  const MomentProfile p2 = probe_moment_order(phi);
  CHECK(p2.ell == 1);
  const cplx target(0.0, -2.0 * kPi);  // -2 pi i
  CHECK(std::abs(p2.c - target) <= 1e-3 * std::abs(target));

  // ell = 0, c = 1 is the identity
  MomentProfile trivial;
  const Wavelet same = normalize(Wavelet::gauss_lowpass(), trivial);
  for (double xi : {0.0, 0.4, -1.2})
    CHECK(same.fourier(xi) == Wavelet::gauss_lowpass().fourier(xi));

  MomentProfile bad;
  bad.c = cplx(0.0, 0.0);
  CHECK_THROWS_AS(normalize(w, bad), InvalidParameter);
}

TEST_CASE("descriptor round trip") {
  for (const Wavelet& w : {Wavelet::morlet(5.0), Wavelet::chirp(4.0, 0.7),
                           Wavelet::cauchy(2.0, 3.0), Wavelet::gauss_lowpass()}) {
    const Wavelet back = Wavelet::from_descriptor(w.descriptor());
    CHECK(back.kind() == w.kind());
    for (double xi : {-1.0, 0.0, 0.9, 4.2}) CHECK(back.fourier(xi) == w.fourier(xi));
  }
  CHECK_THROWS_AS(Wavelet::from_descriptor({{"kind", "nope"}}), ParseError);
}
