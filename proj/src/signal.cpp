#include "wpr/signal.hpp"

#include <algorithm>
#include <cmath>

namespace wpr {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double sinc(double t) {
  const double k = std::nearbyint(t);
  const double r = t - k;
  if (r == 0.0) return (k == 0.0) ? 1.0 : 0.0;
  double s = std::sin(kPi * r);
  // sin(pi t) = (-1)^k sin(pi r)
  if (std::fmod(k, 2.0) != 0.0) s = -s;
  return s / (kPi * t);
}

BandlimitedSignal::BandlimitedSignal(double omega, int m_min, std::vector<cplx> coeffs,
                                     bool is_real, double tau_im)
    : omega_(omega), m_min_(m_min), coeffs_(std::move(coeffs)), is_real_(is_real) {
  if (!(omega > 0.0)) throw InvalidParameter("BandlimitedSignal: omega must be positive");
  if (is_real_) {
    double scale = 0.0;
    for (const cplx& c : coeffs_) scale = std::max(scale, std::abs(c));
    const double bound = tau_im * std::max(scale, 1.0);
    for (cplx& c : coeffs_) {
      if (std::abs(c.imag()) > bound)
        throw InvalidParameter("BandlimitedSignal: is_real set but coefficients have "
                               "imaginary parts above tolerance");
      c = cplx(c.real(), 0.0);
    }
  }
}

BandlimitedSignal BandlimitedSignal::from_real(double omega, int m_min,
                                               const std::vector<double>& coeffs) {
  std::vector<cplx> c(coeffs.begin(), coeffs.end());
  return BandlimitedSignal(omega, m_min, std::move(c), true);
}

BandlimitedSignal BandlimitedSignal::zero(double omega) {
  return BandlimitedSignal(omega, 0, {}, true);
}

cplx BandlimitedSignal::coeff(int m) const {
  if (m < m_min_ || m > m_max()) return cplx(0.0, 0.0);
  return coeffs_[static_cast<std::size_t>(m - m_min_)];
}

cplx BandlimitedSignal::evaluate(double x) const {
  if (coeffs_.empty()) return cplx(0.0, 0.0);
  const double u = 2.0 * omega_ * x;
  const double k = std::nearbyint(u);
  const double r = u - k;
  if (r == 0.0) {
    // On the Nyquist grid the series collapses to a single coefficient.
    const double mk = k;
    if (mk < m_min_ || mk > m_max()) return cplx(0.0, 0.0);
    return coeffs_[static_cast<std::size_t>(static_cast<int>(mk) - m_min_)];
  }
  // sinc(u - m) = (-1)^(k - m) sin(pi r) / (pi (u - m)); one sine call total.
  double s = std::sin(kPi * r);
  if (std::fmod(k, 2.0) != 0.0) s = -s;  // (-1)^k sin(pi r) = sin(pi u)
  std::vector<cplx> terms(coeffs_.size());
  double sign = (m_min_ % 2 == 0) ? 1.0 : -1.0;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    const double m = static_cast<double>(m_min_) + static_cast<double>(i);
    terms[i] = coeffs_[i] * (sign * s / (kPi * (u - m)));
    sign = -sign;
  }
  return pairwise_sum(terms.data(), terms.size());
}

cplx BandlimitedSignal::fourier(double xi) const {
  if (std::abs(xi) > omega_) return cplx(0.0, 0.0);
  if (coeffs_.empty()) return cplx(0.0, 0.0);
  const double theta = -kPi * xi / omega_;
  const cplx z = std::polar(1.0, theta);
  // Horner over ascending m, then shift by z^{m_min}.
  cplx acc(0.0, 0.0);
  for (std::size_t i = coeffs_.size(); i-- > 0;) acc = acc * z + coeffs_[i];
  acc *= std::polar(1.0, theta * static_cast<double>(m_min_));
  return acc / (2.0 * omega_);
}

double BandlimitedSignal::norm2() const {
  if (coeffs_.empty()) return 0.0;
  std::vector<double> sq(coeffs_.size());
  for (std::size_t i = 0; i < coeffs_.size(); ++i) sq[i] = std::norm(coeffs_[i]);
  return std::sqrt(pairwise_sum(sq.data(), sq.size()) / (2.0 * omega_));
}

BandlimitedSignal BandlimitedSignal::scaled(cplx factor) const {
  std::vector<cplx> c(coeffs_.size());
  for (std::size_t i = 0; i < coeffs_.size(); ++i) c[i] = coeffs_[i] * factor;
  const bool real_out = is_real_ && factor.imag() == 0.0;
  return BandlimitedSignal(omega_, m_min_, std::move(c), real_out);
}

BandlimitedSignal BandlimitedSignal::trimmed(double rel_cutoff) const {
  if (coeffs_.empty()) return *this;
  double peak = 0.0;
  for (const cplx& c : coeffs_) peak = std::max(peak, std::abs(c));
  const double cut = rel_cutoff * peak;
  std::size_t lo = 0, hi = coeffs_.size();
  while (lo < hi && std::abs(coeffs_[lo]) <= cut) ++lo;
  while (hi > lo && std::abs(coeffs_[hi - 1]) <= cut) --hi;
  std::vector<cplx> c(coeffs_.begin() + lo, coeffs_.begin() + hi);
  return BandlimitedSignal(omega_, m_min_ + static_cast<int>(lo), std::move(c), is_real_);
}

BandlimitedSignal BandlimitedSignal::with_window(int lo, int hi) const {
  if (hi < lo) throw InvalidParameter("with_window: hi < lo");
  std::vector<cplx> c(static_cast<std::size_t>(hi - lo + 1), cplx(0.0, 0.0));
  for (int m = lo; m <= hi; ++m) c[static_cast<std::size_t>(m - lo)] = coeff(m);
  return BandlimitedSignal(omega_, lo, std::move(c), is_real_);
}

namespace {

void require_same_band(const BandlimitedSignal& f, const BandlimitedSignal& g) {
  const double scale = std::max(f.omega(), g.omega());
  if (std::abs(f.omega() - g.omega()) > 1e-12 * scale)
    throw BandMismatch("signals have different band edges");
}

}  // namespace

cplx inner_product(const BandlimitedSignal& f, const BandlimitedSignal& g) {
  require_same_band(f, g);
  const int lo = std::max(f.m_min(), g.m_min());
  const int hi = std::min(f.m_max(), g.m_max());
  if (hi < lo || f.empty() || g.empty()) return cplx(0.0, 0.0);
  std::vector<cplx> terms(static_cast<std::size_t>(hi - lo + 1));
  for (int m = lo; m <= hi; ++m)
    terms[static_cast<std::size_t>(m - lo)] = f.coeff(m) * std::conj(g.coeff(m));
  return pairwise_sum(terms.data(), terms.size()) / (2.0 * f.omega());
}

namespace {

BandlimitedSignal combine(const BandlimitedSignal& f, const BandlimitedSignal& g, double sign) {
  require_same_band(f, g);
  if (f.empty()) return sign > 0 ? g : g.scaled(-1.0);
  if (g.empty()) return f;
  const int lo = std::min(f.m_min(), g.m_min());
  const int hi = std::max(f.m_max(), g.m_max());
  std::vector<cplx> c(static_cast<std::size_t>(hi - lo + 1));
  for (int m = lo; m <= hi; ++m)
    c[static_cast<std::size_t>(m - lo)] = f.coeff(m) + sign * g.coeff(m);
  return BandlimitedSignal(f.omega(), lo, std::move(c), f.is_real() && g.is_real());
}

}  // namespace

BandlimitedSignal operator+(const BandlimitedSignal& f, const BandlimitedSignal& g) {
  return combine(f, g, 1.0);
}

BandlimitedSignal operator-(const BandlimitedSignal& f, const BandlimitedSignal& g) {
  return combine(f, g, -1.0);
}

double dist_up_to_sign(const BandlimitedSignal& f, const BandlimitedSignal& g) {
  require_same_band(f, g);
  const int lo = std::min(f.empty() ? 0 : f.m_min(), g.empty() ? 0 : g.m_min());
  const int hi = std::max(f.empty() ? 0 : f.m_max(), g.empty() ? 0 : g.m_max());
  std::vector<double> minus, plus;
  minus.reserve(static_cast<std::size_t>(hi - lo + 1));
  plus.reserve(static_cast<std::size_t>(hi - lo + 1));
  for (int m = lo; m <= hi; ++m) {
    const cplx a = f.coeff(m), b = g.coeff(m);
    minus.push_back(std::norm(a - b));
    plus.push_back(std::norm(a + b));
  }
  const double dm = pairwise_sum(minus.data(), minus.size());
  const double dp = pairwise_sum(plus.data(), plus.size());
  return std::sqrt(std::min(dm, dp) / (2.0 * f.omega()));
}

double dist_up_to_phase(const BandlimitedSignal& f, const BandlimitedSignal& g) {
  require_same_band(f, g);
  const double nf = f.norm2(), ng = g.norm2();
  const double cross = std::abs(inner_product(f, g));
  const double sq = nf * nf + ng * ng - 2.0 * cross;
  return std::sqrt(std::max(sq, 0.0));
}

bool equal_up_to_sign_coeffs(const BandlimitedSignal& f, const BandlimitedSignal& g,
                             double tau_coef) {
  require_same_band(f, g);
  const int lo = std::min(f.empty() ? 0 : f.m_min(), g.empty() ? 0 : g.m_min());
  const int hi = std::max(f.empty() ? 0 : f.m_max(), g.empty() ? 0 : g.m_max());
  double peak = 0.0;
  for (int m = lo; m <= hi; ++m)
    peak = std::max({peak, std::abs(f.coeff(m)), std::abs(g.coeff(m))});
  const double bound = tau_coef * std::max(peak, 1e-300);
  for (double sign : {1.0, -1.0}) {
    bool ok = true;
    for (int m = lo; m <= hi && ok; ++m)
      ok = std::abs(f.coeff(m) - sign * g.coeff(m)) <= bound;
    if (ok) return true;
  }
  return false;
}

}  // namespace wpr
