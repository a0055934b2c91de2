#include "wpr/wavelet.hpp"

#include <cmath>

namespace wpr {

namespace {

constexpr double kPi = 3.14159265358979323846;
const double kQuarticRootPi = std::pow(kPi, -0.25);

/// exp(w) - 1 for complex w without cancellation near 0:
/// Re = expm1(x) cos y - 2 sin^2(y/2), Im = e^x sin y.
cplx cexpm1(cplx w) {
  const double x = w.real(), y = w.imag();
  const double sy2 = std::sin(0.5 * y);
  return cplx(std::expm1(x) * std::cos(y) - 2.0 * sy2 * sy2, std::exp(x) * std::sin(y));
}

cplx morlet_fourier(double xi, double xi0) {
  if (xi == 0.0) return cplx(0.0, 0.0);
  const double cross = xi0 * xi;
  if (std::abs(cross) <= 1.0) {
    // e^{-(xi-xi0)^2/2} - e^{-xi^2/2} e^{-xi0^2/2}
    //   = e^{-xi^2/2 - xi0^2/2} (e^{xi xi0} - 1); the expm1 form keeps full
    // precision where the printed difference cancels.
    return cplx(kQuarticRootPi * std::exp(-0.5 * (xi * xi + xi0 * xi0)) * std::expm1(cross), 0.0);
  }
  const double a = std::exp(-0.5 * (xi - xi0) * (xi - xi0));
  const double b = std::exp(-0.5 * xi * xi) * std::exp(-0.5 * xi0 * xi0);
  return cplx(kQuarticRootPi * (a - b), 0.0);
}

cplx chirp_fourier(double xi, double xi0, double beta) {
  if (xi == 0.0) return cplx(0.0, 0.0);
  const cplx gamma(1.0, -beta);
  const cplx front = std::sqrt(2.0 * kPi / gamma);
  // exponent mismatch between the shifted-Gaussian and the corrective term
  const cplx u = xi * xi0 / gamma + 0.5 * xi * xi * (1.0 - 1.0 / gamma);
  if (std::abs(u) <= 1.0) {
    const cplx common = std::exp(-xi0 * xi0 / (2.0 * gamma)) * std::exp(-0.5 * xi * xi);
    return front * common * cexpm1(u);
  }
  const cplx a = std::exp(-(xi - xi0) * (xi - xi0) / (2.0 * gamma));
  const cplx b = std::exp(-xi0 * xi0 / (2.0 * gamma)) * std::exp(-0.5 * xi * xi);
  return front * (a - b);
}

}  // namespace

Wavelet Wavelet::morlet(double xi0) {
  if (xi0 == 0.0) throw InvalidParameter("morlet: xi0 must be nonzero");
  Wavelet w;
  w.kind_ = WaveletKind::morlet;
  w.xi0_ = xi0;
  return w;
}

Wavelet Wavelet::chirp(double xi0, double beta) {
  Wavelet w;
  w.kind_ = WaveletKind::chirp;
  w.xi0_ = xi0;
  w.beta_ = beta;
  return w;
}

Wavelet Wavelet::cauchy(double p, double rho_const) {
  if (!(p > 0.0)) throw InvalidParameter("cauchy: p must be positive");
  if (rho_const == 0.0) throw InvalidParameter("cauchy: constant rho must be nonzero");
  Wavelet w;
  w.kind_ = WaveletKind::cauchy;
  w.p_ = p;
  w.rho_const_ = rho_const;
  w.progressive_ = true;
  return w;
}

Wavelet Wavelet::cauchy(double p, std::function<double(double)> rho) {
  if (!(p > 0.0)) throw InvalidParameter("cauchy: p must be positive");
  Wavelet w;
  w.kind_ = WaveletKind::cauchy;
  w.p_ = p;
  w.rho_ = std::move(rho);
  w.progressive_ = true;
  return w;
}

Wavelet Wavelet::gauss_lowpass() {
  Wavelet w;
  w.kind_ = WaveletKind::gauss_lowpass;
  w.lowpass_ = true;
  return w;
}

Wavelet Wavelet::custom(std::function<cplx(double)> fourier, bool progressive, bool lowpass) {
  Wavelet w;
  w.kind_ = WaveletKind::custom;
  w.custom_ = std::move(fourier);
  w.progressive_ = progressive;
  w.lowpass_ = lowpass;
  return w;
}

cplx Wavelet::fourier(double xi) const {
  switch (kind_) {
    case WaveletKind::morlet:
      return morlet_fourier(xi, xi0_);
    case WaveletKind::chirp:
      return chirp_fourier(xi, xi0_, beta_);
    case WaveletKind::cauchy: {
      if (xi <= 0.0) return cplx(0.0, 0.0);
      const double rho = rho_ ? rho_(xi) : rho_const_;
      return cplx(rho * std::exp(p_ * std::log(xi) - xi), 0.0);
    }
    case WaveletKind::gauss_lowpass:
      return cplx(std::exp(-kPi * xi * xi), 0.0);
    case WaveletKind::custom:
      return custom_(xi);
  }
  return cplx(0.0, 0.0);
}

nlohmann::json Wavelet::descriptor() const {
  nlohmann::json j;
  switch (kind_) {
    case WaveletKind::morlet:
      j["kind"] = "morlet";
      j["xi0"] = xi0_;
      break;
    case WaveletKind::chirp:
      j["kind"] = "chirp";
      j["xi0"] = xi0_;
      j["beta"] = beta_;
      break;
    case WaveletKind::cauchy:
      j["kind"] = "cauchy";
      j["p"] = p_;
      j["rho_const"] = rho_ ? 0.0 : rho_const_;
      if (rho_) j["rho_custom"] = true;
      break;
    case WaveletKind::gauss_lowpass:
      j["kind"] = "gauss";
      break;
    case WaveletKind::custom:
      j["kind"] = "custom";
      break;
  }
  return j;
}

Wavelet Wavelet::from_descriptor(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "morlet") return morlet(j.at("xi0").get<double>());
  if (kind == "chirp") return chirp(j.at("xi0").get<double>(), j.at("beta").get<double>());
  if (kind == "cauchy")
    return cauchy(j.at("p").get<double>(),
                  j.contains("rho_const") ? j.at("rho_const").get<double>() : 1.0);
  if (kind == "gauss") return gauss_lowpass();
  throw ParseError("wavelet descriptor: unknown kind '" + kind + "'");
}

namespace {

struct LadderLimit {
  bool identically_zero = false;  // every raw value on this side is exactly 0
  bool converged = false;
  bool zero_limit = false;  // converged, limit indistinguishable from 0
  cplx c{0.0, 0.0};
  double spread = 0.0;  // relative
};

// Richardson pass over xi^{-ell} psi^(side * xi_j); the ladder halves xi per
// rung, so 2 r_{j+1} - r_j cancels the linear term of the expansion in xi.
LadderLimit ladder_limit(const std::vector<cplx>& raw, const std::vector<double>& xs, int ell) {
  LadderLimit out;
  const std::size_t n = raw.size();
  out.identically_zero = true;
  for (const cplx& v : raw)
    if (v != cplx(0.0, 0.0)) out.identically_zero = false;
  if (out.identically_zero) {
    out.converged = true;
    out.zero_limit = true;
    return out;
  }
  std::vector<cplx> r(n);
  double value_scale = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    r[j] = raw[j] / std::pow(xs[j], ell);
    value_scale = std::max(value_scale, std::abs(r[j]));
  }
  std::vector<cplx> rich(n - 1);
  for (std::size_t j = 0; j + 1 < n; ++j) rich[j] = 2.0 * r[j + 1] - r[j];
  out.c = rich.back();
  // Zero limit: the extrapolated value is buried under the raw ladder scale.
  if (std::abs(out.c) <= 3e-3 * value_scale) {
    out.converged = true;
    out.zero_limit = true;
    return out;
  }
  double spread = 0.0;
  const std::size_t tail = std::min<std::size_t>(4, rich.size());
  for (std::size_t j = rich.size() - tail; j < rich.size(); ++j)
    spread = std::max(spread, std::abs(rich[j] - out.c));
  out.spread = spread / std::abs(out.c);
  out.converged = out.spread < 1e-3;
  return out;
}

}  // namespace

MomentProfile probe_moment_order(const Wavelet& w, double xi_probe, int max_ell) {
  if (!(xi_probe > 0.0) || xi_probe > 1e-3)
    throw InvalidParameter("probe_moment_order: xi_probe must be in (0, 1e-3]");
  if (max_ell < 1) throw InvalidParameter("probe_moment_order: max_ell must be >= 1");

  constexpr int kRungs = 7;
  std::vector<double> xs(kRungs);
  std::vector<cplx> right(kRungs), left(kRungs);
  for (int j = 0; j < kRungs; ++j) {
    xs[j] = xi_probe * std::pow(2.0, -j);
    right[j] = w.fourier(xs[j]);
    left[j] = w.fourier(-xs[j]);
  }

  for (int ell = 0; ell <= max_ell; ++ell) {
    const LadderLimit r = ladder_limit(right, xs, ell);
    LadderLimit l = ladder_limit(left, xs, ell);
    if (!l.identically_zero && !l.zero_limit) l.c *= std::pow(-1.0, ell);  // (-xi)^{-ell}
    else l.c = cplx(0.0, 0.0);

    const bool right_settled = r.converged && !r.zero_limit;
    const bool left_settled = l.converged && !l.zero_limit;

    if (right_settled && left_settled) {
      const double gap = std::abs(r.c - l.c) / std::max(std::abs(r.c), std::abs(l.c));
      if (gap > 1e-3)
        throw ProgressiveWaveletNoLimit("probe_moment_order: one-sided limits disagree at ell=" +
                                        std::to_string(ell));
      MomentProfile profile;
      profile.ell = ell;
      profile.c = 0.5 * (r.c + l.c);
      profile.fit_quality = std::max({r.spread, l.spread, gap});
      return profile;
    }
    // One side has a nonzero limit (or diverges) while the other vanishes:
    // the two-sided limit cannot exist at any order.
    if ((l.identically_zero || l.zero_limit) && !r.zero_limit && !r.identically_zero)
      throw ProgressiveWaveletNoLimit(
          "probe_moment_order: left limit vanishes while the right side does not (ell=" +
          std::to_string(ell) + ")");
    if ((r.identically_zero || r.zero_limit) && !l.zero_limit && !l.identically_zero)
      throw ProgressiveWaveletNoLimit(
          "probe_moment_order: right limit vanishes while the left side does not (ell=" +
          std::to_string(ell) + ")");
  }
  throw NoFiniteOrder("probe_moment_order: no finite nonzero limit up to max_ell");
}

Wavelet normalize(const Wavelet& w, const MomentProfile& profile) {
  if (profile.c == cplx(0.0, 0.0)) throw InvalidParameter("normalize: profile.c must be nonzero");
  cplx factor(1.0, 0.0);
  const cplx base(0.0, 2.0 * kPi);
  for (int k = 0; k < profile.ell; ++k) factor *= -base;  // (-1)^ell (2 pi i)^ell
  factor /= profile.c;
  if (factor == cplx(1.0, 0.0)) return w;
  Wavelet inner = w;
  return Wavelet::custom([inner, factor](double xi) { return factor * inner.fourier(xi); },
                         w.progressive(), w.lowpass());
}

double normalization_magnitude(const MomentProfile& profile) {
  return std::pow(2.0 * kPi, profile.ell) / std::abs(profile.c);
}

}  // namespace wpr
