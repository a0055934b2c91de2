#include "wpr/retrieval.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

namespace wpr {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double CardinalSeries::operator()(double x) const {
  if (samples.empty()) return 0.0;
  const double u = 2.0 * band * x;
  const double k = std::nearbyint(u);
  const double r = u - k;
  if (r == 0.0) {
    if (k < m_min || k > m_min + static_cast<double>(samples.size()) - 1.0) return 0.0;
    return samples[static_cast<std::size_t>(static_cast<int>(k) - m_min)];
  }
  double s = std::sin(kPi * r);
  if (std::fmod(k, 2.0) != 0.0) s = -s;  // sin(pi u)
  std::vector<double> terms(samples.size());
  double sign = (m_min % 2 == 0) ? 1.0 : -1.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double m = static_cast<double>(m_min) + static_cast<double>(i);
    terms[i] = samples[i] * (sign * s / (kPi * (u - m)));
    sign = -sign;
  }
  return pairwise_sum(terms.data(), terms.size());
}

namespace {

double edge_ratio_of(const std::vector<double>& samples) {
  double peak = 0.0;
  for (double v : samples) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return 0.0;
  const std::size_t n = samples.size();
  double edge = std::max(std::abs(samples[0]), std::abs(samples[n - 1]));
  if (n >= 4) edge = std::max({edge, std::abs(samples[1]), std::abs(samples[n - 2])});
  return edge / peak;
}

}  // namespace

CardinalSeries wsk_interpolate(const std::vector<double>& samples, int m_min, double omega,
                               double edge_tol, bool enforce_edges) {
  if (!(omega > 0.0)) throw InvalidParameter("wsk_interpolate: omega must be positive");
  if (samples.empty()) throw InvalidParameter("wsk_interpolate: no samples");
  const double ratio = edge_ratio_of(samples);
  if (enforce_edges && ratio > edge_tol)
    throw EdgeLeakage("wsk_interpolate: window edges carry " + std::to_string(ratio) +
                      " of the peak; enlarge the window");
  CardinalSeries series;
  series.band = 2.0 * omega;
  series.m_min = m_min;
  series.samples = samples;
  return series;
}

// ---------------------------------------------------------------------------
// Sign retrieval
// ---------------------------------------------------------------------------

namespace {

// Everything both sign solvers need: the interpolated square root on a fine
// grid, the detected breakpoints, and the per-interval out-of-band residual
// Gram matrix K, so that any sign pattern s scores as s^T K s.
struct SignWorkspace {
  double omega = 1.0;
  int m_min = 0;
  std::vector<double> q;  // clipped input samples
  double max_q = 0.0;
  double edge_ratio = 0.0;
  bool all_zero = false;

  double h = 0.0;  // fine spacing
  std::vector<double> xs, q_fine, r_fine;
  std::vector<double> breakpoints;

  int n_lo = 0, n_hi = -1;            // Nyquist basis range
  std::vector<int> interval_of_nyq;   // per basis index
  std::vector<double> r_nyq;          // sqrt of the exact even-index samples
  Eigen::MatrixXd K;

  int intervals() const { return static_cast<int>(breakpoints.size()) + 1; }

  double objective(const std::vector<int>& signs) const {
    const int k = intervals();
    double acc = 0.0;
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) acc += signs[i] * signs[j] * K(i, j);
    return std::max(acc, 0.0);
  }

  BandlimitedSignal candidate(const std::vector<int>& signs) const {
    std::vector<cplx> coeffs(static_cast<std::size_t>(n_hi - n_lo + 1));
    for (int n = n_lo; n <= n_hi; ++n) {
      const std::size_t i = static_cast<std::size_t>(n - n_lo);
      coeffs[i] = cplx(signs[static_cast<std::size_t>(interval_of_nyq[i])] * r_nyq[i], 0.0);
    }
    return BandlimitedSignal(omega, n_lo, std::move(coeffs), true);
  }
};

int interval_index(const std::vector<double>& breakpoints, double x) {
  return static_cast<int>(std::upper_bound(breakpoints.begin(), breakpoints.end(), x) -
                          breakpoints.begin());
}

SignWorkspace build_sign_workspace(const std::vector<double>& q_samples, int m_min, double omega,
                                   const SignRetrieveOptions& opts) {
  if (!(omega > 0.0)) throw InvalidParameter("sign_retrieve: omega must be positive");
  if (q_samples.size() < 3) throw InvalidParameter("sign_retrieve: too few samples");

  SignWorkspace ws;
  ws.omega = omega;
  ws.m_min = m_min;
  ws.q = q_samples;

  double peak_abs = 0.0;
  for (double v : ws.q) peak_abs = std::max(peak_abs, std::abs(v));
  for (double& v : ws.q) {
    if (v < -opts.tau_neg_rel * peak_abs)
      throw InvalidParameter("sign_retrieve: samples are negative beyond the clip tolerance");
    v = std::max(v, 0.0);
  }
  for (double v : ws.q) ws.max_q = std::max(ws.max_q, v);
  ws.edge_ratio = edge_ratio_of(ws.q);
  if (opts.enforce_edges && ws.edge_ratio > opts.edge_tol)
    throw EdgeLeakage("sign_retrieve: window edges carry " + std::to_string(ws.edge_ratio) +
                      " of the peak");

  const int n = static_cast<int>(ws.q.size());
  const int m_max = m_min + n - 1;
  // Nyquist indices inside the window: x_n = 2n/(4 omega) must be a sample.
  ws.n_lo = (m_min >= 0) ? (m_min + 1) / 2 : m_min / 2;
  ws.n_hi = (m_max >= 0) ? m_max / 2 : -((-m_max + 1) / 2);
  if (ws.n_hi < ws.n_lo) throw InvalidParameter("sign_retrieve: window shorter than one Nyquist step");

  if (ws.max_q == 0.0) {
    ws.all_zero = true;
    ws.interval_of_nyq.assign(static_cast<std::size_t>(ws.n_hi - ws.n_lo + 1), 0);
    ws.r_nyq.assign(static_cast<std::size_t>(ws.n_hi - ws.n_lo + 1), 0.0);
    ws.K = Eigen::MatrixXd::Zero(1, 1);
    return ws;
  }

  CardinalSeries interp;
  interp.band = 2.0 * omega;
  interp.m_min = m_min;
  interp.samples = ws.q;

  const int fine = opts.fine_per_step;
  const int n_fine = (n - 1) * fine + 1;
  ws.h = 1.0 / (4.0 * omega * fine);
  ws.xs.resize(static_cast<std::size_t>(n_fine));
  ws.q_fine.resize(static_cast<std::size_t>(n_fine));
  ws.r_fine.resize(static_cast<std::size_t>(n_fine));
  for (int j = 0; j < n_fine; ++j) {
    const double x = (m_min + static_cast<double>(j) / fine) / (4.0 * omega);
    ws.xs[static_cast<std::size_t>(j)] = x;
    const double v = std::max(interp(x), 0.0);
    ws.q_fine[static_cast<std::size_t>(j)] = v;
    ws.r_fine[static_cast<std::size_t>(j)] = std::sqrt(v);
  }

  // --- breakpoint detection ---
  std::vector<double> found;
  const double zero_cut = opts.eps_zero * ws.max_q;
  // hard-zero clusters: maximal runs below the threshold collapse to centers
  {
    int run_start = -1;
    for (int j = 0; j <= n_fine; ++j) {
      const bool low = j < n_fine && ws.q_fine[static_cast<std::size_t>(j)] < zero_cut;
      if (low && run_start < 0) run_start = j;
      if (!low && run_start >= 0) {
        found.push_back(0.5 * (ws.xs[static_cast<std::size_t>(run_start)] +
                               ws.xs[static_cast<std::size_t>(j - 1)]));
        run_start = -1;
      }
    }
  }
  // local minima low enough to be consistent with a zero between grid points
  // (a transversal zero can only raise q to about (pi/(4 fine))^2 of the peak
  // at the nearest grid point, so the threshold has slack built in)
  const double min_cut = opts.local_min_rel * ws.max_q;
  for (int j = 1; j + 1 < n_fine; ++j) {
    const double qm = ws.q_fine[static_cast<std::size_t>(j - 1)];
    const double q0 = ws.q_fine[static_cast<std::size_t>(j)];
    const double qp = ws.q_fine[static_cast<std::size_t>(j + 1)];
    if (!(q0 <= qm && q0 <= qp)) continue;
    if (q0 < zero_cut) continue;  // already a hard-zero hit
    const double a = 0.5 * (qm - 2.0 * q0 + qp);
    const double b = 0.5 * (qp - qm);
    double vmin = q0, tstar = 0.0;
    if (a > 0.0) {
      tstar = std::clamp(-b / (2.0 * a), -1.0, 1.0);
      vmin = q0 + b * tstar + a * tstar * tstar;
    }
    if (vmin < min_cut) found.push_back(ws.xs[static_cast<std::size_t>(j)] + tstar * ws.h);
  }
  std::sort(found.begin(), found.end());
  // merge detections within half a coarse step; drop breakpoints hugging the
  // window ends (they delimit empty intervals)
  const double merge_radius = 0.5 / (4.0 * omega);
  const double x_lo = ws.xs.front(), x_hi = ws.xs.back();
  for (double bp : found) {
    if (bp < x_lo + merge_radius || bp > x_hi - merge_radius) continue;
    if (!ws.breakpoints.empty() && bp - ws.breakpoints.back() < merge_radius) continue;
    ws.breakpoints.push_back(bp);
  }

  // --- objective machinery ---
  // Rows: fine points away from breakpoints and the outermost coarse step.
  std::vector<int> rows;
  rows.reserve(static_cast<std::size_t>(n_fine));
  for (int j = 0; j < n_fine; ++j) {
    const double x = ws.xs[static_cast<std::size_t>(j)];
    if (x < x_lo + 1.0 / (4.0 * omega) || x > x_hi - 1.0 / (4.0 * omega)) continue;
    bool near_bp = false;
    for (double bp : ws.breakpoints)
      if (std::abs(x - bp) <= 2.0 * ws.h) {
        near_bp = true;
        break;
      }
    if (!near_bp) rows.push_back(j);
  }
  const int n_basis = ws.n_hi - ws.n_lo + 1;
  const int k = ws.intervals();
  Eigen::MatrixXd A(rows.size(), n_basis);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const double x = ws.xs[static_cast<std::size_t>(rows[r])];
    for (int c = 0; c < n_basis; ++c)
      A(static_cast<Eigen::Index>(r), c) = sinc(2.0 * omega * x - (ws.n_lo + c));
  }
  Eigen::MatrixXd V = Eigen::MatrixXd::Zero(rows.size(), k);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const int j = rows[r];
    const int iv = interval_index(ws.breakpoints, ws.xs[static_cast<std::size_t>(j)]);
    V(static_cast<Eigen::Index>(r), iv) = ws.r_fine[static_cast<std::size_t>(j)];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  Eigen::MatrixXd U = V - A * qr.solve(V);
  ws.K = U.transpose() * U;

  ws.interval_of_nyq.resize(static_cast<std::size_t>(n_basis));
  ws.r_nyq.resize(static_cast<std::size_t>(n_basis));
  for (int c = 0; c < n_basis; ++c) {
    const int nn = ws.n_lo + c;
    const double x = nn / (2.0 * omega);
    ws.interval_of_nyq[static_cast<std::size_t>(c)] = interval_index(ws.breakpoints, x);
    ws.r_nyq[static_cast<std::size_t>(c)] =
        std::sqrt(ws.q[static_cast<std::size_t>(2 * nn - m_min)]);
  }
  return ws;
}

std::vector<int> heuristic_signs(const SignWorkspace& ws) {
  const int k = ws.intervals();
  std::vector<int> signs(static_cast<std::size_t>(k), 1);
  const int n_fine = static_cast<int>(ws.xs.size());
  for (int j = 0; j + 1 < k; ++j) {
    const double bp = ws.breakpoints[static_cast<std::size_t>(j)];
    int jb = static_cast<int>(std::lround((bp - ws.xs.front()) / ws.h));
    jb = std::clamp(jb, 3, n_fine - 4);
    const double dl = (ws.r_fine[static_cast<std::size_t>(jb - 1)] -
                       ws.r_fine[static_cast<std::size_t>(jb - 3)]) / (2.0 * ws.h);
    const double dr = (ws.r_fine[static_cast<std::size_t>(jb + 3)] -
                       ws.r_fine[static_cast<std::size_t>(jb + 1)]) / (2.0 * ws.h);
    // transversal zero: the root has a kink, the one-sided slopes cancel
    const bool flip = std::abs(dl + dr) < std::abs(dr - dl);
    signs[static_cast<std::size_t>(j + 1)] = flip ? -signs[static_cast<std::size_t>(j)]
                                                  : signs[static_cast<std::size_t>(j)];
  }
  return signs;
}

void single_flip_descent(const SignWorkspace& ws, std::vector<int>& signs, int max_sweeps) {
  const int k = ws.intervals();
  if (k <= 1) return;
  Eigen::VectorXd s(k);
  for (int i = 0; i < k; ++i) s(i) = signs[static_cast<std::size_t>(i)];
  Eigen::VectorXd Ks = ws.K * s;
  const double floor = 1e-14 * std::max(ws.K.trace(), 1e-300);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    int best = -1;
    double best_delta = -floor;
    for (int j = 1; j < k; ++j) {  // interval 0 carries the global gauge
      const double delta = 4.0 * (ws.K(j, j) - s(j) * Ks(j));
      if (delta < best_delta) {
        best_delta = delta;
        best = j;
      }
    }
    if (best < 0) break;
    Ks -= 2.0 * s(best) * ws.K.col(best);
    s(best) = -s(best);
    signs[static_cast<std::size_t>(best)] = static_cast<int>(s(best));
  }
}

void fill_pattern(const SignWorkspace& ws, const std::vector<int>& signs, double objective,
                  SignPattern* out) {
  if (!out) return;
  out->breakpoints = ws.breakpoints;
  out->signs = signs;
  out->objective = objective;
  out->edge_ratio = ws.edge_ratio;
}

// A tied pattern only counts as a genuine ambiguity when its candidate
// differs by more than the data can resolve: the objective is the squared
// out-of-band misfit on the fine grid, so (in L2 units) candidate gaps below
// ~sqrt(h * obj) are invisible to the objective that judged the tie.
bool distinct_at_resolution(const SignWorkspace& ws, const BandlimitedSignal& a,
                            const BandlimitedSignal& b, double obj_a, double obj_b) {
  const double resolution = 3.0 * std::sqrt(ws.h * std::max(obj_a, obj_b));
  const double scale = std::max({a.norm2(), b.norm2(), 1e-300});
  return dist_up_to_sign(a, b) > std::max(1e-12 * scale, resolution);
}

}  // namespace

BandlimitedSignal sign_retrieve(const std::vector<double>& q_samples, int m_min, double omega,
                                const SignRetrieveOptions& opts, SignPattern* pattern_out) {
  SignWorkspace ws = build_sign_workspace(q_samples, m_min, omega, opts);
  if (ws.all_zero) {
    std::vector<int> signs{1};
    fill_pattern(ws, signs, 0.0, pattern_out);
    return ws.candidate(signs);
  }
  std::vector<int> signs = heuristic_signs(ws);
  single_flip_descent(ws, signs, opts.max_descent_sweeps);
  const double obj = ws.objective(signs);

  // Near-ties with a genuinely different candidate are surfaced, never
  // silently resolved.
  BandlimitedSignal best = ws.candidate(signs);
  for (int j = 1; j < ws.intervals(); ++j) {
    std::vector<int> other = signs;
    other[static_cast<std::size_t>(j)] = -other[static_cast<std::size_t>(j)];
    const double obj_other = ws.objective(other);
    if (std::abs(obj_other - obj) <= opts.ambiguity_ratio * std::max(obj_other, obj)) {
      if (distinct_at_resolution(ws, best, ws.candidate(other), obj, obj_other))
        throw AmbiguousSigns("sign_retrieve: two sign patterns are numerically tied");
    }
  }
  fill_pattern(ws, signs, obj, pattern_out);
  return best;
}

BandlimitedSignal sign_retrieve_oracle(const std::vector<double>& q_samples, int m_min,
                                       double omega, int max_intervals,
                                       const SignRetrieveOptions& opts, SignPattern* pattern_out) {
  SignWorkspace ws = build_sign_workspace(q_samples, m_min, omega, opts);
  if (ws.all_zero) {
    std::vector<int> signs{1};
    fill_pattern(ws, signs, 0.0, pattern_out);
    return ws.candidate(signs);
  }
  const int k = ws.intervals();
  if (k > max_intervals)
    throw TooManyIntervals("sign_retrieve_oracle: " + std::to_string(k) + " intervals exceed " +
                           std::to_string(max_intervals));
  const int free = k - 1;
  const std::uint64_t total = 1ULL << free;

  auto signs_of = [&](std::uint64_t bits) {
    std::vector<int> signs(static_cast<std::size_t>(k), 1);
    for (int j = 0; j < free; ++j)
      if (bits & (1ULL << j)) signs[static_cast<std::size_t>(j + 1)] = -1;
    return signs;
  };

  std::uint64_t best_bits = 0;
  double best_obj = ws.objective(signs_of(0));
  for (std::uint64_t bits = 1; bits < total; ++bits) {
    const double obj = ws.objective(signs_of(bits));
    if (obj < best_obj) {
      best_obj = obj;
      best_bits = bits;
    }
  }
  const std::vector<int> best_signs = signs_of(best_bits);
  BandlimitedSignal best = ws.candidate(best_signs);
  for (std::uint64_t bits = 0; bits < total; ++bits) {
    if (bits == best_bits) continue;
    const double obj = ws.objective(signs_of(bits));
    if (std::abs(obj - best_obj) <= opts.ambiguity_ratio * std::max(obj, best_obj)) {
      if (distinct_at_resolution(ws, best, ws.candidate(signs_of(bits)), best_obj, obj))
        throw AmbiguousSigns("sign_retrieve_oracle: tied sign patterns with distinct candidates");
    }
  }
  fill_pattern(ws, best_signs, best_obj, pattern_out);
  return best;
}

// ---------------------------------------------------------------------------
// Scale-ladder extrapolation
// ---------------------------------------------------------------------------

namespace {

double neville_at_zero(const std::vector<double>& a, std::vector<double> y) {
  const std::size_t n = y.size();
  for (std::size_t level = 1; level < n; ++level)
    for (std::size_t i = 0; i + level < n; ++i) {
      const double x0 = a[i], x1 = a[i + level];
      y[i] = (x1 * y[i] - x0 * y[i + 1]) / (x1 - x0);  // evaluated at a = 0
    }
  return y[0];
}

}  // namespace

std::vector<double> estimate_derivative_magnitudes(const MagnitudeMeasurements& meas,
                                                   const MomentProfile& profile,
                                                   int extrap_order, EstimateDiagnostics* diag) {
  const std::size_t n_scales = meas.scales.size();
  if (n_scales < 3)
    throw InvalidParameter("estimate_derivative_magnitudes: need at least 3 scales");
  for (std::size_t k = 0; k + 1 < n_scales; ++k)
    if (!(meas.scales[k] > meas.scales[k + 1]))
      throw InvalidParameter("estimate_derivative_magnitudes: scales must be strictly decreasing");
  if (extrap_order < 1) throw InvalidParameter("estimate_derivative_magnitudes: order must be >= 1");

  const double factor = normalization_magnitude(profile);
  const int n_times = meas.times();
  std::vector<std::vector<double>> y(static_cast<std::size_t>(n_times));
  double y_peak = 0.0;
  for (int i = 0; i < n_times; ++i) {
    auto& row = y[static_cast<std::size_t>(i)];
    row.resize(n_scales);
    for (std::size_t k = 0; k < n_scales; ++k) {
      const double v = meas.values[static_cast<std::size_t>(i)][k] * factor *
                       std::pow(meas.scales[k], -profile.ell);
      row[k] = v * v;
    }
    y_peak = std::max(y_peak, row[n_scales - 1]);
  }

  // The asymptotic hypothesis is only usable once the ladder has settled.
  double worst_gap = 0.0;
  for (int i = 0; i < n_times; ++i) {
    const auto& row = y[static_cast<std::size_t>(i)];
    const double last = row[n_scales - 1], prev = row[n_scales - 2];
    if (last > 1e-3 * y_peak) {
      const double gap = std::abs(last - prev) / last;
      worst_gap = std::max(worst_gap, gap);
      if (gap > 0.1)
        throw NotConverging("estimate_derivative_magnitudes: ladder still moving by " +
                            std::to_string(gap) + " at the smallest scale");
    }
  }

  const std::size_t use = std::min<std::size_t>(static_cast<std::size_t>(extrap_order) + 1,
                                                n_scales);
  std::vector<double> nodes(meas.scales.end() - static_cast<long>(use), meas.scales.end());

  std::vector<double> out(static_cast<std::size_t>(n_times));
  double spread = 0.0;
  for (int i = 0; i < n_times; ++i) {
    const auto& row = y[static_cast<std::size_t>(i)];
    std::vector<double> vals(row.end() - static_cast<long>(use), row.end());
    const double full = neville_at_zero(nodes, vals);
    if (use > 2) {
      std::vector<double> nodes1(nodes.begin() + 1, nodes.end());
      std::vector<double> vals1(vals.begin() + 1, vals.end());
      spread = std::max(spread, std::abs(full - neville_at_zero(nodes1, vals1)));
    }
    out[static_cast<std::size_t>(i)] = std::max(full, 0.0);
  }
  if (diag) {
    diag->extrapolation_spread = spread / std::max(y_peak, 1e-300);
    diag->ladder_gap = worst_gap;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Antidifferentiation
// ---------------------------------------------------------------------------

BandlimitedSignal antidifferentiate(const BandlimitedSignal& h, int ell,
                                    const AntidiffOptions& opts, AntidiffDiagnostics* diag) {
  if (ell < 0) throw InvalidParameter("antidifferentiate: ell must be nonnegative");
  if (ell == 0 || h.empty()) return h;
  const double omega = h.omega();
  const double xi_cut = opts.xi_cut_rel * omega;

  auto ratio = [&](double xi) {
    cplx denom(1.0, 0.0);
    const cplx base(0.0, 2.0 * kPi * xi);
    for (int k = 0; k < ell; ++k) denom *= base;
    return h.fourier(xi) / denom;
  };

  // Flank samples feeding the DC fill.
  const double flank_hi = std::min(opts.flank_factor * xi_cut, omega);
  const int cnt = opts.flank_nodes;
  std::vector<double> fx;
  std::vector<cplx> fv;
  for (int side : {-1, 1}) {
    for (int i = 0; i < cnt; ++i) {
      const double xi = side * (xi_cut + (flank_hi - xi_cut) * (i + 0.5) / cnt);
      fx.push_back(xi);
      fv.push_back(ratio(xi));
    }
  }
  double flank_scale = 0.0;
  for (const cplx& v : fv) flank_scale = std::max(flank_scale, std::abs(v));
  // mid-band size of the ratio: the magnitude an honest antiderivative has
  double band_scale = 0.0;
  for (double frac : {0.125, 0.25, 0.5, 0.75})
    band_scale = std::max({band_scale, std::abs(ratio(frac * omega)),
                           std::abs(ratio(-frac * omega))});

  // The ratio must stay bounded as xi -> 0, otherwise the spectrum does not
  // vanish to order ell and no antiderivative exists in the model.
  const double dc_scale = std::max({flank_scale, band_scale, 1e-300});
  for (int side : {-1, 1}) {
    for (int j = 1; j <= 5; ++j) {
      const double xi = side * xi_cut * std::pow(2.0, -j);
      if (std::abs(ratio(xi)) > opts.dc_bound_factor * dc_scale)
        throw DCObstruction("antidifferentiate: spectrum does not vanish to order " +
                            std::to_string(ell) + " at xi = 0");
    }
  }

  // Degree-2 polynomial fit of the ratio across the gap (scaled coordinates).
  Eigen::MatrixXd A(fx.size(), 3);
  Eigen::VectorXcd b(fx.size());
  for (std::size_t i = 0; i < fx.size(); ++i) {
    const double t = fx[i] / xi_cut;
    A(static_cast<Eigen::Index>(i), 0) = 1.0;
    A(static_cast<Eigen::Index>(i), 1) = t;
    A(static_cast<Eigen::Index>(i), 2) = t * t;
    b(static_cast<Eigen::Index>(i)) = fv[i];
  }
  const Eigen::Matrix3d G = A.transpose() * A;
  const auto ldlt = G.ldlt();
  const Eigen::VectorXd br = b.real(), bi = b.imag();
  const Eigen::Vector3d pr = ldlt.solve(A.transpose() * br);
  const Eigen::Vector3d pi = ldlt.solve(A.transpose() * bi);
  Eigen::Vector3cd p;
  for (int i = 0; i < 3; ++i) p(i) = cplx(pr(i), pi(i));
  double fit_err = 0.0;
  for (std::size_t i = 0; i < fx.size(); ++i) {
    const double t = fx[i] / xi_cut;
    fit_err += std::norm(p(0) + p(1) * t + p(2) * t * t - fv[i]);
  }
  if (diag)
    diag->dc_fill_residual =
        std::sqrt(fit_err / static_cast<double>(fx.size())) / std::max(flank_scale, 1e-300);

  auto spectrum = [&](double xi) -> cplx {
    if (std::abs(xi) >= xi_cut) return ratio(xi);
    const double t = xi / xi_cut;
    return p(0) + p(1) * t + p(2) * t * t;
  };
  const std::vector<Segment> segments{{-omega, -xi_cut}, {-xi_cut, xi_cut}, {xi_cut, omega}};
  const int len = static_cast<int>(h.coeffs().size());
  const int pad = static_cast<int>(std::ceil(0.5 * opts.freq.pad_factor * len));
  return synthesize_from_spectrum(omega, spectrum, segments, h.m_min() - pad, h.m_max() + pad,
                                  h.is_real(), h.norm2(), opts.freq,
                                  diag ? &diag->freq : nullptr);
}

// ---------------------------------------------------------------------------
// End-to-end pipeline
// ---------------------------------------------------------------------------

RetrievalReport retrieve(const MagnitudeMeasurements& meas, const Wavelet& w,
                         const RetrieveOptions& opts) {
  if (w.progressive())
    throw ProgressiveWaveletNoLimit(
        "retrieve: progressive wavelets admit no two-sided moment limit");
  const MomentProfile profile = probe_moment_order(w, opts.xi_probe, opts.max_ell);

  EstimateDiagnostics est_diag;
  const std::vector<double> q =
      estimate_derivative_magnitudes(meas, profile, opts.extrap_order, &est_diag);

  SignPattern pattern;
  const BandlimitedSignal root = sign_retrieve(q, meas.t_min, meas.omega, opts.sign, &pattern);

  RetrievalReport report;
  report.ell_used = profile.ell;
  AntidiffDiagnostics ad;
  report.candidate = (profile.ell == 0) ? root : antidifferentiate(root, profile.ell,
                                                                   opts.antidiff, &ad);

  const MagnitudeMeasurements resim = measure(report.candidate, w, meas.t_min, meas.t_max,
                                              meas.scales, opts.quad, opts.tau_quad);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < meas.values.size(); ++i)
    for (std::size_t k = 0; k < meas.values[i].size(); ++k) {
      const double d = resim.values[i][k] - meas.values[i][k];
      num += d * d;
      den += meas.values[i][k] * meas.values[i][k];
    }
  report.residual_meas = std::sqrt(num) / std::max(std::sqrt(den), 1e-300);

  report.diagnostics["extrapolation_spread"] = est_diag.extrapolation_spread;
  report.diagnostics["ladder_gap"] = est_diag.ladder_gap;
  report.diagnostics["edge_ratio"] = pattern.edge_ratio;
  report.diagnostics["out_of_band_objective"] = pattern.objective;
  report.diagnostics["sign_intervals"] = static_cast<double>(pattern.signs.size());
  report.diagnostics["dc_fill_residual"] = ad.dc_fill_residual;
  report.diagnostics["truncation_residual"] = ad.freq.truncation_residual;
  if (pattern.edge_ratio > opts.sign.edge_tol) report.flags.push_back("edge_leakage");
  if (ad.freq.truncation_warning) report.flags.push_back("truncation_warning");
  return report;
}

BandlimitedSignal progressive_counterexample(const BandlimitedSignal& g, double alpha,
                                             const FreqOpOptions& opts) {
  if (!g.is_real()) throw InvalidParameter("progressive_counterexample: g must be real");
  const double c = std::cos(alpha), s = std::sin(alpha);
  if (s == 0.0) return g.scaled(c);
  const BandlimitedSignal hg = hilbert(g, opts);
  return g.scaled(c) - hg.scaled(s);
}

Equivalence cauchy_discriminate(const MagnitudeMeasurements& meas_f,
                                const MagnitudeMeasurements& meas_g, double tol) {
  if (meas_f.wavelet_descriptor != meas_g.wavelet_descriptor)
    throw GridMismatch("cauchy_discriminate: wavelets differ");
  if (!meas_f.wavelet_descriptor.contains("kind") ||
      meas_f.wavelet_descriptor["kind"] != "cauchy")
    throw GridMismatch("cauchy_discriminate: wavelet is not a Cauchy wavelet");
  if (meas_f.omega != meas_g.omega || meas_f.t_min != meas_g.t_min ||
      meas_f.t_max != meas_g.t_max || meas_f.scales != meas_g.scales)
    throw GridMismatch("cauchy_discriminate: measurement grids differ");
  if (meas_f.scales.size() != 2 || meas_f.scales[0] == meas_f.scales[1])
    throw GridMismatch("cauchy_discriminate: exactly two distinct scales required");

  const double peak = std::max(meas_f.max_value(), meas_g.max_value());
  double gap = 0.0;
  for (std::size_t i = 0; i < meas_f.values.size(); ++i)
    for (std::size_t k = 0; k < meas_f.values[i].size(); ++k)
      gap = std::max(gap, std::abs(meas_f.values[i][k] - meas_g.values[i][k]));
  return gap <= tol * std::max(peak, 1e-300) ? Equivalence::equivalent : Equivalence::distinct;
}

}  // namespace wpr
