#include "wpr/signal_ops.hpp"

#include <algorithm>
#include <cmath>

namespace wpr {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct SampleSet {
  std::vector<cplx> values;  // one per output index
};

// One composite pass: g(x_n) = sum_i w_i F(xi_i) e^{2 pi i xi_i x_n}.
// The phase factors advance by rotation across n, re-anchored periodically.
SampleSet synth_pass(const std::function<cplx(double)>& spectrum,
                     const std::vector<Segment>& segments, const QuadratureSpec& spec,
                     const std::vector<int>& panels, int out_m_min, int n_out, double step_x) {
  SampleSet out;
  out.values.assign(static_cast<std::size_t>(n_out), cplx(0.0, 0.0));
  for (std::size_t s = 0; s < segments.size(); ++s) {
    QuadratureGrid grid = make_grid(spec, {segments[s]}, panels[s]);
    for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
      const double xi = grid.nodes[i];
      const cplx base = grid.weights[i] * spectrum(xi);
      if (base == cplx(0.0, 0.0)) continue;
      const double theta = 2.0 * kPi * xi * step_x;
      const cplx rot = std::polar(1.0, theta);
      cplx cur = std::polar(1.0, 2.0 * kPi * xi * (out_m_min * step_x));
      for (int n = 0; n < n_out; ++n) {
        if ((n & 63) == 0)
          cur = std::polar(1.0, 2.0 * kPi * xi * ((out_m_min + n) * step_x));
        out.values[static_cast<std::size_t>(n)] += base * cur;
        cur *= rot;
      }
    }
  }
  return out;
}

double diff_norm(const SampleSet& a, const SampleSet& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) acc += std::norm(a.values[i] - b.values[i]);
  return std::sqrt(acc);
}

}  // namespace

BandlimitedSignal synthesize_from_spectrum(double omega,
                                           const std::function<cplx(double)>& spectrum,
                                           const std::vector<Segment>& segments, int out_m_min,
                                           int out_m_max, bool output_real, double norm_scale,
                                           const FreqOpOptions& opts, FreqOpDiagnostics* diag) {
  if (out_m_max < out_m_min) throw InvalidParameter("synthesize_from_spectrum: bad window");
  const int n_out = out_m_max - out_m_min + 1;
  const double step_x = 1.0 / (2.0 * omega);

  // Oscillation count of e^{2 pi i xi x} over a segment is |x| * len; panels
  // track it so each panel sees a bounded number of cycles.
  const double x_extent = std::max(std::abs(out_m_min), std::abs(out_m_max)) * step_x;
  std::vector<int> panels(segments.size());
  for (std::size_t s = 0; s < segments.size(); ++s) {
    const double len = segments[s].hi - segments[s].lo;
    const double cycles = x_extent * len;
    panels[s] = std::max(opts.quad.panels, static_cast<int>(std::ceil(cycles / 6.0)) + 1);
  }

  const double sample_scale = norm_scale * std::sqrt(2.0 * omega);  // coefficient scale
  SampleSet prev = synth_pass(spectrum, segments, opts.quad, panels, out_m_min, n_out, step_x);
  SampleSet cur;
  bool converged = false;
  for (int k = 0; k < opts.max_doublings; ++k) {
    for (int& p : panels) p *= 2;
    cur = synth_pass(spectrum, segments, opts.quad, panels, out_m_min, n_out, step_x);
    double cur_norm = 0.0;
    for (const cplx& v : cur.values) cur_norm += std::norm(v);
    cur_norm = std::sqrt(cur_norm);
    if (diff_norm(cur, prev) <= opts.tau_quad * std::max(cur_norm, 1e-3 * sample_scale)) {
      converged = true;
      break;
    }
    prev = cur;
  }
  if (!converged)
    throw QuadratureTooCoarse("synthesize_from_spectrum: sample vector did not settle");

  if (diag) {
    int total = 0;
    for (int p : panels) total += p;
    diag->panels_used = total;
  }

  if (output_real) {
    double peak = 0.0;
    for (const cplx& v : cur.values) peak = std::max(peak, std::abs(v));
    const double bound = opts.tau_im * std::max(peak, 1e-300);
    for (cplx& v : cur.values) {
      if (std::abs(v.imag()) > bound)
        throw QuadratureTooCoarse("synthesize_from_spectrum: expected real output");
      v = cplx(v.real(), 0.0);
    }
  }

  BandlimitedSignal g(omega, out_m_min, std::move(cur.values), output_real, opts.tau_im);

  // Truncation residual: the windowed model cannot carry tails outside the
  // padded window, so compare the model spectrum against the requested one.
  if (diag) {
    double acc = 0.0;
    for (std::size_t s = 0; s < segments.size(); ++s) {
      QuadratureGrid grid = make_grid(opts.quad, {segments[s]}, std::max(4, opts.quad.panels));
      for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
        const double xi = grid.nodes[i];
        acc += grid.weights[i] * std::norm(g.fourier(xi) - spectrum(xi));
      }
    }
    diag->truncation_residual = std::sqrt(std::max(acc, 0.0)) / std::max(norm_scale, 1e-300);
    diag->truncation_warning = diag->truncation_residual > opts.tau_trunc;
  }
  return g;
}

namespace {

BandlimitedSignal multiplier_op(const BandlimitedSignal& f,
                                const std::function<cplx(double)>& mult,
                                const std::vector<Segment>& segments, bool output_real,
                                const FreqOpOptions& opts, FreqOpDiagnostics* diag) {
  if (f.empty()) return BandlimitedSignal::zero(f.omega());
  const int len = static_cast<int>(f.coeffs().size());
  const int pad = static_cast<int>(std::ceil(0.5 * opts.pad_factor * len));
  auto spectrum = [&](double xi) { return mult(xi) * f.fourier(xi); };
  return synthesize_from_spectrum(f.omega(), spectrum, segments, f.m_min() - pad,
                                  f.m_max() + pad, output_real, f.norm2(), opts, diag);
}

}  // namespace

BandlimitedSignal hilbert(const BandlimitedSignal& f, const FreqOpOptions& opts,
                          FreqOpDiagnostics* diag) {
  const double w = f.omega();
  auto mult = [](double xi) {
    if (xi > 0.0) return cplx(0.0, -1.0);
    if (xi < 0.0) return cplx(0.0, 1.0);
    return cplx(0.0, 0.0);
  };
  // The sign flip at 0 is a panel boundary, never interior to a panel.
  return multiplier_op(f, mult, {{-w, 0.0}, {0.0, w}}, f.is_real(), opts, diag);
}

BandlimitedSignal analytic_rep(const BandlimitedSignal& f, const FreqOpOptions& opts,
                               FreqOpDiagnostics* diag) {
  if (f.empty()) return BandlimitedSignal::zero(f.omega());
  const double w = f.omega();
  auto mult = [](double) { return cplx(2.0, 0.0); };
  return multiplier_op(f, mult, {{0.0, w}}, false, opts, diag);
}

BandlimitedSignal derivative(const BandlimitedSignal& f, int ell, const FreqOpOptions& opts,
                             FreqOpDiagnostics* diag) {
  if (ell < 0) throw InvalidParameter("derivative: ell must be nonnegative");
  if (ell == 0) return f;
  const double w = f.omega();
  auto mult = [ell](double xi) {
    cplx m(1.0, 0.0);
    const cplx base(0.0, 2.0 * kPi * xi);
    for (int k = 0; k < ell; ++k) m *= base;
    return m;
  };
  return multiplier_op(f, mult, {{-w, w}}, f.is_real(), opts, diag);
}

}  // namespace wpr
