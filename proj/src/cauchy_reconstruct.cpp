#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "wpr/retrieval.hpp"
#include "wpr/rng.hpp"

namespace wpr {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct IterationOutcome {
  enum class Status { converged, maxed, stalled } status = Status::maxed;
  Eigen::VectorXcd d;
  double residual = 0.0;
  int iterations = 0;
};

}  // namespace

RetrievalReport cauchy_reconstruct(const MagnitudeMeasurements& meas, const Wavelet& w,
                                   const CauchyReconstructOptions& opts) {
  if (!w.progressive()) throw InvalidParameter("cauchy_reconstruct: wavelet must be progressive");
  if (meas.scales.size() != 2 || meas.scales[0] == meas.scales[1])
    throw GridMismatch("cauchy_reconstruct: exactly two distinct scales required");
  if (opts.restarts < 1) throw InvalidParameter("cauchy_reconstruct: restarts must be >= 1");
  const double omega = meas.omega;
  const int n_times = meas.times();

  const int model_lo = opts.model_m_min.value_or((meas.t_min >= 0) ? (meas.t_min + 1) / 2
                                                                   : meas.t_min / 2);
  const int model_hi = opts.model_m_max.value_or((meas.t_max >= 0) ? meas.t_max / 2
                                                                   : -((-meas.t_max + 1) / 2));
  if (model_hi < model_lo) throw InvalidParameter("cauchy_reconstruct: empty model window");
  const int n_coef = model_hi - model_lo + 1;

  // Fixed frequency grid on (0, omega]: the unknown is the trigonometric
  // polynomial f^_+ there, parameterized by the model coefficients d_n.
  QuadratureSpec spec;
  const double coeff_extent = std::max(std::abs(model_lo), std::abs(model_hi));
  const double b_extent = std::max(std::abs(meas.t_min), std::abs(meas.t_max)) / (4.0 * omega);
  const int panels = std::max<int>(
      16, static_cast<int>(std::ceil((2.0 * omega * b_extent + coeff_extent) / 4.0)) + 1);
  QuadratureGrid grid = make_grid(spec, {{0.0, omega}}, panels);
  const int n_nodes = static_cast<int>(grid.nodes.size());

  // B = [rows at scale a_0; rows at scale a_1], B[k, n] maps coefficients to
  // transform samples at b_k.
  Eigen::MatrixXcd M(n_nodes, n_coef);
  for (int i = 0; i < n_nodes; ++i)
    for (int n = 0; n < n_coef; ++n)
      M(i, n) = std::polar(1.0 / (2.0 * omega), -kPi * grid.nodes[i] * (model_lo + n) / omega);
  Eigen::MatrixXcd B(2 * n_times, n_coef);
  Eigen::VectorXd y(2 * n_times);
  for (int j = 0; j < 2; ++j) {
    const double a = meas.scales[static_cast<std::size_t>(j)];
    Eigen::MatrixXcd E(n_times, n_nodes);
    for (int k = 0; k < n_times; ++k) {
      const double b = meas.time_at(k);
      for (int i = 0; i < n_nodes; ++i)
        E(k, i) = grid.weights[i] * std::conj(w.fourier(a * grid.nodes[i])) *
                  std::polar(1.0, 2.0 * kPi * b * grid.nodes[i]);
    }
    B.block(j * n_times, 0, n_times, n_coef) = E * M;
    for (int k = 0; k < n_times; ++k)
      y(j * n_times + k) = meas.values[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
  }
  const double y_norm = y.norm();

  RetrievalReport report;
  report.ell_used = -1;
  if (y_norm == 0.0) {
    report.candidate = BandlimitedSignal(omega, model_lo,
                                         std::vector<cplx>(static_cast<std::size_t>(n_coef)),
                                         false);
    report.diagnostics["iterations"] = 0.0;
    return report;
  }

  // Tikhonov-regularized inversion of the stacked two-row system, factored
  // once: argmin ||B d - z||^2 + lambda^2 ||d||^2.
  const double lambda = opts.tikhonov_rel * B.norm() / std::sqrt(static_cast<double>(n_coef));
  Eigen::MatrixXcd Baug(2 * n_times + n_coef, n_coef);
  Baug.topRows(2 * n_times) = B;
  Baug.bottomRows(n_coef) = lambda * Eigen::MatrixXcd::Identity(n_coef, n_coef);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(Baug);
  const double cond =
      std::abs(qr.matrixR()(0, 0)) /
      std::max(std::abs(qr.matrixR()(n_coef - 1, n_coef - 1)), 1e-300);

  auto solve_lsq = [&](const Eigen::VectorXcd& z) {
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(2 * n_times + n_coef);
    rhs.topRows(2 * n_times) = z;
    return Eigen::VectorXcd(qr.solve(rhs));
  };

  auto run_from = [&](Eigen::VectorXcd d) {
    IterationOutcome out;
    double best = std::numeric_limits<double>::infinity();
    int since_improvement = 0;
    for (int it = 0; it <= opts.max_iter; ++it) {
      Eigen::VectorXcd z = B * d;
      double acc = 0.0;
      for (int i = 0; i < z.size(); ++i) {
        const double dmag = std::abs(z(i)) - y(i);
        acc += dmag * dmag;
      }
      const double residual = std::sqrt(acc) / y_norm;
      if (residual < best - opts.stall_decrease) {
        best = residual;
        since_improvement = 0;
      } else {
        ++since_improvement;
      }
      out.d = d;
      out.residual = residual;
      out.iterations = it;
      if (residual < opts.tol) {
        out.status = IterationOutcome::Status::converged;
        return out;
      }
      if (since_improvement >= opts.stall_window) {
        out.status = IterationOutcome::Status::stalled;
        return out;
      }
      if (it == opts.max_iter) break;
      // keep the phases, impose the measured moduli, re-invert
      for (int i = 0; i < z.size(); ++i) {
        const double mag = std::abs(z(i));
        z(i) = (mag > 0.0) ? cplx(z(i) / mag * y(i)) : cplx(y(i), 0.0);
      }
      d = solve_lsq(z);
    }
    out.status = IterationOutcome::Status::maxed;
    return out;
  };

  IterationOutcome best_outcome;
  best_outcome.residual = std::numeric_limits<double>::infinity();
  int best_index = -1;
  int stalled_count = 0, converged_count = 0;
  for (int restart = 0; restart < opts.restarts; ++restart) {
    Eigen::VectorXcd d0;
    if (restart == 0 && opts.init) {
      d0 = Eigen::VectorXcd::Zero(n_coef);
      for (int n = model_lo; n <= model_hi; ++n) d0(n - model_lo) = opts.init->coeff(n);
    } else {
      // classic random-phase start: measured moduli with uniform phases
      Rng rng = Rng::child(opts.seed, static_cast<std::uint64_t>(restart));
      Eigen::VectorXcd z(2 * n_times);
      for (int i = 0; i < 2 * n_times; ++i)
        z(i) = std::polar(y(i), 2.0 * kPi * rng.uniform01());
      d0 = solve_lsq(z);
    }
    IterationOutcome out = run_from(std::move(d0));
    if (out.status == IterationOutcome::Status::stalled) ++stalled_count;
    if (out.status == IterationOutcome::Status::converged) ++converged_count;
    if (out.residual < best_outcome.residual) {
      best_outcome = out;
      best_index = restart;
    }
    if (out.status == IterationOutcome::Status::converged) break;
  }
  if (stalled_count == opts.restarts)
    throw Stalled("cauchy_reconstruct: every restart plateaued before reaching tol (best " +
                  std::to_string(best_outcome.residual) + ")");

  // Phase gauge: rotate so the largest-modulus coefficient is positive real.
  Eigen::VectorXcd d = best_outcome.d;
  int arg_max = 0;
  for (int n = 1; n < n_coef; ++n)
    if (std::abs(d(n)) > std::abs(d(arg_max))) arg_max = n;
  if (std::abs(d(arg_max)) > 0.0) d *= std::polar(1.0, -std::arg(d(arg_max)));

  std::vector<cplx> coeffs(static_cast<std::size_t>(n_coef));
  for (int n = 0; n < n_coef; ++n) coeffs[static_cast<std::size_t>(n)] = d(n);
  report.candidate = BandlimitedSignal(omega, model_lo, std::move(coeffs), false);
  report.residual_meas = best_outcome.residual;
  report.diagnostics["iterations"] = static_cast<double>(best_outcome.iterations);
  report.diagnostics["restart_index"] = static_cast<double>(best_index);
  report.diagnostics["restarts_converged"] = static_cast<double>(converged_count);
  report.diagnostics["restarts_stalled"] = static_cast<double>(stalled_count);
  report.diagnostics["condition"] = cond;
  if (best_outcome.status != IterationOutcome::Status::converged)
    report.flags.push_back("not_converged");
  return report;
}

}  // namespace wpr
