#include "wpr/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace wpr {

namespace {

struct GLRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Newton iteration on P_n with the usual cosine initial guesses.
GLRule compute_gauss_legendre(int n) {
  GLRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double pi = 3.14159265358979323846;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

const GLRule& cached_rule(int n) {
  static std::map<int, GLRule> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
  return it->second;
}

}  // namespace

const std::vector<double>& gauss_legendre_nodes(int n) { return cached_rule(n).nodes; }
const std::vector<double>& gauss_legendre_weights(int n) { return cached_rule(n).weights; }

QuadratureGrid make_grid(const QuadratureSpec& spec, const std::vector<Segment>& segments,
                         int panels_per_segment) {
  spec.validate();
  QuadratureGrid grid;
  for (const Segment& seg : segments) {
    if (!(seg.hi > seg.lo)) continue;
    const double panel_len = (seg.hi - seg.lo) / panels_per_segment;
    if (spec.rule == QuadratureSpec::Rule::gauss_legendre_composite) {
      const auto& xs = gauss_legendre_nodes(spec.num_nodes);
      const auto& ws = gauss_legendre_weights(spec.num_nodes);
      for (int p = 0; p < panels_per_segment; ++p) {
        const double a = seg.lo + p * panel_len;
        const double mid = a + 0.5 * panel_len;
        const double half = 0.5 * panel_len;
        for (int i = 0; i < spec.num_nodes; ++i) {
          grid.nodes.push_back(mid + half * xs[i]);
          grid.weights.push_back(half * ws[i]);
        }
      }
    } else {
      // Composite trapezoid: num_nodes intervals per panel.
      const int per_panel = spec.num_nodes;
      const int total = panels_per_segment * per_panel;
      const double h = (seg.hi - seg.lo) / total;
      for (int i = 0; i <= total; ++i) {
        grid.nodes.push_back(seg.lo + i * h);
        grid.weights.push_back((i == 0 || i == total) ? 0.5 * h : h);
      }
    }
  }
  return grid;
}

cplx integrate_once(const QuadratureSpec& spec, const std::vector<Segment>& segments,
                    int panels_per_segment, const std::function<cplx(double)>& f) {
  QuadratureGrid grid = make_grid(spec, segments, panels_per_segment);
  std::vector<cplx> terms(grid.nodes.size());
  for (std::size_t i = 0; i < grid.nodes.size(); ++i) terms[i] = grid.weights[i] * f(grid.nodes[i]);
  return pairwise_sum(terms.data(), terms.size());
}

cplx integrate_refined(const QuadratureSpec& spec, const std::vector<Segment>& segments,
                       int panels_per_segment, double rel_tol, double abs_floor,
                       const std::function<cplx(double)>& f, int max_doublings) {
  int panels = panels_per_segment;
  cplx prev = integrate_once(spec, segments, panels, f);
  for (int k = 0; k < max_doublings; ++k) {
    panels *= 2;
    cplx next = integrate_once(spec, segments, panels, f);
    const double change = std::abs(next - prev);
    if (change <= rel_tol * std::max(std::abs(next), abs_floor)) return next;
    prev = next;
  }
  throw QuadratureTooCoarse("integrate_refined: no convergence after panel doubling");
}

namespace {

template <typename T>
T pairwise_sum_impl(const T* data, std::size_t n) {
  if (n == 0) return T(0);
  if (n <= 8) {
    T acc = data[0];
    for (std::size_t i = 1; i < n; ++i) acc += data[i];
    return acc;
  }
  const std::size_t half = n / 2;
  return pairwise_sum_impl(data, half) + pairwise_sum_impl(data + half, n - half);
}

}  // namespace

double pairwise_sum(const double* data, std::size_t n) { return pairwise_sum_impl(data, n); }
cplx pairwise_sum(const cplx* data, std::size_t n) { return pairwise_sum_impl(data, n); }

}  // namespace wpr
