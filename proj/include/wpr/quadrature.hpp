#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "wpr/errors.hpp"

namespace wpr {

using cplx = std::complex<double>;

/// Frequency-integration rule used by every transform evaluation.
struct QuadratureSpec {
  enum class Rule { trapezoid, gauss_legendre_composite };

  int num_nodes = 32;  // nodes per panel
  Rule rule = Rule::gauss_legendre_composite;
  int panels = 8;

  void validate() const {
    if (num_nodes < 16) throw InvalidParameter("QuadratureSpec: num_nodes must be >= 16");
    if (panels < 1) throw InvalidParameter("QuadratureSpec: panels must be >= 1");
  }
};

/// Gauss-Legendre nodes/weights on [-1, 1], cached per order.
const std::vector<double>& gauss_legendre_nodes(int n);
const std::vector<double>& gauss_legendre_weights(int n);

struct Segment {
  double lo = 0.0;
  double hi = 0.0;
};

/// Flattened node/weight grid for a composite rule over a list of segments.
struct QuadratureGrid {
  std::vector<double> nodes;
  std::vector<double> weights;
};

QuadratureGrid make_grid(const QuadratureSpec& spec, const std::vector<Segment>& segments,
                         int panels_per_segment);

/// Single composite pass of f over the segments.
cplx integrate_once(const QuadratureSpec& spec, const std::vector<Segment>& segments,
                    int panels_per_segment, const std::function<cplx(double)>& f);

/// Panel-doubling refinement: doubles panel counts until the result changes by
/// no more than rel_tol * max(|I|, abs_floor). Throws QuadratureTooCoarse if
/// the budget of doublings is exhausted without convergence.
cplx integrate_refined(const QuadratureSpec& spec, const std::vector<Segment>& segments,
                       int panels_per_segment, double rel_tol, double abs_floor,
                       const std::function<cplx(double)>& f, int max_doublings = 7);

/// Pairwise (cascade) summation; used wherever long sinc series are reduced.
double pairwise_sum(const double* data, std::size_t n);
cplx pairwise_sum(const cplx* data, std::size_t n);

}  // namespace wpr
