#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "wpr/config.hpp"
#include "wpr/cwt.hpp"
#include "wpr/retrieval.hpp"

namespace wpr::verify {

struct CheckResult {
  std::string name;
  bool pass = false;
  double measured = 0.0;  // worst observed value
  double tolerance = 0.0;
  std::string detail;
};

struct SuiteResult {
  std::string suite;
  std::vector<CheckResult> checks;

  bool pass() const;
  nlohmann::json to_json() const;
};

/// Slow reference path for the wavelet transform: time-domain quadrature of
/// (1/a) integral f(x) conj(psi((x - b)/a)) dx, with psi materialized by
/// inverse-Fourier quadrature of the closed-form spectrum. Only used to
/// cross-check the frequency route.
cplx time_route_transform(const BandlimitedSignal& f, const Wavelet& w, double b, double a);

// Acceptance criteria. Each returns one line per verdict.
std::vector<CheckResult> criterion_scale_limit(const RunConfig& cfg);
std::vector<CheckResult> criterion_moment_limits(const RunConfig& cfg);
std::vector<CheckResult> criterion_sign_retrieval(const RunConfig& cfg);
std::vector<CheckResult> criterion_end_to_end(const RunConfig& cfg);
std::vector<CheckResult> criterion_injectivity(const RunConfig& cfg);
std::vector<CheckResult> criterion_counterexample(const RunConfig& cfg);
std::vector<CheckResult> criterion_two_scale(const RunConfig& cfg);
std::vector<CheckResult> criterion_numerics(const RunConfig& cfg);

std::vector<std::string> suite_names();
SuiteResult run_suite(const std::string& name, const RunConfig& cfg);

}  // namespace wpr::verify
