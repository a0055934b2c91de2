#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "wpr/quadrature.hpp"

namespace wpr {

struct ScaleSpec {
  enum class Kind { geometric, list };
  Kind kind = Kind::geometric;
  double a0 = 1.0 / 16.0;
  double ratio = 0.5;
  int count = 7;
  std::vector<double> list;

  std::vector<double> make() const;
};

/// One experiment manifest: everything a command needs to be reproducible.
/// Flags override file values; file values override these defaults.
struct RunConfig {
  double omega = 1.0;
  int window_min = -16;
  int window_max = 16;
  ScaleSpec scales{};
  nlohmann::json wavelet = {{"kind", "morlet"}, {"xi0", 5.0}};
  QuadratureSpec quadrature{};
  std::map<std::string, double> tolerances;
  std::uint64_t seed = 12345;

  double tol(const std::string& name, double fallback) const;

  static RunConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  static RunConfig load(const std::string& path);
};

}  // namespace wpr
