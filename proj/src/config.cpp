#include "wpr/config.hpp"

#include <fstream>

namespace wpr {

std::vector<double> ScaleSpec::make() const {
  if (kind == Kind::list) {
    if (list.empty()) throw InvalidParameter("scales: explicit list is empty");
    for (double a : list)
      if (!(a > 0.0)) throw InvalidParameter("scales: entries must be positive");
    return list;
  }
  if (!(a0 > 0.0) || !(ratio > 0.0) || count < 1)
    throw InvalidParameter("scales: geometric spec needs a0 > 0, ratio > 0, count >= 1");
  std::vector<double> out(static_cast<std::size_t>(count));
  double a = a0;
  for (int k = 0; k < count; ++k, a *= ratio) out[static_cast<std::size_t>(k)] = a;
  return out;
}

double RunConfig::tol(const std::string& name, double fallback) const {
  auto it = tolerances.find(name);
  return it == tolerances.end() ? fallback : it->second;
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
  RunConfig cfg;
  try {
    if (j.contains("omega")) cfg.omega = j["omega"].get<double>();
    if (j.contains("window")) {
      const auto& w = j["window"];
      if (w.is_array() && w.size() == 2) {
        cfg.window_min = w[0].get<int>();
        cfg.window_max = w[1].get<int>();
      } else {
        cfg.window_min = w.at("min").get<int>();
        cfg.window_max = w.at("max").get<int>();
      }
    }
    if (j.contains("scales")) {
      const auto& s = j["scales"];
      const std::string kind = s.value("kind", "geometric");
      if (kind == "geometric") {
        cfg.scales.kind = ScaleSpec::Kind::geometric;
        cfg.scales.a0 = s.value("a0", cfg.scales.a0);
        cfg.scales.ratio = s.value("ratio", cfg.scales.ratio);
        cfg.scales.count = s.value("count", cfg.scales.count);
      } else if (kind == "list") {
        cfg.scales.kind = ScaleSpec::Kind::list;
        cfg.scales.list = s.at("values").get<std::vector<double>>();
      } else {
        throw ParseError("config: unknown scales kind '" + kind + "'");
      }
    }
    if (j.contains("wavelet")) cfg.wavelet = j["wavelet"];
    if (j.contains("quadrature")) {
      const auto& q = j["quadrature"];
      cfg.quadrature.num_nodes = q.value("num_nodes", cfg.quadrature.num_nodes);
      cfg.quadrature.panels = q.value("panels", cfg.quadrature.panels);
      const std::string rule = q.value("rule", "gauss-legendre-composite");
      if (rule == "trapezoid")
        cfg.quadrature.rule = QuadratureSpec::Rule::trapezoid;
      else if (rule == "gauss-legendre-composite")
        cfg.quadrature.rule = QuadratureSpec::Rule::gauss_legendre_composite;
      else
        throw ParseError("config: unknown quadrature rule '" + rule + "'");
    }
    if (j.contains("tolerances")) {
      for (const auto& [name, value] : j["tolerances"].items()) {
        const double v = value.get<double>();
        if (!(v > 0.0)) throw ParseError("config: tolerance '" + name + "' must be positive");
        cfg.tolerances[name] = v;
      }
    }
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  if (!(cfg.omega > 0.0)) throw ParseError("config: omega must be positive");
  if (cfg.window_max < cfg.window_min) throw ParseError("config: window max < min");
  cfg.quadrature.validate();
  return cfg;
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j;
  j["omega"] = omega;
  j["window"] = {window_min, window_max};
  if (scales.kind == ScaleSpec::Kind::geometric)
    j["scales"] = {{"kind", "geometric"}, {"a0", scales.a0}, {"ratio", scales.ratio},
                   {"count", scales.count}};
  else
    j["scales"] = {{"kind", "list"}, {"values", scales.list}};
  j["wavelet"] = wavelet;
  j["quadrature"] = {
      {"num_nodes", quadrature.num_nodes},
      {"panels", quadrature.panels},
      {"rule", quadrature.rule == QuadratureSpec::Rule::trapezoid ? "trapezoid"
                                                                  : "gauss-legendre-composite"}};
  j["tolerances"] = tolerances;
  j["seed"] = seed;
  return j;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  return from_json(j);
}

}  // namespace wpr
