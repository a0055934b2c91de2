#include "wpr/cwt.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace wpr {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double MagnitudeMeasurements::max_value() const {
  double peak = 0.0;
  for (const auto& row : values)
    for (double v : row) peak = std::max(peak, v);
  return peak;
}

MagnitudeMeasurements ComplexMeasurements::magnitudes() const {
  MagnitudeMeasurements out;
  out.omega = omega;
  out.t_min = t_min;
  out.t_max = t_max;
  out.scales = scales;
  out.wavelet_descriptor = wavelet_descriptor;
  out.ell = ell;
  out.values.resize(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    out.values[i].resize(values[i].size());
    for (std::size_t k = 0; k < values[i].size(); ++k) out.values[i][k] = std::abs(values[i][k]);
  }
  return out;
}

cplx transform(const BandlimitedSignal& f, const Wavelet& w, double b, double a,
               const QuadratureSpec& spec, double tau_quad) {
  if (!(a > 0.0)) throw InvalidParameter("transform: scale a must be positive");
  spec.validate();
  if (f.empty()) return cplx(0.0, 0.0);
  const double omega = f.omega();

  std::vector<Segment> segments;
  if (w.progressive())
    segments = {{0.0, omega}};
  else
    segments = {{-omega, 0.0}, {0.0, omega}};

  // Oscillations of the integrand over the band: e^{2 pi i b xi} contributes
  // 2 omega |b| cycles, the signal's own coefficients up to max |m| cycles,
  // and psi^(a xi) varies on the scale 1/a.
  const double coeff_extent = std::max(std::abs(f.m_min()), std::abs(f.m_max()));
  const double cycles = 2.0 * omega * std::abs(b) + coeff_extent;
  int panels = std::max({spec.panels, static_cast<int>(std::ceil(4.0 * omega * a)),
                         static_cast<int>(std::ceil(cycles / 6.0)) + 1});

  auto integrand = [&](double xi) {
    return f.fourier(xi) * std::conj(w.fourier(a * xi)) * std::polar(1.0, 2.0 * kPi * b * xi);
  };

  // Cauchy-Schwarz bound ||f|| * ||psi^(a .)||_band as the absolute floor for
  // the refinement test; genuinely tiny transform values then converge on an
  // absolute rather than relative criterion.
  double psi_sq = 0.0;
  {
    QuadratureGrid grid = make_grid(spec, segments, std::max(4, spec.panels));
    for (std::size_t i = 0; i < grid.nodes.size(); ++i)
      psi_sq += grid.weights[i] * std::norm(w.fourier(a * grid.nodes[i]));
  }
  const double cs_bound = f.norm2() * std::sqrt(std::max(psi_sq, 0.0));

  return integrate_refined(spec, segments, panels, tau_quad, 1e-3 * std::max(cs_bound, 1e-300),
                           integrand);
}

namespace {

int probed_ell(const Wavelet& w) {
  try {
    return probe_moment_order(w).ell;
  } catch (const Error&) {
    return -1;
  }
}

}  // namespace

ComplexMeasurements measure_complex(const BandlimitedSignal& f, const Wavelet& w, int t_min,
                                    int t_max, const std::vector<double>& scales,
                                    const QuadratureSpec& spec, double tau_quad) {
  if (t_max < t_min) throw InvalidParameter("measure: empty time window");
  if (scales.empty()) throw InvalidParameter("measure: no scales");
  for (double a : scales)
    if (!(a > 0.0)) throw InvalidParameter("measure: scales must be positive");

  ComplexMeasurements out;
  out.omega = f.omega();
  out.t_min = t_min;
  out.t_max = t_max;
  out.scales = scales;
  out.wavelet_descriptor = w.descriptor();
  out.ell = probed_ell(w);
  out.values.resize(static_cast<std::size_t>(t_max - t_min + 1));
  for (int m = t_min; m <= t_max; ++m) {
    const double b = m / (4.0 * f.omega());
    auto& row = out.values[static_cast<std::size_t>(m - t_min)];
    row.resize(scales.size());
    for (std::size_t k = 0; k < scales.size(); ++k)
      row[k] = transform(f, w, b, scales[k], spec, tau_quad);
  }
  return out;
}

MagnitudeMeasurements measure(const BandlimitedSignal& f, const Wavelet& w, int t_min, int t_max,
                              const std::vector<double>& scales, const QuadratureSpec& spec,
                              double tau_quad) {
  return measure_complex(f, w, t_min, t_max, scales, spec, tau_quad).magnitudes();
}

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void atomic_write(const std::string& path, const std::string& body) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + tmp);
    out << body;
    if (!out) throw IoError("write failed: " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("rename failed: " + path + ": " + ec.message());
}

std::string header_line(double omega, const nlohmann::json& wavelet, int ell) {
  std::ostringstream out;
  out << "# omega=" << fmt17(omega) << " wavelet=" << wavelet.dump() << " ell=" << ell << "\n";
  return out.str();
}

struct ParsedHeader {
  double omega = 0.0;
  nlohmann::json wavelet;
  int ell = -1;
};

ParsedHeader parse_header(const std::string& line) {
  ParsedHeader h;
  if (line.rfind("# ", 0) != 0) throw ParseError("measurement CSV: missing '# ' header");
  const auto om = line.find("omega=");
  const auto wv = line.find(" wavelet=");
  const auto el = line.find(" ell=");
  if (om == std::string::npos || wv == std::string::npos || el == std::string::npos)
    throw ParseError("measurement CSV: malformed header");
  try {
    h.omega = std::stod(line.substr(om + 6, wv - (om + 6)));
    h.wavelet = nlohmann::json::parse(line.substr(wv + 9, el - (wv + 9)));
    h.ell = std::stoi(line.substr(el + 5));
  } catch (const std::exception& e) {
    throw ParseError(std::string("measurement CSV: header: ") + e.what());
  }
  if (!(h.omega > 0.0)) throw ParseError("measurement CSV: omega must be positive");
  return h;
}

template <typename Matrix, typename CellWriter>
std::string grid_csv(double omega, const nlohmann::json& wavelet, int ell, int t_min,
                     const std::vector<double>& scales, const Matrix& values,
                     const std::string& columns, CellWriter&& cell) {
  std::ostringstream out;
  out << header_line(omega, wavelet, ell);
  out << columns << "\n";
  for (std::size_t i = 0; i < values.size(); ++i) {
    const int m = t_min + static_cast<int>(i);
    for (std::size_t k = 0; k < scales.size(); ++k) {
      out << m << "," << fmt17(scales[k]) << ",";
      cell(out, values[i][k]);
      out << "\n";
    }
  }
  return out.str();
}

struct RawRows {
  ParsedHeader header;
  std::vector<int> ms;
  std::vector<double> scales;
  std::vector<std::vector<std::string>> fields;  // remaining columns per row
};

RawRows read_rows(const std::string& path, std::size_t expect_fields) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("measurement CSV: empty file");
  RawRows raw;
  raw.header = parse_header(line);
  if (!std::getline(in, line)) throw ParseError("measurement CSV: missing column line");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> parts;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) parts.push_back(tok);
    if (parts.size() != 2 + expect_fields)
      throw ParseError("measurement CSV: wrong column count in row '" + line + "'");
    try {
      raw.ms.push_back(std::stoi(parts[0]));
      raw.scales.push_back(std::stod(parts[1]));
    } catch (const std::exception&) {
      throw ParseError("measurement CSV: bad row '" + line + "'");
    }
    raw.fields.emplace_back(parts.begin() + 2, parts.end());
  }
  if (raw.ms.empty()) throw ParseError("measurement CSV: no data rows");
  return raw;
}

// Rows are m-major over the scale list; reassemble and validate the grid.
template <typename Meas, typename CellParser>
Meas assemble(const RawRows& raw, CellParser&& parse_cell) {
  Meas out;
  out.omega = raw.header.omega;
  out.wavelet_descriptor = raw.header.wavelet;
  out.ell = raw.header.ell;

  std::vector<double> scales;
  for (std::size_t i = 0; i < raw.scales.size(); ++i) {
    if (raw.ms[i] != raw.ms[0]) break;
    scales.push_back(raw.scales[i]);
  }
  if (scales.empty() || raw.ms.size() % scales.size() != 0)
    throw ParseError("measurement CSV: rows do not form a rectangular grid");
  const std::size_t n_times = raw.ms.size() / scales.size();
  out.scales = scales;
  out.t_min = raw.ms[0];
  out.t_max = raw.ms[0] + static_cast<int>(n_times) - 1;
  out.values.resize(n_times);
  for (std::size_t i = 0; i < n_times; ++i) {
    out.values[i].resize(scales.size());
    for (std::size_t k = 0; k < scales.size(); ++k) {
      const std::size_t r = i * scales.size() + k;
      if (raw.ms[r] != out.t_min + static_cast<int>(i) || raw.scales[r] != scales[k])
        throw ParseError("measurement CSV: grid rows out of order");
      out.values[i][k] = parse_cell(raw.fields[r]);
    }
  }
  return out;
}

}  // namespace

void write_measurements_csv(const MagnitudeMeasurements& meas, const std::string& path) {
  atomic_write(path, grid_csv(meas.omega, meas.wavelet_descriptor, meas.ell, meas.t_min,
                              meas.scales, meas.values, "m,a_k,magnitude",
                              [](std::ostream& out, double v) { out << fmt17(v); }));
}

void write_measurements_csv(const ComplexMeasurements& meas, const std::string& path) {
  atomic_write(path, grid_csv(meas.omega, meas.wavelet_descriptor, meas.ell, meas.t_min,
                              meas.scales, meas.values, "m,a_k,magnitude,re,im",
                              [](std::ostream& out, cplx v) {
                                out << fmt17(std::abs(v)) << "," << fmt17(v.real()) << ","
                                    << fmt17(v.imag());
                              }));
}

MagnitudeMeasurements read_measurements_csv(const std::string& path) {
  RawRows raw = read_rows(path, 1);
  auto meas = assemble<MagnitudeMeasurements>(raw, [](const std::vector<std::string>& f) {
    const double v = std::stod(f[0]);
    if (v < 0.0) throw ParseError("measurement CSV: negative magnitude");
    return v;
  });
  return meas;
}

ComplexMeasurements read_complex_measurements_csv(const std::string& path) {
  RawRows raw = read_rows(path, 3);
  return assemble<ComplexMeasurements>(raw, [](const std::vector<std::string>& f) {
    return cplx(std::stod(f[1]), std::stod(f[2]));
  });
}

}  // namespace wpr
