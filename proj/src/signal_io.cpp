#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "wpr/signal.hpp"

namespace wpr {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string signal_to_json_string(const BandlimitedSignal& f) {
  std::ostringstream out;
  out << "{\n";
  out << "  \"omega\": " << fmt17(f.omega()) << ",\n";
  out << "  \"m_min\": " << f.m_min() << ",\n";
  out << "  \"coeffs\": [";
  for (std::size_t i = 0; i < f.coeffs().size(); ++i) {
    if (i) out << ", ";
    out << "[" << fmt17(f.coeffs()[i].real()) << ", " << fmt17(f.coeffs()[i].imag()) << "]";
  }
  out << "],\n";
  out << "  \"is_real\": " << (f.is_real() ? "true" : "false") << "\n";
  out << "}\n";
  return out.str();
}

BandlimitedSignal signal_from_json_string(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("signal JSON: ") + e.what());
  }
  try {
    const double omega = j.at("omega").get<double>();
    const int m_min = j.at("m_min").get<int>();
    const bool is_real = j.at("is_real").get<bool>();
    std::vector<cplx> coeffs;
    for (const auto& pair : j.at("coeffs")) {
      if (!pair.is_array() || pair.size() != 2)
        throw ParseError("signal JSON: coeffs entries must be [re, im] pairs");
      coeffs.emplace_back(pair[0].get<double>(), pair[1].get<double>());
    }
    return BandlimitedSignal(omega, m_min, std::move(coeffs), is_real);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("signal JSON: ") + e.what());
  }
}

void write_signal_json(const BandlimitedSignal& f, const std::string& path) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + tmp);
    out << signal_to_json_string(f);
    if (!out) throw IoError("write failed: " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("rename failed: " + path + ": " + ec.message());
}

BandlimitedSignal read_signal_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return signal_from_json_string(buf.str());
}

}  // namespace wpr
