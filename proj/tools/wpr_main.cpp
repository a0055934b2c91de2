#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "wpr/config.hpp"
#include "wpr/corpus.hpp"
#include "wpr/cwt.hpp"
#include "wpr/retrieval.hpp"
#include "wpr/rng.hpp"
#include "wpr/signal_ops.hpp"
#include "wpr/verify.hpp"

namespace {

constexpr double kPi = 3.14159265358979323846;

struct GlobalArgs {
  std::string config_path;
  std::string out_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  bool quiet = false;
};

wpr::RunConfig load_config(const GlobalArgs& args) {
  wpr::RunConfig cfg;
  if (!args.config_path.empty()) cfg = wpr::RunConfig::load(args.config_path);
  if (args.seed_set) cfg.seed = args.seed;  // flags win
  return cfg;
}

void atomic_write_text(const std::string& path, const std::string& body) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw wpr::IoError("cannot open for writing: " + tmp);
    out << body;
    if (!out) throw wpr::IoError("write failed: " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw wpr::IoError("rename failed: " + path + ": " + ec.message());
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------------------

int cmd_gen(const GlobalArgs& args, const std::string& kind, int n_coeffs) {
  const wpr::RunConfig cfg = load_config(args);
  if (args.out_path.empty()) throw wpr::IoError("gen: --out is required");
  wpr::Rng rng(cfg.seed);
  wpr::BandlimitedSignal signal = wpr::BandlimitedSignal::zero(cfg.omega);
  if (kind == "real") {
    wpr::UniformEnsemble ens;
    ens.omega = cfg.omega;
    if (n_coeffs > 0) {
      ens.m_min = -(n_coeffs - 1) / 2;
      ens.m_max = ens.m_min + n_coeffs - 1;
    } else {
      ens.m_min = cfg.window_min;
      ens.m_max = cfg.window_max;
    }
    signal = wpr::random_uniform_signal(ens, rng);
  } else if (kind == "analytic") {
    // analytic representation of a smooth-spectrum real draw; the spectrum
    // stays clear of 0 and the band edge so the one-sided series truncates
    // cleanly at the stored window
    wpr::SmoothEnsemble ens;
    ens.omega = cfg.omega;
    const wpr::BandlimitedSignal real_draw = wpr::random_smooth_signal(ens, rng);
    signal = wpr::analytic_rep(real_draw).trimmed(1e-14);
  } else {
    throw wpr::ParseError("gen: kind must be 'real' or 'analytic'");
  }
  wpr::write_signal_json(signal, args.out_path);
  if (!args.quiet)
    std::cout << "wrote " << args.out_path << " (" << signal.coeffs().size() << " coefficients)\n";
  return 0;
}

int cmd_cwt(const GlobalArgs& args, const std::string& signal_path, bool complex_values) {
  const wpr::RunConfig cfg = load_config(args);
  if (args.out_path.empty()) throw wpr::IoError("cwt: --out is required");
  const wpr::BandlimitedSignal f = wpr::read_signal_json(signal_path);
  const wpr::Wavelet w = wpr::Wavelet::from_descriptor(cfg.wavelet);
  const std::vector<double> scales = cfg.scales.make();
  const double tau_quad = cfg.tol("tau_quad", 1e-9);
  if (complex_values) {
    const wpr::ComplexMeasurements meas = wpr::measure_complex(
        f, w, cfg.window_min, cfg.window_max, scales, cfg.quadrature, tau_quad);
    wpr::write_measurements_csv(meas, args.out_path);
  } else {
    const wpr::MagnitudeMeasurements meas =
        wpr::measure(f, w, cfg.window_min, cfg.window_max, scales, cfg.quadrature, tau_quad);
    wpr::write_measurements_csv(meas, args.out_path);
  }
  if (!args.quiet) std::cout << "wrote " << args.out_path << "\n";
  return 0;
}

int cmd_retrieve(const GlobalArgs& args, const std::string& meas_path, std::string diag_path) {
  const wpr::RunConfig cfg = load_config(args);
  if (args.out_path.empty()) throw wpr::IoError("retrieve: --out is required");
  if (diag_path.empty()) diag_path = args.out_path + ".diag.json";
  const wpr::MagnitudeMeasurements meas = wpr::read_measurements_csv(meas_path);
  const wpr::Wavelet w = wpr::Wavelet::from_descriptor(meas.wavelet_descriptor);
  wpr::RetrieveOptions opts;
  opts.quad = cfg.quadrature;
  opts.tau_quad = cfg.tol("tau_quad", 1e-9);
  const wpr::RetrievalReport report = wpr::retrieve(meas, w, opts);
  wpr::write_signal_json(report.candidate, args.out_path);
  nlohmann::json diag;
  diag["residual_meas"] = report.residual_meas;
  diag["ell"] = report.ell_used;
  diag["flags"] = report.flags;
  diag["diagnostics"] = report.diagnostics;
  atomic_write_text(diag_path, diag.dump(2) + "\n");
  if (!args.quiet)
    std::cout << "wrote " << args.out_path << " (residual_meas " << report.residual_meas
              << ", ell " << report.ell_used << ")\n";
  return 0;
}

int cmd_verify(const GlobalArgs& args, const std::string& suite) {
  const wpr::RunConfig cfg = load_config(args);
  std::vector<std::string> names;
  if (suite == "all")
    names = wpr::verify::suite_names();
  else
    names = {suite};
  nlohmann::json report = nlohmann::json::array();
  bool all_pass = true;
  for (const std::string& name : names) {
    const wpr::verify::SuiteResult result = wpr::verify::run_suite(name, cfg);
    all_pass = all_pass && result.pass();
    report.push_back(result.to_json());
    for (const auto& check : result.checks) {
      if (!args.quiet || !check.pass)
        std::cout << (check.pass ? "[PASS] " : "[FAIL] ") << name << ": " << check.name
                  << "  (measured " << check.measured << ", tolerance " << check.tolerance
                  << (check.detail.empty() ? "" : "; " + check.detail) << ")\n";
    }
  }
  if (!args.out_path.empty()) atomic_write_text(args.out_path, report.dump(2) + "\n");
  return all_pass ? 0 : 1;
}

int cmd_probe(const GlobalArgs& args) {
  const wpr::RunConfig cfg = load_config(args);
  const wpr::Wavelet w = wpr::Wavelet::from_descriptor(cfg.wavelet);
  const wpr::MomentProfile profile = wpr::probe_moment_order(w);
  std::cout << "ell = " << profile.ell << "\nc = " << fmt17(profile.c.real()) << " + "
            << fmt17(profile.c.imag()) << "i\nfit_quality = " << profile.fit_quality << "\n";
  if (!args.out_path.empty()) {
    nlohmann::json j;
    j["ell"] = profile.ell;
    j["c"] = {profile.c.real(), profile.c.imag()};
    j["fit_quality"] = profile.fit_quality;
    atomic_write_text(args.out_path, j.dump(2) + "\n");
  }
  return 0;
}

// time-domain curve by direct inverse-Fourier quadrature per point
wpr::cplx psi_time_value(const wpr::Wavelet& w, double t) {
  std::vector<wpr::Segment> support;
  switch (w.kind()) {
    case wpr::WaveletKind::morlet:
      support = {{std::min(-9.5, w.xi0() - 9.5), std::max(9.5, w.xi0() + 9.5)}};
      break;
    case wpr::WaveletKind::chirp: {
      const double s = 9.5 * std::sqrt(1.0 + w.beta() * w.beta());
      support = {{std::min(-s, w.xi0() - s), std::max(s, w.xi0() + s)}};
      break;
    }
    case wpr::WaveletKind::cauchy:
      support = {{0.0, 45.0 + 8.0 * w.p()}};
      break;
    case wpr::WaveletKind::gauss_lowpass:
      support = {{-4.0, 4.0}};
      break;
    case wpr::WaveletKind::custom:
      throw wpr::InvalidParameter("plotdata: no time curve for custom wavelets");
  }
  const double len = support[0].hi - support[0].lo;
  const int panels = std::max(16, static_cast<int>(std::ceil(std::abs(t) * len / 5.0)));
  wpr::QuadratureSpec spec;
  return wpr::integrate_once(spec, support, panels, [&](double xi) {
    return w.fourier(xi) * std::polar(1.0, 2.0 * kPi * t * xi);
  });
}

int cmd_plotdata(const GlobalArgs& args, const std::string& what, const std::string& signal_path,
                 const std::string& retrieved_path) {
  const wpr::RunConfig cfg = load_config(args);
  if (args.out_path.empty()) throw wpr::IoError("plotdata: --out is required");
  std::ostringstream out;
  if (what.empty()) {
    out << "x,y\n";
  } else if (what == "psi-hat") {
    const wpr::Wavelet w = wpr::Wavelet::from_descriptor(cfg.wavelet);
    double lo = -3.0, hi = 10.0;
    if (w.kind() == wpr::WaveletKind::gauss_lowpass) hi = 3.0;
    if (w.kind() == wpr::WaveletKind::morlet || w.kind() == wpr::WaveletKind::chirp)
      hi = w.xi0() + 5.0;
    out << "xi,re,im\n";
    const int n = 400;
    for (int i = 0; i <= n; ++i) {
      const double xi = lo + (hi - lo) * i / n;
      const wpr::cplx v = w.fourier(xi);
      out << fmt17(xi) << "," << fmt17(v.real()) << "," << fmt17(v.imag()) << "\n";
    }
  } else if (what == "psi-time") {
    const wpr::Wavelet w = wpr::Wavelet::from_descriptor(cfg.wavelet);
    out << "t,re,im\n";
    const int n = 400;
    for (int i = 0; i <= n; ++i) {
      const double t = -4.0 + 8.0 * i / n;
      const wpr::cplx v = psi_time_value(w, t);
      out << fmt17(t) << "," << fmt17(v.real()) << "," << fmt17(v.imag()) << "\n";
    }
  } else if (what == "limit-ladder") {
    const wpr::Wavelet w = wpr::Wavelet::from_descriptor(cfg.wavelet);
    const wpr::MomentProfile profile = wpr::probe_moment_order(w);
    const wpr::Wavelet phi = wpr::normalize(w, profile);
    wpr::SmoothEnsemble ens;
    ens.omega = cfg.omega;
    wpr::Rng rng(cfg.seed);
    const wpr::BandlimitedSignal f = wpr::random_smooth_signal(ens, rng);
    const wpr::BandlimitedSignal fl = wpr::derivative(f, profile.ell);
    out << "a,E\n";
    for (int j = 0; j <= 10; ++j) {
      const double a = std::pow(2.0, -j);
      std::vector<wpr::cplx> row(static_cast<std::size_t>(f.m_max() - f.m_min() + 25));
      const int lo = f.m_min() - 12;
      for (std::size_t i = 0; i < row.size(); ++i)
        row[i] = wpr::transform(f, phi, (lo + static_cast<int>(i)) / (2.0 * cfg.omega), a,
                                cfg.quadrature);
      const wpr::BandlimitedSignal row_signal(cfg.omega, lo, row, false);
      const double e =
          (fl - row_signal.scaled(wpr::cplx(std::pow(a, -profile.ell), 0.0))).norm2();
      out << fmt17(a) << "," << fmt17(e) << "\n";
    }
  } else if (what == "overlay") {
    if (signal_path.empty() || retrieved_path.empty())
      throw wpr::ParseError("plotdata overlay: --signal and --retrieved are required");
    const wpr::BandlimitedSignal truth = wpr::read_signal_json(signal_path);
    const wpr::BandlimitedSignal rec = wpr::read_signal_json(retrieved_path);
    out << "x,truth,retrieved\n";
    const double lo = std::min(truth.m_min(), rec.m_min()) / (2.0 * truth.omega()) - 1.0;
    const double hi = std::max(truth.m_max(), rec.m_max()) / (2.0 * truth.omega()) + 1.0;
    const int n = 500;
    for (int i = 0; i <= n; ++i) {
      const double x = lo + (hi - lo) * i / n;
      out << fmt17(x) << "," << fmt17(truth.evaluate(x).real()) << ","
          << fmt17(rec.evaluate(x).real()) << "\n";
    }
  } else {
    throw wpr::ParseError("plotdata: unknown --what '" + what + "'");
  }
  atomic_write_text(args.out_path, out.str());
  if (!args.quiet) std::cout << "wrote " << args.out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wavelet-magnitude measurements and sign/phase retrieval for bandlimited signals"};
  app.require_subcommand(1);

  GlobalArgs args;
  app.add_option("--config", args.config_path, "JSON config file");
  app.add_option("--seed", args.seed, "PRNG seed (overrides the config)")
      ->each([&](const std::string&) { args.seed_set = true; });
  app.add_option("--out", args.out_path, "output path");
  app.add_flag("--quiet", args.quiet, "suppress informational output");

  std::string kind = "real";
  int n_coeffs = 0;
  CLI::App* gen = app.add_subcommand("gen", "generate a seeded random signal");
  gen->add_option("--kind", kind, "real | analytic");
  gen->add_option("--coeffs", n_coeffs, "number of coefficients (real kind)");

  std::string signal_path;
  bool complex_values = false;
  CLI::App* cwt = app.add_subcommand("cwt", "synthesize magnitude measurements");
  cwt->add_option("--signal", signal_path, "input signal JSON")->required();
  cwt->add_flag("--complex", complex_values, "write complex values as well");

  std::string meas_path, diag_path;
  CLI::App* retrieve = app.add_subcommand("retrieve", "reconstruct a signal from magnitudes");
  retrieve->add_option("--meas", meas_path, "input measurement CSV")->required();
  retrieve->add_option("--diag", diag_path, "diagnostics JSON path");

  std::string suite = "all";
  CLI::App* verify = app.add_subcommand("verify", "run verification suites");
  verify->add_option("--suite", suite, "signals|cwt|limits|retrieval|counterexample|cauchy|all");

  std::string what, retrieved_path, plot_signal_path;
  CLI::App* plotdata = app.add_subcommand("plotdata", "emit plot-ready CSV data");
  plotdata->add_option("--what", what, "psi-hat|psi-time|limit-ladder|overlay");
  plotdata->add_option("--signal", plot_signal_path, "signal JSON (overlay)");
  plotdata->add_option("--retrieved", retrieved_path, "retrieved signal JSON (overlay)");

  CLI::App* probe = app.add_subcommand("probe", "probe the wavelet moment order");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 64;
  }

  try {
    if (gen->parsed()) return cmd_gen(args, kind, n_coeffs);
    if (cwt->parsed()) return cmd_cwt(args, signal_path, complex_values);
    if (retrieve->parsed()) return cmd_retrieve(args, meas_path, diag_path);
    if (verify->parsed()) return cmd_verify(args, suite);
    if (plotdata->parsed()) return cmd_plotdata(args, what, plot_signal_path, retrieved_path);
    if (probe->parsed()) return cmd_probe(args);
  } catch (const wpr::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 64;
  } catch (const wpr::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 74;
  } catch (const wpr::AmbiguousSigns& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const wpr::NotConverging& e) {
    std::cerr << "error (stage: scale-ladder extrapolation): " << e.what() << "\n";
    return 3;
  } catch (const wpr::DCObstruction& e) {
    std::cerr << "error (stage: antidifferentiation): " << e.what() << "\n";
    return 3;
  } catch (const wpr::ProgressiveWaveletNoLimit& e) {
    std::cerr << "error (stage: moment probe): " << e.what() << "\n";
    return 3;
  } catch (const wpr::NoFiniteOrder& e) {
    std::cerr << "error (stage: moment probe): " << e.what() << "\n";
    return 3;
  } catch (const wpr::Stalled& e) {
    std::cerr << "error (stage: alternating projections): " << e.what() << "\n";
    return 3;
  } catch (const wpr::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
