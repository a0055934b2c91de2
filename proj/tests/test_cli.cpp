#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "wpr/cwt.hpp"
#include "wpr/signal.hpp"

namespace fs = std::filesystem;

namespace {

struct CliFixture {
  fs::path dir;

  CliFixture() {
    dir = fs::temp_directory_path() / "wpr_cli_tests";
    fs::create_directories(dir);
  }

  fs::path file(const std::string& name) const { return dir / name; }

  int run(const std::string& args) const {
    const std::string cmd = std::string(WPR_CLI_PATH) + " " + args + " > " +
                            (dir / "stdout.txt").string() + " 2> " +
                            (dir / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    if (status < 0) return -1;
    return WEXITSTATUS(status);
  }

  std::string output() const {
    std::ifstream in(dir / "stdout.txt");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  void write_config(const std::string& name, const nlohmann::json& j) const {
    std::ofstream out(file(name));
    out << j.dump(2);
  }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
};

nlohmann::json base_config() {
  return {
      {"omega", 1.0},
      {"window", {-12, 12}},
      {"scales", {{"kind", "geometric"}, {"a0", 0.0625}, {"ratio", 0.5}, {"count", 7}}},
      {"wavelet", {{"kind", "morlet"}, {"xi0", 5.0}}},
      {"seed", 424242},
  };
}

}  // namespace

TEST_CASE("cli: gen is deterministic and honors kinds") {
  CliFixture cli;
  cli.write_config("cfg.json", base_config());
  REQUIRE(cli.run("--config " + cli.file("cfg.json").string() + " --out " +
                  cli.file("a.json").string() + " gen --kind real --coeffs 9") == 0);
  REQUIRE(cli.run("--config " + cli.file("cfg.json").string() + " --out " +
                  cli.file("b.json").string() + " gen --kind real --coeffs 9") == 0);
  CHECK(CliFixture::slurp(cli.file("a.json")) == CliFixture::slurp(cli.file("b.json")));

  const wpr::BandlimitedSignal f = wpr::read_signal_json(cli.file("a.json").string());
  CHECK(f.is_real());
  CHECK(f.coeffs().size() == 9);

  // a different seed from the flag wins over the config
  REQUIRE(cli.run("--config " + cli.file("cfg.json").string() + " --seed 7 --out " +
                  cli.file("c.json").string() + " gen --kind real --coeffs 9") == 0);
  CHECK(CliFixture::slurp(cli.file("a.json")) != CliFixture::slurp(cli.file("c.json")));

  REQUIRE(cli.run("--config " + cli.file("cfg.json").string() + " --out " +
                  cli.file("an.json").string() + " gen --kind analytic") == 0);
  const wpr::BandlimitedSignal fa = wpr::read_signal_json(cli.file("an.json").string());
  CHECK_FALSE(fa.is_real());
  double neg = 0.0;
  for (double xi : {-0.2, -0.5, -0.8}) neg = std::max(neg, std::abs(fa.fourier(xi)));
  CHECK(neg <= 1e-9 * fa.norm2());
}

TEST_CASE("cli: gen -> cwt -> retrieve round trip") {
  CliFixture cli;
  cli.write_config("cfg.json", base_config());
  const std::string cfg = " --config " + cli.file("cfg.json").string();
  REQUIRE(cli.run(cfg + " --out " + cli.file("f.json").string() + " gen --coeffs 9") == 0);
  REQUIRE(cli.run(cfg + " --out " + cli.file("m.csv").string() + " cwt --signal " +
                  cli.file("f.json").string()) == 0);

  // row count = |window| x |scales|
  const wpr::MagnitudeMeasurements meas = wpr::read_measurements_csv(cli.file("m.csv").string());
  CHECK(meas.times() == 25);
  CHECK(meas.scales.size() == 7);

  REQUIRE(cli.run(cfg + " --out " + cli.file("rec.json").string() + " retrieve --meas " +
                  cli.file("m.csv").string()) == 0);
  const wpr::BandlimitedSignal truth = wpr::read_signal_json(cli.file("f.json").string());
  const wpr::BandlimitedSignal rec = wpr::read_signal_json(cli.file("rec.json").string());
  CHECK(wpr::dist_up_to_sign(rec, truth) <= 1e-3 * truth.norm2());

  std::ifstream diag_in(cli.file("rec.json").string() + ".diag.json");
  REQUIRE(diag_in.good());
  nlohmann::json diag;
  diag_in >> diag;
  CHECK(diag.contains("residual_meas"));
  CHECK(diag["ell"] == 1);
}

TEST_CASE("cli: cwt of the zero signal is identically zero") {
  CliFixture cli;
  cli.write_config("cfg.json", base_config());
  wpr::write_signal_json(wpr::BandlimitedSignal::zero(1.0), cli.file("zero.json").string());
  REQUIRE(cli.run("--config " + cli.file("cfg.json").string() + " --out " +
                  cli.file("z.csv").string() + " cwt --signal " +
                  cli.file("zero.json").string()) == 0);
  const wpr::MagnitudeMeasurements meas = wpr::read_measurements_csv(cli.file("z.csv").string());
  CHECK(meas.max_value() == 0.0);
}

TEST_CASE("cli: doubling quadrature panels moves magnitudes by less than tau_quad") {
  CliFixture cli;
  nlohmann::json cfg = base_config();
  cli.write_config("cfg8.json", cfg);
  cfg["quadrature"] = {{"num_nodes", 32}, {"panels", 16}};
  cli.write_config("cfg16.json", cfg);
  REQUIRE(cli.run("--config " + cli.file("cfg8.json").string() + " --out " +
                  cli.file("f.json").string() + " gen --coeffs 9") == 0);
  REQUIRE(cli.run("--config " + cli.file("cfg8.json").string() + " --out " +
                  cli.file("m8.csv").string() + " cwt --signal " +
                  cli.file("f.json").string()) == 0);
  REQUIRE(cli.run("--config " + cli.file("cfg16.json").string() + " --out " +
                  cli.file("m16.csv").string() + " cwt --signal " +
                  cli.file("f.json").string()) == 0);
  const wpr::MagnitudeMeasurements a = wpr::read_measurements_csv(cli.file("m8.csv").string());
  const wpr::MagnitudeMeasurements b = wpr::read_measurements_csv(cli.file("m16.csv").string());
  double gap = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i)
    for (std::size_t k = 0; k < a.values[i].size(); ++k)
      gap = std::max(gap, std::abs(a.values[i][k] - b.values[i][k]));
  CHECK(gap <= 1e-9 * a.max_value());
}

TEST_CASE("cli: error paths map to documented exit codes") {
  CliFixture cli;
  cli.write_config("cfg.json", base_config());
  const std::string cfg = " --config " + cli.file("cfg.json").string();

  {  // corrupted CSV header -> 64
    std::ofstream bad(cli.file("bad.csv"));
    bad << "not a header\n1,0.5,0.1\n";
  }
  CHECK(cli.run(cfg + " --out " + cli.file("r.json").string() + " retrieve --meas " +
                cli.file("bad.csv").string()) == 64);

  // progressive-wavelet measurements -> 3
  nlohmann::json ccfg = base_config();
  ccfg["wavelet"] = {{"kind", "cauchy"}, {"p", 2.0}, {"rho_const", 1.0}};
  ccfg["scales"] = {{"kind", "list"}, {"values", {1.0, 0.5, 0.25}}};
  cli.write_config("ccfg.json", ccfg);
  REQUIRE(cli.run("--config " + cli.file("ccfg.json").string() + " --out " +
                  cli.file("f.json").string() + " gen --coeffs 9") == 0);
  REQUIRE(cli.run("--config " + cli.file("ccfg.json").string() + " --out " +
                  cli.file("cm.csv").string() + " cwt --signal " +
                  cli.file("f.json").string()) == 0);
  CHECK(cli.run("--config " + cli.file("ccfg.json").string() + " --out " +
                cli.file("r.json").string() + " retrieve --meas " +
                cli.file("cm.csv").string()) == 3);

  // usage errors -> 64
  CHECK(cli.run("definitely-not-a-command") == 64);
  CHECK(cli.run(cfg + " gen --kind bogus --out " + cli.file("x.json").string()) == 64);

  // unreadable input -> 74
  CHECK(cli.run(cfg + " --out " + cli.file("m.csv").string() + " cwt --signal " +
                cli.file("missing.json").string()) == 74);

  // probe of a progressive wavelet -> 3 (no two-sided limit)
  CHECK(cli.run("--config " + cli.file("ccfg.json").string() + " probe") == 3);
}

TEST_CASE("cli: probe and plotdata") {
  CliFixture cli;
  cli.write_config("cfg.json", base_config());
  const std::string cfg = " --config " + cli.file("cfg.json").string();
  REQUIRE(cli.run(cfg + " probe") == 0);
  CHECK(cli.output().find("ell = 1") != std::string::npos);

  // morlet spectrum curve peaks near xi0 = 5 with value ~ pi^{-1/4}
  REQUIRE(cli.run(cfg + " --out " + cli.file("psi.csv").string() + " plotdata --what psi-hat") ==
          0);
  {
    std::ifstream in(cli.file("psi.csv"));
    std::string line;
    std::getline(in, line);  // column header
    double best_xi = 0.0, best = -1.0;
    while (std::getline(in, line)) {
      std::stringstream ss(line);
      std::string sxi, sre;
      std::getline(ss, sxi, ',');
      std::getline(ss, sre, ',');
      if (std::stod(sre) > best) {
        best = std::stod(sre);
        best_xi = std::stod(sxi);
      }
    }
    CHECK(std::abs(best_xi - 5.0) <= 0.1);
    CHECK(best == doctest::Approx(std::pow(3.14159265358979323846, -0.25)).epsilon(1e-3));
  }

  // cauchy p = 2 spectrum peaks at xi = 2
  nlohmann::json ccfg = base_config();
  ccfg["wavelet"] = {{"kind", "cauchy"}, {"p", 2.0}, {"rho_const", 1.0}};
  cli.write_config("ccfg.json", ccfg);
  REQUIRE(cli.run("--config " + cli.file("ccfg.json").string() + " --out " +
                  cli.file("cpsi.csv").string() + " plotdata --what psi-hat") == 0);
  {
    std::ifstream in(cli.file("cpsi.csv"));
    std::string line;
    std::getline(in, line);
    double best_xi = 0.0, best = -1.0;
    while (std::getline(in, line)) {
      std::stringstream ss(line);
      std::string sxi, sre;
      std::getline(ss, sxi, ',');
      std::getline(ss, sre, ',');
      if (std::stod(sre) > best) {
        best = std::stod(sre);
        best_xi = std::stod(sxi);
      }
    }
    CHECK(std::abs(best_xi - 2.0) <= 0.1);
  }

  // no --what: header-only output
  REQUIRE(cli.run(cfg + " --out " + cli.file("empty.csv").string() + " plotdata") == 0);
  CHECK(CliFixture::slurp(cli.file("empty.csv")) == "x,y\n");
}
