#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "recoil/io.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

const std::string kCli = RECOIL_CLI_PATH;
const fs::path kData = RECOIL_TEST_DATA_DIR;

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("recoil_cli_" + tag);
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

int run(const std::string& args) {
  std::string cmd = kCli + " " + args + " >/dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

std::string run_capture(const std::string& args, const fs::path& tmp) {
  fs::path outfile = tmp / "stdout.txt";
  std::string cmd = kCli + " " + args + " >" + outfile.string() + " 2>&1";
  [[maybe_unused]] int rc = std::system(cmd.c_str());
  std::ifstream in(outfile);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string data_args() {
  return " --registry " + (kData / "constants_codata2010.json").string() + " --budget " +
         (kData / "error_budget.json").string() + " --qed " + (kData / "qed_ahkn2012.json").string();
}

}  // namespace

TEST_CASE("simulate is reproducible byte for byte") {
  TempDir a("sim_a"), b("sim_b");
  std::string base = "simulate --config " + (kData / "config_default.json").string() +
                     " --world " + (kData / "world_default.json").string() + " --seed 9";
  REQUIRE(run(base + " --out " + a.path.string()) == 0);
  REQUIRE(run(base + " --out " + b.path.string()) == 0);
  for (const char* name :
       {"spectrum_pp.csv", "spectrum_pm.csv", "spectrum_mp.csv", "spectrum_mm.csv",
        "spectrum_pp.json", "spectrum_set.json"})
    CHECK(slurp(a.path / name) == slurp(b.path / name));
  CHECK(fs::exists(a.path / "manifest.json"));

  // different seed, different bytes
  TempDir c("sim_c");
  REQUIRE(run("simulate --config " + (kData / "config_default.json").string() + " --world " +
              (kData / "world_default.json").string() + " --seed 10 --out " + c.path.string()) ==
          0);
  CHECK(slurp(a.path / "spectrum_pp.csv") != slurp(c.path / "spectrum_pp.csv"));
}

TEST_CASE("fit and reduce consume simulate's outputs") {
  TempDir dir("fit_reduce");
  std::string base = "simulate --config " + (kData / "config_default.json").string() +
                     " --world " + (kData / "world_default.json").string() + " --seed 4 --out " +
                     dir.path.string();
  REQUIRE(run(base) == 0);

  TempDir fit("fit_out");
  CHECK(run("fit --spectrum " + (dir.path / "spectrum_pp.csv").string() + " --out " +
            fit.path.string()) == 0);
  auto f = recoil::io::load_fit(fit.path / "fit.json");
  CHECK(f.converged);
  // default calibrated noise: fit sigma in the published 0.13..0.16 band
  CHECK(f.center.sigma > 0.14 * 0.7);
  CHECK(f.center.sigma < 0.14 * 1.3);

  TempDir red("reduce_out");
  CHECK(run("reduce --set " + (dir.path / "spectrum_set.json").string() + " --out " +
            red.path.string()) == 0);
  CHECK(fs::exists(red.path / "reduction.json"));
  auto j = json::parse(slurp(red.path / "reduction.json"));
  double h = j["h_over_m"]["value"].get<double>();
  CHECK(h > 4.5e-9);
  CHECK(h < 4.7e-9);
}

TEST_CASE("budget prints the published totals") {
  TempDir tmp("budget");
  auto text = run_capture("budget --budget " + (kData / "error_budget.json").string(), tmp.path);
  CHECK(text.find("-26.4") != std::string::npos);
  CHECK(text.find("6.6") != std::string::npos);
  CHECK(text.find("Total uncertainty") != std::string::npos);
}

TEST_CASE("budget applies a raw value when asked") {
  TempDir tmp("budget_raw");
  REQUIRE(run("budget --budget " + (kData / "error_budget.json").string() +
              " --raw 137.035999406 --out " + tmp.path.string()) == 0);
  auto rec = json::parse(slurp(tmp.path / "budget.json"));
  double corrected = rec["corrected"]["value"].get<double>();
  CHECK(corrected == doctest::Approx(137.035999406 * (1.0 - 26.4e-10)).epsilon(1e-14));
  CHECK(rec["total_uncertainty_1e10"].get<double>() == doctest::Approx(6.6068).epsilon(1e-3));
}

TEST_CASE("pipeline with injected centers reproduces the published scale") {
  TempDir tmp("pipe_centers");
  // Build an injected-centers manifest with the reference four columns.
  json entries = json::array();
  const double centers[4] = {15567824.42, -15567822.07, -14612062.24, 14612067.77};
  const double sigmas[4] = {0.15, 0.16, 0.13, 0.16};
  const int nb[4] = {500, 500, -500, -500};
  const int rd[4] = {1, -1, 1, -1};
  for (int i = 0; i < 4; ++i) {
    entries.push_back(json{
        {"config",
         {{"n_bloch", nb[i]},
          {"n_elev_1", -300 * (nb[i] > 0 ? 1 : -1)},
          {"n_elev_2", 300 * (nb[i] > 0 ? 1 : -1)},
          {"raman_direction", rd[i]},
          {"t_ramsey_s", 0.01},
          {"tau_pulse_s", 6e-4},
          {"t_sel_meas_s", 0.019},
          {"k1_per_m", 8052877.6457268799},
          {"k2_per_m", 8052877.6457268799},
          {"k_bloch_per_m", 8052877.6457268799},
          {"points_per_spectrum", 100}}},
        {"center_hz", centers[i]},
        {"center_sigma_hz", sigmas[i]}});
  }
  std::ofstream set(tmp.path / "centers.json");
  set << json{{"label", "reference columns"}, {"entries", entries}}.dump();
  set.close();

  REQUIRE(run("pipeline --centers " + (tmp.path / "centers.json").string() + data_args() +
              " --out " + tmp.path.string()) == 0);
  auto d = json::parse(slurp(tmp.path / "determination.json"));
  double alpha_inv = d["alpha_inv"]["value"].get<double>();
  CHECK(std::fabs(alpha_inv / 137.036 - 1.0) < 0.01);
  // budget-based uncertainty arithmetic: 6.6e-10 relative
  double rel = d["alpha_inv"]["sigma"].get<double>() / alpha_inv;
  CHECK(rel == doctest::Approx(6.6068e-10).epsilon(1e-3));
  CHECK(fs::exists(tmp.path / "manifest.json"));
}

TEST_CASE("pipeline --no-budget keeps the statistical uncertainty") {
  TempDir a("pipe_nb_a"), b("pipe_nb_b");
  std::string common = "pipeline --config " + (kData / "config_default.json").string() +
                       " --world " + (kData / "world_default.json").string() + data_args() +
                       " --seed 5";
  REQUIRE(run(common + " --out " + a.path.string()) == 0);
  REQUIRE(run(common + " --no-budget --out " + b.path.string()) == 0);
  auto da = json::parse(slurp(a.path / "determination.json"));
  auto db = json::parse(slurp(b.path / "determination.json"));
  CHECK(da["budget_applied"].get<bool>());
  CHECK_FALSE(db["budget_applied"].get<bool>());
  // without the budget the value is the raw statistical one
  CHECK(db["alpha_inv"]["value"].get<double>() ==
        db["alpha_inv_raw_statistical"]["value"].get<double>());
  CHECK(db["alpha_inv"]["sigma"].get<double>() ==
        db["alpha_inv_raw_statistical"]["sigma"].get<double>());
  CHECK(da["alpha_inv"]["value"].get<double>() != db["alpha_inv"]["value"].get<double>());
}

TEST_CASE("montecarlo is deterministic across thread counts") {
  TempDir a("mc_serial"), b("mc_par");
  std::string common = "montecarlo --config " + (kData / "config_default.json").string() +
                       " --world " + (kData / "world_default.json").string() +
                       " --seed 6 --runs 24 --max-lag 4";
  REQUIRE(run(common + " --threads 1 --out " + a.path.string()) == 0);
  REQUIRE(run(common + " --threads 4 --out " + b.path.string()) == 0);
  CHECK(slurp(a.path / "series.json") == slurp(b.path / "series.json"));
  CHECK(slurp(a.path / "series_stats.json") == slurp(b.path / "series_stats.json"));
}

TEST_CASE("montecarlo writes a coherent series and coverage record") {
  TempDir tmp("mc");
  REQUIRE(run("montecarlo --config " + (kData / "config_default.json").string() + " --world " +
              (kData / "world_default.json").string() + " --seed 2 --runs 30 --max-lag 5 --out " +
              tmp.path.string()) == 0);
  auto cov = json::parse(slurp(tmp.path / "coverage.json"));
  CHECK(cov["runs"].get<int>() == 30);
  double ratio = cov["coverage_ratio"].get<double>();
  CHECK(ratio > 0.5);
  CHECK(ratio < 2.0);
  auto series = recoil::io::load_series(tmp.path / "series.json");
  CHECK(series.size() == 30);

  TempDir acf("acf");
  CHECK(run("acf --series " + (tmp.path / "series.json").string() + " --max-lag 5 --out " +
            acf.path.string()) == 0);
  CHECK(fs::exists(acf.path / "acf.csv"));
  CHECK(fs::exists(acf.path / "series_stats.json"));
}

TEST_CASE("compare emits pairwise records and ladder CSVs") {
  TempDir tmp("compare");
  REQUIRE(run("compare --determinations " + (kData / "determinations.json").string() + " --out " +
              tmp.path.string()) == 0);
  auto rep = json::parse(slurp(tmp.path / "compare.json"));
  CHECK(rep["pairs"].size() == 3);
  auto ladder = slurp(tmp.path / "ladder_alpha_inv.csv");
  CHECK(ladder.find("label,value,sigma") != std::string::npos);
  CHECK(ladder.find("LKB") != std::string::npos);
}

TEST_CASE("alpha and ae subcommands run from flags") {
  TempDir tmp("alpha_ae");
  REQUIRE(run("alpha --h-over-m 4.5913592730717052e-9 --h-over-m-sigma 2.3e-17 --registry " +
              (kData / "constants_codata2010.json").string() + " --out " + tmp.path.string()) ==
          0);
  auto a = json::parse(slurp(tmp.path / "alpha.json"));
  CHECK(a["alpha_inv"]["value"].get<double>() == doctest::Approx(137.035999044).epsilon(1e-9));

  REQUIRE(run("ae --alpha-inv 137.035999044 --alpha-inv-sigma 9e-8 --qed " +
              (kData / "qed_ahkn2012.json").string() + " --out " + tmp.path.string()) == 0);
  auto ae = json::parse(slurp(tmp.path / "ae.json"));
  CHECK(ae["difference_exp_minus_theory"]["value"].get<double>() * 1e12 ==
        doctest::Approx(-1.09).epsilon(0.05));
}

TEST_CASE("stage-tagged exit codes") {
  TempDir tmp("codes");
  // missing input file -> io error (8)
  CHECK(run("simulate --config /nonexistent.json --world " +
            (kData / "world_default.json").string() + " --out " + tmp.path.string()) == 8);
  // invalid config content -> validation (2)
  std::ofstream bad(tmp.path / "bad_config.json");
  bad << R"({"config":{"n_bloch":500,"n_elev_1":-300,"n_elev_2":301,"raman_direction":1,
       "t_ramsey_s":0.01,"tau_pulse_s":6e-4,"t_sel_meas_s":0.019,"k1_per_m":8e6,
       "k2_per_m":8e6,"k_bloch_per_m":8e6,"points_per_spectrum":100}})";
  bad.close();
  CHECK(run("simulate --config " + (tmp.path / "bad_config.json").string() + " --world " +
            (kData / "world_default.json").string() + " --out " + tmp.path.string()) == 2);
  // usage error -> CLI11's nonzero
  CHECK(run("simulate") != 0);
  // flat spectrum -> fit stage failure (4)
  std::ofstream w(tmp.path / "flat_world.json");
  w << R"({"h_over_m_true":4.59e-9,"noise_amplitude":0.02,"rng_seed":1})";
  w.close();
  std::ofstream cfg(tmp.path / "flat_config.json");
  cfg << R"({"span_hz":2000.0,"config":{"n_bloch":500,"n_elev_1":-300,"n_elev_2":300,
       "raman_direction":1,"t_ramsey_s":0.01,"tau_pulse_s":6e-4,"t_sel_meas_s":0.019,
       "k1_per_m":8052877.0,"k2_per_m":8052877.0,"k_bloch_per_m":8052877.0,
       "contrast":0.0,"points_per_spectrum":100}})";
  cfg.close();
  TempDir sim("flat_sim");
  REQUIRE(run("simulate --config " + (tmp.path / "flat_config.json").string() + " --world " +
              (tmp.path / "flat_world.json").string() + " --out " + sim.path.string()) == 0);
  CHECK(run("fit --spectrum " + (sim.path / "spectrum_pp.csv").string() + " --out " +
            tmp.path.string()) == 4);
}

TEST_CASE("every output directory carries its manifest") {
  TempDir tmp("manifests");
  REQUIRE(run("compare --determinations " + (kData / "determinations.json").string() + " --out " +
              tmp.path.string()) == 0);
  auto m = recoil::io::load_manifest(tmp.path / "manifest.json");
  CHECK(m.command == "compare");
  CHECK(m.version == std::string("0.1.0"));
}
