// recoil: command-line front end for the photon-recoil measurement pipeline.
// Subcommands: simulate, fit, reduce, budget, alpha, ae, compare, acf,
// pipeline, montecarlo. Exit codes are stage-tagged (see README).

#include <filesystem>
#include <fstream>
#include <atomic>
#include <future>
#include <iomanip>
#include <thread>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "recoil/conversions.hpp"
#include "recoil/errors.hpp"
#include "recoil/fringe.hpp"
#include "recoil/interferometer.hpp"
#include "recoil/io.hpp"
#include "recoil/quantity.hpp"
#include "recoil/reduction.hpp"
#include "recoil/registry.hpp"
#include "recoil/rng.hpp"
#include "recoil/stats.hpp"
#include "recoil/systematics.hpp"
#include "recoil/version.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace recoil;

namespace {

// Stage-tagged exit codes. 1 is CLI11's own usage-error code.
enum ExitCode : int {
  kOk = 0,
  kValidation = 2,
  kSimulate = 3,
  kFit = 4,
  kReduce = 5,
  kBudget = 6,
  kConstants = 7,
  kIo = 8,
};

struct StageFailure {
  int code;
  std::string message;
};

template <typename F>
auto stage(int code, const char* name, F&& fn) {
  try {
    return fn();
  } catch (const DataError&) {
    throw;  // file problems keep the io exit code
  } catch (const std::exception& e) {
    throw StageFailure{code, std::string(name) + ": " + e.what()};
  }
}

json quantity_json(const Quantity& q) {
  return json{{"value", q.value}, {"sigma", q.sigma}, {"unit", q.unit.tag()}};
}

void write_json_file(const json& j, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
}

fs::path ensure_dir(const std::string& out) {
  fs::path dir(out);
  fs::create_directories(dir);
  return dir;
}

void write_manifest(const std::string& command, std::vector<std::string> config_paths,
                    std::uint64_t seed, const fs::path& dir) {
  RunManifest m;
  m.command = command;
  m.config_paths = std::move(config_paths);
  m.seed = seed;
  m.output_dir = dir.string();
  m.version = kVersion;
  io::save_manifest(m, dir);
}

std::string default_file(const char* name) { return (default_data_dir() / name).string(); }

constexpr const char* kSpectrumNames[4] = {"spectrum_pp", "spectrum_pm", "spectrum_mp",
                                           "spectrum_mm"};

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string config, world, out, label = "simulated set";
  std::optional<std::uint64_t> seed;
};

int cmd_simulate(const SimulateArgs& a) {
  auto base = stage(kValidation, "config", [&] { return io::load_config(a.config); });
  double span = io::load_span_hz(a.config, 2000.0);
  auto world = stage(kValidation, "world", [&] { return io::load_world(a.world); });
  if (a.seed) world.rng_seed = *a.seed;
  fs::path dir = ensure_dir(a.out);

  auto spectra =
      stage(kSimulate, "simulate", [&] { return simulate_four_spectra(world, base, span); });

  json entries = json::array();
  for (int i = 0; i < 4; ++i) {
    fs::path csv = dir / (std::string(kSpectrumNames[i]) + ".csv");
    fs::path side = dir / (std::string(kSpectrumNames[i]) + ".json");
    stage(kIo, "write spectra", [&] { io::save_spectrum(spectra[i], csv, side); return 0; });
    entries.push_back(json{{"spectrum", csv.filename().string()},
                           {"sidecar", side.filename().string()}});
  }
  write_json_file(json{{"label", a.label}, {"timestamp", ""}, {"entries", entries}},
                  dir / "spectrum_set.json");
  write_manifest("simulate", {a.config, a.world}, world.rng_seed, dir);
  std::cout << "wrote 4 spectra + spectrum_set.json to " << dir.string() << '\n';
  return kOk;
}

// --------------------------------------------------------------------- fit

struct FitArgs {
  std::string spectrum, sidecar, out;
  std::optional<double> guess;
  bool fit_envelope = false;
};

int cmd_fit(const FitArgs& a) {
  fs::path csv(a.spectrum);
  fs::path side = a.sidecar.empty() ? fs::path(csv).replace_extension(".json") : fs::path(a.sidecar);
  auto spec = stage(kIo, "load spectrum", [&] { return io::load_spectrum(csv, side); });
  FitOptions opt;
  opt.initial_guess_hz = a.guess;
  opt.fit_envelope_width = a.fit_envelope;
  auto fit = stage(kFit, "fit", [&] { return fit_central_fringe(spec, opt); });
  fs::path dir = ensure_dir(a.out);
  io::save_fit(fit, dir / "fit.json");
  write_manifest("fit", {a.spectrum, side.string()}, 0, dir);
  if (!fit.converged) {
    std::cerr << "fit did not converge: " << fit.status << '\n';
    return kFit;
  }
  std::cout << "center = " << fit.center.str() << '\n';
  return kOk;
}

// ------------------------------------------------------------------ reduce

SpectrumSet assemble_set(const io::SpectrumSetManifest& manifest) {
  SpectrumSet set;
  set.label = manifest.label;
  set.timestamp = manifest.timestamp;
  if (manifest.has_spectra) {
    for (size_t i = 0; i < 4; ++i) {
      auto spec = io::load_spectrum(manifest.spectra[i].first, manifest.spectra[i].second);
      set.entries[i].config = spec.config;
      set.entries[i].fit = stage(kFit, "fit", [&] { return fit_central_fringe(spec); });
    }
  } else {
    for (size_t i = 0; i < 4; ++i) set.entries[i] = manifest.injected[i];
  }
  return set;
}

int cmd_reduce(const std::string& set_path, const std::string& out) {
  auto manifest = stage(kIo, "load set", [&] { return io::load_spectrum_set_manifest(set_path); });
  auto set = assemble_set(manifest);
  auto result = stage(kReduce, "reduce", [&] { return reduce_set(set); });
  auto report = stage(kReduce, "reduce", [&] { return cancellation_report(set); });
  fs::path dir = ensure_dir(out);
  io::save_reduction(result, report, dir / "reduction.json");
  write_manifest("reduce", {set_path}, 0, dir);
  std::cout << "h/m = " << result.h_over_m.str() << '\n';
  return kOk;
}

// ------------------------------------------------------------------ budget

struct BudgetArgs {
  std::string budget, out;
  std::optional<double> raw, raw_sigma;
  bool invert = false;
};

int cmd_budget(const BudgetArgs& a) {
  auto budget = stage(kIo, "load budget", [&] { return ErrorBudget::from_file(a.budget); });
  std::cout << format_budget_table(budget);
  json record{{"label", budget.label},
              {"correction_sum_1e10", budget.correction_sum()},
              {"global_systematic_1e10", budget.global_systematic.uncertainty},
              {"quadrature_of_lines_1e10", budget.quadrature_of_lines()},
              {"total_uncertainty_1e10", budget.total_uncertainty()}};
  if (a.raw) {
    Quantity raw(*a.raw, a.raw_sigma.value_or(0.0), "1");
    auto corrected =
        stage(kBudget, "budget", [&] { return apply_budget(raw, budget, a.invert); });
    std::cout << "corrected: " << corrected.str() << '\n';
    record["raw"] = quantity_json(raw);
    record["corrected"] = quantity_json(corrected);
  }
  if (!a.out.empty()) {
    fs::path dir = ensure_dir(a.out);
    write_json_file(record, dir / "budget.json");
    write_manifest("budget", {a.budget}, 0, dir);
  }
  return kOk;
}

// ------------------------------------------------------------------- alpha

struct AlphaArgs {
  std::string registry, rb_mass = "mean", species = "rb", out;
  double h_over_m = 0.0, sigma = 0.0;
};

int cmd_alpha(const AlphaArgs& a) {
  auto reg = stage(kIo, "load registry",
                   [&] { return ConstantsRegistry::from_file(a.registry, a.rb_mass); });
  Quantity h_over_m(a.h_over_m, a.sigma, "m^2 s^-1");
  auto result = stage(kConstants, "constants", [&] {
    Quantity ar = a.species == "rb"   ? reg.ar_rb()
                  : a.species == "cs" ? reg.ar_cs()
                                      : Quantity::exact(1.0);
    Quantity alpha_inv = alpha_inv_from_h_over_m(h_over_m, ar, reg);
    Quantity h_over_mu = h_over_mu_from_alpha_inv(alpha_inv, reg);
    Quantity nah = na_h(h_over_mu, reg);
    return json{{"alpha_inv", quantity_json(alpha_inv)},
                {"h_over_mu", quantity_json(h_over_mu)},
                {"na_h", quantity_json(nah)},
                {"registry_label", reg.source_label()},
                {"rb_mass_key", reg.rb_mass_key()}};
  });
  std::cout << "alpha^-1 = " << result["alpha_inv"]["value"].get<double>() << " +- "
            << result["alpha_inv"]["sigma"].get<double>() << '\n';
  if (!a.out.empty()) {
    fs::path dir = ensure_dir(a.out);
    write_json_file(result, dir / "alpha.json");
    write_manifest("alpha", {a.registry}, 0, dir);
  }
  return kOk;
}

// ---------------------------------------------------------------------- ae

struct AeArgs {
  std::string qed, out;
  double alpha_inv = 0.0, sigma = 0.0;
  bool no_extra = false;
};

int cmd_ae(const AeArgs& a) {
  auto series = stage(kIo, "load qed", [&] { return QedSeries::from_file(a.qed); });
  Quantity alpha_inv(a.alpha_inv, a.sigma, "1");
  auto rec = stage(kConstants, "qed", [&] {
    auto cmp = compare_a_e(alpha_inv, series);
    Quantity theory_no_extra = a_e_theory(alpha_inv, series, false);
    return json{{"alpha_inv", quantity_json(alpha_inv)},
                {"a_e_theory", quantity_json(cmp.a_e_theory)},
                {"a_e_theory_series_only", quantity_json(theory_no_extra)},
                {"a_e_experiment", quantity_json(cmp.a_e_experiment)},
                {"difference_exp_minus_theory", quantity_json(cmp.difference)},
                {"sigma_from_alpha_only", cmp.sigma_from_alpha},
                {"series_source", series.source}};
  });
  std::cout << "a_e(exp) - a_e(theory) = " << rec["difference_exp_minus_theory"]["value"].get<double>()
            << " +- " << rec["difference_exp_minus_theory"]["sigma"].get<double>() << '\n';
  if (a.no_extra)
    std::cout << "series-only theory: " << rec["a_e_theory_series_only"]["value"].get<double>()
              << '\n';
  if (!a.out.empty()) {
    fs::path dir = ensure_dir(a.out);
    write_json_file(rec, dir / "ae.json");
    write_manifest("ae", {a.qed}, 0, dir);
  }
  return kOk;
}

// ----------------------------------------------------------------- compare

int cmd_compare(const std::string& dets_path, const std::string& out) {
  auto dets = stage(kIo, "load determinations", [&] { return load_determinations(dets_path); });
  auto rep = stage(kConstants, "compare", [&] {
    return compare_determinations(std::span<const Determination>(dets));
  });
  fs::path dir = ensure_dir(out);
  json pairs = json::array();
  for (const auto& p : rep.pairs)
    pairs.push_back(json{{"a", p.label_a},
                         {"b", p.label_b},
                         {"alpha_inv_diff", p.alpha_inv_diff},
                         {"alpha_inv_combined_sigma", p.alpha_inv_combined_sigma},
                         {"alpha_inv_n_sigma", p.alpha_inv_n_sigma},
                         {"h_over_mu_diff", p.h_over_mu_diff},
                         {"h_over_mu_combined_sigma", p.h_over_mu_combined_sigma},
                         {"h_over_mu_n_sigma", p.h_over_mu_n_sigma}});
  write_json_file(json{{"pairs", pairs}}, dir / "compare.json");
  for (auto [rows, name] : {std::pair{&rep.alpha_inv_rows, "ladder_alpha_inv.csv"},
                            std::pair{&rep.h_over_mu_rows, "ladder_h_over_mu.csv"}}) {
    std::ofstream csv(dir / name);
    csv << "label,value,sigma\n";
    csv.precision(17);
    for (const auto& r : *rows) csv << r.label << ',' << r.value << ',' << r.sigma << '\n';
  }
  write_manifest("compare", {dets_path}, 0, dir);
  std::cout << "wrote compare.json and ladder CSVs to " << dir.string() << '\n';
  return kOk;
}

// --------------------------------------------------------------------- acf

int cmd_acf(const std::string& series_path, int max_lag, const std::string& out) {
  auto values = stage(kIo, "load series", [&] { return io::load_series(series_path); });
  auto stats = stage(kValidation, "series stats", [&] {
    return series_stats(std::span<const Quantity>(values), max_lag);
  });
  fs::path dir = ensure_dir(out);
  io::save_series_stats(stats, dir / "series_stats.json");
  io::save_acf_csv(stats, dir / "acf.csv");
  write_manifest("acf", {series_path}, 0, dir);
  std::cout << "mean = " << stats.mean.str() << ", chi2/(n-1) = " << stats.chi2_per_dof << '\n';
  return kOk;
}

// ---------------------------------------------------------------- pipeline

struct PipelineArgs {
  std::string config, world, registry, budget, qed, out, centers, rb_mass = "mean";
  std::optional<std::uint64_t> seed;
  bool no_budget = false;
};

int cmd_pipeline(const PipelineArgs& a) {
  fs::path dir = ensure_dir(a.out);

  auto reg = stage(kIo, "load registry",
                   [&] { return ConstantsRegistry::from_file(a.registry, a.rb_mass); });
  auto budget = stage(kIo, "load budget", [&] { return ErrorBudget::from_file(a.budget); });
  auto qed = stage(kIo, "load qed", [&] { return QedSeries::from_file(a.qed); });

  SpectrumSet set;
  std::uint64_t seed_used = 0;
  if (!a.centers.empty()) {
    auto manifest =
        stage(kIo, "load centers", [&] { return io::load_spectrum_set_manifest(a.centers); });
    if (manifest.has_spectra)
      throw StageFailure{kValidation, "pipeline --centers expects injected centers, not spectra"};
    set = assemble_set(manifest);
  } else {
    auto base = stage(kValidation, "config", [&] { return io::load_config(a.config); });
    double span = io::load_span_hz(a.config, 2000.0);
    auto world = stage(kValidation, "world", [&] { return io::load_world(a.world); });
    if (a.seed) world.rng_seed = *a.seed;
    seed_used = world.rng_seed;
    auto sim = stage(kSimulate, "simulate",
                     [&] { return simulate_four_spectra(world, base, span); });
    set.label = "pipeline run";
    for (int i = 0; i < 4; ++i) {
      stage(kIo, "write spectra", [&] {
        io::save_spectrum(sim[i], dir / (std::string(kSpectrumNames[i]) + ".csv"),
                          dir / (std::string(kSpectrumNames[i]) + ".json"));
        return 0;
      });
      set.entries[i].config = sim[i].config;
      set.entries[i].fit = stage(kFit, "fit", [&] { return fit_central_fringe(sim[i]); });
      io::save_fit(set.entries[i].fit, dir / (std::string(kSpectrumNames[i]) + "_fit.json"));
      if (!set.entries[i].fit.converged)
        throw StageFailure{kFit, "fit: spectrum " + std::string(kSpectrumNames[i]) +
                                     " did not converge: " + set.entries[i].fit.status};
    }
  }

  auto result = stage(kReduce, "reduce", [&] { return reduce_set(set); });
  auto cancel = stage(kReduce, "reduce", [&] { return cancellation_report(set); });
  io::save_reduction(result, cancel, dir / "reduction.json");

  auto rec = stage(kConstants, "constants", [&] {
    Quantity alpha_inv_raw = alpha_inv_from_h_over_m(result.h_over_m, reg.ar_rb(), reg);
    // The budget's statistical line stands in for the campaign statistics,
    // so the corrected value starts from the bare central value.
    Quantity alpha_inv_final =
        a.no_budget ? alpha_inv_raw
                    : apply_budget(Quantity(alpha_inv_raw.value, 0.0, "1"), budget);
    Quantity h_over_mu = h_over_mu_from_alpha_inv(alpha_inv_final, reg);
    Quantity nah = na_h(h_over_mu, reg);
    auto ae = compare_a_e(alpha_inv_final, qed);
    return json{{"label", set.label},
                {"h_over_m_rb", quantity_json(result.h_over_m)},
                {"hbar_over_m_rb", quantity_json(result.hbar_over_m)},
                {"alpha_inv_raw_statistical", quantity_json(alpha_inv_raw)},
                {"budget_applied", !a.no_budget},
                {"budget_total_uncertainty_1e10", a.no_budget ? 0.0 : budget.total_uncertainty()},
                {"alpha_inv", quantity_json(alpha_inv_final)},
                {"h_over_mu", quantity_json(h_over_mu)},
                {"na_h", quantity_json(nah)},
                {"a_e_theory", quantity_json(ae.a_e_theory)},
                {"a_e_experiment", quantity_json(ae.a_e_experiment)},
                {"a_e_difference", quantity_json(ae.difference)},
                {"cancellation",
                 json{{"doppler_term", quantity_json(cancel.doppler_term)},
                      {"gravity_term", quantity_json(cancel.gravity_term)},
                      {"common_bias", quantity_json(cancel.common_bias)}}},
                {"registry_label", reg.source_label()}};
  });
  write_json_file(rec, dir / "determination.json");
  write_manifest("pipeline",
                 {a.config, a.world, a.registry, a.budget, a.qed, a.centers}, seed_used, dir);
  std::cout << "alpha^-1 = " << rec["alpha_inv"]["value"].get<double>() << " +- "
            << rec["alpha_inv"]["sigma"].get<double>() << '\n';
  return kOk;
}

// -------------------------------------------------------------- montecarlo

struct MonteCarloArgs {
  std::string config, world, out;
  std::optional<std::uint64_t> seed;
  int runs = 100, max_lag = 20, threads = 1;
};

int cmd_montecarlo(const MonteCarloArgs& a) {
  auto base = stage(kValidation, "config", [&] { return io::load_config(a.config); });
  double span = io::load_span_hz(a.config, 2000.0);
  auto world = stage(kValidation, "world", [&] { return io::load_world(a.world); });
  if (a.seed) world.rng_seed = *a.seed;

  std::vector<Quantity> results(a.runs);
  auto run_one = [&](int r) {
    WorldTruth w = world;
    w.rng_seed = derive_seed(world.rng_seed, static_cast<std::uint64_t>(r));
    auto sim = simulate_four_spectra(w, base, span);
    SpectrumSet set;
    set.label = "mc run " + std::to_string(r);
    for (int i = 0; i < 4; ++i) {
      set.entries[i].config = sim[i].config;
      set.entries[i].fit = fit_central_fringe(sim[i]);
      if (!set.entries[i].fit.converged)
        throw FitError("run " + std::to_string(r) + ": unconverged fit");
    }
    return reduce_set(set).h_over_m;
  };

  stage(kSimulate, "monte carlo", [&] {
    if (a.threads <= 1) {
      for (int r = 0; r < a.runs; ++r) results[r] = run_one(r);
    } else {
      // Parallel over run indices; the merge is by index, so the output is
      // independent of scheduling.
      std::atomic<int> next{0};
      auto worker = [&] {
        for (int r = next.fetch_add(1); r < a.runs; r = next.fetch_add(1)) results[r] = run_one(r);
      };
      std::vector<std::thread> pool;
      for (int t = 0; t < a.threads; ++t) pool.emplace_back(worker);
      for (auto& t : pool) t.join();
    }
    return 0;
  });

  fs::path dir = ensure_dir(a.out);
  io::save_series(results, dir / "series.json");
  auto stats = stage(kValidation, "series stats", [&] {
    return series_stats(std::span<const Quantity>(results), a.max_lag);
  });
  io::save_series_stats(stats, dir / "series_stats.json");
  io::save_acf_csv(stats, dir / "acf.csv");

  // Scatter vs reported-sigma comparison (empirical coverage diagnostic).
  double mean = 0.0;
  for (const auto& q : results) mean += q.value;
  mean /= a.runs;
  double var = 0.0, mean_sigma = 0.0;
  for (const auto& q : results) {
    var += (q.value - mean) * (q.value - mean);
    mean_sigma += q.sigma;
  }
  var /= (a.runs - 1);
  mean_sigma /= a.runs;
  write_json_file(json{{"runs", a.runs},
                       {"empirical_spread", std::sqrt(var)},
                       {"mean_reported_sigma", mean_sigma},
                       {"coverage_ratio", std::sqrt(var) / mean_sigma},
                       {"chi2_per_dof", stats.chi2_per_dof}},
                  dir / "coverage.json");
  write_manifest("montecarlo", {a.config, a.world}, world.rng_seed, dir);
  std::cout << "coverage ratio = " << std::sqrt(var) / mean_sigma
            << ", chi2/(n-1) = " << stats.chi2_per_dof << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"photon-recoil h/m pipeline: simulate, fit, reduce, budget, constants"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  SimulateArgs sim;
  auto* csim = app.add_subcommand("simulate", "synthesize the four-spectrum set of one run");
  csim->add_option("--config", sim.config, "interferometer config JSON")->required();
  csim->add_option("--world", sim.world, "world truth JSON")->required();
  csim->add_option("--seed", sim.seed, "override the world RNG seed");
  csim->add_option("--label", sim.label, "set label");
  csim->add_option("--out", sim.out, "output directory")->required();

  FitArgs fit;
  auto* cfit = app.add_subcommand("fit", "fit the central fringe of one spectrum");
  cfit->add_option("--spectrum", fit.spectrum, "spectrum CSV")->required();
  cfit->add_option("--sidecar", fit.sidecar, "sidecar JSON (default: CSV with .json)");
  cfit->add_option("--guess", fit.guess, "initial center guess in Hz");
  cfit->add_flag("--fit-envelope", fit.fit_envelope, "also fit the envelope width");
  cfit->add_option("--out", fit.out, "output directory")->required();

  std::string set_path, reduce_out;
  auto* cred = app.add_subcommand("reduce", "reduce a four-spectrum set to h/m");
  cred->add_option("--set", set_path, "spectrum-set manifest JSON")->required();
  cred->add_option("--out", reduce_out, "output directory")->required();

  BudgetArgs bud;
  bud.budget = default_file("error_budget.json");
  auto* cbud = app.add_subcommand("budget", "print the error budget; optionally apply it");
  cbud->add_option("--budget", bud.budget, "budget JSON");
  cbud->add_option("--raw", bud.raw, "raw alpha^-1 to correct");
  cbud->add_option("--raw-sigma", bud.raw_sigma, "sigma of the raw value");
  cbud->add_flag("--invert", bud.invert, "flip the correction direction");
  cbud->add_option("--out", bud.out, "output directory");

  AlphaArgs alpha;
  alpha.registry = default_file("constants_codata2010.json");
  auto* calpha = app.add_subcommand("alpha", "convert h/m to alpha^-1, h/m_u and N_A h");
  calpha->add_option("--h-over-m", alpha.h_over_m, "measured h/m in m^2 s^-1")->required();
  calpha->add_option("--h-over-m-sigma", alpha.sigma, "sigma of h/m");
  calpha->add_option("--species", alpha.species, "rb, cs or u")
      ->check(CLI::IsMember({"rb", "cs", "u"}));
  calpha->add_option("--registry", alpha.registry, "constants registry JSON");
  calpha->add_option("--rb-mass", alpha.rb_mass, "bradley1999, mount2010 or mean");
  calpha->add_option("--out", alpha.out, "output directory");

  AeArgs ae;
  ae.qed = default_file("qed_ahkn2012.json");
  auto* cae = app.add_subcommand("ae", "electron moment anomaly from the QED series");
  cae->add_option("--alpha-inv", ae.alpha_inv, "alpha^-1 input")->required();
  cae->add_option("--alpha-inv-sigma", ae.sigma, "sigma of alpha^-1");
  cae->add_option("--qed", ae.qed, "QED coefficients JSON");
  cae->add_flag("--no-extra", ae.no_extra, "report the series-only value too");
  cae->add_option("--out", ae.out, "output directory");

  std::string dets_path = default_file("determinations.json"), compare_out;
  auto* ccmp = app.add_subcommand("compare", "pairwise comparison of determinations");
  ccmp->add_option("--determinations", dets_path, "determinations JSON");
  ccmp->add_option("--out", compare_out, "output directory")->required();

  std::string series_path, acf_out;
  int max_lag = 20;
  auto* cacf = app.add_subcommand("acf", "series statistics and autocorrelation");
  cacf->add_option("--series", series_path, "series JSON")->required();
  cacf->add_option("--max-lag", max_lag, "largest autocorrelation lag");
  cacf->add_option("--out", acf_out, "output directory")->required();

  PipelineArgs pipe;
  pipe.registry = default_file("constants_codata2010.json");
  pipe.budget = default_file("error_budget.json");
  pipe.qed = default_file("qed_ahkn2012.json");
  auto* cpipe = app.add_subcommand("pipeline", "simulate -> fit -> reduce -> budget -> constants");
  cpipe->add_option("--config", pipe.config, "interferometer config JSON");
  cpipe->add_option("--world", pipe.world, "world truth JSON");
  cpipe->add_option("--seed", pipe.seed, "override the world RNG seed");
  cpipe->add_option("--registry", pipe.registry, "constants registry JSON");
  cpipe->add_option("--budget", pipe.budget, "budget JSON");
  cpipe->add_option("--qed", pipe.qed, "QED coefficients JSON");
  cpipe->add_option("--centers", pipe.centers,
                    "spectrum-set manifest with injected centers (skips simulate+fit)");
  cpipe->add_option("--rb-mass", pipe.rb_mass, "bradley1999, mount2010 or mean");
  cpipe->add_flag("--no-budget", pipe.no_budget, "statistical-only uncertainty");
  cpipe->add_option("--out", pipe.out, "output directory")->required();

  MonteCarloArgs mc;
  auto* cmc = app.add_subcommand("montecarlo", "batch of seeded end-to-end determinations");
  cmc->add_option("--config", mc.config, "interferometer config JSON")->required();
  cmc->add_option("--world", mc.world, "world truth JSON")->required();
  cmc->add_option("--seed", mc.seed, "override the world RNG seed");
  cmc->add_option("--runs", mc.runs, "number of runs")->check(CLI::PositiveNumber);
  cmc->add_option("--max-lag", mc.max_lag, "largest autocorrelation lag");
  cmc->add_option("--threads", mc.threads, "worker threads")->check(CLI::PositiveNumber);
  cmc->add_option("--out", mc.out, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    std::cout << std::setprecision(15);
  if (csim->parsed()) return cmd_simulate(sim);
    if (cfit->parsed()) return cmd_fit(fit);
    if (cred->parsed()) return cmd_reduce(set_path, reduce_out);
    if (cbud->parsed()) return cmd_budget(bud);
    if (calpha->parsed()) return cmd_alpha(alpha);
    if (cae->parsed()) return cmd_ae(ae);
    if (ccmp->parsed()) return cmd_compare(dets_path, compare_out);
    if (cacf->parsed()) return cmd_acf(series_path, max_lag, acf_out);
    if (cpipe->parsed()) return cmd_pipeline(pipe);
    if (cmc->parsed()) return cmd_montecarlo(mc);
  } catch (const StageFailure& f) {
    std::cerr << "error (" << f.code << ") " << f.message << '\n';
    return f.code;
  } catch (const UnitError& e) {
    std::cerr << "unit error: " << e.what() << '\n';
    return kValidation;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kValidation;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  }
  return kOk;
}
