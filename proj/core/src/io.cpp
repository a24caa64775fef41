#include "recoil/io.hpp"

#include <charconv>
#include <fstream>

#include <nlohmann/json.hpp>

#include "recoil/errors.hpp"
#include "recoil/version.hpp"

namespace recoil {

namespace {

using json = nlohmann::ordered_json;

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DataError("bad JSON in '" + path.string() + "': " + e.what());
  }
  return j;
}

void write_json(const json& j, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
}

std::string shortest(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

json quantity_to_json(const Quantity& q) {
  return json{{"value", q.value}, {"sigma", q.sigma}, {"unit", q.unit.tag()}};
}

Quantity quantity_from_json(const json& j) {
  return Quantity(j.at("value").get<double>(), j.at("sigma").get<double>(),
                  j.value("unit", std::string("1")));
}

json config_to_json(const InterferometerConfig& c) {
  return json{{"n_bloch", c.n_bloch},
              {"n_elev_1", c.n_elev_1},
              {"n_elev_2", c.n_elev_2},
              {"raman_direction", c.raman_direction},
              {"t_ramsey_s", c.t_ramsey},
              {"tau_pulse_s", c.tau_pulse},
              {"t_sel_meas_s", c.t_sel_meas},
              {"k1_per_m", c.k1},
              {"k2_per_m", c.k2},
              {"k_bloch_per_m", c.k_bloch},
              {"contrast", c.contrast},
              {"points_per_spectrum", c.points_per_spectrum}};
}

InterferometerConfig config_from_json(const json& j) {
  InterferometerConfig c;
  c.n_bloch = j.at("n_bloch").get<int>();
  c.n_elev_1 = j.at("n_elev_1").get<int>();
  c.n_elev_2 = j.at("n_elev_2").get<int>();
  c.raman_direction = j.at("raman_direction").get<int>();
  c.t_ramsey = j.at("t_ramsey_s").get<double>();
  c.tau_pulse = j.at("tau_pulse_s").get<double>();
  c.t_sel_meas = j.at("t_sel_meas_s").get<double>();
  c.k1 = j.at("k1_per_m").get<double>();
  c.k2 = j.at("k2_per_m").get<double>();
  c.k_bloch = j.at("k_bloch_per_m").get<double>();
  c.contrast = j.value("contrast", 0.7);
  c.points_per_spectrum = j.at("points_per_spectrum").get<int>();
  c.validate();
  return c;
}

const json& config_block(const json& j) {
  return j.contains("config") ? j.at("config") : j;
}

}  // namespace

namespace io {

void save_spectrum(const Spectrum& spectrum, const std::filesystem::path& csv_path,
                   const std::filesystem::path& sidecar_path) {
  spectrum.validate();
  std::ofstream out(csv_path);
  if (!out) throw DataError("cannot write '" + csv_path.string() + "'");
  out << "delta_hz,ratio\n";
  for (const auto& p : spectrum.points)
    out << shortest(p.delta_hz) << ',' << shortest(p.ratio) << '\n';

  json side{{"config", config_to_json(spectrum.config)}, {"meta", spectrum.meta}};
  write_json(side, sidecar_path);
}

Spectrum load_spectrum(const std::filesystem::path& csv_path,
                       const std::filesystem::path& sidecar_path) {
  json side = read_json(sidecar_path);
  Spectrum spec;
  spec.config = config_from_json(side.at("config"));
  if (side.contains("meta"))
    spec.meta = side.at("meta").get<std::map<std::string, std::string>>();

  std::ifstream in(csv_path);
  if (!in) throw DataError("cannot open '" + csv_path.string() + "'");
  std::string line;
  if (!std::getline(in, line) || line != "delta_hz,ratio")
    throw DataError("'" + csv_path.string() + "': expected header 'delta_hz,ratio'");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto comma = line.find(',');
    if (comma == std::string::npos)
      throw DataError("'" + csv_path.string() + "': malformed row '" + line + "'");
    SpectrumPoint p;
    auto r1 = std::from_chars(line.data(), line.data() + comma, p.delta_hz);
    auto r2 = std::from_chars(line.data() + comma + 1, line.data() + line.size(), p.ratio);
    if (r1.ec != std::errc{} || r2.ec != std::errc{})
      throw DataError("'" + csv_path.string() + "': malformed row '" + line + "'");
    spec.points.push_back(p);
  }
  spec.validate();
  return spec;
}

InterferometerConfig load_config(const std::filesystem::path& path) {
  return config_from_json(config_block(read_json(path)));
}

void save_config(const InterferometerConfig& config, const std::filesystem::path& path) {
  write_json(config_to_json(config), path);
}

double load_span_hz(const std::filesystem::path& config_path, double fallback) {
  json j = read_json(config_path);
  return j.value("span_hz", fallback);
}

WorldTruth load_world(const std::filesystem::path& path) {
  json j = read_json(path);
  WorldTruth w;
  w.h_over_m_true = j.at("h_over_m_true").get<double>();
  w.g = j.value("g", 9.81);
  w.bias_direction_independent = j.value("bias_direction_independent_hz", 0.0);
  w.bias_sel_meas_asymmetry = j.value("bias_sel_meas_asymmetry_hz", 0.0);
  w.noise_amplitude = j.value("noise_amplitude", 0.0);
  w.rng_seed = j.value("rng_seed", std::uint64_t{0});
  w.validate();
  return w;
}

void save_world(const WorldTruth& world, const std::filesystem::path& path) {
  write_json(json{{"h_over_m_true", world.h_over_m_true},
                  {"g", world.g},
                  {"bias_direction_independent_hz", world.bias_direction_independent},
                  {"bias_sel_meas_asymmetry_hz", world.bias_sel_meas_asymmetry},
                  {"noise_amplitude", world.noise_amplitude},
                  {"rng_seed", world.rng_seed}},
             path);
}

ConstantsRegistry load_registry(const std::filesystem::path& path, std::string_view rb_mass_key) {
  json j = read_json(path);
  std::vector<ConstantRecord> records;
  for (const auto& r : j.at("constants")) {
    ConstantRecord rec;
    rec.name = r.at("name").get<std::string>();
    rec.quantity = quantity_from_json(r);
    rec.source = r.value("source", "");
    records.push_back(std::move(rec));
  }
  return ConstantsRegistry::from_records(std::move(records),
                                         j.value("label", std::string("unlabelled")), rb_mass_key);
}

ErrorBudget load_budget(const std::filesystem::path& path) {
  json j = read_json(path);
  ErrorBudget b;
  b.label = j.value("label", std::string("error budget"));
  for (const auto& l : j.at("lines")) {
    BudgetLine line;
    line.name = l.at("name").get<std::string>();
    line.correction = l.value("correction", 0.0);
    line.uncertainty = l.at("uncertainty").get<double>();
    b.lines.push_back(std::move(line));
  }
  const auto& g = j.at("global_systematic");
  b.global_systematic = {"Global systematic effects", g.value("correction", 0.0),
                         g.at("uncertainty").get<double>()};
  if (!j.contains("statistical"))
    throw DataError("budget file is missing the 'statistical' entry");
  if (!j.contains("external"))
    throw DataError("budget file is missing the 'external' entry");
  b.statistical = j.at("statistical").get<double>();
  b.external = j.at("external").get<double>();
  b.validate();
  return b;
}

QedSeries load_qed_series(const std::filesystem::path& path) {
  json j = read_json(path);
  QedSeries s;
  s.source = j.value("source", "");
  for (const auto& c : j.at("coefficients")) {
    QedCoefficient qc;
    qc.order = c.at("order").get<int>();
    qc.a = Quantity(c.at("value").get<double>(), c.at("sigma").get<double>(), "1");
    s.coefficients.push_back(std::move(qc));
  }
  const auto& e = j.at("extra_term");
  s.extra_term = Quantity(e.at("value").get<double>(), e.at("sigma").get<double>(), "1");
  const auto& a = j.at("a_e_experiment");
  s.a_e_experiment = Quantity(a.at("value").get<double>(), a.at("sigma").get<double>(), "1");
  s.validate();
  return s;
}

std::vector<Determination> load_determinations_file(const std::filesystem::path& path) {
  json j = read_json(path);
  std::vector<Determination> out;
  for (const auto& d : j.at("determinations")) {
    Determination det;
    det.label = d.at("label").get<std::string>();
    det.alpha_inv = quantity_from_json(d.at("alpha_inv"));
    det.h_over_mu = quantity_from_json(d.at("h_over_mu")).with_tag("m^2 s^-1");
    det.provenance = d.value("provenance", "");
    out.push_back(std::move(det));
  }
  return out;
}

void save_determinations_file(const std::vector<Determination>& dets,
                              const std::filesystem::path& path) {
  json arr = json::array();
  for (const auto& d : dets)
    arr.push_back(json{{"label", d.label},
                       {"alpha_inv", quantity_to_json(d.alpha_inv)},
                       {"h_over_mu", quantity_to_json(d.h_over_mu)},
                       {"provenance", d.provenance}});
  write_json(json{{"determinations", arr}}, path);
}

void save_fit(const FringeFit& fit, const std::filesystem::path& path) {
  write_json(json{{"center", quantity_to_json(fit.center)},
                  {"contrast", fit.contrast},
                  {"offset", fit.offset},
                  {"envelope_tau_s", fit.envelope_tau},
                  {"residual_rms", fit.residual_rms},
                  {"n_points", fit.n_points},
                  {"converged", fit.converged},
                  {"iterations", fit.iterations},
                  {"ssr", fit.ssr},
                  {"status", fit.status}},
             path);
}

FringeFit load_fit(const std::filesystem::path& path) {
  json j = read_json(path);
  FringeFit f;
  f.center = quantity_from_json(j.at("center"));
  f.contrast = j.at("contrast").get<double>();
  f.offset = j.at("offset").get<double>();
  f.envelope_tau = j.value("envelope_tau_s", 0.0);
  f.residual_rms = j.at("residual_rms").get<double>();
  f.n_points = j.at("n_points").get<int>();
  f.converged = j.at("converged").get<bool>();
  f.iterations = j.value("iterations", 0);
  f.ssr = j.value("ssr", 0.0);
  f.status = j.value("status", "");
  return f;
}

void save_series_stats(const SeriesStats& stats, const std::filesystem::path& path) {
  json acf = json::array();
  for (const auto& [lag, v] : stats.acf) acf.push_back(json{{"lag", lag}, {"value", v}});
  write_json(json{{"mean", quantity_to_json(stats.mean)},
                  {"chi2_per_dof", stats.chi2_per_dof},
                  {"n", stats.n},
                  {"one_sigma_band", stats.one_sigma_band},
                  {"two_sigma_band", stats.two_sigma_band},
                  {"acf_defined", stats.acf_defined},
                  {"acf", acf}},
             path);
}

void save_acf_csv(const SeriesStats& stats, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << "lag,value\n";
  for (const auto& [lag, v] : stats.acf) out << lag << ',' << shortest(v) << '\n';
}

void save_reduction(const HOverMResult& result, const CancellationReport& report,
                    const std::filesystem::path& path) {
  write_json(json{{"label", result.set_label},
                  {"h_over_m", quantity_to_json(result.h_over_m)},
                  {"hbar_over_m", quantity_to_json(result.hbar_over_m)},
                  {"diagnostics",
                   json{{"doppler_term", quantity_to_json(report.doppler_term)},
                        {"gravity_term", quantity_to_json(report.gravity_term)},
                        {"common_bias", quantity_to_json(report.common_bias)}}}},
             path);
}

std::vector<Quantity> load_series(const std::filesystem::path& path) {
  json j = read_json(path);
  std::vector<Quantity> out;
  for (const auto& v : j.at("values")) out.push_back(quantity_from_json(v));
  return out;
}

void save_series(const std::vector<Quantity>& values, const std::filesystem::path& path) {
  json arr = json::array();
  for (const auto& q : values) arr.push_back(quantity_to_json(q));
  write_json(json{{"values", arr}}, path);
}

SpectrumSetManifest load_spectrum_set_manifest(const std::filesystem::path& path) {
  json j = read_json(path);
  SpectrumSetManifest m;
  m.label = j.value("label", std::string{});
  m.timestamp = j.value("timestamp", std::string{});
  const auto& entries = j.at("entries");
  if (entries.size() != 4)
    throw DataError("spectrum set manifest must list exactly 4 entries");
  auto base = path.parent_path();
  for (const auto& e : entries) {
    if (e.contains("spectrum")) {
      std::filesystem::path csv = e.at("spectrum").get<std::string>();
      std::filesystem::path side =
          e.contains("sidecar") ? std::filesystem::path(e.at("sidecar").get<std::string>())
                                : std::filesystem::path(csv).replace_extension(".json");
      if (csv.is_relative()) csv = base / csv;
      if (side.is_relative()) side = base / side;
      m.spectra.emplace_back(csv, side);
    } else {
      SpectrumSetEntry entry;
      entry.config = config_from_json(e.at("config"));
      entry.fit.center = Quantity(e.at("center_hz").get<double>(),
                                  e.at("center_sigma_hz").get<double>(), "Hz");
      entry.fit.converged = true;
      entry.fit.n_points = entry.config.points_per_spectrum;
      entry.fit.status = "injected center, no fit performed";
      m.injected.push_back(std::move(entry));
    }
  }
  if (!m.spectra.empty() && !m.injected.empty())
    throw DataError("spectrum set manifest mixes spectrum files and injected centers");
  m.has_spectra = !m.spectra.empty();
  return m;
}

void save_manifest(const RunManifest& manifest, const std::filesystem::path& dir) {
  write_json(json{{"command", manifest.command},
                  {"config_paths", manifest.config_paths},
                  {"seed", manifest.seed},
                  {"output_dir", manifest.output_dir},
                  {"version", manifest.version}},
             dir / "manifest.json");
}

RunManifest load_manifest(const std::filesystem::path& path) {
  json j = read_json(path);
  RunManifest m;
  m.command = j.at("command").get<std::string>();
  m.config_paths = j.at("config_paths").get<std::vector<std::string>>();
  m.seed = j.at("seed").get<std::uint64_t>();
  m.output_dir = j.at("output_dir").get<std::string>();
  m.version = j.at("version").get<std::string>();
  return m;
}

}  // namespace io

std::filesystem::path default_data_dir() {
#ifdef RECOIL_DATA_DIR
  return std::filesystem::path(RECOIL_DATA_DIR);
#else
  return std::filesystem::current_path() / "data";
#endif
}

}  // namespace recoil
