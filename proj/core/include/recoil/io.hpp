#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "recoil/conversions.hpp"
#include "recoil/fringe.hpp"
#include "recoil/interferometer.hpp"
#include "recoil/quantity.hpp"
#include "recoil/reduction.hpp"
#include "recoil/registry.hpp"
#include "recoil/stats.hpp"
#include "recoil/systematics.hpp"

namespace recoil {

/// Every output directory contains the manifest that produced it; a run
/// is reproducible byte-for-byte from its manifest (no wall-clock state
/// is ever written).
struct RunManifest {
  std::string command;
  std::vector<std::string> config_paths;
  std::uint64_t seed = 0;
  std::string output_dir;
  std::string version;
};

namespace io {

// ---- spectra: CSV with header delta_hz,ratio plus a JSON sidecar ----
void save_spectrum(const Spectrum& spectrum, const std::filesystem::path& csv_path,
                   const std::filesystem::path& sidecar_path);
Spectrum load_spectrum(const std::filesystem::path& csv_path,
                       const std::filesystem::path& sidecar_path);

// ---- configuration and world files (JSON) ----
InterferometerConfig load_config(const std::filesystem::path& path);
void save_config(const InterferometerConfig& config, const std::filesystem::path& path);
/// The simulation file may carry a "span_hz" next to the config block.
double load_span_hz(const std::filesystem::path& config_path, double fallback);
WorldTruth load_world(const std::filesystem::path& path);
void save_world(const WorldTruth& world, const std::filesystem::path& path);

// ---- data files ----
ConstantsRegistry load_registry(const std::filesystem::path& path, std::string_view rb_mass_key);
ErrorBudget load_budget(const std::filesystem::path& path);
QedSeries load_qed_series(const std::filesystem::path& path);
std::vector<Determination> load_determinations_file(const std::filesystem::path& path);
void save_determinations_file(const std::vector<Determination>& dets,
                              const std::filesystem::path& path);

// ---- result records ----
void save_fit(const FringeFit& fit, const std::filesystem::path& path);
FringeFit load_fit(const std::filesystem::path& path);
void save_series_stats(const SeriesStats& stats, const std::filesystem::path& path);
void save_acf_csv(const SeriesStats& stats, const std::filesystem::path& path);
void save_reduction(const HOverMResult& result, const CancellationReport& report,
                    const std::filesystem::path& path);

/// Series of quantities, as written/read by the acf and montecarlo
/// commands: {"values": [{"value":..,"sigma":..,"unit":..}, ...]}.
std::vector<Quantity> load_series(const std::filesystem::path& path);
void save_series(const std::vector<Quantity>& values, const std::filesystem::path& path);

// ---- spectrum-set manifests (input of `reduce`) ----
/// Two entry forms are accepted: {"spectrum": csv, "sidecar": json} or
/// {"config": {...}, "center_hz": v, "center_sigma_hz": s} for injecting
/// already-fitted centers. Paths are resolved relative to the manifest.
struct SpectrumSetManifest {
  std::string label;
  std::string timestamp;
  bool has_spectra = false;
  std::vector<std::pair<std::filesystem::path, std::filesystem::path>> spectra;
  std::vector<SpectrumSetEntry> injected;
};
SpectrumSetManifest load_spectrum_set_manifest(const std::filesystem::path& path);

// ---- run manifests ----
void save_manifest(const RunManifest& manifest, const std::filesystem::path& dir);
RunManifest load_manifest(const std::filesystem::path& path);

}  // namespace io

/// Compiled-in location of the default data files; CLI flags override it.
std::filesystem::path default_data_dir();

}  // namespace recoil
