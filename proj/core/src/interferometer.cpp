#include "recoil/interferometer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "recoil/errors.hpp"
#include "recoil/fringe_model.hpp"
#include "recoil/rng.hpp"

namespace recoil {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

void InterferometerConfig::validate() const {
  if (n_elev_1 != -n_elev_2)
    throw ValidationError("elevator oscillations must cancel (n_elev_1 = -n_elev_2)");
  if (raman_direction != 1 && raman_direction != -1)
    throw ValidationError("raman_direction must be +1 or -1");
  if (!(k1 > 0.0) || !(k2 > 0.0) || !(k_bloch > 0.0))
    throw ValidationError("wave-vectors k1, k2, k_bloch must be > 0");
  if (!(t_ramsey > 0.0)) throw ValidationError("t_ramsey must be > 0");
  if (!(tau_pulse > 0.0)) throw ValidationError("tau_pulse must be > 0");
  if (t_sel_meas < 0.0) throw ValidationError("t_sel_meas must be >= 0");
  if (contrast < 0.0 || contrast > 1.0)
    throw ValidationError("contrast must be in [0, 1]");
  if (points_per_spectrum < 10)
    throw ValidationError("points_per_spectrum must be >= 10");
}

void WorldTruth::validate() const {
  if (!(h_over_m_true > 0.0)) throw ValidationError("h_over_m_true must be > 0");
  if (noise_amplitude < 0.0) throw ValidationError("noise_amplitude must be >= 0");
}

void Spectrum::validate() const {
  config.validate();
  if (static_cast<int>(points.size()) != config.points_per_spectrum)
    throw ValidationError("spectrum point count differs from config.points_per_spectrum");
  double prev = -std::numeric_limits<double>::infinity();
  for (const auto& p : points) {
    if (!(p.delta_hz > prev)) throw ValidationError("spectrum deltas must be strictly increasing");
    if (p.ratio < 0.0 || p.ratio > 1.0) throw ValidationError("spectrum ratios must lie in [0, 1]");
    prev = p.delta_hz;
  }
}

double doppler_shift(double h_over_m, const InterferometerConfig& config) {
  // Velocity after N oscillations changes by 2 N hbar k_B / m; the Raman
  // pair reads it with sensitivity (k1 + k2) / (2 pi) in ordinary frequency.
  return h_over_m / kTwoPi * 2.0 * config.n_bloch * config.k_bloch * (config.k1 + config.k2) /
         kTwoPi;
}

double gravity_shift(double g, const InterferometerConfig& config) {
  return (config.k1 + config.k2) * g * config.t_sel_meas / kTwoPi;
}

double true_center(const WorldTruth& world, const InterferometerConfig& config) {
  config.validate();
  double doppler = doppler_shift(world.h_over_m_true, config);
  double gravity = gravity_shift(world.g, config);
  return config.raman_direction * (doppler + gravity) + world.bias_direction_independent +
         config.raman_direction * world.bias_sel_meas_asymmetry;
}

double fringe_probability(double delta_hz, double center_hz, const InterferometerConfig& config) {
  config.validate();
  FringeModel model{config.t_ramsey, config.tau_pulse};
  return model.eval(delta_hz - center_hz, 0.5, config.contrast);
}

Spectrum simulate_spectrum(const WorldTruth& world, const InterferometerConfig& config,
                           double span_hz) {
  world.validate();
  config.validate();
  if (!(span_hz >= 3.0 * config.fringe_period()))
    throw ValidationError("span must cover at least 3 fringe periods");

  double center = true_center(world, config);
  Rng rng(world.rng_seed);
  // Window is centered on a coarse guess that is off by up to one fringe,
  // so downstream fitting has to identify the central fringe itself.
  double window_center = center + rng.uniform(-1.0, 1.0) * config.fringe_period();

  FringeModel model{config.t_ramsey, config.tau_pulse};
  int n = config.points_per_spectrum;
  Spectrum spec;
  spec.config = config;
  spec.points.resize(n);
  int clipped = 0;
  for (int i = 0; i < n; ++i) {
    double delta = window_center - span_hz / 2.0 + span_hz * i / (n - 1);
    double ratio = model.eval(delta - center, 0.5, config.contrast);
    if (world.noise_amplitude > 0.0) ratio += world.noise_amplitude * rng.normal();
    if (ratio < 0.0 || ratio > 1.0) {
      ratio = std::clamp(ratio, 0.0, 1.0);
      ++clipped;
    }
    spec.points[i] = {delta, ratio};
  }
  spec.meta["span_hz"] = std::to_string(span_hz);
  spec.meta["sign_pattern"] = sign_pattern_label(config);
  if (clipped > 0) spec.meta["clipped_points"] = std::to_string(clipped);
  return spec;
}

std::array<InterferometerConfig, 4> four_spectrum_configs(const InterferometerConfig& base) {
  base.validate();
  std::array<InterferometerConfig, 4> out{base, base, base, base};
  const int n = std::abs(base.n_bloch);
  const int e = std::abs(base.n_elev_1);
  struct SignPair {
    int bloch, raman;
  };
  constexpr SignPair kPairs[4] = {{+1, +1}, {+1, -1}, {-1, +1}, {-1, -1}};
  for (int i = 0; i < 4; ++i) {
    out[i].n_bloch = kPairs[i].bloch * n;
    out[i].raman_direction = kPairs[i].raman;
    out[i].n_elev_1 = -kPairs[i].bloch * e;
    out[i].n_elev_2 = kPairs[i].bloch * e;
  }
  return out;
}

std::array<Spectrum, 4> simulate_four_spectra(const WorldTruth& world,
                                              const InterferometerConfig& base, double span_hz) {
  auto configs = four_spectrum_configs(base);
  std::array<Spectrum, 4> out;
  for (int i = 0; i < 4; ++i) {
    WorldTruth w = world;
    w.rng_seed = derive_seed(world.rng_seed, static_cast<std::uint64_t>(i));
    out[i] = simulate_spectrum(w, configs[i], span_hz);
  }
  return out;
}

std::string sign_pattern_label(const InterferometerConfig& config) {
  std::string s = "(";
  s += config.n_bloch >= 0 ? '+' : '-';
  s += ',';
  s += config.raman_direction >= 0 ? '+' : '-';
  s += ')';
  return s;
}

}  // namespace recoil
