#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace recoil {

/// All physical and timing parameters of one measurement configuration.
/// Signs follow the four-column layout: the measurement acceleration
/// n_bloch and the Raman beam direction each flip independently.
struct InterferometerConfig {
  int n_bloch = 500;        // Bloch oscillations of the measurement acceleration, signed
  int n_elev_1 = -300;      // elevator: accelerate ...
  int n_elev_2 = 300;       // ... then stop; must return atoms to rest
  int raman_direction = 1;  // +1 or -1
  double t_ramsey = 10e-3;  // s, spacing of each pi/2 pulse pair
  double tau_pulse = 600e-6;   // s, pi/2 pulse length (sets the envelope width)
  double t_sel_meas = 19e-3;   // s, selection-to-measurement interval
  double k1 = 0.0;             // m^-1, Raman wave-vectors
  double k2 = 0.0;
  double k_bloch = 0.0;        // m^-1
  double contrast = 0.7;       // fringe contrast C in (0, 1]
  int points_per_spectrum = 100;

  void validate() const;  // throws ValidationError

  /// Fringe period 1/T_R in Hz.
  double fringe_period() const { return 1.0 / t_ramsey; }
};

/// Ground truth for the simulator: the ratio being measured plus the
/// nuisances the measurement protocol is built to cancel.
struct WorldTruth {
  double h_over_m_true = 0.0;             // m^2 s^-1, > 0
  double g = 9.81;                        // m s^-2
  double bias_direction_independent = 0;  // Hz, common to both Raman directions
  double bias_sel_meas_asymmetry = 0;     // Hz, selection/measurement asymmetry
  double noise_amplitude = 0.0;           // fractional population noise per point
  std::uint64_t rng_seed = 0;

  void validate() const;
};

struct SpectrumPoint {
  double delta_hz = 0.0;  // frequency difference between the two pulse pairs
  double ratio = 0.0;     // N2/(N1+N2), in [0, 1]
};

/// A sampled fringe pattern plus the configuration that produced it.
struct Spectrum {
  std::vector<SpectrumPoint> points;  // deltas strictly increasing
  InterferometerConfig config;
  std::map<std::string, std::string> meta;

  void validate() const;
  double delta_min() const { return points.front().delta_hz; }
  double delta_max() const { return points.back().delta_hz; }
};

/// Center frequency delta_sel - delta_meas (Hz) at which the final fringe
/// sits: raman_direction * (signed Doppler term + gravity shift) plus the
/// injected parasitic shifts. The axis convention is chosen so that the
/// positive-n_bloch configurations carry the larger magnitude.
double true_center(const WorldTruth& world, const InterferometerConfig& config);

/// Doppler term alone (signed by n_bloch), in Hz.
double doppler_shift(double h_over_m, const InterferometerConfig& config);

/// Gravity shift (k1+k2) g T / (2 pi), in Hz.
double gravity_shift(double g, const InterferometerConfig& config);

/// Transition probability at detuning delta for a fringe centered at
/// center: 0.5 * [1 - C * E((delta-center) tau) * cos(2 pi (delta-center) T_R)]
/// with a sinc^2 envelope E, E(0) = 1.
double fringe_probability(double delta_hz, double center_hz, const InterferometerConfig& config);

/// Samples points_per_spectrum points uniformly over a window of width
/// span_hz whose center is offset from the true center by up to one fringe
/// (drawn from the seeded generator), adds Gaussian ratio noise, clips to
/// [0, 1] (clip count flagged in meta). Pure function of its arguments.
Spectrum simulate_spectrum(const WorldTruth& world, const InterferometerConfig& config,
                           double span_hz);

/// The four sign configurations of one determination, in the fixed order
/// (+,+), (+,-), (-,+), (-,-) of (sign of n_bloch, raman direction).
std::array<InterferometerConfig, 4> four_spectrum_configs(const InterferometerConfig& base);

/// One spectrum per sign configuration, with per-spectrum seeds derived
/// deterministically from world.rng_seed and the configuration index.
std::array<Spectrum, 4> simulate_four_spectra(const WorldTruth& world,
                                              const InterferometerConfig& base, double span_hz);

/// Short label for a sign pair, e.g. "(+,+)".
std::string sign_pattern_label(const InterferometerConfig& config);

}  // namespace recoil
