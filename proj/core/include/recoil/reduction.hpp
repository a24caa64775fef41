#pragma once

#include <array>
#include <string>

#include "recoil/fringe.hpp"
#include "recoil/interferometer.hpp"
#include "recoil/quantity.hpp"

namespace recoil {

struct SpectrumSetEntry {
  InterferometerConfig config;
  FringeFit fit;
};

/// The four-configuration record one ratio determination is reduced from.
/// Entries must realize exactly the sign pairs (+,+), (+,-), (-,+), (-,-)
/// of (sign of n_bloch, raman direction), in any order, and share the
/// timing and wave-vector parameters.
struct SpectrumSet {
  std::array<SpectrumSetEntry, 4> entries;
  std::string label;
  std::string timestamp;

  void validate() const;
  const SpectrumSetEntry& entry(int bloch_sign, int raman_sign) const;
};

struct HOverMResult {
  Quantity h_over_m;     // m^2 s^-1
  Quantity hbar_over_m;  // m^2 s^-1; h_over_m = 2 pi * hbar_over_m exactly
  std::string set_label;
};

/// Diagnostics of the sign-scheme solve: the quarter-sum Doppler term,
/// the gravity shift (degenerate with any selection/measurement
/// asymmetry, which shares its signature) and the direction-independent
/// bias that the reduction cancels.
struct CancellationReport {
  Quantity doppler_term;  // Hz
  Quantity gravity_term;  // Hz
  Quantity common_bias;   // Hz
};

/// Quarter-sum reduction: hbar/m = (1/4) sum 2 pi |center| / (2 N k_B (k1+k2))
/// with N the magnitude of the measurement acceleration. Fit uncertainties
/// enter in quadrature (independent spectra). Errors: any unconverged fit,
/// sign-pattern violation, or a |center| below 10x its uncertainty.
HOverMResult reduce_set(const SpectrumSet& set);

CancellationReport cancellation_report(const SpectrumSet& set);

}  // namespace recoil
