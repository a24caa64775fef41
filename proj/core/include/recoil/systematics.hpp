#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "recoil/quantity.hpp"
#include "recoil/registry.hpp"

namespace recoil {

/// Gaussian-beam geometry seen by the atoms.
struct BeamGeometry {
  double k = 0.0;                 // m^-1
  double waist = 0.0;             // m; +infinity = plane wave
  double cloud_radius = 0.0;      // m
  double curvature_radius = 0.0;  // m; +/-infinity = flat wavefront

  void validate() const;
};

/// Effective wave-vector from the axial phase gradient of a Gaussian beam:
/// k_eff = k - (2/k) [1/w^2 - r^2/w^4 + k^2 r^2 / (4 R^2)].
/// Flat-wavefront and plane-wave limits reduce to k exactly.
double k_effective(const BeamGeometry& geom);

/// Same with a beam-axis misalignment: the projection factor cos(theta)
/// multiplies the result.
double k_effective(const BeamGeometry& geom, double misalignment_angle_rad);

/// How the beam-profile correction lands on alpha^-1. The propagation
/// exponent is not hard-coded: the shift is evaluated numerically through
/// the composed reduction and conversion formulas.
struct WavefrontReport {
  double k_eff_raman_1 = 0.0, k_eff_raman_2 = 0.0, k_eff_bloch = 0.0;
  double rel_shift_raman_1 = 0.0, rel_shift_raman_2 = 0.0, rel_shift_bloch = 0.0;
  double alpha_inv_rel_shift = 0.0;        // d(alpha^-1)/alpha^-1
  double alpha_inv_shift_1e10 = 0.0;       // same, in parts per 1e10
};

WavefrontReport wavefront_report(const BeamGeometry& raman1, const BeamGeometry& raman2,
                                 const BeamGeometry& bloch, const ConstantsRegistry& registry);

/// One line of the systematic-effects table; corrections and
/// uncertainties are relative, in parts per 1e10 on alpha^-1.
struct BudgetLine {
  std::string name;
  double correction = 0.0;
  double uncertainty = 0.0;
};

/// The published-style error budget. The combined systematic line is
/// stored verbatim as given by its source; quadrature_of_lines() offers
/// the recomputed combination for comparison.
struct ErrorBudget {
  std::string label;
  std::vector<BudgetLine> lines;
  BudgetLine global_systematic;  // stored verbatim
  std::optional<double> statistical;
  std::optional<double> external;  // Rydberg constant and mass ratios

  void validate() const;  // unique names, nonnegative uncertainties
  double correction_sum() const;
  double quadrature_of_lines() const;
  /// sqrt(global^2 + statistical^2 + external^2), parts per 1e10.
  double total_uncertainty() const;

  static ErrorBudget from_file(const std::filesystem::path& path);
};

/// corrected = raw * (1 + sum(corrections) * 1e-10), total relative sigma
/// from the verbatim global systematic line, the statistical and the
/// external entries in quadrature. Throws if statistical or external is
/// missing. invert_corrections flips the correction direction (single
/// switch, see budget file docs).
Quantity apply_budget(const Quantity& raw_alpha_inv, const ErrorBudget& budget,
                      bool invert_corrections = false);

/// Aligned text rendering of the budget in the published layout.
std::string format_budget_table(const ErrorBudget& budget);

}  // namespace recoil
