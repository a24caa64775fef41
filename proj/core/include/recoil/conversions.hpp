#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "recoil/quantity.hpp"
#include "recoil/registry.hpp"

namespace recoil {

/// One laboratory's result, stored as alpha^-1 with the equivalent
/// h/m_u (mutually consistent through the conversion formulas).
struct Determination {
  std::string label;
  Quantity alpha_inv;  // dimensionless
  Quantity h_over_mu;  // m^2 s^-1
  std::string provenance;
};

struct QedCoefficient {
  int order = 0;
  Quantity a;  // dimensionless
};

/// Externally sourced power-series coefficients for the electron moment
/// anomaly, plus the non-series remainder (muon/tau mass dependence, weak
/// and hadronic contributions) and the reference experimental value.
/// Loaded from a data file; the code never invents coefficient values.
struct QedSeries {
  std::vector<QedCoefficient> coefficients;  // orders 1..k, consecutive
  Quantity extra_term;                        // dimensionless
  Quantity a_e_experiment;                    // dimensionless
  std::string source;

  void validate() const;
  static QedSeries from_file(const std::filesystem::path& path);
};

/// alpha^2 = (2 R_inf / c) (Ar(X) / Ar(e)) (h/m_X); returns alpha^-1 with
/// first-order propagated uncertainty. Unit violations are type errors.
Quantity alpha_inv_from_h_over_m(const Quantity& h_over_m_x, const Quantity& ar_x,
                                 const ConstantsRegistry& registry);

/// h/m_u = alpha^2 c Ar(e) / (2 R_inf).
Quantity h_over_mu_from_alpha_inv(const Quantity& alpha_inv, const ConstantsRegistry& registry);

/// N_A h = (h/m_u) M(12C) / 12, in J s mol^-1.
Quantity na_h(const Quantity& h_over_mu, const ConstantsRegistry& registry);

/// a_e = sum_i A_i (alpha/pi)^i + extra. The alpha uncertainty propagates
/// through the analytic series derivative; coefficient and extra-term
/// uncertainties add in quadrature.
Quantity a_e_theory(const Quantity& alpha_inv, const QedSeries& series,
                    bool include_extra = true);

struct AeComparison {
  Quantity a_e_theory;
  Quantity a_e_experiment;
  Quantity difference;        // experiment - theory
  double sigma_from_alpha = 0.0;  // alpha-only share of the theory uncertainty
};

AeComparison compare_a_e(const Quantity& alpha_inv, const QedSeries& series);

struct PairwiseDifference {
  std::string label_a, label_b;
  double alpha_inv_diff = 0.0, alpha_inv_combined_sigma = 0.0, alpha_inv_n_sigma = 0.0;
  double h_over_mu_diff = 0.0, h_over_mu_combined_sigma = 0.0, h_over_mu_n_sigma = 0.0;
};

/// Plot-ready (label, value, sigma) row for one axis of the comparison.
struct LadderRow {
  std::string label;
  double value = 0.0, sigma = 0.0;
};

struct ComparisonReport {
  std::vector<PairwiseDifference> pairs;
  std::vector<LadderRow> alpha_inv_rows;
  std::vector<LadderRow> h_over_mu_rows;
};

ComparisonReport compare_determinations(std::span<const Determination> dets);

/// Builds a mutually consistent record from alpha^-1.
Determination make_determination(std::string label, const Quantity& alpha_inv,
                                 const ConstantsRegistry& registry, std::string provenance);

/// Checks the alpha^-1 <-> h/m_u consistency invariant (default tolerance
/// accommodates values round-tripped through published decimal digits).
void check_consistency(const Determination& det, const ConstantsRegistry& registry,
                       double rel_tolerance = 1e-10);

std::vector<Determination> load_determinations(const std::filesystem::path& path);

}  // namespace recoil
