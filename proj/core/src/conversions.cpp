#include "recoil/conversions.hpp"

#include <cmath>
#include <numbers>

#include "recoil/errors.hpp"
#include "recoil/io.hpp"

namespace recoil {

void QedSeries::validate() const {
  if (coefficients.empty()) throw ValidationError("QED series has no coefficients");
  for (size_t i = 0; i < coefficients.size(); ++i) {
    if (coefficients[i].order != static_cast<int>(i) + 1)
      throw ValidationError("QED coefficient orders must be consecutive from 1");
    if (!coefficients[i].a.unit.is_dimensionless())
      throw UnitError("QED coefficients must be dimensionless");
  }
  if (!extra_term.unit.is_dimensionless() || !a_e_experiment.unit.is_dimensionless())
    throw UnitError("QED extra term and experimental value must be dimensionless");
}

QedSeries QedSeries::from_file(const std::filesystem::path& path) {
  return io::load_qed_series(path);
}

Quantity alpha_inv_from_h_over_m(const Quantity& h_over_m_x, const Quantity& ar_x,
                                 const ConstantsRegistry& registry) {
  if (!(h_over_m_x.value > 0.0) || !(ar_x.value > 0.0))
    throw ValidationError("alpha conversion needs positive inputs");
  Quantity two_rinf = scaled(registry.r_infinity(), 2.0);
  Quantity alpha_sq = two_rinf / registry.c() * ar_x / registry.ar_electron() * h_over_m_x;
  if (!alpha_sq.unit.is_dimensionless())
    throw UnitError("alpha^2 composition is not dimensionless: '" + alpha_sq.unit.tag() + "'");
  return inv_sqrt(alpha_sq);
}

Quantity h_over_mu_from_alpha_inv(const Quantity& alpha_inv, const ConstantsRegistry& registry) {
  if (!(alpha_inv.value > 0.0)) throw ValidationError("alpha^-1 must be > 0");
  Quantity alpha_sq = pow_int(alpha_inv, -2);
  Quantity two_rinf = scaled(registry.r_infinity(), 2.0);
  Quantity out = alpha_sq * registry.c() * registry.ar_electron() / two_rinf;
  return out.with_tag("m^2 s^-1");
}

Quantity na_h(const Quantity& h_over_mu, const ConstantsRegistry& registry) {
  Quantity out = h_over_mu * scaled(registry.m_12c(), 1.0 / 12.0);
  return out.with_tag("J s mol^-1");
}

Quantity a_e_theory(const Quantity& alpha_inv, const QedSeries& series, bool include_extra) {
  series.validate();
  if (!(alpha_inv.value > 0.0)) throw ValidationError("alpha^-1 must be > 0");
  double alpha = 1.0 / alpha_inv.value;
  double x = alpha / std::numbers::pi;

  double value = 0.0, deriv_alpha = 0.0, var_coeff = 0.0;
  for (const auto& c : series.coefficients) {
    double xi = std::pow(x, c.order);
    value += c.a.value * xi;
    deriv_alpha += c.order * c.a.value * xi / alpha;
    var_coeff += (c.a.sigma * xi) * (c.a.sigma * xi);
  }
  if (include_extra) {
    value += series.extra_term.value;
    var_coeff += series.extra_term.sigma * series.extra_term.sigma;
  }
  // sigma(alpha) = sigma(alpha_inv) / alpha_inv^2
  double sigma_alpha = alpha_inv.sigma / (alpha_inv.value * alpha_inv.value);
  double from_alpha = deriv_alpha * sigma_alpha;
  return Quantity(value, std::sqrt(from_alpha * from_alpha + var_coeff), Unit::dimensionless());
}

AeComparison compare_a_e(const Quantity& alpha_inv, const QedSeries& series) {
  AeComparison out;
  out.a_e_theory = a_e_theory(alpha_inv, series);
  out.a_e_experiment = series.a_e_experiment;
  out.difference = series.a_e_experiment - out.a_e_theory;

  double alpha = 1.0 / alpha_inv.value;
  double x = alpha / std::numbers::pi;
  double deriv_alpha = 0.0;
  for (const auto& c : series.coefficients)
    deriv_alpha += c.order * c.a.value * std::pow(x, c.order) / alpha;
  out.sigma_from_alpha = deriv_alpha * alpha_inv.sigma / (alpha_inv.value * alpha_inv.value);
  return out;
}

ComparisonReport compare_determinations(std::span<const Determination> dets) {
  if (dets.size() < 2) throw ValidationError("need at least 2 determinations to compare");
  ComparisonReport rep;
  for (const auto& d : dets) {
    rep.alpha_inv_rows.push_back({d.label, d.alpha_inv.value, d.alpha_inv.sigma});
    rep.h_over_mu_rows.push_back({d.label, d.h_over_mu.value, d.h_over_mu.sigma});
  }
  for (size_t i = 0; i < dets.size(); ++i) {
    for (size_t j = i + 1; j < dets.size(); ++j) {
      const auto& a = dets[i];
      const auto& b = dets[j];
      PairwiseDifference p;
      p.label_a = a.label;
      p.label_b = b.label;
      p.alpha_inv_diff = a.alpha_inv.value - b.alpha_inv.value;
      p.alpha_inv_combined_sigma = std::hypot(a.alpha_inv.sigma, b.alpha_inv.sigma);
      p.alpha_inv_n_sigma = p.alpha_inv_combined_sigma > 0.0
                                ? p.alpha_inv_diff / p.alpha_inv_combined_sigma
                                : 0.0;
      p.h_over_mu_diff = a.h_over_mu.value - b.h_over_mu.value;
      p.h_over_mu_combined_sigma = std::hypot(a.h_over_mu.sigma, b.h_over_mu.sigma);
      p.h_over_mu_n_sigma = p.h_over_mu_combined_sigma > 0.0
                                ? p.h_over_mu_diff / p.h_over_mu_combined_sigma
                                : 0.0;
      rep.pairs.push_back(std::move(p));
    }
  }
  return rep;
}

Determination make_determination(std::string label, const Quantity& alpha_inv,
                                 const ConstantsRegistry& registry, std::string provenance) {
  Determination det;
  det.label = std::move(label);
  det.alpha_inv = alpha_inv;
  det.h_over_mu = h_over_mu_from_alpha_inv(alpha_inv, registry);
  det.provenance = std::move(provenance);
  return det;
}

void check_consistency(const Determination& det, const ConstantsRegistry& registry,
                       double rel_tolerance) {
  Quantity expect = h_over_mu_from_alpha_inv(det.alpha_inv, registry);
  double rel = std::fabs(expect.value / det.h_over_mu.value - 1.0);
  if (rel > rel_tolerance)
    throw ValidationError("determination '" + det.label +
                          "' is internally inconsistent: relative mismatch " +
                          std::to_string(rel));
}

std::vector<Determination> load_determinations(const std::filesystem::path& path) {
  return io::load_determinations_file(path);
}

}  // namespace recoil
