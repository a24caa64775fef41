#include "recoil/systematics.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "recoil/errors.hpp"
#include "recoil/io.hpp"

namespace recoil {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

void BeamGeometry::validate() const {
  if (!(k > 0.0)) throw ValidationError("beam k must be > 0");
  if (!(waist > 0.0)) throw ValidationError("beam waist must be > 0 (infinity allowed)");
  if (cloud_radius < 0.0) throw ValidationError("cloud radius must be >= 0");
  if (curvature_radius == 0.0)
    throw ValidationError("curvature radius must be nonzero (infinity = flat wavefront)");
}

double k_effective(const BeamGeometry& geom) {
  geom.validate();
  double w2 = geom.waist * geom.waist;
  double r2 = geom.cloud_radius * geom.cloud_radius;
  double gouy = std::isinf(geom.waist) ? 0.0 : 1.0 / w2 - r2 / (w2 * w2);
  double curv = std::isinf(geom.curvature_radius)
                    ? 0.0
                    : geom.k * geom.k * r2 / (4.0 * geom.curvature_radius * geom.curvature_radius);
  return geom.k - (2.0 / geom.k) * (gouy + curv);
}

double k_effective(const BeamGeometry& geom, double misalignment_angle_rad) {
  return k_effective(geom) * std::cos(misalignment_angle_rad);
}

WavefrontReport wavefront_report(const BeamGeometry& raman1, const BeamGeometry& raman2,
                                 const BeamGeometry& bloch, const ConstantsRegistry& registry) {
  WavefrontReport rep;
  rep.k_eff_raman_1 = k_effective(raman1);
  rep.k_eff_raman_2 = k_effective(raman2);
  rep.k_eff_bloch = k_effective(bloch);
  rep.rel_shift_raman_1 = (rep.k_eff_raman_1 - raman1.k) / raman1.k;
  rep.rel_shift_raman_2 = (rep.k_eff_raman_2 - raman2.k) / raman2.k;
  rep.rel_shift_bloch = (rep.k_eff_bloch - bloch.k) / bloch.k;

  // Propagate through the actual composition: a fixed measured center maps
  // to h/m through the quarter-sum formula and on to alpha^-1 through the
  // square-root relation. The exponent is whatever these formulas produce.
  auto alpha_inv_of = [&](double k1, double k2, double kb) {
    const double delta_ref = 1.5e7, n_osc = 500.0;
    double h_over_m = kTwoPi * kTwoPi * delta_ref / (2.0 * n_osc * kb * (k1 + k2));
    double alpha_sq = 2.0 * registry.r_infinity().value / registry.c().value *
                      registry.ar_rb().value / registry.ar_electron().value * h_over_m;
    return 1.0 / std::sqrt(alpha_sq);
  };
  double base = alpha_inv_of(raman1.k, raman2.k, bloch.k);
  double shifted = alpha_inv_of(rep.k_eff_raman_1, rep.k_eff_raman_2, rep.k_eff_bloch);
  rep.alpha_inv_rel_shift = shifted / base - 1.0;
  rep.alpha_inv_shift_1e10 = rep.alpha_inv_rel_shift * 1e10;
  return rep;
}

void ErrorBudget::validate() const {
  std::set<std::string> names;
  for (const auto& l : lines) {
    if (l.uncertainty < 0.0) throw ValidationError("budget uncertainties must be >= 0");
    if (!names.insert(l.name).second)
      throw ValidationError("duplicate budget line '" + l.name + "'");
  }
  if (global_systematic.uncertainty < 0.0)
    throw ValidationError("global systematic uncertainty must be >= 0");
  if (statistical && *statistical < 0.0) throw ValidationError("statistical must be >= 0");
  if (external && *external < 0.0) throw ValidationError("external must be >= 0");
}

double ErrorBudget::correction_sum() const {
  double s = 0.0;
  for (const auto& l : lines) s += l.correction;
  return s;
}

double ErrorBudget::quadrature_of_lines() const {
  double s = 0.0;
  for (const auto& l : lines) s += l.uncertainty * l.uncertainty;
  return std::sqrt(s);
}

double ErrorBudget::total_uncertainty() const {
  if (!statistical) throw ValidationError("budget is missing the statistical entry");
  if (!external) throw ValidationError("budget is missing the external entry");
  return std::sqrt(global_systematic.uncertainty * global_systematic.uncertainty +
                   *statistical * *statistical + *external * *external);
}

ErrorBudget ErrorBudget::from_file(const std::filesystem::path& path) {
  return io::load_budget(path);
}

Quantity apply_budget(const Quantity& raw_alpha_inv, const ErrorBudget& budget,
                      bool invert_corrections) {
  budget.validate();
  if (!(raw_alpha_inv.value > 0.0)) throw ValidationError("raw value must be > 0");
  double total = budget.total_uncertainty();  // throws when entries are missing
  double corr = budget.correction_sum() * 1e-10;
  if (invert_corrections) corr = -corr;
  double value = raw_alpha_inv.value * (1.0 + corr);
  double sigma = std::hypot(raw_alpha_inv.sigma * (1.0 + corr), value * total * 1e-10);
  return Quantity(value, sigma, raw_alpha_inv.unit);
}

std::string format_budget_table(const ErrorBudget& budget) {
  budget.validate();
  std::ostringstream os;
  os.setf(std::ios::fixed);
  auto row = [&](const std::string& name, const double* corr, const double* unc, int prec) {
    os << name;
    for (size_t i = name.size(); i < 44; ++i) os << ' ';
    os.precision(prec);
    if (corr)
      os << ' ' << *corr;
    else
      os << "     ";
    if (unc) os << ' ' << *unc;
    os << '\n';
  };
  os << budget.label << " (parts per 1e10 on alpha^-1)\n";
  for (const auto& l : budget.lines) {
    bool has_corr = l.correction != 0.0;
    row(l.name, has_corr ? &l.correction : nullptr, &l.uncertainty, 2);
  }
  os << std::string(60, '-') << '\n';
  row("Global systematic effects", &budget.global_systematic.correction,
      &budget.global_systematic.uncertainty, 1);
  os.precision(2);
  os << "  (recomputed quadrature of lines: " << budget.quadrature_of_lines()
     << ", difference " << budget.quadrature_of_lines() - budget.global_systematic.uncertainty
     << ")\n";
  if (budget.statistical) row("Statistical uncertainty", nullptr, &*budget.statistical, 1);
  if (budget.external) row("Rydberg constant and mass ratio", nullptr, &*budget.external, 1);
  os << std::string(60, '-') << '\n';
  if (budget.statistical && budget.external) {
    double t = budget.total_uncertainty();
    row("Total uncertainty", nullptr, &t, 1);
  }
  return os.str();
}

}  // namespace recoil
