#include <cmath>
#include <filesystem>
#include <limits>

#include <doctest.h>

#include "recoil/errors.hpp"
#include "recoil/registry.hpp"
#include "recoil/systematics.hpp"

using namespace recoil;

namespace {

const std::filesystem::path kData = RECOIL_TEST_DATA_DIR;
constexpr double kInf = std::numeric_limits<double>::infinity();

ErrorBudget small_budget() {
  ErrorBudget b;
  b.label = "test";
  b.lines = {{"a", -2.0, 1.0}, {"b", 0.0, 2.0}, {"c", 3.0, 0.5}};
  b.global_systematic = {"global", 1.0, 2.3};
  b.statistical = 1.5;
  b.external = 0.0;
  return b;
}

}  // namespace

TEST_CASE("plane-wave limit reduces to k exactly") {
  BeamGeometry g{8.055e6, kInf, 2e-3, kInf};
  CHECK(k_effective(g) == 8.055e6);
}

TEST_CASE("on-axis flat wavefront keeps only the waist term") {
  BeamGeometry g{8.055e6, 4e-3, 0.0, kInf};
  double expect = 8.055e6 - 2.0 / (8.055e6 * 4e-3 * 4e-3);
  CHECK(k_effective(g) == doctest::Approx(expect).epsilon(1e-15));
}

TEST_CASE("the documented working point gives an O(1e-9) relative correction") {
  BeamGeometry g{8.055e6, 4e-3, 2e-3, 100.0};
  double keff = k_effective(g);
  double rel = (g.k - keff) / g.k;
  CHECK(rel > 1e-10);
  CHECK(rel < 1e-8);

  // direct long-double transcription of the phase-gradient formula
  long double k = 8.055e6L, w = 4e-3L, r = 2e-3L, R = 100.0L;
  long double bracket = 1.0L / (w * w) - (r * r) / (w * w * w * w) + k * k * r * r / (4.0L * R * R);
  long double expect = k - (2.0L / k) * bracket;
  CHECK(keff == doctest::Approx(static_cast<double>(expect)).epsilon(1e-15));
}

TEST_CASE("k_effective decreases as the waist tightens (r = 0, flat wavefront)") {
  double prev = k_effective({8.055e6, kInf, 0.0, kInf});
  for (double w : {50e-3, 10e-3, 5e-3, 2e-3}) {
    double cur = k_effective({8.055e6, w, 0.0, kInf});
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("misalignment projects with cos(theta)") {
  BeamGeometry g{8.055e6, 4e-3, 1e-3, kInf};
  double base = k_effective(g);
  CHECK(k_effective(g, 0.0) == base);
  CHECK(k_effective(g, 40e-6) == doctest::Approx(base * std::cos(40e-6)).epsilon(1e-15));
  CHECK(k_effective(g, 40e-6) < base);
}

TEST_CASE("geometry validation") {
  CHECK_THROWS_AS(k_effective({-1.0, 1e-3, 0.0, kInf}), ValidationError);
  CHECK_THROWS_AS(k_effective({8e6, 1e-3, 0.0, 0.0}), ValidationError);
  CHECK_THROWS_AS(k_effective({8e6, -1e-3, 0.0, kInf}), ValidationError);
}

TEST_CASE("wavefront report propagates through the composed formulas") {
  auto reg = ConstantsRegistry::from_file(kData / "constants_codata2010.json");
  BeamGeometry raman{8.052877e6, 4e-3, 2e-3, kInf};
  BeamGeometry bloch{8.052877e6, 6e-3, 2e-3, 200.0};
  auto rep = wavefront_report(raman, raman, bloch, reg);

  // First order: d ln(alpha^-1) = -1/2 d ln(h/m) with
  // h/m ~ 1/(k_B (k1 + k2)); the report must reproduce that without the
  // exponent being written anywhere.
  double expected = -0.5 * (-(rep.rel_shift_bloch +
                              (rep.rel_shift_raman_1 + rep.rel_shift_raman_2) / 2.0));
  CHECK(rep.alpha_inv_rel_shift == doctest::Approx(expected).epsilon(1e-4));
  CHECK(rep.alpha_inv_shift_1e10 == doctest::Approx(rep.alpha_inv_rel_shift * 1e10));
}

TEST_CASE("shipped budget reproduces the published arithmetic") {
  auto b = ErrorBudget::from_file(kData / "error_budget.json");
  CHECK(b.correction_sum() == doctest::Approx(-26.4).epsilon(1e-12));
  CHECK(b.global_systematic.uncertainty == 5.9);
  CHECK(b.total_uncertainty() == doctest::Approx(std::sqrt(5.9 * 5.9 + 2.0 * 2.0 + 2.2 * 2.2)));
  // recomputed quadrature agrees with the verbatim global line to rounding
  CHECK(b.quadrature_of_lines() == doctest::Approx(5.906).epsilon(1e-3));
}

TEST_CASE("apply_budget value and uncertainty composition") {
  auto b = ErrorBudget::from_file(kData / "error_budget.json");
  Quantity raw(137.035999406, 0.0, "1");
  Quantity corrected = apply_budget(raw, b);
  CHECK(corrected.value == doctest::Approx(raw.value * (1.0 - 26.4e-10)).epsilon(1e-15));
  CHECK(corrected.sigma / corrected.value ==
        doctest::Approx(b.total_uncertainty() * 1e-10).epsilon(1e-12));

  // flipping the convention is a single switch
  Quantity inverted = apply_budget(raw, b, true);
  CHECK(inverted.value == doctest::Approx(raw.value * (1.0 + 26.4e-10)).epsilon(1e-15));
}

TEST_CASE("all-zero budget is the identity and adds no uncertainty") {
  ErrorBudget b;
  b.global_systematic = {"global", 0.0, 0.0};
  b.statistical = 0.0;
  b.external = 0.0;
  Quantity raw(100.0, 0.7, "1");
  Quantity out = apply_budget(raw, b);
  CHECK(out.value == 100.0);
  CHECK(out.sigma == 0.7);
}

TEST_CASE("statistical-only budget sets sigma = s * 1e-10 * value") {
  ErrorBudget b;
  b.global_systematic = {"global", 0.0, 0.0};
  b.statistical = 4.4;
  b.external = 0.0;
  Quantity out = apply_budget(Quantity(137.0, 0.0, "1"), b);
  CHECK(out.value == 137.0);
  CHECK(out.sigma == doctest::Approx(137.0 * 4.4e-10).epsilon(1e-12));
}

TEST_CASE("missing statistical or external entries are an error") {
  ErrorBudget b;
  b.global_systematic = {"global", 0.0, 1.0};
  CHECK_THROWS_AS(apply_budget(Quantity(1.0, 0.0, "1"), b), ValidationError);
  b.statistical = 1.0;
  CHECK_THROWS_AS(apply_budget(Quantity(1.0, 0.0, "1"), b), ValidationError);
  b.external = 1.0;
  CHECK_NOTHROW(apply_budget(Quantity(1.0, 0.0, "1"), b));
}

TEST_CASE("quadrature is permutation invariant and monotone") {
  auto b = small_budget();
  double q = b.quadrature_of_lines();
  std::swap(b.lines[0], b.lines[2]);
  CHECK(b.quadrature_of_lines() == doctest::Approx(q).epsilon(1e-15));
  b.lines[1].uncertainty += 0.5;
  CHECK(b.quadrature_of_lines() > q);
}

TEST_CASE("budget validation") {
  auto b = small_budget();
  b.lines.push_back({"a", 0.0, 0.1});  // duplicate name
  CHECK_THROWS_AS(b.validate(), ValidationError);
  b = small_budget();
  b.lines[0].uncertainty = -1.0;
  CHECK_THROWS_AS(b.validate(), ValidationError);
}

TEST_CASE("formatted table carries the header lines") {
  auto b = ErrorBudget::from_file(kData / "error_budget.json");
  auto text = format_budget_table(b);
  CHECK(text.find("Global systematic effects") != std::string::npos);
  CHECK(text.find("Total uncertainty") != std::string::npos);
  CHECK(text.find("6.6") != std::string::npos);
  CHECK(text.find("-26.4") != std::string::npos);
}
