#pragma once

#include <string>
#include <string_view>

#include "recoil/units.hpp"

namespace recoil {

/// A value with a standard uncertainty and a unit tag. The universal
/// currency of the pipeline: every physical number that flows between
/// modules is one of these. Uncertainty propagation is first-order with
/// uncorrelated inputs.
struct Quantity {
  double value = 0.0;
  double sigma = 0.0;  // standard uncertainty, >= 0
  Unit unit{};

  Quantity() = default;
  Quantity(double value, double sigma, Unit unit);
  Quantity(double value, double sigma, std::string_view unit_tag);

  /// Exact value (sigma = 0).
  static Quantity exact(double value, std::string_view unit_tag = "1");

  double relative_sigma() const;  // |sigma / value|; value must be nonzero

  /// Same value/sigma under a different spelling of the same dimension.
  Quantity with_tag(std::string_view tag) const;

  /// "value +- sigma unit" with shortest round-trip digits.
  std::string str() const;
};

enum class CombineOp { add, sub, mul, div };

/// Arithmetic with unit checking and quadrature uncertainty propagation.
/// add/sub require identical dimensions; mul/div compose them. Division
/// by a zero value and unit mismatches throw.
Quantity combine(const Quantity& a, const Quantity& b, CombineOp op);

Quantity operator+(const Quantity& a, const Quantity& b);
Quantity operator-(const Quantity& a, const Quantity& b);
Quantity operator*(const Quantity& a, const Quantity& b);
Quantity operator/(const Quantity& a, const Quantity& b);

/// Multiplication by an exact dimensionless factor.
Quantity scaled(const Quantity& q, double exact_factor);

/// q^n for integer n (value, sigma and unit all raised).
Quantity pow_int(const Quantity& q, int n);

/// Square root; the unit's exponents must be even.
Quantity sqrt(const Quantity& q);

/// 1/sqrt(q) for dimensionless q > 0 (used for alpha^-1 from alpha^2).
Quantity inv_sqrt(const Quantity& q);

}  // namespace recoil
