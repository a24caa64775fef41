#include "recoil/quantity.hpp"

#include <charconv>
#include <cmath>

#include "recoil/errors.hpp"

namespace recoil {

namespace {

void check_sigma(double sigma) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma))
    throw ValidationError("quantity sigma must be finite and >= 0");
}

std::string shortest(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

Quantity::Quantity(double value, double sigma, Unit unit)
    : value(value), sigma(sigma), unit(std::move(unit)) {
  check_sigma(sigma);
}

Quantity::Quantity(double value, double sigma, std::string_view unit_tag)
    : Quantity(value, sigma, Unit(unit_tag)) {}

Quantity Quantity::exact(double value, std::string_view unit_tag) {
  return Quantity(value, 0.0, unit_tag);
}

double Quantity::relative_sigma() const {
  if (value == 0.0) throw ValidationError("relative sigma of a zero-valued quantity");
  return std::fabs(sigma / value);
}

Quantity Quantity::with_tag(std::string_view tag) const {
  return Quantity(value, sigma, unit.relabel(tag));
}

std::string Quantity::str() const {
  return shortest(value) + " +- " + shortest(sigma) + " " + unit.tag();
}

Quantity combine(const Quantity& a, const Quantity& b, CombineOp op) {
  switch (op) {
    case CombineOp::add:
    case CombineOp::sub: {
      if (!a.unit.same_dimension(b.unit))
        throw UnitError("cannot " + std::string(op == CombineOp::add ? "add" : "subtract") +
                        " '" + a.unit.tag() + "' and '" + b.unit.tag() + "'");
      double v = op == CombineOp::add ? a.value + b.value : a.value - b.value;
      return Quantity(v, std::hypot(a.sigma, b.sigma), a.unit);
    }
    case CombineOp::mul: {
      double v = a.value * b.value;
      double s = std::hypot(b.value * a.sigma, a.value * b.sigma);
      return Quantity(v, s, a.unit.times(b.unit));
    }
    case CombineOp::div: {
      if (b.value == 0.0) throw ValidationError("division by a zero-valued quantity");
      double v = a.value / b.value;
      double s = std::hypot(a.sigma / b.value, a.value * b.sigma / (b.value * b.value));
      return Quantity(v, s, a.unit.over(b.unit));
    }
  }
  throw ValidationError("unknown combine op");
}

Quantity operator+(const Quantity& a, const Quantity& b) { return combine(a, b, CombineOp::add); }
Quantity operator-(const Quantity& a, const Quantity& b) { return combine(a, b, CombineOp::sub); }
Quantity operator*(const Quantity& a, const Quantity& b) { return combine(a, b, CombineOp::mul); }
Quantity operator/(const Quantity& a, const Quantity& b) { return combine(a, b, CombineOp::div); }

Quantity scaled(const Quantity& q, double exact_factor) {
  return Quantity(q.value * exact_factor, std::fabs(exact_factor) * q.sigma, q.unit);
}

Quantity pow_int(const Quantity& q, int n) {
  if (n == 0) return Quantity::exact(1.0);
  double v = std::pow(q.value, n);
  double s = std::fabs(static_cast<double>(n) * std::pow(q.value, n - 1)) * q.sigma;
  return Quantity(v, s, q.unit.pow(n));
}

Quantity sqrt(const Quantity& q) {
  if (q.value < 0.0) throw ValidationError("square root of a negative quantity");
  double v = std::sqrt(q.value);
  double s = v > 0.0 ? 0.5 * q.sigma / v : 0.0;
  return Quantity(v, s, q.unit.root(2));
}

Quantity inv_sqrt(const Quantity& q) {
  if (!q.unit.is_dimensionless())
    throw UnitError("inv_sqrt expects a dimensionless quantity, got '" + q.unit.tag() + "'");
  if (q.value <= 0.0) throw ValidationError("inv_sqrt of a nonpositive quantity");
  double v = 1.0 / std::sqrt(q.value);
  // d(v)/d(q) = -1/2 q^-3/2
  double s = 0.5 * q.sigma / (q.value * std::sqrt(q.value));
  return Quantity(v, s, Unit::dimensionless());
}

}  // namespace recoil
