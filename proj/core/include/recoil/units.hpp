#pragma once

#include <compare>
#include <string>
#include <string_view>

namespace recoil {

/// Exponent vector over the base dimensions used by the pipeline.
/// Frequencies are ordinary frequencies: Hz parses to s^-1.
struct Dimension {
  int m = 0;
  int kg = 0;
  int s = 0;
  int mol = 0;

  friend bool operator==(const Dimension&, const Dimension&) = default;

  constexpr bool dimensionless() const { return m == 0 && kg == 0 && s == 0 && mol == 0; }
};

/// A runtime-checked unit tag. Parsing accepts space- or '*'-separated
/// factors with optional integer exponents ("m^2 s^-1"), a single '/'
/// ("kg/mol", "m/s^2"), the alias symbols Hz and J, and "1" for a
/// dimensionless quantity. The original spelling is kept for display;
/// comparison and composition work on the dimension vector.
class Unit {
 public:
  Unit() : tag_("1") {}
  explicit Unit(std::string_view tag);

  static Unit dimensionless() { return Unit{}; }

  const std::string& tag() const { return tag_; }
  const Dimension& dim() const { return dim_; }
  bool is_dimensionless() const { return dim_.dimensionless(); }
  bool same_dimension(const Unit& other) const { return dim_ == other.dim_; }

  Unit times(const Unit& other) const;
  Unit over(const Unit& other) const;
  Unit pow(int exponent) const;
  /// Unit whose n-th power is *this; throws UnitError if exponents do not divide.
  Unit root(int n) const;

  /// Same dimension, different spelling (e.g. relabel kg m^2 s^-1 mol^-1 as "J s mol^-1").
  Unit relabel(std::string_view tag) const;

  /// Canonical spelling of the dimension vector ("m^2 s^-1", "1", ...).
  std::string canonical() const;

  friend bool operator==(const Unit& a, const Unit& b) { return a.dim_ == b.dim_; }

 private:
  static Unit from_dimension(const Dimension& d);

  Dimension dim_{};
  std::string tag_;
};

}  // namespace recoil
