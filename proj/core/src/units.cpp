#include "recoil/units.hpp"

#include <cctype>
#include <charconv>
#include <vector>

#include "recoil/errors.hpp"

namespace recoil {

namespace {

struct Factor {
  Dimension dim;
};

Dimension base_symbol(std::string_view sym, std::string_view full_tag) {
  if (sym == "m") return {.m = 1};
  if (sym == "kg") return {.kg = 1};
  if (sym == "s") return {.s = 1};
  if (sym == "mol") return {.mol = 1};
  if (sym == "Hz") return {.s = -1};
  if (sym == "J") return {.m = 2, .kg = 1, .s = -2};
  throw UnitError("unknown unit symbol '" + std::string(sym) + "' in tag '" +
                  std::string(full_tag) + "'");
}

Dimension scale(const Dimension& d, int e) {
  return {d.m * e, d.kg * e, d.s * e, d.mol * e};
}

Dimension add(const Dimension& a, const Dimension& b) {
  return {a.m + b.m, a.kg + b.kg, a.s + b.s, a.mol + b.mol};
}

Dimension parse_product(std::string_view text, std::string_view full_tag) {
  Dimension out;
  size_t i = 0;
  auto skip_sep = [&] {
    while (i < text.size() && (text[i] == ' ' || text[i] == '*')) ++i;
  };
  skip_sep();
  while (i < text.size()) {
    size_t start = i;
    while (i < text.size() && (std::isalpha(static_cast<unsigned char>(text[i])))) ++i;
    if (i == start) throw UnitError("cannot parse unit tag '" + std::string(full_tag) + "'");
    std::string_view sym = text.substr(start, i - start);
    int exp = 1;
    if (i < text.size() && text[i] == '^') {
      ++i;
      size_t estart = i;
      if (i < text.size() && (text[i] == '-' || text[i] == '+')) ++i;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      auto res = std::from_chars(text.data() + estart, text.data() + i, exp);
      if (res.ec != std::errc{} || res.ptr != text.data() + i)
        throw UnitError("bad exponent in unit tag '" + std::string(full_tag) + "'");
    }
    out = add(out, scale(base_symbol(sym, full_tag), exp));
    skip_sep();
  }
  return out;
}

Dimension parse_tag(std::string_view tag) {
  if (tag.empty() || tag == "1") return {};
  size_t slash = tag.find('/');
  if (slash == std::string_view::npos) return parse_product(tag, tag);
  if (tag.find('/', slash + 1) != std::string_view::npos)
    throw UnitError("at most one '/' allowed in unit tag '" + std::string(tag) + "'");
  std::string_view num = tag.substr(0, slash);
  std::string_view den = tag.substr(slash + 1);
  Dimension n = (num.empty() || num == "1") ? Dimension{} : parse_product(num, tag);
  return add(n, scale(parse_product(den, tag), -1));
}

void append_factor(std::string& out, const char* sym, int e) {
  if (e == 0) return;
  if (!out.empty()) out += ' ';
  out += sym;
  if (e != 1) out += '^' + std::to_string(e);
}

}  // namespace

Unit::Unit(std::string_view tag) : dim_(parse_tag(tag)), tag_(tag) {
  if (tag_.empty()) tag_ = "1";
}

Unit Unit::from_dimension(const Dimension& d) {
  Unit u;
  u.dim_ = d;
  u.tag_ = u.canonical();
  return u;
}

Unit Unit::times(const Unit& other) const {
  // Multiplying by a dimensionless factor keeps the original spelling.
  if (other.is_dimensionless()) return *this;
  if (is_dimensionless()) return other;
  return from_dimension(add(dim_, other.dim_));
}

Unit Unit::over(const Unit& other) const {
  if (other.is_dimensionless()) return *this;
  return from_dimension(add(dim_, scale(other.dim_, -1)));
}

Unit Unit::pow(int exponent) const { return from_dimension(scale(dim_, exponent)); }

Unit Unit::root(int n) const {
  if (n == 0) throw UnitError("zeroth root of a unit");
  if (dim_.m % n || dim_.kg % n || dim_.s % n || dim_.mol % n)
    throw UnitError("unit '" + tag_ + "' has no integer " + std::to_string(n) + "-th root");
  return from_dimension({dim_.m / n, dim_.kg / n, dim_.s / n, dim_.mol / n});
}

Unit Unit::relabel(std::string_view tag) const {
  Unit u{tag};
  if (!u.same_dimension(*this))
    throw UnitError("relabel '" + std::string(tag) + "' changes dimension of '" + tag_ + "'");
  return u;
}

std::string Unit::canonical() const {
  std::string out;
  append_factor(out, "kg", dim_.kg);
  append_factor(out, "m", dim_.m);
  append_factor(out, "s", dim_.s);
  append_factor(out, "mol", dim_.mol);
  return out.empty() ? "1" : out;
}

}  // namespace recoil
