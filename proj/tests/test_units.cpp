#include <doctest.h>

#include "recoil/errors.hpp"
#include "recoil/units.hpp"

using namespace recoil;

TEST_CASE("tags parse to dimensions") {
  CHECK(Unit("Hz").dim() == Dimension{.s = -1});
  CHECK(Unit("m^2 s^-1").dim() == Dimension{.m = 2, .s = -1});
  CHECK(Unit("m/s").dim() == Dimension{.m = 1, .s = -1});
  CHECK(Unit("m/s^2").dim() == Dimension{.m = 1, .s = -2});
  CHECK(Unit("kg/mol").dim() == Dimension{.kg = 1, .mol = -1});
  CHECK(Unit("J s mol^-1").dim() == Dimension{.m = 2, .kg = 1, .s = -1, .mol = -1});
  CHECK(Unit("1").is_dimensionless());
  CHECK(Unit("").is_dimensionless());
  CHECK(Unit("m*s^-1").dim() == Unit("m s^-1").dim());
}

TEST_CASE("Hz and s^-1 share a dimension but keep their spelling") {
  Unit hz("Hz");
  Unit inv_s("s^-1");
  CHECK(hz.same_dimension(inv_s));
  CHECK(hz.tag() == "Hz");
  CHECK(inv_s.tag() == "s^-1");
}

TEST_CASE("bad tags throw") {
  CHECK_THROWS_AS(Unit("furlong"), UnitError);
  CHECK_THROWS_AS(Unit("m^x"), UnitError);
  CHECK_THROWS_AS(Unit("kg/mol/s"), UnitError);
}

TEST_CASE("composition") {
  Unit a("m^2 s^-1");
  Unit b("s");
  CHECK(a.times(b).dim() == Dimension{.m = 2});
  CHECK(a.over(b).dim() == Dimension{.m = 2, .s = -2});
  CHECK(a.pow(2).dim() == Dimension{.m = 4, .s = -2});
  CHECK(a.pow(2).root(2).dim() == a.dim());
  CHECK_THROWS_AS(a.root(2), UnitError);  // odd s exponent
  // dimensionless factors preserve the original tag
  CHECK(a.times(Unit::dimensionless()).tag() == "m^2 s^-1");
}

TEST_CASE("canonical spelling is stable") {
  CHECK(Unit("Hz").canonical() == "s^-1");
  CHECK(Unit("J s mol^-1").canonical() == "kg m^2 s^-1 mol^-1");
  CHECK(Unit("1").canonical() == "1");
  CHECK(Unit("s^-1 m^2").canonical() == Unit("m^2/s").canonical());
}

TEST_CASE("relabel requires matching dimension") {
  Unit u = Unit("m^2 s^-1").times(Unit("kg/mol"));
  CHECK_NOTHROW(u.relabel("J s mol^-1"));
  CHECK_THROWS_AS(u.relabel("Hz"), UnitError);
}
