#include "recoil/reduction.hpp"

#include <cmath>
#include <numbers>

#include "recoil/errors.hpp"

namespace recoil {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

int sgn(int v) { return v > 0 ? 1 : v < 0 ? -1 : 0; }

}  // namespace

void SpectrumSet::validate() const {
  bool seen[2][2] = {};
  const auto& ref = entries[0].config;
  for (const auto& e : entries) {
    e.config.validate();
    int bs = sgn(e.config.n_bloch);
    if (bs == 0) throw ValidationError("spectrum set entries need a nonzero n_bloch");
    seen[bs > 0][e.config.raman_direction > 0] = true;
    if (std::abs(e.config.n_bloch) != std::abs(ref.n_bloch) ||
        e.config.t_ramsey != ref.t_ramsey || e.config.tau_pulse != ref.tau_pulse ||
        e.config.k1 != ref.k1 || e.config.k2 != ref.k2 || e.config.k_bloch != ref.k_bloch)
      throw ValidationError("spectrum set entries must share |n_bloch|, timing and wave-vectors");
  }
  for (int i : {0, 1})
    for (int j : {0, 1})
      if (!seen[i][j])
        throw ValidationError(
            "spectrum set must realize all four (sign of n_bloch, raman direction) pairs");
}

const SpectrumSetEntry& SpectrumSet::entry(int bloch_sign, int raman_sign) const {
  for (const auto& e : entries)
    if (sgn(e.config.n_bloch) == bloch_sign && e.config.raman_direction == raman_sign) return e;
  throw ValidationError("sign pair not present in spectrum set");
}

namespace {

void check_fits(const SpectrumSet& set) {
  set.validate();
  for (const auto& e : set.entries) {
    if (!e.fit.converged)
      throw ValidationError("spectrum set contains an unconverged fit (" +
                            sign_pattern_label(e.config) + ")");
    double c = std::fabs(e.fit.center.value);
    if (c < 10.0 * e.fit.center.sigma)
      throw ValidationError("suspicious fit: |center| below 10x its uncertainty (" +
                            sign_pattern_label(e.config) + ")");
  }
}

}  // namespace

HOverMResult reduce_set(const SpectrumSet& set) {
  check_fits(set);
  const auto& ref = set.entries[0].config;
  double n_osc = std::abs(ref.n_bloch);
  double denom = 2.0 * n_osc * ref.k_bloch * (ref.k1 + ref.k2);

  double acc = 0.0, var = 0.0;
  for (const auto& e : set.entries) {
    acc += kTwoPi * std::fabs(e.fit.center.value) / denom;
    double s = kTwoPi * e.fit.center.sigma / denom;
    var += s * s;
  }
  Quantity hbar_over_m(acc / 4.0, std::sqrt(var) / 4.0, "m^2 s^-1");

  HOverMResult out;
  out.hbar_over_m = hbar_over_m;
  out.h_over_m = scaled(hbar_over_m, kTwoPi).with_tag("m^2 s^-1");
  out.set_label = set.label;
  return out;
}

CancellationReport cancellation_report(const SpectrumSet& set) {
  check_fits(set);
  // Solve the sign scheme center(b, d) = d*(b*D + G) + B for the Doppler
  // term D, the gravity-like term G and the common bias B. G absorbs any
  // selection/measurement asymmetry, which has the same signature.
  const double cpp = set.entry(+1, +1).fit.center.value;
  const double cpm = set.entry(+1, -1).fit.center.value;
  const double cmp = set.entry(-1, +1).fit.center.value;
  const double cmm = set.entry(-1, -1).fit.center.value;
  const double spp = set.entry(+1, +1).fit.center.sigma;
  const double spm = set.entry(+1, -1).fit.center.sigma;
  const double smp = set.entry(-1, +1).fit.center.sigma;
  const double smm = set.entry(-1, -1).fit.center.sigma;

  double quarter_sigma =
      std::sqrt(spp * spp + spm * spm + smp * smp + smm * smm) / 4.0;

  CancellationReport rep;
  rep.doppler_term = Quantity((cpp - cpm - cmp + cmm) / 4.0, quarter_sigma, "Hz");
  rep.gravity_term = Quantity((cpp - cpm + cmp - cmm) / 4.0, quarter_sigma, "Hz");
  rep.common_bias = Quantity((cpp + cpm + cmp + cmm) / 4.0, quarter_sigma, "Hz");
  return rep;
}

}  // namespace recoil
