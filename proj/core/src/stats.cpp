#include "recoil/stats.hpp"

#include <cmath>

#include "recoil/errors.hpp"

namespace recoil {

SeriesStats series_stats(std::span<const Quantity> values, int max_lag) {
  const int n = static_cast<int>(values.size());
  if (n < 2) throw ValidationError("series_stats needs at least 2 values");
  if (max_lag < 0 || max_lag >= n) throw ValidationError("max_lag must be in [0, n)");
  for (const auto& q : values)
    if (!q.unit.same_dimension(values.front().unit))
      throw UnitError("series values must share one dimension");

  bool dispersed = false;
  for (const auto& q : values)
    if (q.value != values.front().value) dispersed = true;
  bool any_zero_sigma = false;
  for (const auto& q : values)
    if (q.sigma == 0.0) any_zero_sigma = true;
  if (any_zero_sigma && dispersed)
    throw ValidationError("zero uncertainties on a dispersed series: chi^2 undefined");

  SeriesStats out;
  out.n = n;
  out.one_sigma_band = 1.0 / std::sqrt(static_cast<double>(n));
  out.two_sigma_band = 2.0 / std::sqrt(static_cast<double>(n));

  if (!dispersed) {
    // Degenerate constant series: the mean is the common value.
    out.mean = Quantity(values.front().value,
                        any_zero_sigma ? 0.0
                                       : values.front().sigma / std::sqrt(static_cast<double>(n)),
                        values.front().unit);
    out.chi2_per_dof = 0.0;
    out.acf_defined = false;
    return out;
  }

  double wsum = 0.0, wxsum = 0.0;
  for (const auto& q : values) {
    double w = 1.0 / (q.sigma * q.sigma);
    wsum += w;
    wxsum += w * q.value;
  }
  double mean = wxsum / wsum;
  out.mean = Quantity(mean, 1.0 / std::sqrt(wsum), values.front().unit);

  double chi2 = 0.0;
  for (const auto& q : values) {
    double r = (q.value - mean) / q.sigma;
    chi2 += r * r;
  }
  out.chi2_per_dof = chi2 / (n - 1);

  // Sample autocorrelation of the mean-subtracted series.
  double plain_mean = 0.0;
  for (const auto& q : values) plain_mean += q.value;
  plain_mean /= n;
  double denom = 0.0;
  for (const auto& q : values) {
    double d = q.value - plain_mean;
    denom += d * d;
  }
  out.acf.reserve(max_lag + 1);
  for (int lag = 0; lag <= max_lag; ++lag) {
    double acc = 0.0;
    for (int i = 0; i + lag < n; ++i)
      acc += (values[i].value - plain_mean) * (values[i + lag].value - plain_mean);
    out.acf.emplace_back(lag, lag == 0 ? 1.0 : acc / denom);
  }
  return out;
}

}  // namespace recoil
