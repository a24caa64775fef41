#pragma once

#include <span>
#include <utility>
#include <vector>

#include "recoil/quantity.hpp"

namespace recoil {

/// Mean, dispersion and serial-correlation summary of a measurement series.
struct SeriesStats {
  Quantity mean;
  double chi2_per_dof = 0.0;
  std::vector<std::pair<int, double>> acf;  // (lag, value), lag 0 first, acf[0] = 1
  int n = 0;
  double one_sigma_band = 0.0;  // 1/sqrt(n)
  double two_sigma_band = 0.0;  // 2/sqrt(n)
  bool acf_defined = true;      // false for a zero-variance series
};

/// Inverse-variance weighted mean, chi^2/(n-1) about it, and the sample
/// autocorrelation of the mean-subtracted series at lags 0..max_lag.
/// All values must share a dimension. A constant series yields chi2 = 0
/// with the acf flagged undefined; zero uncertainties on a dispersed
/// series make chi^2 undefined and throw.
SeriesStats series_stats(std::span<const Quantity> values, int max_lag);

}  // namespace recoil
