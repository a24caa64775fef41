#pragma once

#include <optional>
#include <string>

#include "recoil/interferometer.hpp"
#include "recoil/quantity.hpp"

namespace recoil {

/// Result of fitting the central fringe of one spectrum.
struct FringeFit {
  Quantity center{0.0, 0.0, "Hz"};
  double contrast = 0.0;
  double offset = 0.0;        // baseline level of the fringe model
  double envelope_tau = 0.0;  // s; fitted only when requested
  double residual_rms = 0.0;
  int n_points = 0;
  bool converged = false;
  int iterations = 0;
  double ssr = 0.0;
  std::string status;  // diagnostic, empty on success

  void validate() const;  // converged implies center.sigma > 0, finite rms
};

struct FitOptions {
  std::optional<double> initial_guess_hz;
  bool fit_envelope_width = false;  // otherwise tau is fixed to config.tau_pulse
  int max_iterations = 200;
  double step_tolerance = 1e-6;  // convergence: max step < tol * parameter scale
};

/// Coarse center estimate: envelope-weighted centroid to pick the fringe
/// rank, quadrature demodulation at the known fringe frequency to place
/// the phase within the rank. Throws FitError for a flat (contrast
/// indistinguishable from noise) spectrum or when the estimate lands at
/// the span edge.
double initial_guess(const Spectrum& spectrum);

/// Damped Gauss-Newton least squares of the fringe model with analytic
/// derivatives. The 1/T_R ambiguity is resolved through the envelope:
/// restarts one fringe to each side and keeps the converged fit with the
/// lowest sum of squared residuals. center.sigma comes from the parameter
/// covariance scaled by the residual variance. Never fabricates a center:
/// failures return converged = false.
FringeFit fit_central_fringe(const Spectrum& spectrum, const FitOptions& options = {});

}  // namespace recoil
