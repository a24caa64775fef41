#pragma once

#include <cmath>
#include <numbers>

namespace recoil {

/// sin(pi x)/(pi x), continuous at 0.
inline double sinc(double x) {
  double px = std::numbers::pi * x;
  if (std::fabs(px) < 1e-4) {
    double p2 = px * px;
    return 1.0 - p2 / 6.0 * (1.0 - p2 / 20.0);
  }
  return std::sin(px) / px;
}

/// d/dx sinc(x).
inline double dsinc(double x) {
  double px = std::numbers::pi * x;
  if (std::fabs(px) < 1e-4) {
    double p2 = px * px;
    return -std::numbers::pi * px / 3.0 * (1.0 - p2 / 10.0);
  }
  return (std::cos(px) - std::sin(px) / px) / x;
}

/// Closed form shared by the simulator and the fitter:
///
///   y(delta) = offset * [1 - contrast * E(u) * cos(2 pi u T_R)],  u = delta - center
///
/// with envelope E(u) = sinc^2(u * tau_env). The simulator uses offset 0.5;
/// the fitter treats (center, offset, contrast[, tau_env]) as parameters.
struct FringeModel {
  double t_ramsey;  // s
  double tau_env;   // s

  double eval(double u, double offset, double contrast) const {
    double e = sinc(u * tau_env);
    return offset * (1.0 - contrast * e * e * std::cos(2.0 * std::numbers::pi * u * t_ramsey));
  }

  /// Value and partial derivatives wrt (center, offset, contrast, tau_env)
  /// at u = delta - center.
  void eval_grad(double u, double offset, double contrast, double& y, double& d_center,
                 double& d_offset, double& d_contrast, double& d_tau) const {
    double x = u * tau_env;
    double s = sinc(x);
    double e = s * s;
    double f = 2.0 * std::numbers::pi * t_ramsey;
    double cosf = std::cos(f * u);
    double sinf = std::sin(f * u);
    double de_du = 2.0 * s * dsinc(x) * tau_env;
    y = offset * (1.0 - contrast * e * cosf);
    // dy/du, then d/d(center) = -dy/du
    double dy_du = -offset * contrast * (de_du * cosf - e * f * sinf);
    d_center = -dy_du;
    d_offset = 1.0 - contrast * e * cosf;
    d_contrast = -offset * e * cosf;
    d_tau = -offset * contrast * cosf * 2.0 * s * dsinc(x) * u;
  }
};

}  // namespace recoil
