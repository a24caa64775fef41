#include "recoil/fringe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "recoil/errors.hpp"
#include "recoil/fringe_model.hpp"

namespace recoil {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kMaxParams = 4;

/// Solve the symmetric positive definite system A x = b in place (Cholesky).
/// Returns false if A is not positive definite.
bool solve_spd(int n, double a[kMaxParams][kMaxParams], const double b[kMaxParams],
               double x[kMaxParams]) {
  double l[kMaxParams][kMaxParams] = {};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      double sum = a[i][j];
      for (int k = 0; k < j; ++k) sum -= l[i][k] * l[j][k];
      if (i == j) {
        if (sum <= 0.0) return false;
        l[i][i] = std::sqrt(sum);
      } else {
        l[i][j] = sum / l[j][j];
      }
    }
  }
  double y[kMaxParams];
  for (int i = 0; i < n; ++i) {
    double sum = b[i];
    for (int k = 0; k < i; ++k) sum -= l[i][k] * y[k];
    y[i] = sum / l[i][i];
  }
  for (int i = n - 1; i >= 0; --i) {
    double sum = y[i];
    for (int k = i + 1; k < n; ++k) sum -= l[k][i] * x[k];
    x[i] = sum / l[i][i];
  }
  return true;
}

/// Invert an SPD matrix (small n) via Cholesky column solves.
bool invert_spd(int n, double a[kMaxParams][kMaxParams], double inv[kMaxParams][kMaxParams]) {
  for (int col = 0; col < n; ++col) {
    double e[kMaxParams] = {};
    e[col] = 1.0;
    double x[kMaxParams];
    double acopy[kMaxParams][kMaxParams];
    std::copy(&a[0][0], &a[0][0] + kMaxParams * kMaxParams, &acopy[0][0]);
    if (!solve_spd(n, acopy, e, x)) return false;
    for (int row = 0; row < n; ++row) inv[row][col] = x[row];
  }
  return true;
}

struct LmResult {
  double params[kMaxParams] = {};
  double sigma[kMaxParams] = {};
  double ssr = std::numeric_limits<double>::infinity();
  int iterations = 0;
  bool converged = false;
};

/// Parameters: [center, offset, contrast, (tau_env)].
struct Problem {
  const Spectrum& spec;
  bool fit_tau;
  double tau_fixed;

  int n_params() const { return fit_tau ? 4 : 3; }

  double ssr_at(const double p[kMaxParams]) const {
    FringeModel model{spec.config.t_ramsey, fit_tau ? p[3] : tau_fixed};
    double ssr = 0.0;
    for (const auto& pt : spec.points) {
      double r = pt.ratio - model.eval(pt.delta_hz - p[0], p[1], p[2]);
      ssr += r * r;
    }
    return ssr;
  }

  void normal_equations(const double p[kMaxParams], double jtj[kMaxParams][kMaxParams],
                        double jtr[kMaxParams]) const {
    FringeModel model{spec.config.t_ramsey, fit_tau ? p[3] : tau_fixed};
    int np = n_params();
    for (int i = 0; i < np; ++i) {
      jtr[i] = 0.0;
      for (int j = 0; j < np; ++j) jtj[i][j] = 0.0;
    }
    for (const auto& pt : spec.points) {
      double y, g[kMaxParams];
      model.eval_grad(pt.delta_hz - p[0], p[1], p[2], y, g[0], g[1], g[2], g[3]);
      double r = pt.ratio - y;
      for (int i = 0; i < np; ++i) {
        jtr[i] += g[i] * r;
        for (int j = 0; j <= i; ++j) jtj[i][j] += g[i] * g[j];
      }
    }
    for (int i = 0; i < np; ++i)
      for (int j = i + 1; j < np; ++j) jtj[i][j] = jtj[j][i];
  }
};

LmResult run_lm(const Problem& prob, const double start[kMaxParams], const FitOptions& opt) {
  LmResult res;
  int np = prob.n_params();
  double p[kMaxParams];
  std::copy(start, start + kMaxParams, p);

  // Scales for the convergence test: one fringe for the center, unity for
  // offset/contrast, the pulse length for the envelope width.
  double scale[kMaxParams] = {prob.spec.config.fringe_period(), 1.0, 1.0, prob.tau_fixed};

  // The cost surface is oscillatory along the center; bounding that step
  // to a fraction of a fringe keeps each restart inside its own basin and
  // leaves basin selection to the envelope-driven SSR comparison.
  const double max_center_step = prob.spec.config.fringe_period() / 3.0;

  double ssr = prob.ssr_at(p);
  double lambda = 1e-3;
  for (res.iterations = 1; res.iterations <= opt.max_iterations; ++res.iterations) {
    double jtj[kMaxParams][kMaxParams], jtr[kMaxParams];
    prob.normal_equations(p, jtj, jtr);

    double step[kMaxParams] = {};
    bool improved = false;
    for (int tries = 0; tries < 40; ++tries) {
      double damped[kMaxParams][kMaxParams];
      std::copy(&jtj[0][0], &jtj[0][0] + kMaxParams * kMaxParams, &damped[0][0]);
      for (int i = 0; i < np; ++i) damped[i][i] += lambda * std::max(jtj[i][i], 1e-300);
      if (!solve_spd(np, damped, jtr, step)) {
        lambda *= 10.0;
        continue;
      }
      if (std::fabs(step[0]) > max_center_step) {
        double shrink = max_center_step / std::fabs(step[0]);
        for (int i = 0; i < np; ++i) step[i] *= shrink;
      }
      double cand[kMaxParams];
      for (int i = 0; i < np; ++i) cand[i] = p[i] + step[i];
      double cand_ssr = prob.ssr_at(cand);
      if (cand_ssr <= ssr) {
        std::copy(cand, cand + kMaxParams, p);
        ssr = cand_ssr;
        lambda = std::max(lambda * 0.3, 1e-14);
        improved = true;
        break;
      }
      lambda *= 10.0;
    }
    if (!improved) break;  // stalled: damping exhausted

    bool small = true;
    for (int i = 0; i < np; ++i)
      if (std::fabs(step[i]) > opt.step_tolerance * scale[i]) small = false;
    if (small) {
      res.converged = true;
      break;
    }
  }

  std::copy(p, p + kMaxParams, res.params);
  res.ssr = ssr;
  if (res.converged) {
    double jtj[kMaxParams][kMaxParams], jtr[kMaxParams], inv[kMaxParams][kMaxParams];
    prob.normal_equations(p, jtj, jtr);
    int dof = static_cast<int>(prob.spec.points.size()) - np;
    if (dof < 1 || !invert_spd(np, jtj, inv)) {
      res.converged = false;
      return res;
    }
    double s2 = ssr / dof;  // covariance scaled by residual variance
    for (int i = 0; i < np; ++i) res.sigma[i] = std::sqrt(std::max(inv[i][i] * s2, 0.0));
  }
  return res;
}

struct GuessParts {
  double center;
  double offset;
  double contrast_estimate;
};

GuessParts guess_parts(const Spectrum& spec) {
  const auto& pts = spec.points;
  const int n = static_cast<int>(pts.size());
  double span = spec.delta_max() - spec.delta_min();
  double period = spec.config.fringe_period();
  if (!(span >= 3.0 * period))
    throw FitError("spectrum span covers fewer than 3 fringe periods");

  // Local fringe mean: moving average over roughly one fringe period.
  int w = std::clamp(static_cast<int>(std::lround(n * period / span)) | 1, 3, n / 3 | 1);
  std::vector<double> mean(n), z(n);
  for (int i = 0; i < n; ++i) {
    int lo = std::max(0, i - w / 2), hi = std::min(n - 1, i + w / 2);
    double acc = 0.0;
    for (int j = lo; j <= hi; ++j) acc += pts[j].ratio;
    mean[i] = acc / (hi - lo + 1);
    z[i] = pts[i].ratio - mean[i];
  }

  // Quadrature demodulation at the known fringe frequency fixes the phase
  // modulo one period; z ~ -offset*C*E*cos(2 pi (delta - center) T_R).
  double x0 = pts.front().delta_hz;
  double ic = 0.0, is = 0.0, zz = 0.0;
  for (int i = 0; i < n; ++i) {
    double ph = kTwoPi * (pts[i].delta_hz - x0) * spec.config.t_ramsey;
    ic += z[i] * std::cos(ph);
    is += z[i] * std::sin(ph);
    zz += z[i] * z[i];
  }
  double coherent = ic * ic + is * is;
  if (zz <= 0.0 || coherent < 9.0 * zz)
    throw FitError("flat spectrum: fringe modulation indistinguishable from noise");
  double phase_center = x0 + std::atan2(-is, -ic) / (kTwoPi * spec.config.t_ramsey);

  // Envelope centroid with squared-modulation weights picks the rank.
  double num = 0.0, den = 0.0;
  for (int i = 0; i < n; ++i) {
    double wt = z[i] * z[i];
    num += wt * pts[i].delta_hz;
    den += wt;
  }
  double env_center = num / den;
  double ranks = std::round((env_center - phase_center) / period);
  double center = phase_center + ranks * period;

  // Envelope maximum at or beyond the window boundary: the central fringe
  // is not usable. Detected by the smoothed modulation-power profile
  // peaking in the outer fringes with a strong cross-window gradient.
  std::vector<double> power(n);
  for (int i = 0; i < n; ++i) {
    int lo = std::max(0, i - w / 2), hi = std::min(n - 1, i + w / 2);
    double acc = 0.0;
    for (int j = lo; j <= hi; ++j) acc += z[j] * z[j];
    power[i] = acc / (hi - lo + 1);
  }
  int peak = 0;
  for (int i = 1; i < n; ++i)
    if (power[i] > power[peak]) peak = i;
  double edge_dist = std::min(pts[peak].delta_hz - spec.delta_min(),
                              spec.delta_max() - pts[peak].delta_hz);
  double opposite = power[peak < n / 2 ? n - 1 : 0];
  if (edge_dist < 1.5 * period && power[peak] > 3.0 * opposite)
    throw FitError("envelope maximum at the span edge; no usable central fringe in window");
  if (center < spec.delta_min() + period || center > spec.delta_max() - period)
    throw FitError("estimated center lies at the span edge; no usable central fringe in window");

  double offset = 0.0;
  for (const auto& p : pts) offset += p.ratio;
  offset /= n;
  double contrast = std::clamp(std::sqrt(2.0 * zz / n) * std::numbers::sqrt2 /
                                   std::max(offset, 1e-6),
                               0.05, 1.0);
  return {center, offset, contrast};
}

}  // namespace

void FringeFit::validate() const {
  if (converged) {
    if (!(center.sigma > 0.0)) throw ValidationError("converged fit must carry center.sigma > 0");
    if (!std::isfinite(residual_rms)) throw ValidationError("converged fit has non-finite rms");
  }
  if (contrast < 0.0 || contrast > 1.5)
    throw ValidationError("fit contrast outside [0, 1.5] flags model mismatch");
}

double initial_guess(const Spectrum& spectrum) {
  spectrum.validate();
  return guess_parts(spectrum).center;
}

FringeFit fit_central_fringe(const Spectrum& spectrum, const FitOptions& options) {
  spectrum.validate();
  FringeFit fit;
  fit.n_points = static_cast<int>(spectrum.points.size());
  fit.envelope_tau = spectrum.config.tau_pulse;

  int np = options.fit_envelope_width ? 4 : 3;
  if (fit.n_points < np + 1) throw ValidationError("fewer points than fit parameters");

  GuessParts parts{};
  try {
    if (options.initial_guess_hz) {
      parts = {*options.initial_guess_hz, 0.0, 0.5};
      double acc = 0.0;
      for (const auto& p : spectrum.points) acc += p.ratio;
      parts.offset = acc / fit.n_points;
    } else {
      parts = guess_parts(spectrum);
    }
  } catch (const FitError& e) {
    fit.status = e.what();
    return fit;
  }

  Problem prob{spectrum, options.fit_envelope_width, spectrum.config.tau_pulse};
  double period = spectrum.config.fringe_period();

  // The central fringe is identified through the envelope, never by
  // proximity to the starting point alone: restart one fringe to each side
  // and keep the lowest-SSR converged fit. An anti-phase solution
  // (negative contrast, center half a period off) is canonicalized by a
  // half-period restart before it competes.
  LmResult best;
  int total_iter = 0;
  auto admissible = [](const LmResult& r) {
    return r.converged && r.params[2] >= 0.0 && r.params[2] <= 1.5 && r.params[1] > 0.0 &&
           r.params[1] < 1.0;
  };
  auto consider = [&](LmResult r) {
    if (r.converged && r.params[2] < 0.0) {
      for (double half : {-0.5 * period, 0.5 * period}) {
        double start[kMaxParams] = {r.params[0] + half, r.params[1], -r.params[2], r.params[3]};
        LmResult fixed = run_lm(prob, start, options);
        total_iter += fixed.iterations;
        if (admissible(fixed) && (!admissible(r) || fixed.ssr < r.ssr)) r = fixed;
      }
    }
    if (admissible(r) && (!best.converged || r.ssr < best.ssr)) best = r;
  };
  for (double shift : {0.0, -period, period}) {
    double start[kMaxParams] = {parts.center + shift, parts.offset, parts.contrast_estimate,
                                spectrum.config.tau_pulse};
    LmResult r = run_lm(prob, start, options);
    total_iter += r.iterations;
    consider(std::move(r));
  }
  fit.iterations = total_iter;
  if (!best.converged) {
    fit.status = "no restart converged within the iteration cap";
    return fit;
  }

  fit.converged = true;
  fit.center = Quantity(best.params[0], best.sigma[0], "Hz");
  fit.offset = best.params[1];
  fit.contrast = best.params[2];
  if (options.fit_envelope_width) fit.envelope_tau = best.params[3];
  fit.ssr = best.ssr;
  fit.residual_rms = std::sqrt(best.ssr / fit.n_points);
  fit.validate();
  return fit;
}

}  // namespace recoil
