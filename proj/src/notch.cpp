// Copyright 2026 The scres Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "scres/notch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <random>

#include "scres/error.hpp"

namespace scres {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr Complex kJ{0.0, 1.0};
constexpr double kDetectionSigma = 5.0;
constexpr double kMaxWingPhaseRms = 1.0;

double wrap_angle(double a) {
  a = std::remainder(a, kTwoPi);
  return a <= -std::numbers::pi ? a + kTwoPi : a;
}

std::vector<double> unwrapped_arg(const Eigen::VectorXcd& z, Eigen::Index begin, Eigen::Index end) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(end - begin));
  double offset = 0.0;
  double previous = 0.0;
  for (Eigen::Index i = begin; i < end; ++i) {
    const double a = std::arg(z[i]);
    if (i > begin) {
      const double jump = a - previous;
      if (jump > std::numbers::pi) offset -= kTwoPi;
      if (jump < -std::numbers::pi) offset += kTwoPi;
    }
    previous = a;
    out.push_back(a + offset);
  }
  return out;
}

Eigen::VectorXd moving_average(const Eigen::VectorXd& v, Eigen::Index half_window) {
  const Eigen::Index n = v.size();
  Eigen::VectorXd out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index lo = std::max<Eigen::Index>(0, i - half_window);
    const Eigen::Index hi = std::min<Eigen::Index>(n - 1, i + half_window);
    out[i] = v.segment(lo, hi - lo + 1).mean();
  }
  return out;
}

Eigen::Index smoothing_half_window(Eigen::Index n) { return std::max<Eigen::Index>(1, n / 100); }

// Index of the deepest smoothed |S21| dip.
Eigen::Index deepest_dip(const S21Trace& trace) {
  const Eigen::VectorXd smoothed = moving_average(trace.s21.cwiseAbs(), smoothing_half_window(trace.size()));
  Eigen::Index index = 0;
  smoothed.minCoeff(&index);
  return index;
}

Eigen::VectorXcd remove_delay(const S21Trace& trace, double tau) {
  Eigen::VectorXcd out(trace.size());
  for (Eigen::Index i = 0; i < trace.size(); ++i) {
    out[i] = trace.s21[i] * std::exp(kJ * (kTwoPi * trace.freq_hz[i] * tau));
  }
  return out;
}

struct ModelTerms {
  Complex environment;  // amp e^{j(phase_c - 2 pi (f - f_ref) tau)}
  Complex w;            // e^{j phi} / (1 + j u)
  Complex denom;        // 1 + j u
  Complex resonator;    // 1 - (Ql/Qc) w
  double u = 0.0;
};

// Internal layout: fr, ql, qc, phi, amp, phase_c, tau with the phase referenced to f_ref.
ModelTerms model_terms(const Eigen::VectorXd& x, double f, double f_ref) {
  ModelTerms t;
  const double fr = x[0], ql = x[1], qc = x[2], phi = x[3], amp = x[4], phase_c = x[5], tau = x[6];
  t.environment = amp * std::exp(kJ * (phase_c - kTwoPi * (f - f_ref) * tau));
  t.u = 2.0 * ql * (f - fr) / fr;
  t.denom = Complex(1.0, t.u);
  t.w = std::exp(kJ * phi) / t.denom;
  t.resonator = 1.0 - (ql / qc) * t.w;
  return t;
}

struct NotchProblem {
  const Eigen::VectorXd& f;
  const Eigen::VectorXcd& data;
  double f_ref;

  Eigen::Index residual_count() const { return 2 * f.size(); }

  void residual(const Eigen::VectorXd& x, Eigen::VectorXd& r) const {
    const Eigen::Index n = f.size();
    for (Eigen::Index i = 0; i < n; ++i) {
      const ModelTerms t = model_terms(x, f[i], f_ref);
      const Complex d = t.environment * t.resonator - data[i];
      r[i] = d.real();
      r[n + i] = d.imag();
    }
  }

  void jacobian(const Eigen::VectorXd& x, Eigen::MatrixXd& jac) const {
    const Eigen::Index n = f.size();
    const double fr = x[0], ql = x[1], qc = x[2], amp = x[4];
    for (Eigen::Index i = 0; i < n; ++i) {
      const ModelTerms t = model_terms(x, f[i], f_ref);
      const Complex s = t.environment * t.resonator;
      const Complex dw_du = -kJ * t.w / t.denom;
      const std::array<Complex, 7> d = {
          t.environment * (-(ql / qc) * dw_du * (-2.0 * ql * f[i] / (fr * fr))),
          t.environment * (-t.w / qc - (ql / qc) * dw_du * (t.u / ql)),
          t.environment * ((ql / (qc * qc)) * t.w),
          t.environment * (-(ql / qc) * kJ * t.w),
          s / amp,
          kJ * s,
          -kJ * kTwoPi * (f[i] - f_ref) * s,
      };
      for (int k = 0; k < 7; ++k) {
        jac(i, k) = d[k].real();
        jac(n + i, k) = d[k].imag();
      }
    }
  }
};

struct PhaseProblem {
  const Eigen::VectorXd& f;
  const Eigen::VectorXd& angle;

  Eigen::Index residual_count() const { return f.size(); }

  static double model(const Eigen::VectorXd& x, double f) {
    return x[0] + 2.0 * std::atan(2.0 * x[1] * (1.0 - f / x[2]));
  }

  void residual(const Eigen::VectorXd& x, Eigen::VectorXd& r) const {
    for (Eigen::Index i = 0; i < f.size(); ++i) r[i] = wrap_angle(model(x, f[i]) - angle[i]);
  }

  void jacobian(const Eigen::VectorXd& x, Eigen::MatrixXd& jac) const {
    const double ql = x[1], fr = x[2];
    for (Eigen::Index i = 0; i < f.size(); ++i) {
      const double v = 2.0 * ql * (1.0 - f[i] / fr);
      const double g = 2.0 / (1.0 + v * v);
      jac(i, 0) = 1.0;
      jac(i, 1) = g * 2.0 * (1.0 - f[i] / fr);
      jac(i, 2) = g * 2.0 * ql * f[i] / (fr * fr);
    }
  }
};

struct ResonanceSeed {
  double fr_hz = 0.0;
  double ql = 0.0;
  double theta0 = 0.0;  // angle of the resonance point about the circle centre
};

// Seed from the smoothed, delay-corrected data: the resonance point is the one
// farthest from the off-resonant point, and |z - z_off|^2 is a Lorentzian of
// full width fr / Ql.
ResonanceSeed dip_seed(const Eigen::VectorXd& f, const Eigen::VectorXcd& z, const CircleFit& circle) {
  const Eigen::Index n = z.size();
  const Eigen::Index half = smoothing_half_window(n);
  const Eigen::VectorXd re = moving_average(z.real(), half);
  const Eigen::VectorXd im = moving_average(z.imag(), half);
  const Complex c = circle.center;

  const auto farthest_from = [&](Complex from, Eigen::VectorXd& dist2) {
    Eigen::Index index = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      dist2[i] = std::norm(Complex(re[i], im[i]) - from);
      if (dist2[i] > dist2[index]) index = i;
    }
    return index;
  };
  const auto project = [&](Eigen::Index i) {
    const Complex d = Complex(re[i], im[i]) - c;
    return std::abs(d) > 0 ? c + circle.radius * d / std::abs(d) : c + circle.radius;
  };
  Eigen::VectorXd dist2(n);
  const Eigen::Index wing = std::max<Eigen::Index>(1, n / 20);
  Complex off = 0.5 * (Complex(re.head(wing).mean(), im.head(wing).mean()) +
                       Complex(re.tail(wing).mean(), im.tail(wing).mean()));
  Eigen::Index k = farthest_from(off, dist2);
  Complex res = project(k);
  off = 2.0 * c - res;
  k = farthest_from(off, dist2);
  res = project(k);

  const double level = 0.5 * dist2[k];
  const auto crossing = [&](int direction) -> std::optional<double> {
    for (Eigen::Index i = k; i + direction >= 0 && i + direction < n; i += direction) {
      const Eigen::Index j = i + direction;
      if (dist2[j] <= level) {
        const double w = (dist2[i] - level) / (dist2[i] - dist2[j]);
        return f[i] + w * (f[j] - f[i]);
      }
    }
    return std::nullopt;
  };
  const auto lo = crossing(-1);
  const auto hi = crossing(+1);
  double width = 0.0;
  if (lo && hi) width = *hi - *lo;
  else if (lo) width = 2.0 * (f[k] - *lo);
  else if (hi) width = 2.0 * (*hi - f[k]);
  else width = f[n - 1] - f[0];
  width = std::max(width, f[n - 1] - f[0] > 0 ? (f[n - 1] - f[0]) / static_cast<double>(n) : width);

  ResonanceSeed seed;
  seed.fr_hz = f[k];
  seed.ql = f[k] / width;
  seed.theta0 = std::arg(res - c);
  return seed;
}

// Delay minimising the circle-fit residual. A coarse scan over the wing-fit
// uncertainty finds the basin (about +-0.02 / span wide), golden section polishes.
double refine_delay_on_circle(const S21Trace& trace, const DelayEstimate& estimate) {
  const double span = trace.freq_hz[trace.size() - 1] - trace.freq_hz[0];
  const double tau0 = estimate.tau_s;
  const double half_range = std::min(std::max(0.02 / span, 4.0 * estimate.stderr_s), 0.5 / span);
  const double step = 0.0025 / span;
  const auto objective = [&](double tau) {
    try {
      return circle_fit(remove_delay(trace, tau)).rms_residual;
    } catch (const FitError&) {
      return std::numeric_limits<double>::infinity();
    }
  };
  const int cells = static_cast<int>(std::ceil(half_range / step));
  double best_tau = tau0;
  double best = objective(tau0);
  for (int k = -cells; k <= cells; ++k) {
    const double tau = tau0 + k * step;
    const double v = objective(tau);
    if (v < best) {
      best = v;
      best_tau = tau;
    }
  }
  if (!std::isfinite(best)) return tau0;

  const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = best_tau - step;
  double b = best_tau + step;
  double c = b - golden * (b - a);
  double d = a + golden * (b - a);
  double fc = objective(c);
  double fd = objective(d);
  for (int i = 0; i < 200 && (b - a) > 1e-13 * std::max(std::abs(best_tau), 1.0 / span); ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - golden * (b - a);
      fc = objective(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + golden * (b - a);
      fd = objective(d);
    }
  }
  const double tau = 0.5 * (a + b);
  return objective(tau) <= best ? tau : best_tau;
}

}  // namespace

void S21Trace::validate() const {
  if (freq_hz.size() != s21.size()) throw InputError("trace: frequency and S21 lengths differ");
  if (freq_hz.size() < 2) throw InputError("trace: at least two points are required");
  for (Eigen::Index i = 0; i < freq_hz.size(); ++i) {
    if (!std::isfinite(freq_hz[i]) || !std::isfinite(s21[i].real()) || !std::isfinite(s21[i].imag())) {
      throw InputError("trace: non-finite sample at index " + std::to_string(i));
    }
    if (i > 0 && !(freq_hz[i] > freq_hz[i - 1])) throw InputError("trace: frequencies must be strictly ascending");
  }
}

double NotchParams::internal_q() const { return 1.0 / (1.0 / ql - std::cos(phi_rad) / qc_mag); }

void NotchParams::validate() const {
  if (!(fr_hz > 0)) throw DomainError("notch: fr must be positive");
  if (!(ql > 0)) throw DomainError("notch: Ql must be positive");
  if (!(qc_mag > 0)) throw DomainError("notch: |Qc| must be positive");
  if (!(std::abs(phi_rad) < std::numbers::pi / 2)) throw DomainError("notch: |phi| must be below pi/2");
}

double loaded_q(double qi, double qc_mag, double phi_rad) {
  return 1.0 / (1.0 / qi + std::cos(phi_rad) / qc_mag);
}

Complex model_s21(const NotchParams& p, double f_hz) {
  const Complex environment = p.amp * std::exp(kJ * (p.phase0_rad - kTwoPi * f_hz * p.tau_s));
  const Complex resonator =
      1.0 - (p.ql / p.qc_mag) * std::exp(kJ * p.phi_rad) / Complex(1.0, 2.0 * p.ql * (f_hz / p.fr_hz - 1.0));
  return environment * resonator;
}

Eigen::VectorXcd model_s21(const NotchParams& p, const Eigen::VectorXd& f_hz) {
  Eigen::VectorXcd out(f_hz.size());
  for (Eigen::Index i = 0; i < f_hz.size(); ++i) out[i] = model_s21(p, f_hz[i]);
  return out;
}

static DelayEstimate wing_delay_fit(const S21Trace& trace, double wing_fraction) {
  trace.validate();
  const Eigen::Index n = trace.size();
  if (n < 16) throw FitError("estimate_delay: at least 16 points are required");
  const Eigen::Index wing = static_cast<Eigen::Index>(std::floor(n * wing_fraction / 2.0));
  if (wing < 4) throw FitError("estimate_delay: insufficient off-resonant wing points");

  const double f_lo = trace.freq_hz[0];
  const double span = trace.freq_hz[n - 1] - f_lo;
  const double f_dip = trace.freq_hz[deepest_dip(trace)];
  // The tail regressor is only usable when the dip sits between the wings.
  const bool with_tail = f_dip > trace.freq_hz[wing - 1] && f_dip < trace.freq_hz[n - wing];
  const int columns = with_tail ? 4 : 3;

  Eigen::MatrixXd design = Eigen::MatrixXd::Zero(2 * wing, columns);
  Eigen::VectorXd phase(2 * wing);
  const auto left = unwrapped_arg(trace.s21, 0, wing);
  const auto right = unwrapped_arg(trace.s21, n - wing, n);
  for (Eigen::Index k = 0; k < wing; ++k) {
    for (int side = 0; side < 2; ++side) {
      const Eigen::Index row = side * wing + k;
      const Eigen::Index i = side == 0 ? k : n - wing + k;
      const double f = trace.freq_hz[i];
      design(row, side) = 1.0;
      design(row, 2) = (f - f_lo) / span;
      if (with_tail) design(row, 3) = span / (f - f_dip) * 1e-2;
      phase[row] = side == 0 ? left[static_cast<std::size_t>(k)] : right[static_cast<std::size_t>(k)];
    }
  }
  const auto qr = design.colPivHouseholderQr();
  const Eigen::VectorXd coeff = qr.solve(phase);
  const Eigen::Index dof = design.rows() - columns;
  const double s2 = (design * coeff - phase).squaredNorm() / static_cast<double>(std::max<Eigen::Index>(dof, 1));
  // Uncorrelated samples unwrap into a random walk whose slope looks significant.
  if (!(std::sqrt(s2) < kMaxWingPhaseRms)) {
    throw FitError("estimate_delay: wing phase is incoherent (rms residual above 1 rad)");
  }
  const Eigen::MatrixXd cov = s2 * (design.transpose() * design).inverse();

  DelayEstimate out;
  out.tau_s = -coeff[2] / span / kTwoPi;
  out.stderr_s = std::sqrt(std::max(cov(2, 2), 0.0)) / span / kTwoPi;
  return out;
}

DelayEstimate estimate_delay(const S21Trace& trace, double wing_fraction) {
  DelayEstimate out = wing_delay_fit(trace, wing_fraction);
  out.tau_s = refine_delay_on_circle(trace, out);
  return out;
}

CircleFit circle_fit(const Eigen::VectorXcd& points) {
  const Eigen::Index n = points.size();
  if (n < 3) throw FitError("circle_fit: at least three points are required");
  const Complex mean = points.mean();
  double scale = std::sqrt((points.array() - mean).abs2().mean());
  if (!(scale > 0) || !std::isfinite(scale)) throw FitError("circle_fit: degenerate point set (all points identical)");

  double mxx = 0, myy = 0, mxy = 0, mxz = 0, myz = 0, mzz = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x = (points[i].real() - mean.real()) / scale;
    const double y = (points[i].imag() - mean.imag()) / scale;
    const double z = x * x + y * y;
    mxx += x * x;
    myy += y * y;
    mxy += x * y;
    mxz += x * z;
    myz += y * z;
    mzz += z * z;
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  mxx *= inv_n, myy *= inv_n, mxy *= inv_n, mxz *= inv_n, myz *= inv_n, mzz *= inv_n;

  const double mz = mxx + myy;
  const double cov_xy = mxx * myy - mxy * mxy;
  const double var_z = mzz - mz * mz;
  const double a3 = 4.0 * mz;
  const double a2 = -3.0 * mz * mz - mzz;
  const double a1 = var_z * mz + 4.0 * cov_xy * mz - mxz * mxz - myz * myz;
  const double a0 = mxz * (mxz * myy - myz * mxy) + myz * (myz * mxx - mxz * mxy) - var_z * cov_xy;
  const double a22 = a2 + a2;
  const double a33 = a3 + a3 + a3;

  double root = 0.0;
  double value = a0;
  for (int iter = 0; iter < 99; ++iter) {
    const double slope = a1 + root * (a22 + a33 * root);
    const double next = root - value / slope;
    if (next == root || !std::isfinite(next)) break;
    const double next_value = a0 + next * (a1 + next * (a2 + next * a3));
    if (std::abs(next_value) >= std::abs(value)) break;
    root = next;
    value = next_value;
  }

  const double det = root * root - root * mz + cov_xy;
  if (!(std::abs(det) > 1e-14) || !std::isfinite(det)) throw FitError("circle_fit: points are collinear");
  const double cx = (mxz * (myy - root) - myz * mxy) / det / 2.0;
  const double cy = (myz * (mxx - root) - mxz * mxy) / det / 2.0;

  CircleFit out;
  out.center = mean + scale * Complex(cx, cy);
  out.radius = scale * std::sqrt(cx * cx + cy * cy + mz);
  if (!std::isfinite(out.radius) || !std::isfinite(out.center.real()) || !std::isfinite(out.center.imag())) {
    throw FitError("circle_fit: points are collinear");
  }
  double ss = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double e = std::abs(points[i] - out.center) - out.radius;
    ss += e * e;
  }
  out.rms_residual = std::sqrt(ss * inv_n);
  return out;
}

PhaseFit phase_fit(const S21Trace& trace, Complex center, const LmOptions& options) {
  trace.validate();
  const Eigen::Index n = trace.size();
  if (n < 8) throw FitError("phase_fit: too few points");
  const Eigen::VectorXd& f = trace.freq_hz;
  const Eigen::VectorXcd centred = trace.s21.array() - center;
  Eigen::VectorXd angle(n);
  for (Eigen::Index i = 0; i < n; ++i) angle[i] = std::arg(centred[i]);

  // Seed from the steepest smoothed descent of the unwrapped angle.
  const auto unwrapped = unwrapped_arg(centred, 0, n);
  const Eigen::Index h = std::max<Eigen::Index>(2, n / 100);
  double steepest = 0.0;
  Eigen::Index seed_index = n / 2;
  for (Eigen::Index i = h; i + h < n; ++i) {
    const double v = (unwrapped[static_cast<std::size_t>(i + h)] - unwrapped[static_cast<std::size_t>(i - h)]) /
                     (f[i + h] - f[i - h]);
    if (v < steepest) {
      steepest = v;
      seed_index = i;
    }
  }
  const double fr0 = f[seed_index];
  const double span = f[n - 1] - f[0];
  const double ql_floor = fr0 / span;
  const double ql0 = std::max(-steepest * fr0 / 4.0, ql_floor);

  const PhaseProblem problem{f, angle};
  LmResult best;
  bool have_best = false;
  for (const double multiplier : {1.0, 0.5, 2.0, 0.25, 4.0}) {
    Eigen::VectorXd x0(3);
    x0 << angle[seed_index], ql0 * multiplier, fr0;
    LmResult trial = levenberg_marquardt(problem, x0, options);
    if (!have_best || trial.cost < best.cost) {
      best = std::move(trial);
      have_best = true;
    }
  }

  PhaseFit out;
  out.theta0 = wrap_angle(best.x[0]);
  out.ql = best.x[1];
  out.fr_hz = best.x[2];
  out.rms_residual = std::sqrt(2.0 * best.cost / static_cast<double>(n));
  if (!best.converged) throw FitError("phase_fit: did not converge within the iteration limit");
  if (!(out.ql > 0) || !(out.fr_hz > f[0]) || !(out.fr_hz < f[n - 1])) {
    throw FitError("phase_fit: no resonance found (fr outside the sweep or Ql <= 0)");
  }
  const double swing = std::abs(PhaseProblem::model(best.x, f[0]) - PhaseProblem::model(best.x, f[n - 1]));
  if (swing < std::numbers::pi / 2) throw FitError("phase_fit: no resonance found (phase swing below pi/2)");
  return out;
}

NotchFitResult fit_notch(const S21Trace& input, const FitOptions& options) {
  input.validate();
  const Eigen::Index n = input.size();
  if (n < 20) throw FitError("fit_notch: at least 20 points are required");

  // Work at unit rms magnitude so the fit path does not depend on the overall gain.
  const double gain = std::sqrt(input.s21.squaredNorm() / static_cast<double>(n));
  if (!(gain > 0) || !std::isfinite(gain)) throw FitError("fit_notch: no resonance found (zero trace)");
  S21Trace normalized = input;
  normalized.s21 /= gain;
  const S21Trace& trace = normalized;

  {
    const Eigen::VectorXd magnitude = trace.s21.cwiseAbs();
    if (!(magnitude.maxCoeff() - magnitude.minCoeff() > 1e-9 * magnitude.maxCoeff())) {
      throw FitError("fit_notch: no resonance found (flat trace)");
    }
  }

  const double tau0 = estimate_delay(trace, options.wing_fraction).tau_s;
  S21Trace corrected = trace;
  corrected.s21 = remove_delay(trace, tau0);
  const CircleFit circle = circle_fit(corrected.s21);
  std::vector<ResonanceSeed> seeds;
  const ResonanceSeed from_dip = dip_seed(trace.freq_hz, corrected.s21, circle);
  for (const double multiplier : {1.0, 0.5, 2.0}) {
    seeds.push_back({from_dip.fr_hz, from_dip.ql * multiplier, from_dip.theta0});
  }
  try {
    const PhaseFit phase = phase_fit(corrected, circle.center, options.lm);
    seeds.push_back({phase.fr_hz, phase.ql, phase.theta0});
  } catch (const FitError&) {
    // low-SNR traces: the magnitude-dip seeds carry on alone
  }

  const double f_ref = trace.freq_hz.mean();
  const NotchProblem problem{trace.freq_hz, trace.s21, f_ref};
  std::optional<LmResult> best;
  for (const ResonanceSeed& seed : seeds) {
    const Complex off_resonant = circle.center + circle.radius * std::exp(kJ * (seed.theta0 + std::numbers::pi));
    if (std::abs(off_resonant) == 0.0) continue;
    const Complex centre_n = circle.center / off_resonant;
    const double radius_n = circle.radius / std::abs(off_resonant);
    Eigen::VectorXd x0(7);
    x0 << seed.fr_hz, seed.ql, seed.ql / (2.0 * radius_n), std::arg(1.0 - centre_n), std::abs(off_resonant),
        wrap_angle(std::arg(off_resonant) - kTwoPi * f_ref * tau0), tau0;
    LmResult trial = levenberg_marquardt(problem, x0, options.lm);
    const bool usable = trial.x[1] > 0 && trial.x[0] > trace.freq_hz[0] && trial.x[0] < trace.freq_hz[n - 1] &&
                        std::isfinite(trial.cost);
    if (usable && (!best || trial.cost < best->cost)) best = std::move(trial);
  }
  if (!best) throw FitError("fit_notch: no resonance found (no seed converged inside the sweep)");
  // The LM stopping rule leaves x within the cost tolerance of the minimum;
  // undamped Gauss-Newton steps finish the job.
  for (int polish = 0; polish < 5; ++polish) {
    LmResult& lm = *best;
    const Eigen::VectorXd step = lm.jacobian.colPivHouseholderQr().solve(-lm.residual);
    const Eigen::VectorXd x_trial = lm.x + step;
    Eigen::VectorXd r_trial(problem.residual_count());
    problem.residual(x_trial, r_trial);
    const double cost_trial = 0.5 * r_trial.squaredNorm();
    // Near the optimum the cost is flat to rounding; only a clear rise rejects the step.
    if (!(cost_trial <= lm.cost * (1.0 + 1e-10))) break;
    const bool settled = step.cwiseAbs().cwiseQuotient(lm.x.cwiseAbs().cwiseMax(1e-300)).maxCoeff() < 1e-15;
    lm.x = x_trial;
    lm.residual = r_trial;
    lm.cost = cost_trial;
    problem.jacobian(lm.x, lm.jacobian);
    if (settled) break;
  }
  const LmResult& lm = *best;

  Eigen::VectorXd x = lm.x;
  if (x[2] < 0) {  // (-Qc, phi) and (Qc, phi + pi) describe the same resonator
    x[2] = -x[2];
    x[3] += std::numbers::pi;
  }
  if (x[4] < 0) {
    x[4] = -x[4];
    x[5] += std::numbers::pi;
  }
  x[3] = wrap_angle(x[3]);

  NotchFitResult out;
  out.n_points = n;
  out.iterations = lm.iterations;
  out.converged = lm.converged;
  out.params = {x[0], x[1], x[2], x[3], x[4], wrap_angle(x[5] + kTwoPi * f_ref * x[6]), x[6]};
  out.rms_residual = std::sqrt(2.0 * lm.cost / static_cast<double>(n)) / out.params.amp;

  // Covariance in the internal layout, then mapped to phase0 = phase_c + 2 pi f_ref tau.
  const double dof = static_cast<double>(2 * n - 7);
  const double s2 = 2.0 * lm.cost / dof;
  const Eigen::MatrixXd cov_internal = s2 * inverse_normal_matrix(lm.jacobian);
  Eigen::MatrixXd transform = Eigen::MatrixXd::Identity(7, 7);
  transform(5, 6) = kTwoPi * f_ref;
  const Eigen::MatrixXd cov = transform * cov_internal * transform.transpose();
  std::array<double, 7> errors{};
  for (int k = 0; k < 7; ++k) errors[static_cast<std::size_t>(k)] = std::sqrt(std::max(cov(k, k), 0.0));
  out.std_errors = NotchParams::from_array(errors);

  out.qi = out.params.internal_q();
  out.nonphysical = !(out.qi > 0) || !std::isfinite(out.qi) || !(out.params.ql > 0) ||
                    !(std::abs(out.params.phi_rad) < std::numbers::pi / 2);
  {
    const double qi = out.qi, ql = out.params.ql, qc = out.params.qc_mag, phi = out.params.phi_rad;
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(7);
    grad[1] = qi * qi / (ql * ql);
    grad[2] = -qi * qi * std::cos(phi) / (qc * qc);
    grad[3] = -qi * qi * std::sin(phi) / qc;
    out.qi_stderr = std::sqrt(std::max(grad.dot(cov * grad), 0.0));
  }
  if (!(out.params.fr_hz > trace.freq_hz[0] && out.params.fr_hz < trace.freq_hz[n - 1])) {
    throw FitError("fit_notch: refined resonance left the sweep window");
  }
  {
    // Detection: the circle diameter Ql/|Qc| must stand clear of its own uncertainty.
    const double ql = out.params.ql, qc = out.params.qc_mag;
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(7);
    grad[1] = 1.0 / qc;
    grad[2] = -ql / (qc * qc);
    const double diameter = ql / qc;
    const double sigma = std::sqrt(std::max(grad.dot(cov * grad), 0.0));
    if (!(diameter > kDetectionSigma * sigma)) {
      throw FitError("fit_notch: no resonance found (dip depth not significant)");
    }
  }
  out.params.amp *= gain;
  out.std_errors.amp *= gain;
  return out;
}

namespace detail {

Eigen::VectorXd notch_residual(const Eigen::VectorXd& x, const Eigen::VectorXd& f, const Eigen::VectorXcd& data,
                               double f_ref) {
  const NotchProblem problem{f, data, f_ref};
  Eigen::VectorXd r(problem.residual_count());
  problem.residual(x, r);
  return r;
}

Eigen::MatrixXd notch_jacobian(const Eigen::VectorXd& x, const Eigen::VectorXd& f, double f_ref) {
  const Eigen::VectorXcd unused;
  const NotchProblem problem{f, unused, f_ref};
  Eigen::MatrixXd jac(problem.residual_count(), NotchParams::kCount);
  problem.jacobian(x, jac);
  return jac;
}

}  // namespace detail

S21Trace synth_trace(const NotchParams& p, const Eigen::VectorXd& grid, double noise_sigma, std::uint64_t seed) {
  if (!(noise_sigma >= 0)) throw DomainError("synth_trace: noise sigma must be non-negative");
  S21Trace out;
  out.freq_hz = grid;
  out.s21 = model_s21(p, grid);
  if (noise_sigma > 0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, noise_sigma);
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
      const double re = noise(rng);
      const double im = noise(rng);
      out.s21[i] += Complex(re, im);
    }
  }
  out.source = "synthetic";
  return out;
}

Eigen::VectorXd linewidth_grid(const NotchParams& p, double linewidths, Eigen::Index points, double offset_fraction) {
  if (points < 2) throw DomainError("linewidth_grid: at least two points");
  const double span = linewidths * p.fr_hz / p.ql;
  const double step = span / static_cast<double>(points - 1);
  const double start = p.fr_hz - span / 2.0 + offset_fraction * step;
  Eigen::VectorXd grid(points);
  for (Eigen::Index i = 0; i < points; ++i) grid[i] = start + step * static_cast<double>(i);
  return grid;
}

std::vector<FrequencyPoint> resonance_shift(const std::vector<FrequencyPoint>& fr_series, double t_ref,
                                            double tolerance_k) {
  if (fr_series.empty()) throw InputError("resonance_shift: empty series");
  const auto nearest = std::min_element(fr_series.begin(), fr_series.end(), [&](const auto& a, const auto& b) {
    return std::abs(a.temperature_k - t_ref) < std::abs(b.temperature_k - t_ref);
  });
  if (std::abs(nearest->temperature_k - t_ref) > tolerance_k) {
    throw InputError("resonance_shift: reference temperature not present in the series");
  }
  std::vector<FrequencyPoint> out;
  out.reserve(fr_series.size());
  for (const auto& point : fr_series) out.push_back({point.temperature_k, point.value_hz - nearest->value_hz});
  return out;
}

}  // namespace scres
