#include "sagbell/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "linalg.hpp"

namespace sagbell {

namespace {

constexpr double kPi = std::numbers::pi;

double model_value(FringeKind kind, const FringeParams& p, double x) {
  switch (kind) {
    case FringeKind::sin2: {
      const double s = std::sin(p.scale_factor * x + p.offset_phase);
      return p.amplitude * s * s + p.baseline;
    }
    case FringeKind::cos2: {
      const double c = std::cos(p.scale_factor * x + p.offset_phase);
      return p.amplitude * c * c + p.baseline;
    }
    case FringeKind::cosine:
      return p.amplitude * std::cos(2.0 * p.scale_factor * x + p.offset_phase) + p.baseline;
  }
  return 0.0;
}

// Analytic derivatives with respect to (A, S_T, o, D).
std::array<double, 4> model_jacobian(FringeKind kind, const FringeParams& p, double x) {
  if (kind == FringeKind::cosine) {
    const double u = 2.0 * p.scale_factor * x + p.offset_phase;
    return {std::cos(u), -2.0 * p.amplitude * std::sin(u) * x, -p.amplitude * std::sin(u), 1.0};
  }
  const double u = p.scale_factor * x + p.offset_phase;
  const double s2 = std::sin(2.0 * u);
  const double sign = kind == FringeKind::sin2 ? 1.0 : -1.0;
  const double base = kind == FringeKind::sin2 ? std::sin(u) * std::sin(u)
                                               : std::cos(u) * std::cos(u);
  return {base, sign * p.amplitude * s2 * x, sign * p.amplitude * s2, 1.0};
}

double weighted_chi2(FringeKind kind, const FringeParams& p, const WeightedSeries& d) {
  double sum = 0.0;
  for (std::size_t i = 0; i < d.x.size(); ++i) {
    const double r = (d.y[i] - model_value(kind, p, d.x[i])) / d.sigma[i];
    sum += r * r;
  }
  return sum;
}

double wrap_phase(double value, double period) {
  value = std::fmod(value, period);
  const double half = period / 2.0;
  if (value > half) value -= period;
  if (value <= -half) value += period;
  return value;  // in (-period/2, period/2]
}

// Canonical form: A > 0, S_T > 0, o inside one period. Sign flips are exact
// affine reparametrizations; the covariance is mapped through them.
void canonicalize(FringeKind kind, FringeParams& p, Matrix4& cov) {
  auto apply_affine = [&cov](const Matrix4& m) {
    Matrix4 tmp{};
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        double s = 0.0;
        for (int k = 0; k < 4; ++k) s += m[i][k] * cov[k][j];
        tmp[i][j] = s;
      }
    Matrix4 out{};
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        double s = 0.0;
        for (int k = 0; k < 4; ++k) s += tmp[i][k] * m[j][k];
        out[i][j] = s;
      }
    cov = out;
  };

  const double half_pi = kPi / 2.0;
  if (p.scale_factor < 0.0) {
    // sin^2(-u) = sin^2(u) and cos(-u) = cos(u): negate both S_T and o.
    p.scale_factor = -p.scale_factor;
    p.offset_phase = -p.offset_phase;
    apply_affine({{{1, 0, 0, 0}, {0, -1, 0, 0}, {0, 0, -1, 0}, {0, 0, 0, 1}}});
  }
  if (p.amplitude < 0.0) {
    if (kind == FringeKind::cosine) {
      // -A cos(u) = A cos(u + pi).
      p.amplitude = -p.amplitude;
      p.offset_phase += kPi;
      apply_affine({{{-1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}});
    } else {
      // A f(u) + D = -A f(u + pi/2) + (D + A) for f in {sin^2, cos^2}.
      const double a = p.amplitude;
      p.amplitude = -a;
      p.offset_phase += half_pi;
      p.baseline += a;
      apply_affine({{{-1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {1, 0, 0, 1}}});
    }
  }
  // Phase wrapping by whole periods leaves the model and covariance intact.
  const double period = kind == FringeKind::cosine ? 2.0 * kPi : kPi;
  p.offset_phase = wrap_phase(p.offset_phase, period);
}

void validate_series(const WeightedSeries& d) {
  if (d.x.size() != d.y.size() || d.x.size() != d.sigma.size())
    throw std::invalid_argument("series arrays must have equal length");
  for (double s : d.sigma)
    if (!(s > 0.0)) throw std::invalid_argument("sigmas must be positive");
}

}  // namespace

std::string to_string(FringeKind kind) {
  switch (kind) {
    case FringeKind::sin2: return "sin2";
    case FringeKind::cos2: return "cos2";
    case FringeKind::cosine: return "cosine";
  }
  return "?";
}

double FringeModel::evaluate(double x) const { return model_value(kind, params, x); }

WeightedSeries channel_series(const SweepDataset& data, const std::string& channel) {
  const int index = data.channel_index(channel);
  if (index < 0) throw std::invalid_argument("unknown channel name: " + channel);
  WeightedSeries series;
  series.x = data.omegas();
  series.y = data.channel(index);
  series.sigma.reserve(series.y.size());
  for (double y : series.y) series.sigma.push_back(std::max(1.0, std::sqrt(std::max(y, 0.0))));
  return series;
}

std::optional<FringeParams> initial_guess(FringeKind kind, const WeightedSeries& data,
                                          const FitOptions& options) {
  validate_series(data);
  if (data.x.size() < 8) throw std::invalid_argument("need at least 8 points");

  const auto [min_it, max_it] = std::minmax_element(data.y.begin(), data.y.end());
  const double lo = *min_it, hi = *max_it;
  const double span = hi - lo;
  if (!(span > 1e-12 * std::max(1.0, std::abs(hi)))) return std::nullopt;

  double mean = 0.0;
  for (double y : data.y) mean += y;
  mean /= double(data.y.size());

  // The counts oscillate at angular frequency 2 S_T in omega for all three
  // model kinds; scan a periodogram over candidate scale factors.
  double best_freq = options.frequency_min;
  double best_power = -1.0;
  for (int k = 0; k < options.frequency_steps; ++k) {
    const double f = options.frequency_min +
                     (options.frequency_max - options.frequency_min) * double(k) /
                         double(options.frequency_steps - 1);
    double cs = 0.0, sn = 0.0;
    for (std::size_t i = 0; i < data.x.size(); ++i) {
      const double yc = data.y[i] - mean;
      cs += yc * std::cos(2.0 * f * data.x[i]);
      sn += yc * std::sin(2.0 * f * data.x[i]);
    }
    const double power = cs * cs + sn * sn;
    if (power > best_power) {
      best_power = power;
      best_freq = f;
    }
  }

  FringeParams guess;
  guess.baseline = lo;
  guess.amplitude = span;
  guess.scale_factor = best_freq;

  const double period = kind == FringeKind::cosine ? 2.0 * kPi : kPi;
  double best_o = 0.0;
  double best_chi = std::numeric_limits<double>::infinity();
  for (int k = 0; k < options.phase_steps; ++k) {
    FringeParams trial = guess;
    trial.offset_phase = -period / 2.0 + period * double(k) / double(options.phase_steps);
    const double chi = weighted_chi2(kind, trial, data);
    if (chi < best_chi) {
      best_chi = chi;
      best_o = trial.offset_phase;
    }
  }
  guess.offset_phase = best_o;
  return guess;
}

double weighted_gradient_norm(const WeightedSeries& data, FringeKind kind,
                              const FringeParams& params) {
  validate_series(data);
  std::array<double, 4> g{};
  for (std::size_t i = 0; i < data.x.size(); ++i) {
    const double w = 1.0 / (data.sigma[i] * data.sigma[i]);
    const double r = data.y[i] - model_value(kind, params, data.x[i]);
    const auto j = model_jacobian(kind, params, data.x[i]);
    for (int k = 0; k < 4; ++k) g[k] += w * j[k] * r;
  }
  double norm = 0.0;
  for (double v : g) norm += v * v;
  return std::sqrt(norm);
}

FringeFitReport fit_fringe(const WeightedSeries& data, FringeKind kind,
                           const FitOptions& options) {
  validate_series(data);
  FringeFitReport report;
  report.model.kind = kind;
  report.n_points = int(data.x.size());
  if (data.x.size() < 8) throw std::invalid_argument("need at least 8 points");

  const auto guess = initial_guess(kind, data, options);
  if (!guess) {
    report.status = FitStatus::unidentifiable_frequency;
    report.diagnostic = "unidentifiable frequency: series is constant";
    return report;
  }

  FringeParams p = *guess;
  double chi2 = weighted_chi2(kind, p, data);
  double lambda = 1e-3;
  bool converged = false;
  int iteration = 0;

  for (; iteration < options.max_iterations && !converged; ++iteration) {
    // Normal equations J^T W J dp = J^T W r with adaptive diagonal damping.
    double jtj[16] = {};
    double g[4] = {};
    for (std::size_t i = 0; i < data.x.size(); ++i) {
      const double w = 1.0 / (data.sigma[i] * data.sigma[i]);
      const double r = data.y[i] - model_value(kind, p, data.x[i]);
      const auto j = model_jacobian(kind, p, data.x[i]);
      for (int a = 0; a < 4; ++a) {
        g[a] += w * j[a] * r;
        for (int b = 0; b <= a; ++b) jtj[4 * a + b] += w * j[a] * j[b];
      }
    }
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b) jtj[4 * a + b] = jtj[4 * b + a];

    bool stepped = false;
    for (int attempt = 0; attempt < 60; ++attempt) {
      double damped[16];
      for (int k = 0; k < 16; ++k) damped[k] = jtj[k];
      for (int a = 0; a < 4; ++a) {
        const double diag = jtj[4 * a + a];
        damped[4 * a + a] = diag + lambda * (diag > 0.0 ? diag : 1.0);
      }
      double step[4] = {g[0], g[1], g[2], g[3]};
      double factor[16];
      for (int k = 0; k < 16; ++k) factor[k] = damped[k];
      if (!detail::cholesky(factor, 4)) {
        lambda *= 10.0;
        continue;
      }
      detail::cholesky_solve(factor, step, 4);

      FringeParams trial = p;
      trial.amplitude += step[0];
      trial.scale_factor += step[1];
      trial.offset_phase += step[2];
      trial.baseline += step[3];
      const double trial_chi2 = weighted_chi2(kind, trial, data);
      if (trial_chi2 <= chi2) {
        p = trial;
        chi2 = trial_chi2;
        lambda = std::max(lambda * 0.3, 1e-12);
        stepped = true;
        // Relative step convergence over all four parameters.
        bool small = true;
        const std::array<double, 4> values = trial.as_array();
        for (int k = 0; k < 4; ++k)
          if (std::abs(step[k]) >
              options.step_tolerance * (std::abs(values[k]) + options.step_tolerance))
            small = false;
        converged = small;
        break;
      }
      lambda *= 10.0;
    }
    if (!stepped) break;  // damping exhausted, treat as stalled
  }

  report.model.params = p;
  report.iterations = iteration;
  report.reduced_chi_square =
      data.x.size() > 4 ? chi2 / double(data.x.size() - 4) : std::numeric_limits<double>::quiet_NaN();

  // Covariance from the undamped normal matrix at the final iterate.
  double jtj[16] = {};
  for (std::size_t i = 0; i < data.x.size(); ++i) {
    const double w = 1.0 / (data.sigma[i] * data.sigma[i]);
    const auto j = model_jacobian(kind, p, data.x[i]);
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b <= a; ++b) jtj[4 * a + b] += w * j[a] * j[b];
  }
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) jtj[4 * a + b] = jtj[4 * b + a];

  if (detail::spd_inverse(jtj, 4)) {
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) report.covariance[a][b] = jtj[4 * a + b];
  } else {
    report.status = FitStatus::unidentifiable_frequency;
    report.diagnostic = "unidentifiable frequency: singular normal matrix";
    return report;
  }

  canonicalize(kind, report.model.params, report.covariance);
  for (int a = 0; a < 4; ++a)
    report.standard_errors[a] = std::sqrt(std::max(0.0, report.covariance[a][a]));

  if (!converged) {
    report.status = FitStatus::max_iterations_reached;
    report.diagnostic = "no convergence within the iteration budget; last iterate reported";
  }

  const double a_fit = report.model.params.amplitude;
  const double d_fit = report.model.params.baseline;
  if (kind == FringeKind::cosine || a_fit + 2.0 * d_fit > 0.0) {
    const auto [v, sv] = visibility_from_fit(report);
    report.visibility = v;
    report.visibility_sigma = sv;
  } else {
    report.visibility = std::numeric_limits<double>::quiet_NaN();
    report.visibility_sigma = std::numeric_limits<double>::quiet_NaN();
  }
  return report;
}

std::pair<double, double> visibility_from_fit(const FringeFitReport& report) {
  const auto& p = report.model.params;
  if (report.model.kind == FringeKind::cosine) {
    // The cosine model acts on a normalized correlation; contrast is A itself.
    return {p.amplitude, report.standard_errors[0]};
  }
  const double denom = p.amplitude + 2.0 * p.baseline;
  if (!(denom > 0.0)) throw std::domain_error("visibility undefined: A + 2D must be positive");
  const double v = p.amplitude / denom;
  // First-order propagation through the (A, D) covariance block.
  const double dv_da = 2.0 * p.baseline / (denom * denom);
  const double dv_dd = -2.0 * p.amplitude / (denom * denom);
  const double var = dv_da * dv_da * report.covariance[0][0] +
                     2.0 * dv_da * dv_dd * report.covariance[0][3] +
                     dv_dd * dv_dd * report.covariance[3][3];
  return {v, std::sqrt(std::max(0.0, var))};
}

std::vector<VisibilityPoint> visibility_series(std::span<const double> c_dd,
                                               std::span<const double> c_aa,
                                               std::span<const double> c_da,
                                               std::span<const double> c_ad) {
  const std::size_t n = c_dd.size();
  if (c_aa.size() != n || c_da.size() != n || c_ad.size() != n)
    throw std::invalid_argument("visibility series require four aligned arrays");
  std::vector<VisibilityPoint> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double total = c_dd[i] + c_aa[i] + c_da[i] + c_ad[i];
    VisibilityPoint point;
    if (total <= 0.0) {
      point.defined = false;
      out.push_back(point);
      continue;
    }
    const double v = (c_dd[i] + c_aa[i] - c_da[i] - c_ad[i]) / total;
    auto var = [](double c) { return c < 1.0 ? 1.0 : c; };
    const double plus = (1.0 - v) * (1.0 - v) * (var(c_dd[i]) + var(c_aa[i]));
    const double minus = (1.0 + v) * (1.0 + v) * (var(c_da[i]) + var(c_ad[i]));
    point.value = v;
    point.sigma = std::sqrt(plus + minus) / total;
    out.push_back(point);
  }
  return out;
}

}  // namespace sagbell
