#include "mnls/scalar_profile.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "mnls/error.hpp"
#include "mnls/quadrature.hpp"

namespace mnls {

void ProfileConfig::validate() const {
  if (dim < 1 || dim > 3) throw Error(ErrorKind::InvalidArgument, "dim must be 1, 2 or 3");
  if (!(p > 0.0)) throw Error(ErrorKind::InvalidArgument, "p must be positive");
  // H^1 embeds in L^{2p+2} iff 2p + 2 < 2N/(N-2).
  if (dim >= 3 && p >= 2.0 / (dim - 2))
    throw Error(ErrorKind::SupercriticalExponent,
                "p = " + std::to_string(p) + " >= 2/(N-2) = " + std::to_string(2.0 / (dim - 2)));
  if (!(r_max > 0.0)) throw Error(ErrorKind::InvalidArgument, "r_max must be positive");
  if (n_grid < 256) throw Error(ErrorKind::InvalidArgument, "n_grid must be >= 256");
  if (!(shoot_tol >= 0.0)) throw Error(ErrorKind::InvalidArgument, "shoot_tol must be >= 0");
  if (!(quad_tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "quad_tol must be positive");
  if (!(bracket_lo > 0.0 && bracket_hi > bracket_lo))
    throw Error(ErrorKind::InvalidArgument, "need 0 < bracket_lo < bracket_hi");
}

double closed_form_1d(double p, double x) {
  return std::pow(p + 1.0, 1.0 / (2.0 * p)) * std::pow(1.0 / std::cosh(p * x), 1.0 / p);
}

double linear_tail(int dim, double radius) {
  const double nu = 0.5 * (dim - 2);
  return std::pow(radius, -nu) * std::cyl_bessel_k(std::abs(nu), radius);
}

double linear_tail_derivative(int dim, double radius) {
  const double nu = 0.5 * (dim - 2);
  return -std::pow(radius, -nu) * std::cyl_bessel_k(std::abs(nu + 1.0), radius);
}

namespace {

using State = std::array<double, 2>;  // (Q, Q')

struct RadialOde {
  int dim;
  double p;

  State operator()(double r, const State& y) const {
    const double q = y[0];
    const double nonlinear = std::pow(std::abs(q), 2.0 * p) * q;
    return {y[1], -(dim - 1) / r * y[1] + q - nonlinear};
  }
};

// Dormand-Prince 5(4) tableau and the continuous extension of Hairer's DOPRI5.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

struct Dense {
  std::array<State, 5> rc;
  State at(double theta) const {
    const double s = 1.0 - theta;
    State out{};
    for (int i = 0; i < 2; ++i)
      out[i] = rc[0][i] +
               theta * (rc[1][i] + s * (rc[2][i] + theta * (rc[3][i] + s * rc[4][i])));
    return out;
  }
};

enum class ShotOutcome { Undershoot, Overshoot };

// Integrates from the series start around r = 0. `on_step(r0, r1, dense)` is
// called for every accepted step and may return false to stop early.
template <class OnStep>
ShotOutcome shoot(const RadialOde& ode, double q0, double r_end, double rtol, OnStep&& on_step) {
  const double r_start = 1e-5;
  const double curvature = (q0 - std::pow(q0, 2.0 * ode.p + 1.0)) / ode.dim;
  State y{q0 + 0.5 * curvature * r_start * r_start, curvature * r_start};
  double r = r_start;
  double h = 1e-4;
  const double atol = 1e-16;
  State k1 = ode(r, y);

  while (r < r_end) {
    h = std::min(h, r_end - r);
    auto add = [&](std::initializer_list<std::pair<double, const State*>> terms) {
      State s = y;
      for (auto [c, k] : terms)
        for (int i = 0; i < 2; ++i) s[i] += h * c * (*k)[i];
      return s;
    };
    const State k2 = ode(r + c2 * h, add({{a21, &k1}}));
    const State k3 = ode(r + c3 * h, add({{a31, &k1}, {a32, &k2}}));
    const State k4 = ode(r + c4 * h, add({{a41, &k1}, {a42, &k2}, {a43, &k3}}));
    const State k5 = ode(r + c5 * h, add({{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
    const State k6 =
        ode(r + h, add({{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
    const State y1 = add({{a71, &k1}, {a73, &k3}, {a74, &k4}, {a75, &k5}, {a76, &k6}});
    const State k7 = ode(r + h, y1);

    double err = 0.0;
    for (int i = 0; i < 2; ++i) {
      const double e =
          h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double sc = atol + rtol * std::max(std::abs(y[i]), std::abs(y1[i]));
      err += (e / sc) * (e / sc);
    }
    err = std::sqrt(0.5 * err);
    if (!std::isfinite(err)) {
      h *= 0.1;
      continue;
    }
    if (err > 1.0) {
      h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
      continue;
    }

    Dense dense;
    for (int i = 0; i < 2; ++i) {
      dense.rc[0][i] = y[i];
      dense.rc[1][i] = y1[i] - y[i];
      dense.rc[2][i] = h * k1[i] - dense.rc[1][i];
      dense.rc[3][i] = dense.rc[1][i] - h * k7[i] - dense.rc[2][i];
      dense.rc[4][i] =
          h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
    }
    const double r1 = r + h;
    const bool keep_going = on_step(r, r1, dense);
    y = y1;
    k1 = k7;
    r = r1;
    if (y[0] < 0.0) return ShotOutcome::Overshoot;
    if (y[1] > 0.0) return ShotOutcome::Undershoot;
    if (!keep_going) break;
    h *= std::min(5.0, 0.9 * std::pow(std::max(err, 1e-10), -0.2));
  }
  // No event yet: the sign of the growing-mode coefficient decides.
  return y[0] + y[1] > 0.0 ? ShotOutcome::Undershoot : ShotOutcome::Overshoot;
}

ShotOutcome classify(const RadialOde& ode, double q0, double r_limit, double rtol) {
  return shoot(ode, q0, r_limit, rtol, [](double, double, const Dense&) { return true; });
}

struct Trajectory {
  std::vector<double> q;
  std::vector<double> dq;
  std::size_t filled = 0;
};

Trajectory sample(const RadialOde& ode, double q0, const std::vector<double>& grid, double rtol) {
  Trajectory t;
  t.q.assign(grid.size(), 0.0);
  t.dq.assign(grid.size(), 0.0);
  t.q[0] = q0;
  t.filled = 1;
  const double curvature = (q0 - std::pow(q0, 2.0 * ode.p + 1.0)) / ode.dim;
  while (t.filled < grid.size() && grid[t.filled] <= 1e-5) {
    const double r = grid[t.filled];
    t.q[t.filled] = q0 + 0.5 * curvature * r * r;
    t.dq[t.filled] = curvature * r;
    ++t.filled;
  }
  shoot(ode, q0, grid.back(), rtol, [&](double r0, double r1, const Dense& dense) {
    while (t.filled < grid.size() && grid[t.filled] <= r1) {
      const State s = dense.at((grid[t.filled] - r0) / (r1 - r0));
      if (s[0] <= 0.0 || s[1] >= 0.0) return false;
      t.q[t.filled] = s[0];
      t.dq[t.filled] = s[1];
      ++t.filled;
    }
    return true;
  });
  return t;
}

}  // namespace

ScalarProfile solve_profile(const ProfileConfig& cfg) {
  cfg.validate();
  const RadialOde ode{cfg.dim, cfg.p};
  const double r_limit = std::max(cfg.r_max, 100.0);

  double lo = cfg.bracket_lo;
  double hi = cfg.bracket_hi;
  if (classify(ode, lo, r_limit, cfg.quad_tol) != ShotOutcome::Undershoot ||
      classify(ode, hi, r_limit, cfg.quad_tol) != ShotOutcome::Overshoot)
    throw Error(ErrorKind::NoConvergence, "no shooting bracket for Q(0) in [" +
                                              std::to_string(lo) + ", " + std::to_string(hi) +
                                              "]");
  while (hi - lo > cfg.shoot_tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (classify(ode, mid, r_limit, cfg.quad_tol) == ShotOutcome::Overshoot ? hi : lo) = mid;
  }

  ScalarProfile prof;
  prof.config = cfg;
  // Keep the spacing below 2% of the core width Q(0)^{-p}.
  const double core = std::pow(0.5 * (lo + hi), -cfg.p);
  const auto n = std::max(static_cast<std::size_t>(cfg.n_grid),
                          static_cast<std::size_t>(std::ceil(cfg.r_max / (0.02 * core))) + 1);
  const double h = cfg.r_max / static_cast<double>(n - 1);
  prof.r.resize(n);
  for (std::size_t i = 0; i < n; ++i) prof.r[i] = h * static_cast<double>(i);

  // The two bracketing trajectories agree until the unstable mode grows out
  // of roundoff; past that point the linear decaying tail is grafted on.
  const Trajectory under = sample(ode, lo, prof.r, cfg.quad_tol);
  const Trajectory over = sample(ode, hi, prof.r, cfg.quad_tol);
  std::size_t reliable = std::min(under.filled, over.filled);
  for (std::size_t i = 1; i < reliable; ++i) {
    if (std::abs(over.q[i] - under.q[i]) > 1e-8 * under.q[i]) {
      reliable = i;
      break;
    }
  }
  if (reliable < 2) throw Error(ErrorKind::NoConvergence, "shooting trajectory left the profile");

  prof.q0 = 0.5 * (lo + hi);
  prof.q.resize(n);
  prof.dq.resize(n);
  for (std::size_t i = 0; i < reliable; ++i) {
    prof.q[i] = 0.5 * (under.q[i] + over.q[i]);
    prof.dq[i] = 0.5 * (under.dq[i] + over.dq[i]);
  }
  const std::size_t last = reliable - 1;
  prof.tail_start = prof.r[last];
  const double r_star = prof.r[last];
  const double amp = prof.q[last] / linear_tail(cfg.dim, r_star);
  for (std::size_t i = reliable; i < n; ++i) {
    prof.q[i] = amp * linear_tail(cfg.dim, prof.r[i]);
    prof.dq[i] = amp * linear_tail_derivative(cfg.dim, prof.r[i]);
  }

  const ProfileIntegrals in = profile_integrals(prof);
  prof.mass = in.mass;
  prof.kinetic = in.kinetic;
  prof.i1 = in.i1;
  prof.j1 = in.j1;
  return prof;
}

ProfileIntegrals profile_integrals(const ScalarProfile& prof) {
  const int dim = prof.config.dim;
  const double p = prof.config.p;
  const std::size_t n = prof.r.size();
  std::vector<double> fm(n), fk(n), fj(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = dim == 1 ? 1.0 : std::pow(prof.r[i], dim - 1);
    const double q = prof.q[i];
    fm[i] = w * q * q;
    fk[i] = w * prof.dq[i] * prof.dq[i];
    fj[i] = w * std::pow(q, 2.0 * p + 2.0);
  }
  const double h = prof.spacing();
  const double omega = surface_measure(dim);
  ProfileIntegrals out;
  out.mass = omega * simpson(fm, h);
  out.kinetic = omega * simpson(fk, h);
  out.j1 = omega * simpson(fj, h);
  out.i1 = out.mass + out.kinetic;
  return out;
}

double ScalarProfile::value(double radius) const {
  radius = std::abs(radius);
  if (radius >= r.back()) return q.back() * linear_tail(config.dim, radius) /
                                 linear_tail(config.dim, r.back());
  const double h = spacing();
  const auto i = std::min(static_cast<std::size_t>(radius / h), r.size() - 2);
  const double t = (radius - r[i]) / h;
  const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
  const double h10 = t * (1 - t) * (1 - t);
  const double h01 = t * t * (3 - 2 * t);
  const double h11 = t * t * (t - 1);
  return h00 * q[i] + h10 * h * dq[i] + h01 * q[i + 1] + h11 * h * dq[i + 1];
}

double ScalarProfile::derivative(double radius) const {
  const double sign = radius < 0.0 ? -1.0 : 1.0;
  radius = std::abs(radius);
  if (radius >= r.back())
    return sign * q.back() * linear_tail_derivative(config.dim, radius) /
           linear_tail(config.dim, r.back());
  const double h = spacing();
  const auto i = std::min(static_cast<std::size_t>(radius / h), r.size() - 2);
  const double t = (radius - r[i]) / h;
  const double g00 = 6 * t * (t - 1);
  const double g10 = (1 - t) * (1 - 3 * t);
  const double g01 = -6 * t * (t - 1);
  const double g11 = t * (3 * t - 2);
  return sign * (g00 * q[i] / h + g10 * dq[i] + g01 * q[i + 1] / h + g11 * dq[i + 1]);
}

double ScalarProfile::pohozaev_residual() const {
  const int dim = config.dim;
  const double lhs = 0.5 * (dim - 2) * kinetic + 0.5 * dim * mass;
  const double rhs = dim / (2.0 * config.p + 2.0) * j1;
  return std::abs(lhs - rhs) / std::abs(rhs);
}

double ScalarProfile::bound_state_residual() const { return std::abs(i1 - j1) / std::abs(j1); }

}  // namespace mnls
