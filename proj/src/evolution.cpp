#include "mnls/evolution.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "mnls/error.hpp"

namespace mnls {

void Grid::validate() const {
  if (dim != 1 && dim != 2) throw Error(ErrorKind::InvalidArgument, "evolution grid must be 1D or 2D");
  if (n < 64 || (n & (n - 1)) != 0) throw Error(ErrorKind::InvalidArgument, "grid size must be a power of two >= 64");
  if (!(length > 0.0)) throw Error(ErrorKind::InvalidArgument, "box length must be positive");
}

std::size_t Grid::size() const { return dim == 1 ? n : n * n; }

double Grid::cell() const { return dim == 1 ? spacing() : spacing() * spacing(); }

double Grid::radius2(std::size_t idx) const {
  const double x = coordinate(idx % n);
  if (dim == 1) return x * x;
  const double y = coordinate(idx / n);
  return x * x + y * y;
}

void EvolveConfig::validate() const {
  if (!(dt > 0.0)) throw Error(ErrorKind::InvalidArgument, "dt must be positive");
  if (!(t_end > 0.0)) throw Error(ErrorKind::InvalidArgument, "t_end must be positive");
  if (!(blowup_factor > 1.0)) throw Error(ErrorKind::InvalidArgument, "blowup_factor must exceed 1");
  if (record_every < 1) throw Error(ErrorKind::InvalidArgument, "record_every must be >= 1");
  if (max_frames < 2) throw Error(ErrorKind::InvalidArgument, "max_frames must be >= 2");
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Global: return "GLOBAL";
    case Verdict::Blowup: return "BLOWUP";
    case Verdict::Inconclusive: return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

namespace {

// s^e for s >= 0, with a fast path when e is a small integer.
double power(double s, double e) {
  const double r = std::round(e);
  if (r == e && r >= 0.0 && r <= 8.0) {
    double out = 1.0;
    for (int i = 0; i < static_cast<int>(r); ++i) out *= s;
    return out;
  }
  return std::pow(s, e);
}

}  // namespace

Stepper::Stepper(const Grid& grid, const CouplingMatrix& k, double p)
    : grid_(grid), k_(k), p_(p), fft_((grid.validate(), grid.dim), grid.n), kern_(&kernels::active()) {
  if (!(p > 0.0)) throw Error(ErrorKind::InvalidArgument, "p must be positive");
  k2_ = wavenumber_squared(grid.dim, grid.n, grid.length);
  propagator_.resize(grid.size());
  a2_.assign(k.size(), std::vector<double>(grid.size()));
  scratch_.resize(grid.size());
}

void Stepper::nonlinear(FieldState& state, double tau) {
  const std::size_t m = state.components();
  const std::size_t total = grid_.size();
  for (std::size_t i = 0; i < m; ++i) kern_->abs2(state.v[i].data(), a2_[i].data(), total);
  std::array<double, 16> outer{};
  std::vector<double> outer_heap;
  double* pw = outer.data();
  if (m > outer.size()) {
    outer_heap.resize(m);
    pw = outer_heap.data();
  }
  for (std::size_t idx = 0; idx < total; ++idx) {
    for (std::size_t j = 0; j < m; ++j) pw[j] = power(std::sqrt(a2_[j][idx]), p_ + 1.0);
    for (std::size_t i = 0; i < m; ++i) {
      const double mod = std::sqrt(a2_[i][idx]);
      if (mod == 0.0 || (p_ < 1.0 && mod < 1e-14)) continue;
      double s = 0.0;
      for (std::size_t j = 0; j < m; ++j) s += k_(i, j) * pw[j];
      const double phase = tau * s * power(mod, p_ - 1.0);
      state.v[i][idx] *= cplx(std::cos(phase), std::sin(phase));
    }
  }
}

void Stepper::linear(FieldState& state, double dt) {
  const std::size_t total = grid_.size();
  if (dt != propagator_dt_) {
    const double norm = 1.0 / static_cast<double>(total);
    for (std::size_t idx = 0; idx < total; ++idx) propagator_[idx] = std::polar(norm, -dt * k2_[idx]);
    propagator_dt_ = dt;
  }
  for (auto& comp : state.v) {
    fft_.forward(comp);
    kern_->cmul(comp.data(), propagator_.data(), total);
    fft_.inverse(comp);
  }
}

void Stepper::step(FieldState& state, double dt) {
  if (state.components() != k_.size()) throw Error(ErrorKind::InvalidArgument, "component count mismatch");
  nonlinear(state, 0.5 * dt);
  linear(state, dt);
  nonlinear(state, 0.5 * dt);
  state.t += dt;
  for (const auto& comp : state.v)
    if (!std::isfinite(kern_->sum_abs2(comp.data(), comp.size())))
      throw Error(ErrorKind::NonFiniteField, "field overflowed at t = " + std::to_string(state.t));
}

double Stepper::kinetic(const FieldState& state) const {
  const std::size_t total = grid_.size();
  double t = 0.0;
  for (const auto& comp : state.v) {
    std::copy(comp.begin(), comp.end(), scratch_.begin());
    fft_.forward(scratch_);
    t += kern_->weighted_sum_abs2(scratch_.data(), k2_.data(), total);
  }
  return t * grid_.cell() / static_cast<double>(total);
}

Diagnostics Stepper::diagnostics(const FieldState& state) const {
  const std::size_t m = state.components();
  const std::size_t total = grid_.size();
  const double cell = grid_.cell();
  Diagnostics d;
  d.mass.resize(m);
  std::vector<std::vector<double>> pw(m, std::vector<double>(total));
  for (std::size_t i = 0; i < m; ++i) {
    d.mass[i] = kern_->sum_abs2(state.v[i].data(), total) * cell;
    d.total_mass += d.mass[i];
    for (std::size_t idx = 0; idx < total; ++idx) pw[i][idx] = power(std::abs(state.v[i][idx]), p_ + 1.0);
  }
  double j = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t l = 0; l < m; ++l) {
      if (k_(i, l) == 0.0) continue;
      double s = 0.0;
      for (std::size_t idx = 0; idx < total; ++idx) s += pw[i][idx] * pw[l][idx];
      j += k_(i, l) * s;
    }
  d.j = j * cell;
  d.kinetic = kinetic(state);
  d.energy = 0.5 * d.kinetic - d.j / (2.0 * p_ + 2.0);
  return d;
}

FieldState step(const FieldState& state, const CouplingMatrix& k, double p, double dt) {
  Stepper st(state.grid, k, p);
  FieldState out = state;
  st.step(out, dt);
  return out;
}

Diagnostics diagnostics(const FieldState& state, const CouplingMatrix& k, double p) {
  return Stepper(state.grid, k, p).diagnostics(state);
}

namespace {

std::size_t density_argmax(const FieldState& state) {
  const std::size_t total = state.grid.size();
  std::size_t best = 0;
  double best_val = -1.0;
  for (std::size_t idx = 0; idx < total; ++idx) {
    double rho = 0.0;
    for (const auto& comp : state.v) rho += std::norm(comp[idx]);
    if (rho > best_val) {
      best_val = rho;
      best = idx;
    }
  }
  return best;
}

double periodic_delta(double a, double b, double length) {
  double d = a - b;
  d -= length * std::round(d / length);
  return d;
}

}  // namespace

double window_mass(const FieldState& state, double radius) {
  const auto& g = state.grid;
  const std::size_t total = g.size();
  const std::size_t peak = density_argmax(state);
  const double px = g.coordinate(peak % g.n);
  const double py = g.dim == 2 ? g.coordinate(peak / g.n) : 0.0;
  double sum = 0.0;
  for (std::size_t idx = 0; idx < total; ++idx) {
    const double dx = periodic_delta(g.coordinate(idx % g.n), px, g.length);
    const double dy = g.dim == 2 ? periodic_delta(g.coordinate(idx / g.n), py, g.length) : 0.0;
    if (dx * dx + dy * dy >= radius * radius) continue;
    for (const auto& comp : state.v) sum += std::norm(comp[idx]);
  }
  return sum * g.cell();
}

DichotomyResult run_dichotomy(const FieldState& v0, const CouplingMatrix& k, double p, const EvolveConfig& cfg) {
  cfg.validate();
  Stepper st(v0.grid, k, p);
  DichotomyResult res;
  FieldState s = v0;
  FieldState prev = v0;
  const double t0 = st.kinetic(s);
  res.initial_kinetic = t0;
  const auto total_steps = static_cast<std::size_t>(std::llround(cfg.t_end / cfg.dt));
  std::size_t frame_stride = 1;
  std::size_t records = 0;

  auto record_point = [&](const FieldState& f) {
    const Diagnostics d = st.diagnostics(f);
    res.series.push_back({f.t, d.mass, d.kinetic, d.energy, d.j, window_mass(f, cfg.window_radius)});
  };
  auto record_frame = [&](const FieldState& f) {
    res.frames.push_back(f);
    if (res.frames.size() > cfg.max_frames) {
      std::vector<FieldState> kept;
      for (std::size_t i = 0; i < res.frames.size(); i += 2) kept.push_back(std::move(res.frames[i]));
      res.frames = std::move(kept);
      frame_stride *= 2;
    }
  };
  auto ratio_of = [&](double t) { return t0 > 0.0 ? t / t0 : (t > 0.0 ? INFINITY : 0.0); };

  record_point(s);
  record_frame(s);
  bool stopped = false;
  for (std::size_t n = 1; n <= total_steps; ++n) {
    prev = s;
    double t_now;
    try {
      st.step(s, cfg.dt);
      t_now = st.kinetic(s);
      if (!std::isfinite(t_now)) throw Error(ErrorKind::NonFiniteField, "kinetic energy overflowed");
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NonFiniteField) throw;
      res.verdict = Verdict::Blowup;
      res.non_finite = true;
      res.blowup_time = prev.t + cfg.dt;
      res.steps = n;
      if (res.frames.empty() || res.frames.back().t != prev.t) {
        record_point(prev);
        record_frame(prev);
      }
      stopped = true;
      break;
    }
    res.max_kinetic_ratio = std::max(res.max_kinetic_ratio, ratio_of(t_now));
    res.steps = n;
    if (t0 > 0.0 && t_now > cfg.blowup_factor * t0) {
      res.verdict = Verdict::Blowup;
      res.blowup_time = s.t;
      record_point(s);
      record_frame(s);
      stopped = true;
      break;
    }
    if (n % static_cast<std::size_t>(cfg.record_every) == 0) {
      record_point(s);
      if (++records % frame_stride == 0) record_frame(s);
    }
  }
  if (!stopped) {
    if (res.frames.back().t != s.t) record_frame(s);
    if (res.series.back().t != s.t) record_point(s);
    res.verdict = res.max_kinetic_ratio <= 4.0 ? Verdict::Global : Verdict::Inconclusive;
  }
  return res;
}

std::vector<double> concentration_monitor(const DichotomyResult& run, double radius) {
  if (run.verdict != Verdict::Blowup) throw Error(ErrorKind::NotABlowupRun, "run did not end in blowup");
  std::vector<double> out;
  out.reserve(run.frames.size());
  for (const auto& f : run.frames) out.push_back(window_mass(f, radius));
  return out;
}

namespace {

// Trigonometric interpolant of one periodic component, evaluated through its
// normalized Fourier coefficients.
struct Spectrum {
  int dim;
  std::size_t n;
  double length;
  std::vector<double> k;     // wavenumbers per axis
  std::vector<cplx> coeff;   // row-major, coefficient of exp(i k (x - x0))
  double x0;                 // coordinate of grid point 0

  Spectrum(const Grid& g, const std::vector<cplx>& v, const Fft& fft)
      : dim(g.dim), n(g.n), length(g.length), k(wavenumbers(g.n, g.length)), coeff(v), x0(g.coordinate(0)) {
    fft.forward(coeff);
    const double norm = 1.0 / static_cast<double>(g.size());
    for (auto& c : coeff) c *= norm;
    // The Nyquist mode has no well-defined derivative; drop it.
    const std::size_t ny = n / 2;
    for (std::size_t idx = 0; idx < coeff.size(); ++idx) {
      if (idx % n == ny || (dim == 2 && idx / n == ny)) coeff[idx] = 0.0;
    }
  }

  // exp(i k_j (x - x0)) for every mode j.
  std::vector<cplx> phases(double x) const {
    std::vector<cplx> e(n);
    for (std::size_t j = 0; j < n; ++j) e[j] = std::polar(1.0, k[j] * (x - x0));
    return e;
  }
};

// Value and first/second derivatives of a 1D interpolant at x.
std::array<cplx, 3> eval1(const Spectrum& s, double x) {
  std::array<cplx, 3> out{};
  const auto e = s.phases(x);
  for (std::size_t j = 0; j < s.n; ++j) {
    const cplx t = s.coeff[j] * e[j];
    out[0] += t;
    out[1] += cplx(0.0, s.k[j]) * t;
    out[2] -= s.k[j] * s.k[j] * t;
  }
  return out;
}

// Value, gradient and Hessian (xx, xy, yy) of a 2D interpolant.
std::array<cplx, 6> eval2(const Spectrum& s, double x, double y) {
  std::array<cplx, 6> out{};
  const auto ex = s.phases(x);
  const auto ey = s.phases(y);
  for (std::size_t b = 0; b < s.n; ++b) {
    std::array<cplx, 3> row{};
    for (std::size_t a = 0; a < s.n; ++a) {
      const cplx t = s.coeff[b * s.n + a] * ex[a];
      row[0] += t;
      row[1] += cplx(0.0, s.k[a]) * t;
      row[2] -= s.k[a] * s.k[a] * t;
    }
    const cplx iky(0.0, s.k[b]);
    const double ky2 = s.k[b] * s.k[b];
    out[0] += row[0] * ey[b];
    out[1] += row[1] * ey[b];
    out[2] += iky * row[0] * ey[b];
    out[3] += row[2] * ey[b];
    out[4] += iky * row[1] * ey[b];
    out[5] -= ky2 * row[0] * ey[b];
  }
  return out;
}

// Location of the density maximum: grid argmax refined by Newton steps on the
// gradient of sum_i |v_i|^2.
std::array<double, 2> refine_peak(const std::vector<Spectrum>& spec, const Grid& g, std::size_t start) {
  std::array<double, 2> pos{g.coordinate(start % g.n), g.dim == 2 ? g.coordinate(start / g.n) : 0.0};
  const double h = g.spacing();
  for (int it = 0; it < 30; ++it) {
    Eigen::Vector2d grad = Eigen::Vector2d::Zero();
    Eigen::Matrix2d hess = Eigen::Matrix2d::Zero();
    for (const auto& s : spec) {
      if (g.dim == 1) {
        const auto v = eval1(s, pos[0]);
        grad[0] += 2.0 * std::real(std::conj(v[0]) * v[1]);
        hess(0, 0) += 2.0 * (std::norm(v[1]) + std::real(std::conj(v[0]) * v[2]));
      } else {
        const auto v = eval2(s, pos[0], pos[1]);
        grad[0] += 2.0 * std::real(std::conj(v[0]) * v[1]);
        grad[1] += 2.0 * std::real(std::conj(v[0]) * v[2]);
        hess(0, 0) += 2.0 * (std::norm(v[1]) + std::real(std::conj(v[0]) * v[3]));
        hess(0, 1) += 2.0 * (std::real(std::conj(v[1]) * v[2]) + std::real(std::conj(v[0]) * v[4]));
        hess(1, 1) += 2.0 * (std::norm(v[2]) + std::real(std::conj(v[0]) * v[5]));
      }
    }
    Eigen::Vector2d delta;
    if (g.dim == 1) {
      if (!(hess(0, 0) < 0.0)) break;
      delta = Eigen::Vector2d(-grad[0] / hess(0, 0), 0.0);
    } else {
      hess(1, 0) = hess(0, 1);
      if (!(hess(0, 0) < 0.0 && hess.determinant() > 0.0)) break;
      delta = -hess.inverse() * grad;
    }
    const double len = delta.norm();
    if (!std::isfinite(len)) break;
    if (len > h) delta *= h / len;
    pos[0] += delta[0];
    pos[1] += delta[1];
    if (len < 1e-13 * std::max(1.0, g.length)) break;
  }
  return pos;
}

}  // namespace

double rescaled_profile_distance(const FieldState& state, const GroundState& gs) {
  const Grid& g = state.grid;
  g.validate();
  const std::size_t m = state.components();
  if (m != gs.coupling.size()) throw Error(ErrorKind::InvalidArgument, "component count mismatch");
  if (g.dim != gs.dim()) throw Error(ErrorKind::InvalidArgument, "dimension mismatch");

  const Fft fft(g.dim, g.n);
  std::vector<Spectrum> spec;
  spec.reserve(m);
  for (const auto& comp : state.v) spec.emplace_back(g, comp, fft);
  double tv = 0.0;
  for (const auto& s : spec)
    for (std::size_t idx = 0; idx < s.coeff.size(); ++idx) {
      const double kx = s.k[idx % g.n];
      const double ky = g.dim == 2 ? s.k[idx / g.n] : 0.0;
      tv += (kx * kx + ky * ky) * std::norm(s.coeff[idx]);
    }
  tv *= std::pow(g.length, g.dim);
  if (!(tv > 0.0)) throw Error(ErrorKind::NotABlowupRun, "field has no kinetic energy to rescale by");

  const double lambda = std::sqrt(gs.kinetic / tv);
  const auto peak = refine_peak(spec, g, density_argmax(state));

  // Comparison grid in the rescaled variable.
  const double half = 12.0;
  const std::size_t nc = g.dim == 1 ? 2048 : 192;
  const double dxi = 2.0 * half / static_cast<double>(nc);
  std::vector<double> xi(nc);
  for (std::size_t a = 0; a < nc; ++a) xi[a] = -half + dxi * static_cast<double>(a);
  const double amp_scale = std::pow(lambda, 0.5 * g.dim);
  const double cell = std::pow(dxi, g.dim);

  double dist = 0.0;
  for (std::size_t c = 0; c < m; ++c) {
    const auto& s = spec[c];
    const double a = gs.amplitudes.b[c];
    const std::size_t total = g.dim == 1 ? nc : nc * nc;
    std::vector<cplx> w(total), wx(total), wy(total);
    if (g.dim == 1) {
      for (std::size_t i = 0; i < nc; ++i) {
        const auto v = eval1(s, lambda * xi[i] + peak[0]);
        w[i] = amp_scale * v[0];
        wx[i] = amp_scale * lambda * v[1];
      }
    } else {
      // Separable evaluation: first along x for every y-mode, then along y.
      std::vector<std::vector<cplx>> ex(nc), ey(nc);
      for (std::size_t i = 0; i < nc; ++i) {
        ex[i] = s.phases(lambda * xi[i] + peak[0]);
        ey[i] = s.phases(lambda * xi[i] + peak[1]);
      }
      std::vector<cplx> row(g.n * nc), row_dx(g.n * nc);
      for (std::size_t b = 0; b < g.n; ++b)
        for (std::size_t i = 0; i < nc; ++i) {
          cplx acc = 0.0, acc_dx = 0.0;
          for (std::size_t aa = 0; aa < g.n; ++aa) {
            const cplx t = s.coeff[b * g.n + aa] * ex[i][aa];
            acc += t;
            acc_dx += cplx(0.0, s.k[aa]) * t;
          }
          row[b * nc + i] = acc;
          row_dx[b * nc + i] = acc_dx;
        }
      for (std::size_t jy = 0; jy < nc; ++jy)
        for (std::size_t i = 0; i < nc; ++i) {
          cplx val = 0.0, dx = 0.0, dy = 0.0;
          for (std::size_t b = 0; b < g.n; ++b) {
            const cplx e = ey[jy][b];
            val += row[b * nc + i] * e;
            dx += row_dx[b * nc + i] * e;
            dy += cplx(0.0, s.k[b]) * row[b * nc + i] * e;
          }
          const std::size_t idx = jy * nc + i;
          w[idx] = amp_scale * val;
          wx[idx] = amp_scale * lambda * dx;
          wy[idx] = amp_scale * lambda * dy;
        }
    }

    std::vector<double> q(total), qx(total), qy(total);
    cplx overlap = 0.0;
    for (std::size_t idx = 0; idx < total; ++idx) {
      const double x = xi[idx % nc];
      const double y = g.dim == 2 ? xi[idx / nc] : 0.0;
      const double r = std::hypot(x, y);
      q[idx] = a * gs.profile.value(r);
      const double dq = a * gs.profile.derivative(r);
      qx[idx] = r > 0.0 ? dq * x / r : 0.0;
      qy[idx] = r > 0.0 ? dq * y / r : 0.0;
      overlap += q[idx] * w[idx];
    }
    const cplx rot = std::abs(overlap) > 0.0 ? std::conj(overlap) / std::abs(overlap) : cplx(1.0);
    for (std::size_t idx = 0; idx < total; ++idx) {
      dist += std::norm(rot * w[idx] - q[idx]) + std::norm(rot * wx[idx] - qx[idx]);
      if (g.dim == 2) dist += std::norm(rot * wy[idx] - qy[idx]);
    }
  }
  return dist * cell / gs.i_val;
}

FieldState ground_state_data(const Grid& grid, const GroundState& gs, double scale, double chirp,
                             std::span<const double> center) {
  grid.validate();
  if (grid.dim != gs.dim()) throw Error(ErrorKind::InvalidArgument, "grid and ground state dimensions differ");
  const std::size_t m = gs.coupling.size();
  FieldState s = zero_data(grid, m);
  const double cx = center.size() > 0 ? center[0] : 0.0;
  const double cy = center.size() > 1 ? center[1] : 0.0;
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    const double dx = periodic_delta(grid.coordinate(idx % grid.n), cx, grid.length);
    const double dy = grid.dim == 2 ? periodic_delta(grid.coordinate(idx / grid.n), cy, grid.length) : 0.0;
    const double r2 = dx * dx + dy * dy;
    const double q = gs.profile.value(std::sqrt(r2));
    const cplx phase = std::polar(1.0, -chirp * r2);
    for (std::size_t c = 0; c < m; ++c) s.v[c][idx] = scale * gs.amplitudes.b[c] * q * phase;
  }
  return s;
}

FieldState gaussian_data(const Grid& grid, std::span<const double> amplitudes, double width) {
  if (!(width > 0.0)) throw Error(ErrorKind::InvalidArgument, "Gaussian width must be positive");
  FieldState s = zero_data(grid, amplitudes.size());
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    const double g = std::exp(-0.5 * grid.radius2(idx) / (width * width));
    for (std::size_t c = 0; c < amplitudes.size(); ++c) s.v[c][idx] = amplitudes[c] * g;
  }
  return s;
}

FieldState zero_data(const Grid& grid, std::size_t components) {
  grid.validate();
  if (components == 0) throw Error(ErrorKind::InvalidArgument, "need at least one component");
  return FieldState{grid, std::vector<std::vector<cplx>>(components, std::vector<cplx>(grid.size())), 0.0};
}

double total_mass(const FieldState& state) {
  double s = 0.0;
  for (const auto& comp : state.v)
    for (const auto& z : comp) s += std::norm(z);
  return s * state.grid.cell();
}

void rescale_mass(FieldState& state, double target) {
  const double current = total_mass(state);
  if (!(current > 0.0)) throw Error(ErrorKind::InvalidArgument, "cannot rescale a zero field");
  const double f = std::sqrt(target / current);
  for (auto& comp : state.v)
    for (auto& z : comp) z *= f;
}

}  // namespace mnls
