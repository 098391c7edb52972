#include "mnls/gn_sampling.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "mnls/error.hpp"

namespace mnls {

namespace {

using cplx = std::complex<double>;

struct Field {
  // Per component: values and |grad|^2 at every grid point.
  std::vector<std::vector<cplx>> u;
  std::vector<std::vector<double>> grad2;
};

struct CartesianGrid {
  int dim;
  std::size_t n;
  double h;
  std::vector<double> x;  // axis coordinates

  std::size_t size() const { return dim == 1 ? n : n * n; }
  double cell() const { return dim == 1 ? h : h * h; }
};

Functionals functionals(const CouplingMatrix& k, double p, const CartesianGrid& g, const Field& f) {
  const std::size_t m = k.size();
  const std::size_t total = g.size();
  Functionals out;
  std::vector<std::vector<double>> mod(m, std::vector<double>(total));
  for (std::size_t c = 0; c < m; ++c) {
    for (std::size_t idx = 0; idx < total; ++idx) {
      const double a2 = std::norm(f.u[c][idx]);
      out.mass += a2;
      out.kinetic += f.grad2[c][idx];
      mod[c][idx] = std::pow(a2, 0.5 * (p + 1.0));
    }
  }
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      if (k(i, j) == 0.0) continue;
      double s = 0.0;
      for (std::size_t idx = 0; idx < total; ++idx) s += mod[i][idx] * mod[j][idx];
      out.j += k(i, j) * s;
    }
  const double cell = g.cell();
  out.mass *= cell;
  out.kinetic *= cell;
  out.j *= cell;
  return out;
}

double ratio(const Functionals& f, double c, int dim, double p) {
  const double a = p + 1.0 - dim * p / 2.0;
  const double b = dim * p / 2.0;
  return f.j / (c * std::pow(f.mass, a) * std::pow(f.kinetic, b));
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

Field ground_state_field(const GroundState& gs, const CartesianGrid& g) {
  const std::size_t m = gs.coupling.size();
  const std::size_t total = g.size();
  Field f{std::vector<std::vector<cplx>>(m, std::vector<cplx>(total)),
          std::vector<std::vector<double>>(m, std::vector<double>(total))};
  for (std::size_t idx = 0; idx < total; ++idx) {
    const double x = g.x[idx % g.n];
    const double y = g.dim == 2 ? g.x[idx / g.n] : 0.0;
    const double r = std::hypot(x, y);
    const double q = gs.profile.value(r);
    const double dq = gs.profile.derivative(r);
    for (std::size_t c = 0; c < m; ++c) {
      const double a = gs.amplitudes.b[c];
      f.u[c][idx] = a * q;
      f.grad2[c][idx] = a * a * dq * dq;
    }
  }
  return f;
}

}  // namespace

GnSampleReport sample_gn_inequality(const GroundState& gs, double c, const GnSampleConfig& cfg) {
  const int dim = gs.dim();
  if (dim != 1 && dim != 2) throw Error(ErrorKind::InvalidArgument, "GN sampling supports dim 1 or 2");
  const double p = gs.p();
  CartesianGrid g{dim, cfg.n ? cfg.n : (dim == 1 ? std::size_t{2048} : std::size_t{256}), 0.0, {}};
  g.h = cfg.length / static_cast<double>(g.n);
  g.x.resize(g.n);
  for (std::size_t i = 0; i < g.n; ++i) g.x[i] = -0.5 * cfg.length + g.h * static_cast<double>(i);

  GnSampleReport rep;
  rep.samples = cfg.samples;
  rep.ground_state_ratio = ratio(functionals(gs.coupling, p, g, ground_state_field(gs, g)), c, dim, p);

  const std::size_t m = gs.coupling.size();
  const std::size_t total = g.size();
  std::mt19937_64 rng(cfg.seed);
  Field f{std::vector<std::vector<cplx>>(m, std::vector<cplx>(total)),
          std::vector<std::vector<double>>(m, std::vector<double>(total))};
  std::vector<std::array<cplx, 2>> grad(total);
  for (int s = 0; s < cfg.samples; ++s) {
    for (std::size_t comp = 0; comp < m; ++comp) {
      std::fill(f.u[comp].begin(), f.u[comp].end(), cplx{});
      std::fill(grad.begin(), grad.end(), std::array<cplx, 2>{});
      const int bumps = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(cfg.max_bumps));
      for (int bump = 0; bump < bumps; ++bump) {
        const double amp = std::exp(std::log(0.2) + std::log(15.0) * uniform01(rng));
        const double phase = 2.0 * std::numbers::pi * uniform01(rng);
        const double width = 0.8 + 2.2 * uniform01(rng);
        const double cx = cfg.length / 6.0 * (2.0 * uniform01(rng) - 1.0);
        const double cy = dim == 2 ? cfg.length / 6.0 * (2.0 * uniform01(rng) - 1.0) : 0.0;
        const cplx a = std::polar(amp, phase);
        const double inv_w2 = 1.0 / (width * width);
        for (std::size_t idx = 0; idx < total; ++idx) {
          const double dx = g.x[idx % g.n] - cx;
          const double dy = dim == 2 ? g.x[idx / g.n] - cy : 0.0;
          const cplx v = a * std::exp(-0.5 * (dx * dx + dy * dy) * inv_w2);
          f.u[comp][idx] += v;
          grad[idx][0] -= dx * inv_w2 * v;
          grad[idx][1] -= dy * inv_w2 * v;
        }
      }
      for (std::size_t idx = 0; idx < total; ++idx)
        f.grad2[comp][idx] = std::norm(grad[idx][0]) + std::norm(grad[idx][1]);
    }
    const Functionals fs = functionals(gs.coupling, p, g, f);
    if (!(fs.j > 0.0)) continue;
    ++rep.positive_j;
    const double r = ratio(fs, c, dim, p);
    rep.max_ratio = std::max(rep.max_ratio, r);
    if (r > 1.0 + 1e-9) ++rep.violations;
  }
  return rep;
}

}  // namespace mnls
