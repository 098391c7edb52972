#include "mnls/ground_state.hpp"

#include <algorithm>
#include <cmath>

#include "mnls/error.hpp"

namespace mnls {

double gn_value(const Functionals& f, int dim, double p) {
  const double a = p + 1.0 - dim * p / 2.0;
  const double b = dim * p / 2.0;
  return std::pow(f.mass, a) * std::pow(f.kinetic, b) / f.j;
}

Functionals amplitude_functionals(const CouplingMatrix& k, const ScalarProfile& q, std::span<const double> x) {
  const std::size_t m = k.size();
  if (x.size() != m) throw Error(ErrorKind::InvalidArgument, "amplitude vector has wrong length");
  Functionals f;
  double cross = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    f.mass += x[i] * x[i] * q.mass;
    f.kinetic += x[i] * x[i] * q.kinetic;
    for (std::size_t j = 0; j < m; ++j)
      cross += k(i, j) * std::pow(std::abs(x[i]), q.config.p + 1.0) * std::pow(std::abs(x[j]), q.config.p + 1.0);
  }
  f.j = cross * q.j1;
  return f;
}

GroundState assemble(const CouplingMatrix& k, const ScalarProfile& profile, const AmplitudeSolution& winner) {
  const double p = profile.config.p;
  GroundState gs{profile, k, winner, std::vector<double>(k.size(), 0.0), 0.0, {}};
  const Functionals f = amplitude_functionals(k, profile, winner.b);
  gs.component_mass.resize(k.size());
  for (std::size_t i = 0; i < k.size(); ++i) gs.component_mass[i] = winner.b[i] * winner.b[i] * profile.mass;
  gs.mass = f.mass;
  gs.kinetic = f.kinetic;
  gs.i_val = f.i();
  gs.j_val = f.j;
  gs.action = (0.5 - 1.0 / (2.0 * p + 2.0)) * gs.i_val;
  gs.gn = gn_value(f, profile.config.dim, p);
  return gs;
}

GroundState assemble(const CouplingMatrix& k, const ScalarProfile& profile, const SelectionResult& sel) {
  if (sel.winners.empty()) throw Error(ErrorKind::EmptySelection, "no winning amplitude vector");
  return assemble(k, profile, sel.winners.front());
}

double pde_residual(const GroundState& gs) {
  const auto& prof = gs.profile;
  const auto& q = prof.q;
  const double p = gs.p();
  const int dim = gs.dim();
  const double h = prof.spacing();
  const std::size_t n = q.size();
  const auto& b = gs.amplitudes.b;
  const std::size_t m = b.size();

  std::vector<double> coupling_factor(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    if (b[i] == 0.0) continue;
    double s = 0.0;
    for (std::size_t j = 0; j < m; ++j) s += gs.coupling(i, j) * std::pow(b[j], p + 1.0);
    coupling_factor[i] = s * std::pow(b[i], p);
  }

  double worst = 0.0;
  for (std::size_t idx = 0; idx + 1 < n; ++idx) {
    double lap;
    if (idx == 0) {
      lap = dim * 2.0 * (q[1] - q[0]) / (h * h);
    } else {
      const double d2 = (q[idx + 1] - 2.0 * q[idx] + q[idx - 1]) / (h * h);
      const double d1 = (q[idx + 1] - q[idx - 1]) / (2.0 * h);
      lap = d2 + (dim - 1) * d1 / prof.r[idx];
    }
    const double nonlinear = std::pow(q[idx], 2.0 * p + 1.0);
    for (std::size_t i = 0; i < m; ++i) {
      if (b[i] == 0.0) continue;
      const double res = b[i] * (lap - q[idx]) + coupling_factor[i] * nonlinear;
      worst = std::max(worst, std::abs(res));
    }
  }
  return worst;
}

double gn_constant(const GroundState& gs) { return 1.0 / gs.gn; }

CriticalMass critical_mass(const GroundState& gs) {
  const int dim = gs.dim();
  const double p = gs.p();
  if (std::abs(p - 2.0 / dim) > 1e-12) throw Error(ErrorKind::NotCritical, "critical mass needs p = 2/N");
  CriticalMass out;
  out.mass = gs.mass;
  const double predicted = std::pow((p + 1.0) / gn_constant(gs), dim / 2.0);
  out.identity_residual = std::abs(predicted / gs.mass - 1.0);
  out.energy_ratio = std::abs(gs.functionals().energy(p)) / gs.kinetic;
  return out;
}

double nehari_level(const CouplingMatrix& k, const ScalarProfile& q, std::span<const double> x) {
  const Functionals f = amplitude_functionals(k, q, x);
  if (!(f.j > 0.0)) throw Error(ErrorKind::InvalidArgument, "trial state has J <= 0");
  const double p = q.config.p;
  // t^{2p} = I / J, then I(tU) = t^2 I(U).
  return std::pow(f.i() / f.j, 1.0 / p) * f.i();
}

}  // namespace mnls
