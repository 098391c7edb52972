#include "mnls/amplitudes.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

#include "mnls/error.hpp"

namespace mnls {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

struct Restricted {
  std::vector<std::size_t> idx;
  Eigen::MatrixXd k;
};

Restricted restrict_to(const CouplingMatrix& k, Support support) {
  Restricted r;
  r.idx = support.indices();
  const auto s = static_cast<Eigen::Index>(r.idx.size());
  r.k.resize(s, s);
  for (Eigen::Index a = 0; a < s; ++a)
    for (Eigen::Index c = 0; c < s; ++c) r.k(a, c) = k(r.idx[a], r.idx[c]);
  return r;
}

Eigen::VectorXd residual(const Eigen::MatrixXd& k, double p, const Eigen::VectorXd& b) {
  const Eigen::VectorXd bp1 = b.array().pow(p + 1.0).matrix();
  const Eigen::VectorXd s = k * bp1;
  return (b.array().pow(p - 1.0) * s.array() - 1.0).matrix();
}

Eigen::MatrixXd jacobian(const Eigen::MatrixXd& k, double p, const Eigen::VectorXd& b) {
  const Eigen::Index n = b.size();
  const Eigen::VectorXd bp1 = b.array().pow(p + 1.0).matrix();
  const Eigen::VectorXd s = k * bp1;
  Eigen::MatrixXd jac(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double bi_pm1 = std::pow(b[i], p - 1.0);
    for (Eigen::Index j = 0; j < n; ++j) jac(i, j) = (p + 1.0) * k(i, j) * bi_pm1 * std::pow(b[j], p);
    jac(i, i) += (p - 1.0) * std::pow(b[i], p - 2.0) * s[i];
  }
  return jac;
}

bool newton(const Eigen::MatrixXd& k, double p, Eigen::VectorXd& b, const NewtonOptions& opt) {
  Eigen::VectorXd f = residual(k, p, b);
  double merit = f.squaredNorm();
  for (int it = 0; it < opt.max_iterations; ++it) {
    if (!std::isfinite(merit)) return false;
    if (f.cwiseAbs().maxCoeff() < opt.tol) return true;
    const Eigen::VectorXd step = jacobian(k, p, b).completeOrthogonalDecomposition().solve(-f);
    if (!step.allFinite()) return false;
    double alpha = 1.0;
    bool accepted = false;
    for (int h = 0; h < 60; ++h, alpha *= 0.5) {
      const Eigen::VectorXd trial = b + alpha * step;
      if (trial.minCoeff() < opt.floor) continue;
      const Eigen::VectorXd ft = residual(k, p, trial);
      const double mt = ft.squaredNorm();
      if (std::isfinite(mt) && mt < merit) {
        b = trial;
        f = ft;
        merit = mt;
        accepted = true;
        break;
      }
    }
    if (!accepted) return f.cwiseAbs().maxCoeff() < opt.tol;
  }
  return f.cwiseAbs().maxCoeff() < opt.tol;
}

}  // namespace

std::vector<double> amplitude_residual(const CouplingMatrix& k, double p, Support support, std::span<const double> b) {
  const auto r = restrict_to(k, support);
  Eigen::VectorXd bs(static_cast<Eigen::Index>(r.idx.size()));
  for (std::size_t a = 0; a < r.idx.size(); ++a) bs[static_cast<Eigen::Index>(a)] = b[r.idx[a]];
  const Eigen::VectorXd f = residual(r.k, p, bs);
  std::vector<double> out(k.size(), 0.0);
  for (std::size_t a = 0; a < r.idx.size(); ++a) out[r.idx[a]] = f[static_cast<Eigen::Index>(a)];
  return out;
}

std::vector<AmplitudeSolution> solve_on_support(const CouplingMatrix& k, double p, Support support,
                                                const NewtonOptions& opt) {
  if (support.empty()) throw Error(ErrorKind::InvalidArgument, "empty support");
  if (!(p > 0.0)) throw Error(ErrorKind::InvalidArgument, "p must be positive");
  const auto r = restrict_to(k, support);
  const auto s = static_cast<Eigen::Index>(r.idx.size());
  if (!r.k.allFinite()) throw Error(ErrorKind::NonFinite, "coupling restricted to support is not finite");

  std::vector<Eigen::VectorXd> starts;
  Eigen::VectorXd sym(s);
  bool sym_ok = true;
  for (Eigen::Index a = 0; a < s; ++a) {
    const double row = r.k.row(a).sum();
    if (!(row > 0.0)) {
      sym_ok = false;
      break;
    }
    sym[a] = std::pow(row, -1.0 / (2.0 * p));
  }
  if (sym_ok) starts.push_back(sym);
  std::mt19937_64 rng(splitmix(opt.seed ^ splitmix(support.bits())));
  const double llo = std::log(opt.start_lo);
  const double lhi = std::log(opt.start_hi);
  for (int t = 0; t < opt.starts; ++t) {
    Eigen::VectorXd b(s);
    for (Eigen::Index a = 0; a < s; ++a) b[a] = std::exp(llo + (lhi - llo) * uniform01(rng));
    starts.push_back(b);
  }

  std::vector<Eigen::VectorXd> found;
  for (auto b : starts) {
    if (!newton(r.k, p, b, opt)) continue;
    if (b.minCoeff() < opt.collapse) continue;
    const bool dup = std::any_of(found.begin(), found.end(), [&](const Eigen::VectorXd& x) {
      return (x - b).cwiseAbs().maxCoeff() < opt.dedup * std::max(1.0, b.cwiseAbs().maxCoeff());
    });
    if (!dup) found.push_back(b);
  }
  if (found.empty()) throw Error(ErrorKind::NoSolutionFound, "no positive amplitude solution on support");
  std::sort(found.begin(), found.end(), [](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    return std::lexicographical_compare(x.data(), x.data() + x.size(), y.data(), y.data() + y.size());
  });

  std::vector<AmplitudeSolution> out;
  for (const auto& b : found) {
    AmplitudeSolution sol;
    sol.support = support;
    sol.b.assign(k.size(), 0.0);
    for (Eigen::Index a = 0; a < s; ++a) sol.b[r.idx[static_cast<std::size_t>(a)]] = b[a];
    sol.residual = residual(r.k, p, b).cwiseAbs().maxCoeff();
    sol.norm2 = b.squaredNorm();
    out.push_back(std::move(sol));
  }
  return out;
}

std::vector<Support> enumerate_supports(const CouplingMatrix& k, const PartitionStructure& part) {
  if (!part.valid) throw Error(ErrorKind::InvalidPartition, "coupling signs do not form a partition");
  if (k.size() > 24) throw Error(ErrorKind::InvalidArgument, "support enumeration limited to 24 components");
  std::vector<Support> out;
  for (const auto& group : part.groups) {
    const std::size_t g = group.size();
    std::vector<Support> local;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << g); ++mask) {
      std::uint64_t bits = 0;
      for (std::size_t a = 0; a < g; ++a)
        if ((mask >> a) & 1u) bits |= std::uint64_t{1} << group[a];
      local.emplace_back(bits);
    }
    std::stable_sort(local.begin(), local.end(), [](Support x, Support y) {
      if (x.count() != y.count()) return x.count() < y.count();
      return x.bits() < y.bits();
    });
    out.insert(out.end(), local.begin(), local.end());
  }
  return out;
}

SelectionResult select_minimal(std::span<const AmplitudeSolution> candidates, double i1_q) {
  if (candidates.empty()) throw Error(ErrorKind::EmptyCandidates, "no amplitude candidates");
  SelectionResult res;
  res.candidates.assign(candidates.begin(), candidates.end());
  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : candidates) best = std::min(best, c.norm2 * i1_q);
  std::map<std::uint64_t, int> per_support;
  for (const auto& c : candidates) {
    if (c.norm2 * i1_q <= best * (1.0 + 1e-8)) {
      res.winners.push_back(c);
      ++per_support[c.support.bits()];
    }
  }
  for (const auto& [bits, count] : per_support)
    if (count >= 8) res.degenerate_family = true;
  return res;
}

double oracle_symmetric(double k11, double k12, double p) {
  const bool repulsive_self = k11 <= 0.0 && k12 > -k11;
  const bool attractive = k11 > 0.0 && k12 > 0.0 && (p - 2.0) * (p * k11 - k12) > 0.0;
  if (!(p > 0.0) || !(repulsive_self || attractive))
    throw Error(ErrorKind::RegimeViolation, "symmetric closed form not applicable");
  return std::pow(k11 + k12, -1.0 / (2.0 * p));
}

double f_ratio(double k11, double k12, double p, double x) {
  return k11 * std::pow(x, 2.0 * p) - k11 + k12 * (std::pow(x, p - 1.0) - std::pow(x, p + 1.0));
}

RootReport analyze_f_roots(double k11, double k12, double p) {
  if (!(k11 > 0.0 && k12 > 0.0 && p > 0.0))
    throw Error(ErrorKind::InvalidArgument, "root analysis needs k11, k12, p > 0");
  constexpr int points = 2048;
  const double lo = std::log(1e-3);
  const double hi = std::log(1e3);
  auto f = [&](double x) { return f_ratio(k11, k12, p, x); };

  RootReport rep;
  std::vector<double> xs(points), fs(points);
  for (int i = 0; i < points; ++i) {
    xs[i] = std::exp(lo + (hi - lo) * i / (points - 1));
    fs[i] = f(xs[i]);
  }
  for (int i = 0; i < points; ++i) {
    if (fs[i] == 0.0) rep.roots.push_back(xs[i]);
    if (i + 1 < points && fs[i] * fs[i + 1] < 0.0) {
      double a = xs[i], b = xs[i + 1], fa = fs[i];
      while (b - a > 1e-12 * std::max(1.0, a)) {
        const double m = 0.5 * (a + b);
        if (m <= a || m >= b) break;
        const double fm = f(m);
        if (fm == 0.0) {
          a = b = m;
          break;
        }
        if ((fm < 0.0) == (fa < 0.0)) {
          a = m;
          fa = fm;
        } else {
          b = m;
        }
      }
      rep.roots.push_back(0.5 * (a + b));
    }
  }
  // f(1) = 0 identically; a double root there shows no sign change.
  auto near_one = std::find_if(rep.roots.begin(), rep.roots.end(), [](double x) { return std::abs(x - 1.0) < 1e-8; });
  if (near_one != rep.roots.end())
    *near_one = 1.0;
  else
    rep.roots.push_back(1.0);
  std::sort(rep.roots.begin(), rep.roots.end());
  rep.unit_root = f(1.0) == 0.0;

  for (double x : rep.roots) {
    double err = std::numeric_limits<double>::infinity();
    for (double y : rep.roots) err = std::min(err, std::abs(x * y - 1.0));
    rep.pairing_error = std::max(rep.pairing_error, err);
  }
  return rep;
}

SmallBetaPrediction small_beta_regime(const CouplingMatrix& k, double p) {
  if (!(p >= 2.0)) throw Error(ErrorKind::RegimeViolation, "weak-coupling prediction needs p >= 2");
  const std::size_t m = k.size();
  double kmax = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i) {
    if (!(k(i, i) > 0.0)) throw Error(ErrorKind::RegimeViolation, "self-couplings must be positive");
    for (std::size_t j = 0; j < m; ++j)
      if (i != j && k(i, j) < 0.0) throw Error(ErrorKind::RegimeViolation, "cross couplings must be nonnegative");
    kmax = std::max(kmax, k(i, i));
  }
  SmallBetaPrediction pred;
  for (std::size_t i = 0; i < m; ++i)
    if (k(i, i) >= kmax * (1.0 - 1e-12)) pred.indices.push_back(i);
  pred.amplitude = std::pow(kmax, -1.0 / (2.0 * p));
  return pred;
}

AmplitudeAnalysis analyze_amplitudes(const CouplingMatrix& k, double p, double i1_q, const NewtonOptions& options) {
  AmplitudeAnalysis out;
  out.partition = detect_partition(k);
  out.supports = enumerate_supports(k, out.partition);
  std::vector<AmplitudeSolution> all;
  for (Support s : out.supports) {
    try {
      auto sols = solve_on_support(k, p, s, options);
      all.insert(all.end(), sols.begin(), sols.end());
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NoSolutionFound) throw;
    }
  }
  out.selection = select_minimal(all, i1_q);
  return out;
}

}  // namespace mnls
