#include "mnls/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "mnls/error.hpp"

namespace mnls {

std::vector<std::size_t> Support::indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < 64; ++i)
    if (contains(i)) out.push_back(i);
  return out;
}

CouplingMatrix CouplingMatrix::create(std::size_t m, std::span<const double> row_major) {
  if (m == 0) throw Error(ErrorKind::InvalidArgument, "coupling matrix needs m >= 1");
  if (row_major.size() != m * m)
    throw Error(ErrorKind::InvalidArgument,
                "expected " + std::to_string(m * m) + " entries, got " +
                    std::to_string(row_major.size()));
  for (double v : row_major)
    if (!std::isfinite(v)) throw Error(ErrorKind::NonFinite, "coupling entry is not finite");

  std::vector<double> k(m * m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double a = row_major[i * m + j];
      const double b = row_major[j * m + i];
      const double scale = std::max(std::abs(a), std::abs(b));
      if (std::abs(a - b) > 1e-12 * scale)
        throw Error(ErrorKind::AsymmetricInput,
                    "k(" + std::to_string(i) + "," + std::to_string(j) + ") != k(" +
                        std::to_string(j) + "," + std::to_string(i) + ")");
      k[i * m + j] = 0.5 * (a + b);
    }
  }
  return CouplingMatrix(m, std::move(k));
}

CouplingMatrix CouplingMatrix::create(const std::vector<std::vector<double>>& rows) {
  const std::size_t m = rows.size();
  std::vector<double> flat;
  flat.reserve(m * m);
  for (const auto& r : rows) {
    if (r.size() != m) throw Error(ErrorKind::InvalidArgument, "coupling matrix is not square");
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return create(m, flat);
}

std::vector<std::vector<double>> CouplingMatrix::rows() const {
  std::vector<std::vector<double>> out(m_, std::vector<double>(m_));
  for (std::size_t i = 0; i < m_; ++i)
    for (std::size_t j = 0; j < m_; ++j) out[i][j] = (*this)(i, j);
  return out;
}

double CouplingMatrix::quadratic_form(std::span<const double> x) const {
  double s = 0.0;
  for (std::size_t i = 0; i < m_; ++i) {
    if (x[i] == 0.0) continue;
    double row = 0.0;
    for (std::size_t j = 0; j < m_; ++j) row += k_[i * m_ + j] * x[j];
    s += x[i] * row;
  }
  return s;
}

CouplingMatrix CouplingMatrix::scaled(double c) const {
  std::vector<double> k = k_;
  for (double& v : k) v *= c;
  return CouplingMatrix(m_, std::move(k));
}

CouplingMatrix CouplingMatrix::permuted(std::span<const std::size_t> perm) const {
  std::vector<double> k(m_ * m_);
  for (std::size_t i = 0; i < m_; ++i)
    for (std::size_t j = 0; j < m_; ++j) k[i * m_ + j] = (*this)(perm[i], perm[j]);
  return CouplingMatrix(m_, std::move(k));
}

namespace {

// Euclidean projection onto {x >= 0, sum x = 1} restricted to `idx`.
void project_to_simplex(std::vector<double>& x, const std::vector<std::size_t>& idx) {
  std::vector<double> u;
  u.reserve(idx.size());
  for (auto i : idx) u.push_back(x[i]);
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (std::size_t r = 0; r < u.size(); ++r) {
    cumulative += u[r];
    const double t = (cumulative - 1.0) / static_cast<double>(r + 1);
    if (u[r] - t > 0.0) theta = t;
  }
  for (auto i : idx) x[i] = std::max(x[i] - theta, 0.0);
}

double ascend(const CouplingMatrix& k, std::vector<double> x, const std::vector<std::size_t>& idx,
              double step, int max_iterations) {
  const std::size_t m = k.size();
  std::vector<double> grad(m, 0.0);
  double best = k.quadratic_form(x);
  for (int it = 0; it < max_iterations; ++it) {
    for (auto i : idx) {
      double g = 0.0;
      for (auto j : idx) g += k(i, j) * x[j];
      grad[i] = 2.0 * g;
    }
    std::vector<double> next = x;
    for (auto i : idx) next[i] += step * grad[i];
    project_to_simplex(next, idx);
    double change = 0.0;
    for (auto i : idx) change = std::max(change, std::abs(next[i] - x[i]));
    x = std::move(next);
    best = std::max(best, k.quadratic_form(x));
    if (change < 1e-15) break;
  }
  return best;
}

// Maximum of x^T K x over the simplex face spanned by `idx`, by multistart.
double face_maximum(const CouplingMatrix& k, const std::vector<std::size_t>& idx,
                    const P1Options& options, std::mt19937_64& rng, double threshold) {
  const std::size_t m = k.size();
  double lipschitz = 0.0;
  for (auto i : idx) {
    double row = 0.0;
    for (auto j : idx) row += std::abs(k(i, j));
    lipschitz = std::max(lipschitz, row);
  }
  if (lipschitz == 0.0) return 0.0;
  const double step = 0.5 / lipschitz;

  std::vector<std::vector<double>> starts;
  for (auto i : idx) {
    std::vector<double> v(m, 0.0);
    v[i] = 1.0;
    starts.push_back(std::move(v));
  }
  {
    std::vector<double> c(m, 0.0);
    for (auto i : idx) c[i] = 1.0 / static_cast<double>(idx.size());
    starts.push_back(std::move(c));
  }
  std::exponential_distribution<double> expo(1.0);
  for (int s = 0; s < options.random_starts && idx.size() > 1; ++s) {
    std::vector<double> v(m, 0.0);
    double total = 0.0;
    for (auto i : idx) total += (v[i] = expo(rng));
    for (auto i : idx) v[i] /= total;
    starts.push_back(std::move(v));
  }

  double best = -std::numeric_limits<double>::infinity();
  for (auto& x0 : starts) {
    best = std::max(best, ascend(k, std::move(x0), idx, step, options.max_iterations));
    if (best > threshold) break;
  }
  return best;
}

}  // namespace

bool check_p1(const CouplingMatrix& k, const P1Options& options) {
  const std::size_t m = k.size();
  double scale = 0.0;
  for (double v : k.entries()) scale = std::max(scale, std::abs(v));
  const double threshold = 1e-12 * scale;
  if (scale == 0.0) return false;
  for (std::size_t i = 0; i < m; ++i)
    if (k(i, i) > threshold) return true;

  std::mt19937_64 rng(options.seed);
  if (m > 16) {
    std::vector<std::size_t> all(m);
    std::iota(all.begin(), all.end(), 0);
    return face_maximum(k, all, options, rng, threshold) > threshold;
  }
  const std::uint64_t count = std::uint64_t{1} << m;
  for (std::uint64_t bits = 1; bits < count; ++bits) {
    const auto idx = Support(bits).indices();
    if (idx.size() < 2) continue;
    if (face_maximum(k, idx, options, rng, threshold) > threshold) return true;
  }
  return false;
}

PartitionStructure detect_partition(const CouplingMatrix& k) {
  const std::size_t m = k.size();
  std::vector<std::size_t> parent(m);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      if (k(i, j) >= 0.0) parent[find(i)] = find(j);

  PartitionStructure out;
  std::vector<long> group_of_root(m, -1);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t r = find(i);
    if (group_of_root[r] < 0) {
      group_of_root[r] = static_cast<long>(out.groups.size());
      out.groups.emplace_back();
    }
    out.groups[static_cast<std::size_t>(group_of_root[r])].push_back(i);
  }

  // Components are closed under k_ij >= 0, so cross-component pairs are
  // negative by construction; only within-group negatives can violate.
  out.valid = true;
  for (std::size_t i = 0; i < m && out.valid; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      if (find(i) == find(j) && k(i, j) < 0.0) {
        out.valid = false;
        out.violating_pair = std::make_pair(i, j);
        break;
      }
  return out;
}

}  // namespace mnls
