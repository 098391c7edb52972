#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace mnls {

/// Subset of component indices {0..m-1}, one bit per component.
class Support {
 public:
  constexpr Support() = default;
  constexpr explicit Support(std::uint64_t bits) : bits_(bits) {}

  static Support full(std::size_t m) {
    return Support(m >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << m) - 1);
  }
  static Support of(std::initializer_list<std::size_t> indices) {
    std::uint64_t b = 0;
    for (auto i : indices) b |= std::uint64_t{1} << i;
    return Support(b);
  }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool contains(std::size_t i) const { return (bits_ >> i) & 1u; }
  constexpr bool empty() const { return bits_ == 0; }
  int count() const { return __builtin_popcountll(bits_); }
  std::vector<std::size_t> indices() const;

  friend constexpr bool operator==(Support, Support) = default;

 private:
  std::uint64_t bits_ = 0;
};

/// Symmetric real coupling matrix K = (k_ij), stored row-major.
class CouplingMatrix {
 public:
  /// Validates finiteness and symmetry (relative asymmetry <= 1e-12) and
  /// stores the symmetrized matrix (k_ij + k_ji) / 2.
  static CouplingMatrix create(std::size_t m, std::span<const double> row_major);
  static CouplingMatrix create(const std::vector<std::vector<double>>& rows);

  std::size_t size() const { return m_; }
  double operator()(std::size_t i, std::size_t j) const { return k_[i * m_ + j]; }
  std::span<const double> entries() const { return k_; }
  std::vector<std::vector<double>> rows() const;

  double quadratic_form(std::span<const double> x) const;
  CouplingMatrix scaled(double c) const;
  /// Entry (i, j) of the result is k(perm[i], perm[j]).
  CouplingMatrix permuted(std::span<const std::size_t> perm) const;

 private:
  CouplingMatrix(std::size_t m, std::vector<double> k) : m_(m), k_(std::move(k)) {}

  std::size_t m_ = 0;
  std::vector<double> k_;
};

struct P1Options {
  std::uint64_t seed = 0x5eed;
  int random_starts = 32;
  int max_iterations = 4000;
};

/// Decides whether X^T K X > 0 for some X >= 0, X != 0.
///
/// Exact up to the ascent tolerance for m <= 16: every nonempty support is
/// searched with vertex, centroid and random starts on its simplex face. For
/// m > 16 only the full simplex is searched, which is a heuristic.
bool check_p1(const CouplingMatrix& k, const P1Options& options = {});

struct PartitionStructure {
  std::vector<std::vector<std::size_t>> groups;
  bool valid = false;
  /// First pair (i < j) sharing a group with k_ij < 0; set iff !valid.
  std::optional<std::pair<std::size_t, std::size_t>> violating_pair;
};

/// Groups are the connected components of the graph with edges k_ij >= 0.
PartitionStructure detect_partition(const CouplingMatrix& k);

}  // namespace mnls
