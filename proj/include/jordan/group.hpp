#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "jordan/linalg.hpp"

namespace jordan {

namespace detail {

// Hash key: every entry component snapped to a 1e-6 grid, FNV-folded.
// eq_tol (1e-8 by default) confirms candidates, so the grid only has to
// route lookups, not decide identity. Products are always formed from the
// stored canonical representatives, which keeps accumulated round-off far
// below the grid spacing.
inline std::uint64_t quantized_key(const ComplexMatrix& m) {
  constexpr double grid = 1e-6;
  std::uint64_t h = 1469598103934665603ull;
  auto fold = [&h](long long v) {
    h ^= static_cast<std::uint64_t>(v);
    h *= 1099511628211ull;
  };
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      fold(std::llround(m(i, j).real() / grid));
      fold(std::llround(m(i, j).imag() / grid));
    }
  }
  return h;
}

}  // namespace detail

class FiniteMatrixGroup;
FiniteMatrixGroup close_generators(Eigen::Index dim,
                                   const std::vector<ComplexMatrix>& generators,
                                   std::size_t max_order, Tolerance tol);

/// A fully enumerated finite matrix group. Element 0 is the identity;
/// the element order is the breadth-first discovery order, which is
/// deterministic for fixed generators. Immutable once built.
class FiniteMatrixGroup {
 public:
  Eigen::Index dim() const { return dim_; }
  std::size_t order() const { return elements_.size(); }
  const std::vector<ComplexMatrix>& elements() const { return elements_; }
  const std::vector<std::size_t>& generator_indices() const { return generator_indices_; }
  const Tolerance& tolerance() const { return tol_; }

  const ComplexMatrix& element(std::size_t i) const {
    if (i >= elements_.size()) throw error("element index out of range");
    return elements_[i];
  }

  /// Index of the element within eq_tol of m, if any. Quantized-key
  /// candidates are confirmed by an exact Frobenius-distance check.
  std::optional<std::size_t> lookup(const ComplexMatrix& m) const {
    if (m.rows() != dim_ || m.cols() != dim_) {
      throw dimension_error("lookup: dimension mismatch");
    }
    auto it = index_.find(detail::quantized_key(m));
    if (it == index_.end()) return std::nullopt;
    for (std::uint32_t cand : it->second) {
      if (frobenius_distance(elements_[cand], m) <= tol_.eq_tol) return cand;
    }
    return std::nullopt;
  }

  /// Index of element(i)*element(j). The group is closed, so a miss means
  /// the element table is corrupt.
  std::size_t product_index(std::size_t i, std::size_t j) const {
    ComplexMatrix p = element(i) * element(j);
    auto k = lookup(p);
    if (!k) throw error("group closure violated: product escaped the element table");
    return *k;
  }

  /// Index of element(i)^{-1}, located through the numeric inverse.
  std::size_t inverse_index(std::size_t i) const {
    auto k = lookup(mat_inverse(element(i)));
    if (!k) throw error("group closure violated: inverse escaped the element table");
    return *k;
  }

 private:
  friend FiniteMatrixGroup close_generators(Eigen::Index,
                                            const std::vector<ComplexMatrix>&,
                                            std::size_t, Tolerance);

  FiniteMatrixGroup(Eigen::Index dim, Tolerance tol) : dim_(dim), tol_(tol) {}

  std::size_t append(const ComplexMatrix& m) {
    elements_.push_back(m);
    std::size_t idx = elements_.size() - 1;
    index_[detail::quantized_key(m)].push_back(static_cast<std::uint32_t>(idx));
    return idx;
  }

  Eigen::Index dim_;
  Tolerance tol_;
  std::vector<ComplexMatrix> elements_;
  std::vector<std::size_t> generator_indices_;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> index_;
};

/// Breadth-first closure of the given generators. Terminates with the full
/// group when its order is at most max_order, otherwise raises: an input of
/// infinite order (an irrational rotation, say) fails loudly.
inline FiniteMatrixGroup close_generators(Eigen::Index dim,
                                          const std::vector<ComplexMatrix>& generators,
                                          std::size_t max_order = 1000000,
                                          Tolerance tol = Tolerance()) {
  if (dim < 1) throw dimension_error("close_generators: dim must be >= 1");
  if (max_order < 1) throw error("close_generators: max_order must be >= 1");
  for (const ComplexMatrix& g : generators) {
    if (g.rows() != dim || g.cols() != dim) {
      throw dimension_error("close_generators: generator dimension mismatch");
    }
    if (!finite_entries(g)) throw closure_error("close_generators: generator has non-finite entries");
    Eigen::VectorXd s = singular_values(g);
    if (s(s.size() - 1) <= 0.0 || s(0) / s(s.size() - 1) > 1e12) {
      throw closure_error("close_generators: singular generator");
    }
  }

  FiniteMatrixGroup grp(dim, tol);
  grp.append(identity_matrix(dim));

  std::vector<ComplexMatrix> canon;  // canonical generator representatives
  for (const ComplexMatrix& g : generators) {
    auto found = grp.lookup(g);
    std::size_t idx = found ? *found : grp.append(g);
    if (std::find(grp.generator_indices_.begin(), grp.generator_indices_.end(), idx) ==
        grp.generator_indices_.end()) {
      grp.generator_indices_.push_back(idx);
      canon.push_back(grp.element(idx));
    }
  }
  if (grp.order() > max_order) {
    throw closure_error("close_generators: order cap exceeded");
  }

  for (std::size_t head = 0; head < grp.order(); ++head) {
    ComplexMatrix cur = grp.element(head);  // copy: append may reallocate
    for (const ComplexMatrix& g : canon) {
      ComplexMatrix p = cur * g;
      if (!grp.lookup(p)) {
        if (grp.order() >= max_order) {
          throw closure_error(
              "close_generators: order cap exceeded (group not certified finite within " +
              std::to_string(max_order) + " elements)");
        }
        grp.append(p);
      }
    }
  }
  return grp;
}

/// A subgroup as a sorted set of parent element indices. Always contains
/// index 0 and is closed under the parent's multiplication table.
struct SubgroupHandle {
  std::vector<std::size_t> member_indices;
  std::vector<std::size_t> generator_indices;

  std::size_t order() const { return member_indices.size(); }

  bool contains(std::size_t idx) const {
    return std::binary_search(member_indices.begin(), member_indices.end(), idx);
  }
};

inline SubgroupHandle subgroup_generated(const FiniteMatrixGroup& g,
                                         const std::vector<std::size_t>& seeds) {
  for (std::size_t s : seeds) {
    if (s >= g.order()) throw error("subgroup_generated: seed index out of range");
  }
  std::vector<std::size_t> unique_seeds;
  for (std::size_t s : seeds) {
    if (std::find(unique_seeds.begin(), unique_seeds.end(), s) == unique_seeds.end()) {
      unique_seeds.push_back(s);
    }
  }

  std::set<std::size_t> members{0};
  std::vector<std::size_t> queue{0};
  for (std::size_t s : unique_seeds) {
    if (members.insert(s).second) queue.push_back(s);
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    for (std::size_t s : unique_seeds) {
      std::size_t k = g.product_index(queue[head], s);
      if (members.insert(k).second) queue.push_back(k);
    }
  }

  SubgroupHandle h;
  h.member_indices.assign(members.begin(), members.end());
  h.generator_indices = unique_seeds;
  return h;
}

/// Worst-pair witness of a pairwise subgroup check.
struct SubgroupCheck {
  bool ok = true;
  double residual = 0.0;
  std::size_t lhs = 0;
  std::size_t rhs = 0;
};

inline SubgroupCheck abelian_check(const FiniteMatrixGroup& g, const SubgroupHandle& s,
                                   Tolerance tol) {
  SubgroupCheck out;
  for (std::size_t a = 0; a < s.member_indices.size(); ++a) {
    for (std::size_t b = a + 1; b < s.member_indices.size(); ++b) {
      const ComplexMatrix& x = g.element(s.member_indices[a]);
      const ComplexMatrix& y = g.element(s.member_indices[b]);
      double r = (x * y - y * x).norm();
      if (r > out.residual) {
        out.residual = r;
        out.lhs = s.member_indices[a];
        out.rhs = s.member_indices[b];
      }
    }
  }
  out.ok = out.residual <= tol.residual_tol;
  return out;
}

/// Conjugates every member by every parent generator and requires the
/// result to land back in the subgroup. Residual is the worst landing
/// distance to the matched element.
inline SubgroupCheck normality_check(const FiniteMatrixGroup& g, const SubgroupHandle& s,
                                     Tolerance tol) {
  SubgroupCheck out;
  for (std::size_t y : g.generator_indices()) {
    const ComplexMatrix& ym = g.element(y);
    ComplexMatrix yinv = g.element(g.inverse_index(y));
    for (std::size_t i : s.member_indices) {
      ComplexMatrix conj = yinv * g.element(i) * ym;
      auto k = g.lookup(conj);
      if (!k || !s.contains(*k)) {
        out.ok = false;
        out.residual = std::numeric_limits<double>::infinity();
        out.lhs = y;
        out.rhs = i;
        return out;
      }
      double r = frobenius_distance(conj, g.element(*k));
      if (r > out.residual) {
        out.residual = r;
        out.lhs = y;
        out.rhs = i;
      }
    }
  }
  (void)tol;
  return out;
}

inline bool is_abelian(const FiniteMatrixGroup& g, const SubgroupHandle& s, Tolerance tol) {
  return abelian_check(g, s, tol).ok;
}

inline bool is_normal(const FiniteMatrixGroup& g, const SubgroupHandle& s, Tolerance tol) {
  return normality_check(g, s, tol).ok;
}

/// One representative per left coset, canonically the smallest element
/// index in each coset (iterating indices in order makes that automatic).
inline std::vector<std::size_t> left_cosets(const FiniteMatrixGroup& g,
                                            const SubgroupHandle& s) {
  std::vector<bool> covered(g.order(), false);
  std::vector<std::size_t> reps;
  for (std::size_t i = 0; i < g.order(); ++i) {
    if (covered[i]) continue;
    reps.push_back(i);
    for (std::size_t a : s.member_indices) covered[g.product_index(i, a)] = true;
  }
  if (reps.size() * s.order() != g.order()) {
    throw error("left_cosets: Lagrange count mismatch (corrupt subgroup handle)");
  }
  return reps;
}

/// Every subgroup, by closing the set of cyclic subgroups under pairwise
/// join. Brute force, intended as an oracle for small groups only.
inline std::vector<SubgroupHandle> subgroup_lattice(const FiniteMatrixGroup& g,
                                                    std::size_t max_group_order = 64) {
  if (g.order() > max_group_order) {
    throw error("subgroup_lattice: group too large (order " + std::to_string(g.order()) +
                " > " + std::to_string(max_group_order) + ")");
  }
  std::set<std::vector<std::size_t>> seen;
  std::vector<SubgroupHandle> handles;
  auto add = [&](SubgroupHandle&& h) {
    if (seen.insert(h.member_indices).second) {
      handles.push_back(std::move(h));
      return true;
    }
    return false;
  };

  for (std::size_t i = 0; i < g.order(); ++i) {
    add(subgroup_generated(g, {i}));
  }
  bool grew = true;
  while (grew) {
    grew = false;
    std::size_t count = handles.size();
    for (std::size_t a = 0; a < count; ++a) {
      for (std::size_t b = a + 1; b < count; ++b) {
        std::vector<std::size_t> seeds = handles[a].member_indices;
        seeds.insert(seeds.end(), handles[b].member_indices.begin(),
                     handles[b].member_indices.end());
        if (add(subgroup_generated(g, seeds))) grew = true;
      }
    }
  }
  std::sort(handles.begin(), handles.end(), [](const SubgroupHandle& x, const SubgroupHandle& y) {
    if (x.member_indices.size() != y.member_indices.size()) {
      return x.member_indices.size() < y.member_indices.size();
    }
    return x.member_indices < y.member_indices;
  });
  return handles;
}

}  // namespace jordan
