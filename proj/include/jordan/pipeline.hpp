#pragma once

#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "jordan/invariant_norms.hpp"

namespace jordan {

/// Elements at operator distance < 1/2 from the identity, plus the full
/// distance table. The comparison is strict; anything within
/// boundary_band of the threshold is flagged so callers know the
/// classification is numerically fragile.
struct NearIdentitySet {
  static constexpr double threshold = 0.5;
  static constexpr double boundary_band = 1e-6;

  std::vector<std::size_t> member_indices;
  std::vector<double> distances;
  std::vector<std::size_t> boundary_flags;
};

inline NearIdentitySet build_near_identity_set(const FiniteMatrixGroup& g,
                                               const HermitianFormContext& ctx) {
  if (ctx.dim() != g.dim()) throw dimension_error("build_near_identity_set: context mismatch");
  NearIdentitySet out;
  out.distances.reserve(g.order());
  ComplexMatrix id = identity_matrix(g.dim());
  for (std::size_t i = 0; i < g.order(); ++i) {
    double d = ctx.op_norm(id - g.element(i));
    out.distances.push_back(d);
    if (d < NearIdentitySet::threshold) out.member_indices.push_back(i);
    if (std::abs(d - NearIdentitySet::threshold) < NearIdentitySet::boundary_band) {
      out.boundary_flags.push_back(i);
    }
  }
  return out;
}

/// The near-identity construction needs exact comparisons, hence the
/// Hermitian realization; a summed-norm context is rejected.
inline NearIdentitySet build_near_identity_set(const FiniteMatrixGroup& g,
                                               const NormContext& ctx) {
  const auto* h = std::get_if<HermitianFormContext>(&ctx);
  if (!h) {
    throw error("build_near_identity_set: Hermitian-form context required");
  }
  return build_near_identity_set(g, *h);
}

/// A = <M>. Abelianness and normality are guaranteed by the theorem, so a
/// failed check is a tolerance breakdown and raises verification_error.
inline SubgroupHandle generate_abelian_normal(const FiniteMatrixGroup& g,
                                              const NearIdentitySet& m, Tolerance tol) {
  SubgroupHandle a = subgroup_generated(g, m.member_indices);
  SubgroupCheck ab = abelian_check(g, a, tol);
  if (!ab.ok) {
    std::ostringstream msg;
    msg << "generate_abelian_normal: abelian check failed for elements " << ab.lhs << ", "
        << ab.rhs << " (residual " << ab.residual
        << "); this indicates numerical breakdown, not a counterexample";
    throw verification_error(msg.str());
  }
  SubgroupCheck nm = normality_check(g, a, tol);
  if (!nm.ok) {
    std::ostringstream msg;
    msg << "generate_abelian_normal: normality check failed conjugating element " << nm.rhs
        << " by generator " << nm.lhs
        << "; this indicates numerical breakdown, not a counterexample";
    throw verification_error(msg.str());
  }
  return a;
}

struct CheckResult {
  std::string name;
  bool passed = false;
  double residual = 0.0;
  std::string detail;
};

struct JordanReport {
  Eigen::Index n = 0;
  std::size_t group_order = 0;
  std::size_t m_size = 0;
  std::size_t a_order = 0;
  std::size_t index = 0;
  double bound = 0.0;
  double refined_bound = 0.0;
  std::vector<std::size_t> coset_rep_indices;
  double min_coset_separation = std::numeric_limits<double>::infinity();
  std::vector<CheckResult> checks;
  std::vector<std::string> warnings;
  NearIdentitySet near_identity;
  SubgroupHandle abelian_normal;

  bool all_checks_passed() const {
    for (const CheckResult& c : checks) {
      if (!c.passed) return false;
    }
    return true;
  }
};

/// 25^(n^2), +inf once it overflows double range (n stays small here).
inline double jordan_bound(Eigen::Index n) {
  return std::pow(25.0, static_cast<double>(n) * static_cast<double>(n));
}

inline double jordan_refined_bound(Eigen::Index n) {
  double nsq = static_cast<double>(n) * static_cast<double>(n);
  return std::pow(25.0, nsq) - std::pow(9.0, nsq);
}

namespace detail {

// log-space comparisons stay exact-enough even when the bound itself
// overflows; integer indices certified here are tiny by comparison.
inline bool index_le_bound(std::size_t index, Eigen::Index n) {
  double nsq = static_cast<double>(n) * static_cast<double>(n);
  return std::log(static_cast<double>(index)) <= nsq * std::log(25.0) + 1e-12;
}

inline bool index_le_refined_bound(std::size_t index, Eigen::Index n) {
  double nsq = static_cast<double>(n) * static_cast<double>(n);
  double log_refined = nsq * std::log(25.0) + std::log1p(-std::pow(9.0 / 25.0, nsq));
  return std::log(static_cast<double>(index)) <= log_refined + 1e-12;
}

}  // namespace detail

/// Per-element record for the trace bound: elements with distance < 1 from
/// the identity must have |n - trace| <= n * distance and nonzero trace.
struct TraceCheckRecord {
  std::size_t index = 0;
  double distance = 0.0;
  double trace_abs = 0.0;
  double slack = 0.0;  // |n - trace| - n * distance
  bool within_hypothesis = false;
  bool passed = true;
};

inline std::vector<TraceCheckRecord> check_trace_lemma(const FiniteMatrixGroup& g,
                                                       const NearIdentitySet& m,
                                                       Tolerance tol) {
  std::vector<TraceCheckRecord> out;
  out.reserve(g.order());
  double n = static_cast<double>(g.dim());
  for (std::size_t i = 0; i < g.order(); ++i) {
    TraceCheckRecord rec;
    rec.index = i;
    rec.distance = m.distances[i];
    Complex tr = g.element(i).trace();
    rec.trace_abs = std::abs(tr);
    rec.slack = std::abs(Complex(n, 0.0) - tr) - n * rec.distance;
    rec.within_hypothesis = rec.distance < 1.0;
    if (rec.within_hypothesis) {
      rec.passed = rec.trace_abs > 0.0 && rec.slack <= tol.residual_tol;
    }
    out.push_back(rec);
  }
  return out;
}

inline std::vector<TraceCheckRecord> check_trace_lemma(const FiniteMatrixGroup& g,
                                                       const HermitianFormContext& ctx,
                                                       Tolerance tol) {
  return check_trace_lemma(g, build_near_identity_set(g, ctx), tol);
}

/// Pairwise results over M: commutation residual, and the contraction
/// inequality dist(x^{-1}z^{-1}xz) <= 2 dist(x) dist(z) from the proof of
/// the commutation lemma.
struct CommutationLemmaResult {
  std::size_t pairs = 0;
  double max_commutator_residual = 0.0;
  std::size_t comm_lhs = 0, comm_rhs = 0;
  double max_contraction_slack = -std::numeric_limits<double>::infinity();
  std::size_t contr_lhs = 0, contr_rhs = 0;
  bool commute_ok = true;
  bool contraction_ok = true;
};

inline CommutationLemmaResult check_commutation_lemma(const FiniteMatrixGroup& g,
                                                      const NearIdentitySet& m,
                                                      Tolerance tol) {
  CommutationLemmaResult out;
  const auto& mem = m.member_indices;
  for (std::size_t a = 0; a < mem.size(); ++a) {
    std::size_t x = mem[a];
    std::size_t xinv = g.inverse_index(x);
    for (std::size_t b = a; b < mem.size(); ++b) {
      std::size_t z = mem[b];
      ++out.pairs;
      if (b > a) {
        double r = (g.element(x) * g.element(z) - g.element(z) * g.element(x)).norm();
        if (r > out.max_commutator_residual) {
          out.max_commutator_residual = r;
          out.comm_lhs = x;
          out.comm_rhs = z;
        }
      }
      // x^{-1} z^{-1} x z resolved through the element table, so its
      // distance comes from the precomputed table too.
      std::size_t zinv = g.inverse_index(z);
      std::size_t comm = g.product_index(g.product_index(g.product_index(xinv, zinv), x), z);
      double slack = m.distances[comm] - 2.0 * m.distances[x] * m.distances[z];
      if (slack > out.max_contraction_slack) {
        out.max_contraction_slack = slack;
        out.contr_lhs = x;
        out.contr_rhs = z;
      }
    }
  }
  if (mem.empty()) out.max_contraction_slack = 0.0;
  out.commute_ok = out.max_commutator_residual <= tol.residual_tol;
  out.contraction_ok = out.max_contraction_slack <= tol.residual_tol;
  return out;
}

/// Classifies the commutator x^{-1} z^{-1} x z: scalar lambda*id (returns
/// lambda, taken as trace/n) or non-scalar (returns nullopt).
inline std::optional<Complex> check_commutator_scalar(const FiniteMatrixGroup& g,
                                                      std::size_t x_idx, std::size_t z_idx,
                                                      Tolerance tol = Tolerance()) {
  std::size_t xinv = g.inverse_index(x_idx);
  std::size_t zinv = g.inverse_index(z_idx);
  std::size_t comm =
      g.product_index(g.product_index(g.product_index(xinv, zinv), x_idx), z_idx);
  const ComplexMatrix& c = g.element(comm);
  Complex lambda = c.trace() / static_cast<double>(g.dim());
  if ((c - lambda * identity_matrix(g.dim())).norm() <= tol.residual_tol) return lambda;
  return std::nullopt;
}

struct SeparationResult {
  double min_distance = std::numeric_limits<double>::infinity();
  std::size_t closest_lhs = 0, closest_rhs = 0;
  double max_rep_norm_error = 0.0;
  std::size_t worst_rep = 0;
};

/// Coset representatives must sit >= 1/2 apart in operator norm and have
/// operator norm exactly 1 (they are isometries).
inline SeparationResult check_coset_separation(const FiniteMatrixGroup& g,
                                               const std::vector<std::size_t>& reps,
                                               const HermitianFormContext& ctx) {
  SeparationResult out;
  for (std::size_t a = 0; a < reps.size(); ++a) {
    double err = std::abs(ctx.op_norm(g.element(reps[a])) - 1.0);
    if (err > out.max_rep_norm_error) {
      out.max_rep_norm_error = err;
      out.worst_rep = reps[a];
    }
    for (std::size_t b = a + 1; b < reps.size(); ++b) {
      double d = ctx.op_norm(g.element(reps[a]) - g.element(reps[b]));
      if (d < out.min_distance) {
        out.min_distance = d;
        out.closest_lhs = reps[a];
        out.closest_rhs = reps[b];
      }
    }
  }
  return out;
}

/// Largest order over all abelian normal subgroups, found by brute-force
/// lattice enumeration. Oracle for small groups.
inline std::size_t max_abelian_normal_oracle(const FiniteMatrixGroup& g,
                                             Tolerance tol = Tolerance(),
                                             std::size_t max_group_order = 64) {
  std::size_t best = 1;
  for (const SubgroupHandle& h : subgroup_lattice(g, max_group_order)) {
    if (h.order() > best && is_abelian(g, h, tol) && is_normal(g, h, tol)) {
      best = h.order();
    }
  }
  return best;
}

namespace detail {

inline std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace detail

/// Full pipeline: invariant form, near-identity set M, A = <M>, coset
/// index against the 25^(n^2) bound, plus every lemma-level verification,
/// all recorded as named checks.
inline JordanReport jordan_pipeline(const FiniteMatrixGroup& g, Tolerance tol = Tolerance()) {
  JordanReport r;
  r.n = g.dim();
  r.group_order = g.order();
  r.bound = jordan_bound(r.n);
  r.refined_bound = jordan_refined_bound(r.n);

  HermitianFormContext ctx = build_hermitian_form(g);
  if (ctx.factor_condition > 1e6) {
    r.warnings.push_back("invariant-form factor condition " +
                         detail::fmt_double(ctx.factor_condition) +
                         " exceeds 1e6: 1e-9 verification tolerances may be unachievable");
  }

  IsometryReport iso = verify_isometry(ctx, g);
  r.checks.push_back({"isometry", iso.max_residual <= tol.residual_tol, iso.max_residual,
                      "max relative |g*Pg - P| over the group, worst element " +
                          std::to_string(iso.worst_element)});

  NearIdentitySet m = build_near_identity_set(g, ctx);
  r.m_size = m.member_indices.size();
  for (std::size_t idx : m.boundary_flags) {
    r.warnings.push_back("element " + std::to_string(idx) + " at distance " +
                         detail::fmt_double(m.distances[idx]) +
                         " lies within 1e-6 of the 1/2 threshold; classification is fragile");
  }

  SubgroupHandle a = generate_abelian_normal(g, m, tol);
  r.a_order = a.order();
  SubgroupCheck ab = abelian_check(g, a, tol);
  r.checks.push_back({"abelian", ab.ok, ab.residual,
                      "max commutator Frobenius residual over A"});
  SubgroupCheck nm = normality_check(g, a, tol);
  r.checks.push_back({"normal", nm.ok, nm.residual,
                      "max landing distance of generator conjugates of A"});

  r.coset_rep_indices = left_cosets(g, a);
  r.index = r.coset_rep_indices.size();
  if (r.index * r.a_order != r.group_order) {
    throw error("jordan_pipeline: index * |A| != |G|");
  }

  bool bound_ok = detail::index_le_bound(r.index, r.n);
  r.checks.push_back({"index_bound", bound_ok, 0.0,
                      "index " + std::to_string(r.index) + " vs 25^(n^2) = " +
                          detail::fmt_double(r.bound)});
  bool refined_ok = detail::index_le_refined_bound(r.index, r.n);
  r.checks.push_back({"refined_bound", refined_ok, 0.0,
                      "index " + std::to_string(r.index) + " vs 25^(n^2) - 9^(n^2) = " +
                          detail::fmt_double(r.refined_bound)});

  std::vector<TraceCheckRecord> traces = check_trace_lemma(g, m, tol);
  double worst_slack = -std::numeric_limits<double>::infinity();
  bool trace_ok = true;
  std::size_t worst_trace_elem = 0;
  std::size_t in_hypothesis = 0;
  for (const TraceCheckRecord& rec : traces) {
    if (!rec.within_hypothesis) continue;
    ++in_hypothesis;
    if (!rec.passed) trace_ok = false;
    if (rec.slack > worst_slack) {
      worst_slack = rec.slack;
      worst_trace_elem = rec.index;
    }
  }
  if (in_hypothesis == 0) worst_slack = 0.0;
  r.checks.push_back({"trace_lemma", trace_ok, std::max(worst_slack, 0.0),
                      std::to_string(in_hypothesis) +
                          " elements within distance 1; worst slack at element " +
                          std::to_string(worst_trace_elem)});

  CommutationLemmaResult comm = check_commutation_lemma(g, m, tol);
  r.checks.push_back({"m_commutation", comm.commute_ok, comm.max_commutator_residual,
                      "max ||xy - yx||_F over " + std::to_string(comm.pairs) + " M-pairs"});
  r.checks.push_back({"contraction", comm.contraction_ok,
                      std::max(comm.max_contraction_slack, 0.0),
                      "max dist(commutator) - 2 dist(x) dist(z) over M-pairs"});

  SeparationResult sep = check_coset_separation(g, r.coset_rep_indices, ctx);
  r.min_coset_separation = sep.min_distance;
  bool sep_ok = r.index <= 1 ||
                sep.min_distance >= NearIdentitySet::threshold - tol.residual_tol;
  double sep_residual =
      r.index <= 1 ? 0.0 : std::max(0.0, NearIdentitySet::threshold - sep.min_distance);
  r.checks.push_back({"separation", sep_ok, sep_residual,
                      r.index <= 1 ? "vacuous (index 1)"
                                   : "min pairwise distance " +
                                         detail::fmt_double(sep.min_distance) +
                                         " between representatives " +
                                         std::to_string(sep.closest_lhs) + ", " +
                                         std::to_string(sep.closest_rhs)});
  // Representatives are group elements, hence isometries of the invariant
  // norm; 1e-9 here is the check's own contract, not the user tolerance.
  bool rep_ok = sep.max_rep_norm_error <= 1e-9;
  r.checks.push_back({"representative_norms", rep_ok, sep.max_rep_norm_error,
                      "max |op_norm(x_i) - 1| over coset representatives"});

  r.near_identity = std::move(m);
  r.abelian_normal = std::move(a);
  return r;
}

}  // namespace jordan
