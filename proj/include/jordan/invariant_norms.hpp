#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "jordan/group.hpp"
#include "jordan/random.hpp"

namespace jordan {

/// The averaged Hermitian form P = sum_{h in G} h* h together with its
/// Cholesky factor c (c* c = P). Every g in G satisfies g* P g = P, so the
/// norm |v| = ||c v||_2 is G-invariant and its operator norm is computable
/// exactly as a spectral norm.
struct HermitianFormContext {
  ComplexMatrix gram;
  ComplexMatrix factor;
  ComplexMatrix factor_inverse;
  double factor_condition = 1.0;

  Eigen::Index dim() const { return gram.rows(); }

  double op_norm(const ComplexMatrix& a) const {
    if (a.rows() != gram.rows() || a.cols() != gram.cols()) {
      throw dimension_error("op_norm: dimension mismatch");
    }
    return spectral_norm(factor * a * factor_inverse);
  }
};

inline HermitianFormContext build_hermitian_form(const FiniteMatrixGroup& g) {
  Eigen::Index n = g.dim();
  ComplexMatrix p = ComplexMatrix::Zero(n, n);
  for (const ComplexMatrix& h : g.elements()) p += h.adjoint() * h;
  p = (p + p.adjoint()) / 2.0;  // kill round-off skew

  HermitianFormContext ctx;
  ctx.gram = p;
  try {
    ctx.factor = cholesky(p);
  } catch (const numeric_error&) {
    throw numeric_error(
        "build_hermitian_form: averaged form is not positive definite "
        "(input is not a closed group or is numerically degenerate)");
  }
  ctx.factor_inverse = ctx.factor.template triangularView<Eigen::Upper>().solve(
      identity_matrix(n));
  ctx.factor_condition = condition_number(ctx.factor);
  return ctx;
}

/// [lower, upper] bracket for an operator norm that has no closed form.
/// The lower bound is certified (a witness vector attains it); the upper
/// bound comes from norm-equivalence constants.
struct OpNormInterval {
  double lower = 0.0;
  double upper = 0.0;
};

/// The summed norm N(v) = sum_{h in G} ||h v||_2. Invariant by
/// re-indexing: if h runs through G then so does hg. Operator norms for it
/// are estimated, not solved: random starts refined by normalized power
/// ascent give the certified lower bound, equivalence constants the upper.
class SummedNormContext {
 public:
  SummedNormContext(const FiniteMatrixGroup& g, std::uint64_t seed, std::size_t starts,
                    std::size_t steps)
      : group_(&g), seed_(seed), starts_(starts), steps_(steps) {
    for (const ComplexMatrix& h : g.elements()) {
      Eigen::VectorXd s = singular_values(h);
      sigma_max_sum_ += s(0);
      sigma_min_sum_ += s(s.size() - 1);
    }
  }

  const FiniteMatrixGroup& group() const { return *group_; }
  std::uint64_t seed() const { return seed_; }
  Eigen::Index dim() const { return group_->dim(); }

  double evaluate(const ComplexVector& v) const {
    if (v.size() != group_->dim()) throw dimension_error("evaluate: dimension mismatch");
    double total = 0.0;
    for (const ComplexMatrix& h : group_->elements()) total += (h * v).norm();
    return total;
  }

  OpNormInterval op_norm(const ComplexMatrix& a) const {
    if (a.rows() != group_->dim() || a.cols() != group_->dim()) {
      throw dimension_error("op_norm: dimension mismatch");
    }
    Eigen::Index n = group_->dim();
    double best = 0.0;
    for (std::size_t start = 0; start < starts_; ++start) {
      ComplexVector v = random_unit_vector(n, start);
      double prev = -1.0;
      for (std::size_t step = 0; step < steps_; ++step) {
        ComplexVector av = a * v;
        double num = evaluate(av);
        double den = evaluate(v);
        if (den <= 0.0) break;
        double ratio = num / den;
        if (ratio > best) best = ratio;
        if (std::abs(ratio - prev) <= 1e-13 * std::max(1.0, ratio)) break;
        prev = ratio;
        ComplexVector u = ascent_direction(a, av);
        double unorm = u.norm();
        if (unorm <= 0.0) break;
        v = u / unorm;
      }
    }
    double upper = sigma_min_sum_ > 0.0
                       ? (sigma_max_sum_ / sigma_min_sum_) * spectral_norm(a)
                       : std::numeric_limits<double>::infinity();
    if (upper < best) upper = best;
    return {best, upper};
  }

 private:
  ComplexVector random_unit_vector(Eigen::Index n, std::uint64_t counter) const {
    CounterRng rng(seed_, counter);
    ComplexVector v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      v(i) = Complex(rng.next_gaussian(), rng.next_gaussian());
    }
    double nrm = v.norm();
    return nrm > 0.0 ? ComplexVector(v / nrm) : ComplexVector(ComplexVector::Unit(n, 0));
  }

  // Pullback of the steepest-ascent direction of v -> N(a v); with a
  // trivial group and the Euclidean base norm this reduces to one step of
  // power iteration on a* a.
  ComplexVector ascent_direction(const ComplexMatrix& a, const ComplexVector& av) const {
    ComplexVector w = ComplexVector::Zero(av.size());
    for (const ComplexMatrix& h : group_->elements()) {
      ComplexVector hav = h * av;
      double nrm = hav.norm();
      if (nrm > 0.0) w += h.adjoint() * (hav / nrm);
    }
    return a.adjoint() * w;
  }

  const FiniteMatrixGroup* group_;
  std::uint64_t seed_;
  std::size_t starts_;
  std::size_t steps_;
  double sigma_max_sum_ = 0.0;
  double sigma_min_sum_ = 0.0;
};

inline SummedNormContext build_summed_norm(const FiniteMatrixGroup& g,
                                           std::uint64_t seed = 0,
                                           std::size_t starts = 512,
                                           std::size_t steps = 200) {
  return SummedNormContext(g, seed, starts, steps);
}

/// Either invariant-norm realization; the pipeline requires the Hermitian
/// one, the summed one cross-validates it.
using NormContext = std::variant<HermitianFormContext, SummedNormContext>;

inline OpNormInterval op_norm(const NormContext& ctx, const ComplexMatrix& a) {
  if (const auto* h = std::get_if<HermitianFormContext>(&ctx)) {
    double v = h->op_norm(a);
    return {v, v};
  }
  return std::get<SummedNormContext>(ctx).op_norm(a);
}

struct IsometryReport {
  double max_residual = 0.0;
  std::size_t worst_element = 0;
};

inline IsometryReport verify_isometry(const HermitianFormContext& ctx,
                                      const FiniteMatrixGroup& g) {
  IsometryReport rep;
  double pnorm = ctx.gram.norm();
  for (std::size_t i = 0; i < g.order(); ++i) {
    const ComplexMatrix& h = g.element(i);
    double r = (h.adjoint() * ctx.gram * h - ctx.gram).norm() / pnorm;
    if (r > rep.max_residual) {
      rep.max_residual = r;
      rep.worst_element = i;
    }
  }
  return rep;
}

inline IsometryReport verify_isometry(const SummedNormContext& ctx,
                                      const FiniteMatrixGroup& g,
                                      std::size_t sample_vectors = 100) {
  IsometryReport rep;
  Eigen::Index n = g.dim();
  for (std::size_t s = 0; s < sample_vectors; ++s) {
    CounterRng rng(ctx.seed(), 0x10000000ull + s);
    ComplexVector v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      v(i) = Complex(rng.next_gaussian(), rng.next_gaussian());
    }
    double nrm = v.norm();
    if (nrm <= 0.0) continue;
    v /= nrm;
    double base = ctx.evaluate(v);
    for (std::size_t i = 0; i < g.order(); ++i) {
      double r = std::abs(ctx.evaluate(g.element(i) * v) - base) / base;
      if (r > rep.max_residual) {
        rep.max_residual = r;
        rep.worst_element = i;
      }
    }
  }
  return rep;
}

inline IsometryReport verify_isometry(const NormContext& ctx, const FiniteMatrixGroup& g) {
  if (const auto* h = std::get_if<HermitianFormContext>(&ctx)) return verify_isometry(*h, g);
  return verify_isometry(std::get<SummedNormContext>(ctx), g);
}

}  // namespace jordan
