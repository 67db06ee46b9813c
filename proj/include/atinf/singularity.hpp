#pragma once

// Singular loci of f and of f_d at infinity, polar loci, local Milnor numbers and the
// Milnor-number sums at infinity of the closed generic fibre.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "atinf/error.hpp"
#include "atinf/groebner.hpp"
#include "atinf/invariants.hpp"
#include "atinf/poly.hpp"
#include "atinf/random.hpp"

namespace atinf {

inline IdealBasis jacobian_ideal(const Poly& f) {
  IdealBasis j{f.vars(), {}, MonomialOrder::degrevlex(), false};
  for (std::size_t i = 0; i < f.nvars(); ++i) j.gens.push_back(derivative(f, i));
  return j;
}

struct SingularityProfile {
  int degree = 0;
  VarietyDim dim_sing_affine;    // dim Sing f
  VarietyDim dim_sigma_inf;      // dim of the tangencies at infinity
  VarietyDim dim_sigma_cap_fd1;  // same, intersected with {f_{d-1} = 0}
  bool general_at_infinity = false;
  /// Places every tangency at infinity off {x_n = 0}; set whenever dim_sigma_inf <= 0.
  std::optional<LinearChange> chart_change;
  /// Places the singular points at infinity of the closed fibres, which lie on
  /// {f_{d-1} = 0}, off {x_n = 0}; set whenever dim_sigma_cap_fd1 <= 0.
  std::optional<LinearChange> fiber_chart_change;
};

/// Sums over the tangencies at infinity of the Milnor numbers of the closed generic fibre
/// and of its trace on the hyperplane at infinity.
struct MilnorPairSums {
  std::int64_t sum_mu_fiber = 0;
  std::int64_t sum_mu_boundary = 0;
  std::vector<Rational> t_used;

  std::int64_t total() const { return sum_mu_fiber + sum_mu_boundary; }
};

namespace detail {

inline constexpr int kChartAttempts = 20;
inline constexpr int kChartEntryBound = 5;
inline constexpr int kFibreRounds = 5;

/// x_n := y_n - sum_{i<n} a_i y_i, i.e. the new last coordinate is x_n + sum a_i x_i.
inline LinearChange draw_chart(std::size_t n, SeededRng& rng) {
  auto m = RationalMatrix(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  for (std::size_t i = 0; i + 1 < n; ++i) m[n - 1][i] = rng.uniform(-kChartEntryBound, kChartEntryBound);
  return LinearChange(std::move(m));
}

/// A change c with the projective set {gens = 0} disjoint from {x_n = 0} after substitution.
inline std::optional<LinearChange> find_chart(const std::vector<Poly>& gens, SeededRng& rng) {
  const auto& vars = gens.front().vars();
  const std::size_t n = vars.size();
  for (int attempt = 0; attempt < kChartAttempts; ++attempt) {
    LinearChange c = draw_chart(n, rng);
    std::vector<Poly> moved;
    for (const auto& g : gens) moved.push_back(apply_change(g, c));
    moved.push_back(Poly::variable(vars, n - 1));
    if (proj_dim(vars, moved).is_empty()) return c;
  }
  return std::nullopt;
}

inline std::vector<Poly> partials(const Poly& f) { return jacobian_ideal(f).gens; }

}  // namespace detail

inline SingularityProfile singularity_profile(const Poly& f, std::uint64_t seed) {
  const int d = f.degree();
  if (d < 1) throw InputError("singularity_profile: polynomial must have degree >= 1");
  SingularityProfile prof;
  prof.degree = d;
  const auto& vars = f.vars();

  prof.dim_sing_affine = krull_dim(standard_basis(vars, detail::partials(f)));

  const Poly fd = graded_part(f, d);
  const Poly fd1 = graded_part(f, d - 1);
  auto sigma = detail::partials(fd);
  prof.dim_sigma_inf = proj_dim(vars, sigma);
  auto sigma_cap = sigma;
  sigma_cap.push_back(fd1);
  prof.dim_sigma_cap_fd1 = proj_dim(vars, sigma_cap);
  prof.general_at_infinity = prof.dim_sigma_inf.is_empty();

  SeededRng rng(seed);
  if (prof.general_at_infinity) {
    prof.chart_change = LinearChange::identity(vars.size());
    prof.fiber_chart_change = prof.chart_change;
  } else if (prof.dim_sigma_inf.dim == 0) {
    prof.chart_change = detail::find_chart(sigma, rng);
    if (!prof.chart_change) throw ComputationError("chart normalization failed");
    prof.fiber_chart_change = prof.chart_change;
  } else if (prof.dim_sigma_cap_fd1.dim <= 0) {
    prof.fiber_chart_change = prof.dim_sigma_cap_fd1.is_empty() ? LinearChange::identity(vars.size())
                                                                 : detail::find_chart(sigma_cap, rng);
    if (!prof.fiber_chart_change) throw ComputationError("chart normalization failed");
  }
  return prof;
}

/// Local algebra dimension of ideal(gens) at a rational point; nullopt when infinite.
inline std::optional<std::uint64_t> local_multiplicity(const std::vector<std::string>& vars,
                                                       const std::vector<Poly>& gens,
                                                       std::span<const Rational> point) {
  std::vector<Poly> moved;
  for (const auto& g : gens) moved.push_back(translate(g, point));
  auto sb = standard_basis(vars, moved, MonomialOrder::local_degrevlex());
  return quotient_dim(sb).count;
}

/// Milnor number of the germ of f at a rational point; nullopt when the singularity is not isolated.
inline std::optional<std::uint64_t> local_milnor(const Poly& f, std::span<const Rational> point) {
  if (point.size() != f.nvars()) throw InputError("local_milnor: point dimension mismatch");
  return local_multiplicity(f.vars(), detail::partials(f), point);
}

inline std::optional<std::uint64_t> local_milnor(const Poly& f) {
  std::vector<Rational> origin(f.nvars(), Rational(0));
  return local_milnor(f, origin);
}

/// Sum of the Milnor numbers of g at the singular points of {g = 0}.
///
/// The critical components off the fibre are C = (J : g^inf); saturating J by C keeps the
/// components at the singular points of the fibre. When J is zero-dimensional the same number
/// is the dimension of the generalized kernel of multiplication by g on Q/J.
inline std::int64_t milnor_sum_on_fiber(const Poly& g, bool allow_fast_path = true) {
  if (g.is_zero()) throw ComputationError("non-isolated fiber singularities");
  if (g.is_constant()) return 0;
  const auto& vars = g.vars();
  const auto jac = detail::partials(g);
  IdealBasis j = standard_basis(vars, jac);
  if (j.is_unit()) return 0;
  if (allow_fast_path) {
    if (auto q = QuotientAlgebra::from(j)) return static_cast<std::int64_t>(q->nilspace_dim(g));
  }
  IdealBasis off = saturate(vars, j.gens, g);
  IdealBasis on = off.gens.empty() ? j : saturate_by_ideal(vars, j.gens, off.gens);
  if (!is_zero_dim(on)) throw ComputationError("non-isolated fiber singularities");
  return static_cast<std::int64_t>(quotient_dim(on).value());
}

/// Decides whether t is a critical value of f. With isolated critical points this is a rank test
/// of f - t on the Jacobian algebra; otherwise a dimension count of J(f) + (f - t).
class CriticalValueTest {
 public:
  explicit CriticalValueTest(const Poly& f) : f_(f) {
    const auto& vars = f.vars();
    algebra_ = QuotientAlgebra::from(standard_basis(vars, detail::partials(f)));
    if (algebra_ && algebra_->dim() > 0) {
      const RationalMatrix m = algebra_->multiplication(f);
      den_ = 1;
      for (const auto& row : m)
        for (const auto& x : row) mpz_lcm(den_.get_mpz_t(), den_.get_mpz_t(), x.get_den_mpz_t());
      for (const auto& row : m) {
        detail::IntegerVector r;
        for (const auto& x : row) r.push_back(den_ / x.get_den() * x.get_num());
        scaled_.push_back(std::move(r));
      }
    }
  }

  bool is_critical(const Rational& t) const {
    if (!algebra_) {
      auto gens = detail::partials(f_);
      gens.push_back(f_ - Poly::constant(f_.vars(), t));
      return !krull_dim(standard_basis(f_.vars(), gens)).is_empty();
    }
    const std::size_t n = algebra_->dim();
    if (n == 0) return false;
    // den * (M - t) * q = q * scaled - p * den
    const Integer shift = den_ * t.get_num();
    detail::EchelonSpan span(n);
    for (std::size_t j = 0; j < n; ++j) {
      detail::IntegerVector col(n);
      for (std::size_t i = 0; i < n; ++i) col[i] = t.get_den() * scaled_[i][j] - (i == j ? shift : Integer(0));
      if (!span.insert(std::move(col))) return true;
    }
    return false;
  }

 private:
  Poly f_;
  std::optional<QuotientAlgebra> algebra_;
  Integer den_;
  std::vector<detail::IntegerVector> scaled_;
};

namespace detail {

inline void check_fibre_gates(const SingularityProfile& prof, bool assume_concentrated) {
  if (prof.dim_sing_affine.dim >= 1 && !assume_concentrated)
    throw GateError("Sing f is not isolated (dim " + std::to_string(prof.dim_sing_affine.dim) +
                    "); pass the concentrated-homology override to proceed");
}

/// Sum of Milnor numbers of the closed fibre {F(x', 1, z) = t z^d} over sampled t.
inline std::int64_t sampled_fibre_sum(const Poly& f, const LinearChange& chart, SeededRng& rng, int t_samples,
                                      std::vector<Rational>& t_used) {
  if (t_samples < 2) throw InputError("t_samples must be at least 2");
  const auto& vars = f.vars();
  const std::size_t n = vars.size();
  const int d = f.degree();
  const Poly fc = apply_change(f, chart);
  const std::string zname = fresh_name(vars, "_z");
  const Poly big_f = homogenize(fc, zname, d);
  const Poly chart_poly = dehomogenize(big_f, n - 1, 1);
  const auto& cvars = chart_poly.vars();
  const Poly zd = Poly::variable(cvars, cvars.size() - 1).pow(static_cast<unsigned>(d));
  const CriticalValueTest critical(f);

  for (int round = 0; round < kFibreRounds; ++round) {
    std::vector<std::int64_t> values;
    std::vector<Rational> ts;
    int guard = 0;
    while (static_cast<int>(values.size()) < t_samples) {
      if (++guard > 20 * t_samples) throw ComputationError("atypical-value instability: no smooth fibre found");
      Rational t = rng.small_rational();
      if (critical.is_critical(t)) continue;
      values.push_back(milnor_sum_on_fiber(chart_poly - zd * t));
      ts.push_back(t);
    }
    if (std::all_of(values.begin(), values.end(), [&](std::int64_t v) { return v == values.front(); })) {
      t_used = std::move(ts);
      return values.front();
    }
  }
  throw ComputationError("atypical-value instability: sampled fibres disagree");
}

}  // namespace detail

/// Both sums of the defect formula at infinity. Requires dim Sing f <= 0 (or the override)
/// and finitely many tangencies at infinity.
inline MilnorPairSums infinity_milnor_pairs(const Poly& f, const SingularityProfile& prof, std::uint64_t seed,
                                            int t_samples = 2, bool assume_concentrated = false) {
  detail::check_fibre_gates(prof, assume_concentrated);
  if (prof.dim_sigma_inf.dim > 0)
    throw GateError("tangencies at infinity are not isolated (dim " + std::to_string(prof.dim_sigma_inf.dim) + ")");
  if (t_samples < 2) throw InputError("t_samples must be at least 2");
  MilnorPairSums out;
  if (prof.general_at_infinity) return out;
  if (!prof.chart_change) throw ComputationError("chart normalization failed");
  const LinearChange& chart = *prof.chart_change;
  const std::size_t n = f.nvars();
  const Poly fd = graded_part(apply_change(f, chart), prof.degree);
  out.sum_mu_boundary = milnor_sum_on_fiber(dehomogenize(fd, n - 1, 1));
  SeededRng rng(seed ^ 0x5851F42D4C957F2Dull);
  out.sum_mu_fiber = detail::sampled_fibre_sum(f, chart, rng, t_samples, out.t_used);
  return out;
}

inline MilnorPairSums infinity_milnor_pairs(const Poly& f, std::uint64_t seed, int t_samples = 2,
                                            bool assume_concentrated = false) {
  return infinity_milnor_pairs(f, singularity_profile(f, seed), seed, t_samples, assume_concentrated);
}

/// Sum of Milnor numbers of the closed generic fibre at its singular points at infinity.
/// Only needs dim(Sigma_f^inf ∩ {f_{d-1} = 0}) <= 0.
inline std::int64_t fiber_milnor_sum(const Poly& f, const SingularityProfile& prof, std::uint64_t seed,
                                     int t_samples, bool assume_concentrated, std::vector<Rational>& t_used) {
  detail::check_fibre_gates(prof, assume_concentrated);
  if (prof.dim_sigma_cap_fd1.dim > 0)
    throw GateError("singular points at infinity of the closed fibre are not isolated");
  if (prof.dim_sigma_cap_fd1.is_empty()) return 0;
  if (!prof.fiber_chart_change) throw ComputationError("chart normalization failed");
  SeededRng rng(seed ^ 0x5851F42D4C957F2Dull);
  return detail::sampled_fibre_sum(f, *prof.fiber_chart_change, rng, t_samples, t_used);
}

namespace detail {

/// Matrix sending x to coordinates whose last entry is the linear form l.
inline RationalMatrix coordinates_with_last(const Poly& l) {
  const std::size_t n = l.nvars();
  std::vector<Rational> row(n, Rational(0));
  for (std::size_t i = 0; i < n; ++i) row[i] = l.coefficient(Monomial::var(i));
  std::size_t pivot = n;
  for (std::size_t i = n; i-- > 0;)
    if (row[i] != 0) {
      pivot = i;
      break;
    }
  RationalMatrix m;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == pivot) continue;
    std::vector<Rational> e(n, Rational(0));
    e[i] = 1;
    m.push_back(std::move(e));
  }
  m.push_back(row);
  return m;
}

inline void check_linear(const Poly& l) {
  if (l.degree() != 1 || graded_part(l, 1).is_zero()) throw InputError("expected a nonconstant linear form");
}

}  // namespace detail

/// Closure of Sing(l, f) minus Sing f, as an ideal in the original coordinates.
inline IdealBasis polar_locus(const Poly& f, const Poly& l) {
  detail::check_linear(l);
  if (l.vars() != f.vars()) throw InputError("polar_locus: f and l live in different rings");
  const auto& vars = f.vars();
  const std::size_t n = vars.size();
  if (f.is_constant()) return IdealBasis{vars, {Poly::constant(vars, 1)}, MonomialOrder::degrevlex(), true};
  const LinearChange to_l(detail::coordinates_with_last(l));  // y = M x
  const Poly moved = apply_change(f, to_l.inverse());          // f(M^{-1} y)
  std::vector<Poly> sing_l;
  for (std::size_t i = 0; i + 1 < n; ++i) sing_l.push_back(derivative(moved, i));
  IdealBasis polar = saturate_by_ideal(vars, sing_l, detail::partials(moved));
  std::vector<Poly> back;
  for (const auto& g : polar.gens) back.push_back(apply_change(g, to_l));
  return standard_basis(vars, back);
}

/// The polar locus is a curve or empty. Reducedness is not certified.
inline bool bertini_check(const Poly& f, const Poly& l) { return krull_dim(polar_locus(f, l)).dim <= 1; }

/// Squarefree part of p, as p / gcd(p, dp/dx_1, ..., dp/dx_n), made monic.
inline Poly squarefree_part(const Poly& p) {
  if (p.is_zero() || p.is_constant()) return p;
  const auto& vars = p.vars();
  auto gcd = [&](const Poly& a, const Poly& b) -> Poly {
    if (b.is_zero()) return a;
    if (a.is_zero()) return b;
    IdealBasis l = intersect(vars, {a}, {b});
    if (l.gens.size() != 1) throw ComputationError("squarefree_part: lcm is not principal");
    return divide_exact(a * b, l.gens.front());
  };
  Poly g = p;
  for (std::size_t i = 0; i < p.nvars() && !g.is_constant(); ++i) g = gcd(g, derivative(p, i));
  const Poly r = divide_exact(p, g);
  return r * Rational(1 / r.sorted_terms().front().second);
}

}  // namespace atinf
