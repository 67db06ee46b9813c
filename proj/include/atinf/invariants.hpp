#pragma once

// Numerical invariants read off a standard basis: staircase size, Krull dimension,
// projective dimension of homogeneous ideals.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "atinf/groebner.hpp"

namespace atinf {

/// Number of standard monomials, or infinite.
struct StaircaseCount {
  std::optional<std::uint64_t> count;

  static StaircaseCount infinite() { return {}; }
  static StaircaseCount finite(std::uint64_t n) { return {n}; }

  bool is_finite() const { return count.has_value(); }
  std::uint64_t value() const { return count.value(); }

  std::string to_string() const { return count ? std::to_string(*count) : std::string("infinite"); }

  friend bool operator==(const StaircaseCount&, const StaircaseCount&) = default;
};

/// Dimension of a variety; -1 encodes the empty set.
struct VarietyDim {
  int dim = -1;

  bool is_empty() const { return dim < 0; }
  std::string to_string() const { return dim < 0 ? std::string("empty") : std::to_string(dim); }

  friend bool operator==(const VarietyDim&, const VarietyDim&) = default;
  friend auto operator<=>(const VarietyDim&, const VarietyDim&) = default;
};

namespace detail {

inline bool in_monomial_ideal(const Monomial& m, const std::vector<Monomial>& lead) {
  for (const auto& l : lead)
    if (l.divides(m)) return true;
  return false;
}

inline std::uint64_t count_standard(Monomial m, std::size_t var, std::size_t nvars,
                                    const std::vector<Monomial>& lead) {
  if (var == nvars) return 1;
  std::uint64_t total = 0;
  for (;;) {
    if (in_monomial_ideal(m, lead)) break;
    total += count_standard(m, var + 1, nvars, lead);
    ++m.exps[var];
    ++m.deg;
  }
  return total;
}

/// Largest |S| such that no leading monomial is supported inside S.
inline int max_independent_set(std::size_t nvars, const std::vector<Monomial>& lead) {
  for (const auto& l : lead)
    if (l.deg == 0) return -1;
  std::vector<std::uint32_t> supports;
  for (const auto& l : lead) {
    std::uint32_t s = 0;
    for (std::size_t i = 0; i < nvars; ++i)
      if (l.exps[i]) s |= 1u << i;
    supports.push_back(s);
  }
  int best = 0;
  const std::uint32_t limit = 1u << nvars;
  for (std::uint32_t subset = 0; subset < limit; ++subset) {
    const int size = __builtin_popcount(subset);
    if (size <= best) continue;
    bool independent = true;
    for (std::uint32_t s : supports) {
      if ((s & ~subset) == 0) {
        independent = false;
        break;
      }
    }
    if (independent) best = size;
  }
  return best;
}

}  // namespace detail

/// Vector-space dimension of the quotient by the ideal (local ring when the order is local).
inline StaircaseCount quotient_dim(const IdealBasis& basis) {
  if (!basis.is_standard) throw InputError("quotient_dim: basis is not standard");
  const auto lead = basis.leading_monomials();
  const std::size_t n = basis.nvars();
  for (const auto& l : lead)
    if (l.deg == 0) return StaircaseCount::finite(0);
  for (std::size_t i = 0; i < n; ++i) {
    bool pure = false;
    for (const auto& l : lead) {
      if (l.exps[i] != 0 && l.deg == l.exps[i]) {
        pure = true;
        break;
      }
    }
    if (!pure) return StaircaseCount::infinite();
  }
  return StaircaseCount::finite(detail::count_standard(Monomial::one(), 0, n, lead));
}

/// Dimension of the affine variety; the basis must be standard for a global order.
inline VarietyDim krull_dim(const IdealBasis& basis) {
  if (!basis.is_standard || !basis.order.is_global())
    throw InputError("krull_dim: needs a standard basis for a global order");
  return {detail::max_independent_set(basis.nvars(), basis.leading_monomials())};
}

/// True when the variety is finite, including the empty variety.
inline bool is_zero_dim(const IdealBasis& basis) {
  if (!basis.is_standard || !basis.order.is_global())
    throw InputError("is_zero_dim: needs a standard basis for a global order");
  const auto lead = basis.leading_monomials();
  for (const auto& l : lead)
    if (l.deg == 0) return true;
  for (std::size_t i = 0; i < basis.nvars(); ++i) {
    bool pure = false;
    for (const auto& l : lead)
      if (l.exps[i] != 0 && l.deg == l.exps[i]) pure = true;
    if (!pure) return false;
  }
  return true;
}

/// Dimension of the projective set cut out by homogeneous generators; -1 when empty.
inline VarietyDim proj_dim(const std::vector<std::string>& vars, const std::vector<Poly>& gens) {
  for (const auto& g : gens)
    if (!g.is_homogeneous()) throw InputError("proj_dim: generator " + g.to_string() + " is not homogeneous");
  IdealBasis b = standard_basis(vars, gens, MonomialOrder::degrevlex());
  const int cone = krull_dim(b).dim;
  return {cone >= 1 ? cone - 1 : -1};
}

inline VarietyDim proj_dim(const std::vector<Poly>& gens) {
  if (gens.empty()) throw InputError("proj_dim: empty generator list");
  return proj_dim(gens.front().vars(), gens);
}

}  // namespace atinf
