#pragma once

// Groebner bases (Buchberger, global orders) and standard bases (Mora, local order),
// with elimination, intersection and saturation built on top.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "atinf/error.hpp"
#include "atinf/poly.hpp"

namespace atinf {

class MonomialOrder {
 public:
  enum class Kind { degrevlex_global, degrevlex_local, block };

  MonomialOrder() = default;

  static MonomialOrder degrevlex() { return MonomialOrder(Kind::degrevlex_global, 0); }

  /// Negative degree reverse lex: lower total degree is larger, so 1 is the largest monomial.
  static MonomialOrder local_degrevlex() { return MonomialOrder(Kind::degrevlex_local, 0); }

  /// Degrevlex on the masked block first, then degrevlex on the remaining variables.
  static MonomialOrder block(std::uint32_t elim_mask) { return MonomialOrder(Kind::block, elim_mask); }

  Kind kind() const { return kind_; }
  std::uint32_t elim_mask() const { return mask_; }
  bool is_global() const { return kind_ != Kind::degrevlex_local; }

  /// Positive when a > b.
  int compare(const Monomial& a, const Monomial& b) const {
    switch (kind_) {
      case Kind::degrevlex_global:
        return compare_degrevlex(a, b);
      case Kind::degrevlex_local:
        if (a.deg != b.deg) return a.deg < b.deg ? 1 : -1;
        for (std::size_t i = kMaxVars; i-- > 0;)
          if (a.exps[i] != b.exps[i]) return a.exps[i] < b.exps[i] ? 1 : -1;
        return 0;
      case Kind::block:
        return compare_block(a, b);
    }
    return 0;
  }

  std::string name() const {
    switch (kind_) {
      case Kind::degrevlex_global: return "degrevlex";
      case Kind::degrevlex_local: return "local-degrevlex";
      case Kind::block: return "block";
    }
    return "?";
  }

  friend bool operator==(const MonomialOrder&, const MonomialOrder&) = default;

 private:
  MonomialOrder(Kind k, std::uint32_t mask) : kind_(k), mask_(mask) {}

  int compare_block(const Monomial& a, const Monomial& b) const {
    int da = 0, db = 0;
    for (std::size_t i = 0; i < kMaxVars; ++i) {
      if (mask_ >> i & 1u) {
        da += a.exps[i];
        db += b.exps[i];
      }
    }
    if (da != db) return da > db ? 1 : -1;
    for (std::size_t i = kMaxVars; i-- > 0;)
      if ((mask_ >> i & 1u) && a.exps[i] != b.exps[i]) return a.exps[i] < b.exps[i] ? 1 : -1;
    const int ra = a.deg - da, rb = b.deg - db;
    if (ra != rb) return ra > rb ? 1 : -1;
    for (std::size_t i = kMaxVars; i-- > 0;)
      if (!(mask_ >> i & 1u) && a.exps[i] != b.exps[i]) return a.exps[i] < b.exps[i] ? 1 : -1;
    return 0;
  }

  Kind kind_ = Kind::degrevlex_global;
  std::uint32_t mask_ = 0;
};

struct IdealBasis {
  std::vector<std::string> vars;
  std::vector<Poly> gens;
  MonomialOrder order;
  bool is_standard = false;

  std::size_t nvars() const { return vars.size(); }

  /// Leading monomial of each generator under `order`.
  std::vector<Monomial> leading_monomials() const {
    std::vector<Monomial> out;
    out.reserve(gens.size());
    for (const auto& g : gens) {
      if (g.is_zero()) continue;
      const Monomial* best = nullptr;
      for (const auto& [m, c] : g.terms())
        if (!best || order.compare(m, *best) > 0) best = &m;
      out.push_back(*best);
    }
    return out;
  }

  /// True when the basis contains a unit of the (local or polynomial) ring.
  bool is_unit() const {
    for (const auto& m : leading_monomials())
      if (m.deg == 0) return true;
    return false;
  }

  friend bool operator==(const IdealBasis& a, const IdealBasis& b) {
    return a.vars == b.vars && a.order == b.order && a.gens == b.gens;
  }
};

namespace detail {

template <class C>
struct BasicTerm {
  Monomial mono;
  C coef;
};

/// Terms in strictly decreasing order. Completion works over Z with primitive polynomials
/// (fraction-free); normal forms returned to callers are computed over Q.
template <class C>
using BasicTerms = std::vector<BasicTerm<C>>;
using Term = BasicTerm<Integer>;
using Terms = BasicTerms<Integer>;
using QTerms = BasicTerms<Rational>;

inline Integer content(const Terms& t) {
  Integer g = 0;
  for (const auto& term : t) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), term.coef.get_mpz_t());
    if (g == 1) break;
  }
  return g;
}

/// Divides by the signed content so the leading coefficient is positive; returns the divisor.
inline Integer make_primitive(Terms& t) {
  if (t.empty()) return 1;
  Integer g = content(t);
  if (t.front().coef < 0) g = -g;
  if (g != 1)
    for (auto& term : t) mpz_divexact(term.coef.get_mpz_t(), term.coef.get_mpz_t(), g.get_mpz_t());
  return g;
}

inline Rational make_primitive(QTerms&) { return 1; }

template <class C>
void sort_terms(BasicTerms<C>& t, const MonomialOrder& ord) {
  std::sort(t.begin(), t.end(), [&](const auto& a, const auto& b) { return ord.compare(a.mono, b.mono) > 0; });
}

inline Terms to_terms(const Poly& p, const MonomialOrder& ord) {
  Integer den = 1;
  for (const auto& [m, c] : p.terms()) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
  Terms t;
  t.reserve(p.size());
  for (const auto& [m, c] : p.terms()) {
    Integer v = den / c.get_den();
    v *= c.get_num();
    t.push_back({m, std::move(v)});
  }
  sort_terms(t, ord);
  make_primitive(t);
  return t;
}

inline QTerms to_qterms(const Poly& p, const MonomialOrder& ord) {
  QTerms t;
  t.reserve(p.size());
  for (const auto& [m, c] : p.terms()) t.push_back({m, c});
  sort_terms(t, ord);
  return t;
}

/// Converts back with a monic leading coefficient.
inline Poly to_poly(const Terms& t, const std::vector<std::string>& vars) {
  Poly::TermMap map;
  for (const auto& term : t) {
    Rational q(term.coef, t.front().coef);
    q.canonicalize();
    map.emplace(term.mono, std::move(q));
  }
  return Poly(vars, std::move(map));
}

/// Converts back exactly.
inline Poly to_poly(const QTerms& t, const std::vector<std::string>& vars) {
  Poly::TermMap map;
  for (const auto& term : t) map.emplace(term.mono, term.coef);
  return Poly(vars, std::move(map));
}

/// a * h[from:] - b * m * g, merged in order.
template <class C>
BasicTerms<C> combine(const BasicTerms<C>& h, std::size_t from, const C& a, const C& b, const Monomial& m,
                      const BasicTerms<C>& g, const MonomialOrder& ord) {
  BasicTerms<C> out;
  out.reserve(h.size() - from + g.size());
  const bool unit_a = a == 1;
  std::size_t i = from, j = 0;
  Monomial gm;
  bool have_gm = false;
  while (i < h.size() || j < g.size()) {
    if (j < g.size() && !have_gm) {
      gm = g[j].mono * m;
      have_gm = true;
    }
    int cmp;
    if (i == h.size()) cmp = -1;
    else if (j == g.size()) cmp = 1;
    else cmp = ord.compare(h[i].mono, gm);
    if (cmp > 0) {
      out.push_back({h[i].mono, unit_a ? h[i].coef : C(a * h[i].coef)});
      ++i;
    } else if (cmp < 0) {
      out.push_back({gm, C(-b * g[j].coef)});
      ++j;
      have_gm = false;
    } else {
      C v = a * h[i].coef - b * g[j].coef;
      if (v != 0) out.push_back({gm, std::move(v)});
      ++i;
      ++j;
      have_gm = false;
    }
  }
  return out;
}

/// Multipliers (a, b) with a * lc_h = b * lc_g; over Z they are coprime with a > 0.
inline std::pair<Integer, Integer> cancel_factors(const Integer& lc_h, const Integer& lc_g) {
  Integer g;
  mpz_gcd(g.get_mpz_t(), lc_h.get_mpz_t(), lc_g.get_mpz_t());
  Integer a = lc_g / g, b = lc_h / g;
  if (a < 0) {
    a = -a;
    b = -b;
  }
  return {a, b};
}

inline std::pair<Rational, Rational> cancel_factors(const Rational& lc_h, const Rational& lc_g) {
  return {Rational(1), Rational(lc_h / lc_g)};
}

template <class C>
int max_degree(const BasicTerms<C>& t) {
  int d = kDegreeNegInf;
  for (const auto& term : t) d = std::max(d, term.mono.deg);
  return d;
}

template <class C>
int ecart(const BasicTerms<C>& t) {
  return t.empty() ? 0 : max_degree(t) - t.front().mono.deg;
}

/// Full reduction for global orders: no term of the result past the first `keep` terms is
/// divisible by a reducer's leading monomial. Over Z the result is primitive (so only
/// determined up to a constant, which is multiplied into `scale` when given); over Q it is the
/// exact remainder.
template <class C>
BasicTerms<C> reduce_full(BasicTerms<C> h, const std::vector<const BasicTerms<C>*>& reducers,
                          const MonomialOrder& ord, std::size_t keep = 0, Rational* scale = nullptr) {
  BasicTerms<C> rem(std::make_move_iterator(h.begin()), std::make_move_iterator(h.begin() + static_cast<long>(keep)));
  h.erase(h.begin(), h.begin() + static_cast<long>(keep));
  std::size_t head = 0;
  int steps = 0;
  while (head < h.size()) {
    const auto& lt = h[head];
    const BasicTerms<C>* red = nullptr;
    for (const auto* g : reducers) {
      if (g->front().mono.divides(lt.mono)) {
        red = g;
        break;
      }
    }
    if (!red) {
      rem.push_back(std::move(h[head]));
      ++head;
      continue;
    }
    auto [a, b] = cancel_factors(lt.coef, red->front().coef);
    const Monomial m = lt.mono / red->front().mono;
    h = combine(h, head, a, b, m, *red, ord);
    head = 0;
    if constexpr (std::is_same_v<C, Integer>) {
      if (a != 1) {
        for (auto& r : rem) r.coef *= a;
        if (scale) *scale *= a;
      }
      if (++steps % 8 == 0) {
        Integer g = 0;
        for (const auto& term : rem) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), term.coef.get_mpz_t());
        for (const auto& term : h) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), term.coef.get_mpz_t());
        if (g > 1) {
          for (auto& r : rem) mpz_divexact(r.coef.get_mpz_t(), r.coef.get_mpz_t(), g.get_mpz_t());
          for (auto& r : h) mpz_divexact(r.coef.get_mpz_t(), r.coef.get_mpz_t(), g.get_mpz_t());
          if (scale) *scale /= g;
        }
      }
    }
  }
  const auto g = make_primitive(rem);
  if (scale) *scale /= g;
  return rem;
}

/// Mora's weak normal form with ecart control. Among applicable reducers the one of minimal
/// ecart is used, ties broken by lowest index; the result's leading monomial (if any) is not
/// divisible by any reducer's leading monomial.
template <class C>
BasicTerms<C> reduce_mora(BasicTerms<C> h, const std::vector<const BasicTerms<C>*>& reducers,
                          const MonomialOrder& ord) {
  std::deque<BasicTerms<C>> extra;
  std::vector<const BasicTerms<C>*> pool = reducers;
  std::vector<int> ecarts;
  ecarts.reserve(pool.size());
  for (const auto* g : pool) ecarts.push_back(ecart(*g));
  while (!h.empty()) {
    const Monomial lm = h.front().mono;
    std::size_t best = pool.size();
    for (std::size_t k = 0; k < pool.size(); ++k) {
      if (!pool[k]->front().mono.divides(lm)) continue;
      if (best == pool.size() || ecarts[k] < ecarts[best]) best = k;
    }
    if (best == pool.size()) break;
    const auto* g = pool[best];
    const int eh = ecart(h);
    if (ecarts[best] > eh) {
      extra.push_back(h);
      pool.push_back(&extra.back());
      ecarts.push_back(eh);
    }
    auto [a, b] = cancel_factors(h.front().coef, g->front().coef);
    h = combine(h, 0, a, b, lm / g->front().mono, *g, ord);
    make_primitive(h);
  }
  return h;
}

template <class C>
BasicTerms<C> reduce(BasicTerms<C> h, const std::vector<const BasicTerms<C>*>& reducers, const MonomialOrder& ord) {
  return ord.is_global() ? reduce_full(std::move(h), reducers, ord) : reduce_mora(std::move(h), reducers, ord);
}

inline Terms spoly(const Terms& f, const Terms& g, const MonomialOrder& ord) {
  const Monomial l = lcm(f.front().mono, g.front().mono);
  auto [a, b] = cancel_factors(f.front().coef, g.front().coef);
  const Integer one = 1;
  Terms scaled = combine(Terms{}, 0, one, Integer(-a), l / f.front().mono, f, ord);
  return combine(scaled, 0, one, b, l / g.front().mono, g, ord);
}

struct CriticalPair {
  std::size_t i;
  std::size_t j;
  Monomial lcm;
};

/// Buchberger / Mora completion with the Gebauer-Moeller pair criteria and the normal selection
/// strategy (smallest lcm degree, then pair indices).
class BasisBuilder {
 public:
  explicit BasisBuilder(MonomialOrder ord) : ord_(ord) {}

  std::vector<Terms> run(std::vector<Terms> inputs) {
    for (auto& f : inputs) {
      if (f.empty()) continue;
      if (ord_.is_global() && f.front().mono.deg == 0) return {Terms{Term{Monomial::one(), Integer(1)}}};
      add(std::move(f));
    }
    while (!pairs_.empty()) {
      auto it = std::min_element(pairs_.begin(), pairs_.end(), [](const CriticalPair& a, const CriticalPair& b) {
        if (a.lcm.deg != b.lcm.deg) return a.lcm.deg < b.lcm.deg;
        if (a.i != b.i) return a.i < b.i;
        return a.j < b.j;
      });
      CriticalPair p = *it;
      pairs_.erase(it);
      Terms h = reduce(spoly(polys_[p.i], polys_[p.j], ord_), active_reducers(), ord_);
      if (h.empty()) continue;
      if (ord_.is_global() && h.front().mono.deg == 0) return {Terms{Term{Monomial::one(), Integer(1)}}};
      add(std::move(h));
    }
    return finish();
  }

 private:
  std::vector<const Terms*> active_reducers() const {
    std::vector<const Terms*> r;
    r.reserve(active_.size());
    for (std::size_t k : active_) r.push_back(&polys_[k]);
    return r;
  }

  void add(Terms h) {
    polys_.push_back(std::move(h));
    update(polys_.size() - 1);
  }

  void update(std::size_t h) {
    const Monomial& lh = polys_[h].front().mono;
    std::vector<CriticalPair> candidates;
    for (std::size_t g : active_) candidates.push_back({g, h, lcm(polys_[g].front().mono, lh)});

    std::vector<CriticalPair> kept;
    for (std::size_t k = 0; k < candidates.size(); ++k) {
      const CriticalPair& p = candidates[k];
      const bool is_coprime = coprime(polys_[p.i].front().mono, lh);
      bool dominated = false;
      if (!is_coprime) {
        for (std::size_t q = k + 1; q < candidates.size() && !dominated; ++q)
          dominated = candidates[q].lcm.divides(p.lcm);
        for (std::size_t q = 0; q < kept.size() && !dominated; ++q) dominated = kept[q].lcm.divides(p.lcm);
      }
      if (is_coprime || !dominated) kept.push_back(p);
    }

    std::erase_if(pairs_, [&](const CriticalPair& p) {
      if (!lh.divides(p.lcm)) return false;
      const Monomial a = lcm(polys_[p.i].front().mono, lh);
      const Monomial b = lcm(polys_[p.j].front().mono, lh);
      return !(a == p.lcm) && !(b == p.lcm);
    });
    for (const auto& p : kept)
      if (!coprime(polys_[p.i].front().mono, lh)) pairs_.push_back(p);

    std::erase_if(active_, [&](std::size_t g) { return lh.divides(polys_[g].front().mono); });
    active_.push_back(h);
  }

  std::vector<Terms> finish() {
    std::vector<Terms> out;
    out.reserve(active_.size());
    if (ord_.is_global()) {
      for (std::size_t k : active_) {
        std::vector<const Terms*> others;
        for (std::size_t o : active_)
          if (o != k) others.push_back(&polys_[o]);
        out.push_back(reduce_full(polys_[k], others, ord_, 1));
      }
    } else {
      for (std::size_t k : active_) out.push_back(polys_[k]);
    }
    std::sort(out.begin(), out.end(),
              [&](const Terms& a, const Terms& b) { return ord_.compare(a.front().mono, b.front().mono) > 0; });
    return out;
  }

  MonomialOrder ord_;
  std::vector<Terms> polys_;
  std::vector<std::size_t> active_;
  std::vector<CriticalPair> pairs_;
};

inline void check_ring(const std::vector<std::string>& vars, const std::vector<Poly>& gens) {
  for (const auto& g : gens)
    if (g.vars() != vars) throw InputError("generators live in different rings");
}

inline std::string fresh_name(const std::vector<std::string>& vars, const std::string& stem) {
  for (int k = 0;; ++k) {
    std::string name = stem + std::to_string(k);
    if (std::find(vars.begin(), vars.end(), name) == vars.end()) return name;
  }
}

inline Poly extend(const Poly& p, const std::vector<std::string>& wider) { return Poly(wider, p.terms()); }

inline Poly restrict_to(const Poly& p, const std::vector<std::string>& narrower) {
  return Poly(narrower, p.terms());
}

}  // namespace detail

inline IdealBasis standard_basis(const std::vector<std::string>& vars, const std::vector<Poly>& gens,
                                 const MonomialOrder& order = MonomialOrder::degrevlex()) {
  detail::check_ring(vars, gens);
  std::vector<detail::Terms> inputs;
  inputs.reserve(gens.size());
  for (const auto& g : gens) inputs.push_back(detail::to_terms(g, order));
  auto basis = detail::BasisBuilder(order).run(std::move(inputs));
  IdealBasis out{vars, {}, order, true};
  out.gens.reserve(basis.size());
  for (const auto& b : basis) out.gens.push_back(detail::to_poly(b, vars));
  return out;
}

inline IdealBasis standard_basis(const std::vector<Poly>& gens,
                                 const MonomialOrder& order = MonomialOrder::degrevlex()) {
  if (gens.empty()) throw InputError("standard_basis: empty generator list");
  return standard_basis(gens.front().vars(), gens, order);
}

inline IdealBasis standard_basis(const IdealBasis& ideal) {
  if (ideal.is_standard) return ideal;
  return standard_basis(ideal.vars, ideal.gens, ideal.order);
}

/// Remainder of p modulo the basis. Under a global order every term of the result is standard;
/// under the local order this is Mora's weak normal form (only the leading term is guaranteed
/// standard, and the remainder is defined up to a unit of the local ring).
inline Poly normal_form(const Poly& p, const IdealBasis& basis) {
  if (p.vars() != basis.vars) throw InputError("normal_form: polynomial and basis live in different rings");
  std::vector<detail::QTerms> reducers;
  reducers.reserve(basis.gens.size());
  for (const auto& g : basis.gens)
    if (!g.is_zero()) reducers.push_back(detail::to_qterms(g, basis.order));
  std::vector<const detail::QTerms*> ptrs;
  for (const auto& r : reducers) ptrs.push_back(&r);
  return detail::to_poly(detail::reduce(detail::to_qterms(p, basis.order), ptrs, basis.order), basis.vars);
}

inline bool ideal_contains(const IdealBasis& basis, const Poly& p) {
  if (!basis.is_standard) throw InputError("ideal_contains: basis is not standard");
  return normal_form(p, basis).is_zero();
}

/// Every S-polynomial of the generators reduces to zero.
inline bool satisfies_buchberger_criterion(const IdealBasis& basis) {
  std::vector<detail::Terms> polys;
  for (const auto& g : basis.gens)
    if (!g.is_zero()) polys.push_back(detail::to_terms(g, basis.order));
  std::vector<const detail::Terms*> ptrs;
  for (const auto& r : polys) ptrs.push_back(&r);
  for (std::size_t i = 0; i < polys.size(); ++i)
    for (std::size_t j = i + 1; j < polys.size(); ++j)
      if (!detail::reduce(detail::spoly(polys[i], polys[j], basis.order), ptrs, basis.order).empty()) return false;
  return true;
}

/// ideal(gens) intersected with the subring free of `drop_vars`; result keeps the ambient ring.
inline IdealBasis eliminate(const std::vector<std::string>& vars, const std::vector<Poly>& gens,
                            const std::vector<std::string>& drop_vars) {
  std::uint32_t mask = 0;
  for (const auto& name : drop_vars) {
    auto it = std::find(vars.begin(), vars.end(), name);
    if (it == vars.end()) throw InputError("eliminate: unknown variable '" + name + "'");
    mask |= 1u << static_cast<unsigned>(it - vars.begin());
  }
  IdealBasis full = standard_basis(vars, gens, MonomialOrder::block(mask));
  IdealBasis out{vars, {}, MonomialOrder::degrevlex(), true};
  for (auto& g : full.gens) {
    bool free = true;
    for (const auto& [m, c] : g.terms())
      for (std::size_t i = 0; i < vars.size() && free; ++i)
        if ((mask >> i & 1u) && m.exps[i]) free = false;
    if (free) out.gens.push_back(std::move(g));
  }
  std::sort(out.gens.begin(), out.gens.end(), [&](const Poly& a, const Poly& b) {
    auto la = IdealBasis{vars, {a}, out.order, false}.leading_monomials();
    auto lb = IdealBasis{vars, {b}, out.order, false}.leading_monomials();
    return out.order.compare(la.front(), lb.front()) > 0;
  });
  return out;
}

inline IdealBasis eliminate(const std::vector<Poly>& gens, const std::vector<std::string>& drop_vars) {
  if (gens.empty()) throw InputError("eliminate: empty generator list");
  return eliminate(gens.front().vars(), gens, drop_vars);
}

/// ideal(a) intersected with ideal(b), via elimination of t from t*a + (1-t)*b.
inline IdealBasis intersect(const std::vector<std::string>& vars, const std::vector<Poly>& a,
                            const std::vector<Poly>& b) {
  auto wide = vars;
  const std::string t = detail::fresh_name(vars, "_t");
  wide.push_back(t);
  const Poly tv = Poly::variable(wide, vars.size());
  const Poly one_minus_t = Poly::constant(wide, 1) - tv;
  std::vector<Poly> gens;
  for (const auto& g : a) gens.push_back(tv * detail::extend(g, wide));
  for (const auto& g : b) gens.push_back(one_minus_t * detail::extend(g, wide));
  IdealBasis e = eliminate(wide, gens, {t});
  IdealBasis out{vars, {}, MonomialOrder::degrevlex(), true};
  for (const auto& g : e.gens) out.gens.push_back(detail::restrict_to(g, vars));
  return out;
}

namespace detail {

inline bool is_zero_dim_lead(std::size_t nvars, const std::vector<Monomial>& lead) {
  for (const auto& l : lead)
    if (l.deg == 0) return true;
  for (std::size_t i = 0; i < nvars; ++i) {
    bool pure = false;
    for (const auto& l : lead)
      if (l.exps[i] != 0 && l.deg == l.exps[i]) pure = true;
    if (!pure) return false;
  }
  return true;
}

inline void enumerate_standard(Monomial m, std::size_t var, std::size_t nvars, const std::vector<Monomial>& lead,
                               std::vector<Monomial>& out) {
  if (var == nvars) {
    out.push_back(m);
    return;
  }
  for (;;) {
    bool in = false;
    for (const auto& l : lead)
      if (l.divides(m)) in = true;
    if (in) break;
    enumerate_standard(m, var + 1, nvars, lead, out);
    ++m.exps[var];
    ++m.deg;
  }
}

/// Reduced row echelon form in place; returns the pivot columns.
inline std::vector<std::size_t> row_reduce(RationalMatrix& a) {
  std::vector<std::size_t> pivots;
  if (a.empty()) return pivots;
  const std::size_t rows = a.size(), cols = a.front().size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[r]);
    const Rational inv = 1 / a[r][c];
    for (std::size_t j = c; j < cols; ++j) a[r][j] *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      const Rational f = a[i][c];
      for (std::size_t j = c; j < cols; ++j)
        if (a[r][j] != 0) a[i][j] -= f * a[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

inline std::size_t rank(RationalMatrix a) { return row_reduce(a).size(); }

/// Basis of the right null space.
inline std::vector<std::vector<Rational>> null_space(RationalMatrix a, std::size_t cols) {
  const auto pivots = row_reduce(a);
  std::vector<bool> is_pivot(cols, false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<std::vector<Rational>> out;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    std::vector<Rational> v(cols, Rational(0));
    v[f] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -a[r][f];
    out.push_back(std::move(v));
  }
  return out;
}

using IntegerVector = std::vector<Integer>;

/// Integer echelon basis of a growing subspace: each stored vector is primitive and vanishes at
/// the pivots of the vectors stored before it.
class EchelonSpan {
 public:
  explicit EchelonSpan(std::size_t dim) : dim_(dim) {}

  /// Adds v to the span; returns false when it was already inside.
  bool insert(IntegerVector v) {
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      const std::size_t p = pivots_[k];
      if (v[p] == 0) continue;
      const Integer a = rows_[k][p], b = v[p];
      for (std::size_t j = 0; j < dim_; ++j) v[j] = a * v[j] - b * rows_[k][j];
      normalize(v);
    }
    std::size_t p = 0;
    while (p < dim_ && v[p] == 0) ++p;
    if (p == dim_) return false;
    rows_.push_back(std::move(v));
    pivots_.push_back(p);
    return true;
  }

  std::size_t size() const { return rows_.size(); }
  const std::vector<IntegerVector>& rows() const { return rows_; }

 private:
  static void normalize(IntegerVector& v) {
    Integer g = 0;
    for (const auto& x : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    if (g > 1)
      for (auto& x : v) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
  }

  std::size_t dim_;
  std::vector<IntegerVector> rows_;
  std::vector<std::size_t> pivots_;
};

/// Rows of m scaled by one common denominator.
inline std::vector<IntegerVector> clear_denominators(const RationalMatrix& m) {
  Integer den = 1;
  for (const auto& row : m)
    for (const auto& x : row) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.get_den_mpz_t());
  std::vector<IntegerVector> out;
  out.reserve(m.size());
  for (const auto& row : m) {
    IntegerVector r;
    r.reserve(row.size());
    for (const auto& x : row) r.push_back(den / x.get_den() * x.get_num());
    out.push_back(std::move(r));
  }
  return out;
}

inline IntegerVector apply(const std::vector<IntegerVector>& m, const IntegerVector& v) {
  IntegerVector out(m.size(), Integer(0));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j)
      if (v[j] != 0 && m[i][j] != 0) out[i] += m[i][j] * v[j];
  return out;
}

/// Iterates v -> m v on the image until it stops shrinking; returns the stable image and the
/// number of steps taken.
inline std::pair<EchelonSpan, std::size_t> stable_image(const std::vector<IntegerVector>& m) {
  const std::size_t n = m.size();
  EchelonSpan image(n);
  for (std::size_t j = 0; j < n; ++j) {
    IntegerVector col(n);
    for (std::size_t i = 0; i < n; ++i) col[i] = m[i][j];
    image.insert(std::move(col));
  }
  std::size_t steps = 1;
  while (image.size() > 0) {
    EchelonSpan next(n);
    for (const auto& v : image.rows()) next.insert(apply(m, v));
    if (next.size() == image.size()) break;
    image = std::move(next);
    ++steps;
  }
  return {std::move(image), steps};
}

}  // namespace detail

/// The finite-dimensional algebra Q[x]/I of a zero-dimensional ideal, written in the staircase
/// basis of a reduced degrevlex basis.
class QuotientAlgebra {
 public:
  /// Empty when the ideal is not zero-dimensional.
  static std::optional<QuotientAlgebra> from(const IdealBasis& basis) {
    if (!basis.is_standard || basis.order.kind() != MonomialOrder::Kind::degrevlex_global)
      throw InputError("QuotientAlgebra: needs a reduced degrevlex basis");
    const auto lead = basis.leading_monomials();
    if (!detail::is_zero_dim_lead(basis.nvars(), lead)) return std::nullopt;
    QuotientAlgebra q;
    q.basis_ = basis;
    if (!basis.is_unit()) detail::enumerate_standard(Monomial::one(), 0, basis.nvars(), lead, q.staircase_);
    for (std::size_t k = 0; k < q.staircase_.size(); ++k) q.index_.emplace(q.staircase_[k], k);
    for (const auto& g : basis.gens)
      if (!g.is_zero()) q.reducers_.push_back(detail::to_terms(g, basis.order));
    return q;
  }

  std::size_t dim() const { return staircase_.size(); }
  const std::vector<Monomial>& staircase() const { return staircase_; }
  const IdealBasis& ideal() const { return basis_; }

  /// Coordinates of the normal form of p.
  std::vector<Rational> coords(const Poly& p) const {
    std::vector<Rational> v(dim(), Rational(0));
    if (p.is_zero()) return v;
    detail::Terms h = detail::to_terms(p, basis_.order);
    Rational scale = h.front().coef / p.coefficient(h.front().mono);
    std::vector<const detail::Terms*> ptrs;
    for (const auto& r : reducers_) ptrs.push_back(&r);
    const auto rem = detail::reduce_full(std::move(h), ptrs, basis_.order, 0, &scale);
    for (const auto& term : rem) {
      Rational c = term.coef / scale;
      c.canonicalize();
      v[index_.at(term.mono)] = c;
    }
    return v;
  }

  Poly element(const std::vector<Rational>& v) const {
    Poly::TermMap map;
    for (std::size_t k = 0; k < v.size(); ++k)
      if (v[k] != 0) map.emplace(staircase_[k], v[k]);
    return Poly(basis_.vars, std::move(map));
  }

  /// Matrix of multiplication by h; column k holds the coordinates of h times the k-th basis monomial.
  RationalMatrix multiplication(const Poly& h) const {
    const std::size_t n = dim();
    RationalMatrix m(n, std::vector<Rational>(n, Rational(0)));
    for (std::size_t k = 0; k < n; ++k) {
      const auto col = coords(h * Poly::monomial(basis_.vars, staircase_[k], Rational(1)));
      for (std::size_t i = 0; i < n; ++i) m[i][k] = col[i];
    }
    return m;
  }

  /// Dimension of the generalized zero eigenspace of multiplication by h.
  std::size_t nilspace_dim(const Poly& h) const {
    if (dim() == 0) return 0;
    return dim() - detail::stable_image(detail::clear_denominators(multiplication(h))).first.size();
  }

  /// Elements killed by a power of every generator of `hs`, i.e. the sum of the local algebras at
  /// the points where all of them vanish.
  std::vector<Poly> common_nilspace(const std::vector<Poly>& hs) const {
    const std::size_t n = dim();
    RationalMatrix stacked;
    for (const auto& h : hs) {
      const auto m = detail::clear_denominators(multiplication(h));
      const std::size_t steps = detail::stable_image(m).second;
      RationalMatrix power(n, std::vector<Rational>(n, Rational(0)));
      for (std::size_t j = 0; j < n; ++j) {
        detail::IntegerVector v(n, Integer(0));
        v[j] = 1;
        for (std::size_t s = 0; s < steps; ++s) v = detail::apply(m, v);
        for (std::size_t i = 0; i < n; ++i) power[i][j] = v[i];
      }
      for (auto& row : power) stacked.push_back(std::move(row));
    }
    std::vector<Poly> out;
    for (const auto& v : detail::null_space(std::move(stacked), n)) out.push_back(element(v));
    return out;
  }

 private:
  IdealBasis basis_;
  std::vector<Monomial> staircase_;
  std::map<Monomial, std::size_t> index_;
  std::vector<detail::Terms> reducers_;
};

namespace detail {

/// (I : C^infinity) for zero-dimensional I. The common nilspace is the part of Q[x]/I supported
/// on V(C), which is exactly (I : C^infinity) / I.
inline std::optional<IdealBasis> zero_dim_saturation(const IdealBasis& reduced, const std::vector<Poly>& hs) {
  auto q = QuotientAlgebra::from(reduced);
  if (!q) return std::nullopt;
  if (q->dim() == 0) return reduced;
  std::vector<Poly> gens = reduced.gens;
  for (auto& p : q->common_nilspace(hs)) gens.push_back(std::move(p));
  return standard_basis(reduced.vars, gens);
}

}  // namespace detail

namespace detail {

/// (gens : h^infinity) by the Rabinowitsch trick, with no shortcut.
inline IdealBasis saturate_by_elimination(const std::vector<std::string>& vars, const std::vector<Poly>& gens,
                                          const Poly& h) {
  auto wide = vars;
  const std::string t = fresh_name(vars, "_t");
  wide.push_back(t);
  std::vector<Poly> ext;
  ext.reserve(gens.size() + 1);
  for (const auto& g : gens) ext.push_back(extend(g, wide));
  ext.push_back(Poly::variable(wide, vars.size()) * extend(h, wide) - Poly::constant(wide, 1));
  IdealBasis e = eliminate(wide, ext, {t});
  IdealBasis out{vars, {}, MonomialOrder::degrevlex(), true};
  for (const auto& g : e.gens) out.gens.push_back(restrict_to(g, vars));
  return out;
}

}  // namespace detail

/// (gens : h^infinity). Zero-dimensional ideals go through the quotient algebra, the rest through
/// the Rabinowitsch trick.
inline IdealBasis saturate(const std::vector<std::string>& vars, const std::vector<Poly>& gens, const Poly& h) {
  if (h.is_zero()) throw InputError("saturate: cannot saturate by the zero polynomial");
  if (h.vars() != vars) throw InputError("saturate: h lives in a different ring");
  detail::check_ring(vars, gens);
  if (h.is_constant()) return standard_basis(vars, gens);
  IdealBasis base = standard_basis(vars, gens);
  if (base.is_unit()) return base;
  if (auto fast = detail::zero_dim_saturation(base, {h})) return *fast;
  return detail::saturate_by_elimination(vars, base.gens, h);
}

inline IdealBasis saturate(const std::vector<Poly>& gens, const Poly& h) { return saturate(h.vars(), gens, h); }

/// (gens : C^infinity), computed as the intersection over nonzero c in C of (gens : c^infinity).
inline IdealBasis saturate_by_ideal(const std::vector<std::string>& vars, const std::vector<Poly>& gens,
                                    const std::vector<Poly>& ideal) {
  detail::check_ring(vars, gens);
  detail::check_ring(vars, ideal);
  std::vector<Poly> factors;
  for (const auto& c : ideal) {
    if (c.is_zero()) continue;
    if (c.is_constant()) return standard_basis(vars, gens);
    if (std::find(factors.begin(), factors.end(), c) == factors.end()) factors.push_back(c);
  }
  if (factors.empty()) throw InputError("saturate_by_ideal: all generators of the saturating ideal are zero");
  IdealBasis base = standard_basis(vars, gens);
  if (base.is_unit()) return base;
  if (auto fast = detail::zero_dim_saturation(base, factors)) return *fast;
  IdealBasis acc = saturate(vars, gens, factors.front());
  for (std::size_t k = 1; k < factors.size(); ++k) {
    IdealBasis next = saturate(vars, gens, factors[k]);
    if (acc.is_unit()) acc = std::move(next);
    else if (!next.is_unit()) acc = intersect(vars, acc.gens, next.gens);
  }
  return acc;
}

inline IdealBasis saturate_by_ideal(const std::vector<Poly>& gens, const std::vector<Poly>& ideal) {
  if (ideal.empty()) throw InputError("saturate_by_ideal: empty saturating ideal");
  return saturate_by_ideal(ideal.front().vars(), gens, ideal);
}

}  // namespace atinf
