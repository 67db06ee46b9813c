#pragma once

// Exact multivariate polynomials over Q.

#include <gmpxx.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <compare>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "atinf/error.hpp"

namespace atinf {

using Rational = mpq_class;
using Integer = mpz_class;

/// Hard cap on ambient variables, including helper variables added by the engine.
inline constexpr std::size_t kMaxVars = 16;

/// Degree of the zero polynomial.
inline constexpr int kDegreeNegInf = std::numeric_limits<int>::min();

inline std::string to_string(const Rational& q) { return q.get_str(); }

inline Rational make_rational(long num, long den = 1) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

/// Dense exponent vector; slots past the ambient variable count stay zero.
struct Monomial {
  std::array<std::uint16_t, kMaxVars> exps{};
  int deg = 0;

  static Monomial one() { return {}; }

  static Monomial var(std::size_t i, unsigned power = 1) {
    Monomial m;
    m.exps[i] = static_cast<std::uint16_t>(power);
    m.deg = static_cast<int>(power);
    return m;
  }

  std::uint16_t operator[](std::size_t i) const { return exps[i]; }

  bool divides(const Monomial& other) const {
    if (deg > other.deg) return false;
    for (std::size_t i = 0; i < kMaxVars; ++i)
      if (exps[i] > other.exps[i]) return false;
    return true;
  }

  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial m;
    for (std::size_t i = 0; i < kMaxVars; ++i)
      m.exps[i] = static_cast<std::uint16_t>(a.exps[i] + b.exps[i]);
    m.deg = a.deg + b.deg;
    return m;
  }

  /// a / b, assuming b divides a.
  friend Monomial operator/(const Monomial& a, const Monomial& b) {
    Monomial m;
    for (std::size_t i = 0; i < kMaxVars; ++i)
      m.exps[i] = static_cast<std::uint16_t>(a.exps[i] - b.exps[i]);
    m.deg = a.deg - b.deg;
    return m;
  }

  friend Monomial lcm(const Monomial& a, const Monomial& b) {
    Monomial m;
    for (std::size_t i = 0; i < kMaxVars; ++i) {
      m.exps[i] = std::max(a.exps[i], b.exps[i]);
      m.deg += m.exps[i];
    }
    return m;
  }

  friend bool coprime(const Monomial& a, const Monomial& b) {
    for (std::size_t i = 0; i < kMaxVars; ++i)
      if (a.exps[i] != 0 && b.exps[i] != 0) return false;
    return true;
  }

  friend bool operator==(const Monomial& a, const Monomial& b) { return a.exps == b.exps; }
  friend auto operator<=>(const Monomial& a, const Monomial& b) { return a.exps <=> b.exps; }
};

/// Graded reverse lexicographic comparison; positive when a > b.
inline int compare_degrevlex(const Monomial& a, const Monomial& b) {
  if (a.deg != b.deg) return a.deg > b.deg ? 1 : -1;
  for (std::size_t i = kMaxVars; i-- > 0;)
    if (a.exps[i] != b.exps[i]) return a.exps[i] < b.exps[i] ? 1 : -1;
  return 0;
}

class Poly {
 public:
  using TermMap = std::map<Monomial, Rational>;

  Poly() = default;
  explicit Poly(std::vector<std::string> vars) : vars_(std::move(vars)) { check_vars(); }
  Poly(std::vector<std::string> vars, TermMap terms) : vars_(std::move(vars)), terms_(std::move(terms)) {
    check_vars();
    std::erase_if(terms_, [](const auto& kv) { return kv.second == 0; });
  }

  static Poly constant(std::vector<std::string> vars, const Rational& c) {
    Poly p(std::move(vars));
    if (c != 0) p.terms_.emplace(Monomial::one(), c);
    return p;
  }

  static Poly variable(std::vector<std::string> vars, std::size_t index) {
    if (index >= vars.size()) throw InputError("variable index out of range");
    Poly p(std::move(vars));
    p.terms_.emplace(Monomial::var(index), Rational(1));
    return p;
  }

  static Poly monomial(std::vector<std::string> vars, const Monomial& m, const Rational& c = 1) {
    Poly p(std::move(vars));
    if (c != 0) p.terms_.emplace(m, c);
    return p;
  }

  const std::vector<std::string>& vars() const { return vars_; }
  std::size_t nvars() const { return vars_.size(); }
  const TermMap& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.deg == 0); }

  /// Total degree, kDegreeNegInf for zero.
  int degree() const {
    int d = kDegreeNegInf;
    for (const auto& [m, c] : terms_) d = std::max(d, m.deg);
    return d;
  }

  bool is_homogeneous() const {
    if (terms_.empty()) return true;
    const int d = terms_.begin()->first.deg;
    return std::all_of(terms_.begin(), terms_.end(), [d](const auto& kv) { return kv.first.deg == d; });
  }

  Rational coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  std::size_t var_index(std::string_view name) const {
    for (std::size_t i = 0; i < vars_.size(); ++i)
      if (vars_[i] == name) return i;
    throw InputError("unknown variable '" + std::string(name) + "'");
  }

  /// Copy of this polynomial over a different (same-length) variable list.
  Poly renamed(std::vector<std::string> vars) const {
    if (vars.size() != vars_.size()) throw InputError("rename: variable count mismatch");
    return Poly(std::move(vars), terms_);
  }

  Poly& operator+=(const Poly& o) {
    check_same_ring(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }

  Poly& operator-=(const Poly& o) {
    check_same_ring(o);
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }

  Poly& operator*=(const Rational& s) {
    if (s == 0) {
      terms_.clear();
    } else {
      for (auto& kv : terms_) kv.second *= s;
    }
    return *this;
  }

  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator-(Poly a) { return a *= Rational(-1); }
  friend Poly operator*(Poly a, const Rational& s) { return a *= s; }
  friend Poly operator*(const Rational& s, Poly a) { return a *= s; }

  friend Poly operator*(const Poly& a, const Poly& b) {
    a.check_same_ring(b);
    Poly r(a.vars_);
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
    return r;
  }

  Poly& operator*=(const Poly& o) { return *this = *this * o; }

  Poly pow(unsigned e) const {
    Poly result = constant(vars_, 1);
    Poly base = *this;
    while (e) {
      if (e & 1u) result *= base;
      e >>= 1u;
      if (e) base *= base;
    }
    return result;
  }

  friend bool operator==(const Poly& a, const Poly& b) { return a.vars_ == b.vars_ && a.terms_ == b.terms_; }

  void add_term(const Monomial& m, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  /// Terms ordered by decreasing graded reverse lex, for display.
  std::vector<std::pair<Monomial, Rational>> sorted_terms() const {
    std::vector<std::pair<Monomial, Rational>> out(terms_.begin(), terms_.end());
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return compare_degrevlex(a.first, b.first) > 0; });
    return out;
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : sorted_terms()) {
      Rational mag = abs(c);
      if (first) {
        if (c < 0) os << "-";
      } else {
        os << (c < 0 ? " - " : " + ");
      }
      first = false;
      bool wrote = false;
      if (m.deg == 0 || mag != 1) {
        os << mag.get_str();
        wrote = true;
      }
      for (std::size_t i = 0; i < vars_.size(); ++i) {
        if (m.exps[i] == 0) continue;
        if (wrote) os << "*";
        os << vars_[i];
        if (m.exps[i] > 1) os << "^" << m.exps[i];
        wrote = true;
      }
    }
    return os.str();
  }

 private:
  void check_vars() const {
    if (vars_.size() > kMaxVars) throw InputError("too many variables (max " + std::to_string(kMaxVars) + ")");
  }

  void check_same_ring(const Poly& o) const {
    if (vars_ != o.vars_) throw InputError("polynomials live in different rings");
  }

  std::vector<std::string> vars_;
  TermMap terms_;
};

inline std::ostream& operator<<(std::ostream& os, const Poly& p) { return os << p.to_string(); }

namespace detail {

class PolyParser {
 public:
  PolyParser(std::string_view text, const std::vector<std::string>& vars) : text_(text), vars_(vars) {}

  Poly parse() {
    skip_ws();
    if (pos_ == text_.size()) throw ParseError("empty input", pos_);
    Poly p = expr();
    skip_ws();
    if (pos_ != text_.size()) throw ParseError(std::string("unexpected '") + text_[pos_] + "'", pos_);
    return p;
  }

 private:
  Poly expr() {
    skip_ws();
    bool negate = false;
    if (peek() == '+' || peek() == '-') {
      negate = text_[pos_] == '-';
      ++pos_;
    }
    Poly acc = term();
    if (negate) acc = -acc;
    for (;;) {
      skip_ws();
      char c = peek();
      if (c != '+' && c != '-') break;
      ++pos_;
      Poly t = term();
      if (c == '+') acc += t; else acc -= t;
    }
    return acc;
  }

  Poly term() {
    Poly acc = factor();
    for (;;) {
      skip_ws();
      if (peek() != '*') break;
      ++pos_;
      acc *= factor();
    }
    return acc;
  }

  Poly factor() {
    Poly b = base();
    skip_ws();
    if (peek() == '^') {
      ++pos_;
      skip_ws();
      std::size_t at = pos_;
      Integer e = natural();
      if (e > 1000) throw ParseError("exponent too large", at);
      b = b.pow(static_cast<unsigned>(e.get_ui()));
    }
    return b;
  }

  Poly base() {
    skip_ws();
    char c = peek();
    if (c == '(') {
      ++pos_;
      Poly p = expr();
      skip_ws();
      if (peek() != ')') throw ParseError("expected ')'", pos_);
      ++pos_;
      return p;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      Integer num = natural();
      Integer den = 1;
      skip_ws();
      if (peek() == '/') {
        ++pos_;
        skip_ws();
        std::size_t at = pos_;
        den = natural();
        if (den == 0) throw ParseError("zero denominator", at);
      }
      Rational q(num, den);
      q.canonicalize();
      return Poly::constant(vars_, q);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      std::string name(text_.substr(start, pos_ - start));
      for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i] == name) return Poly::variable(vars_, i);
      throw ParseError("unknown variable '" + name + "'", start);
    }
    if (pos_ == text_.size()) throw ParseError("unexpected end of input", pos_);
    throw ParseError(std::string("unexpected '") + c + "'", pos_);
  }

  Integer natural() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) throw ParseError("expected a number", start);
    return Integer(std::string(text_.substr(start, pos_ - start)));
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string_view text_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses `expr := term (('+'|'-') term)*` over the declared variables.
inline Poly parse_poly(std::string_view text, const std::vector<std::string>& vars) {
  for (std::size_t i = 0; i < vars.size(); ++i) {
    const auto& v = vars[i];
    if (v.empty() || !(std::isalpha(static_cast<unsigned char>(v[0])) || v[0] == '_'))
      throw InputError("invalid variable name '" + v + "'");
    for (std::size_t j = 0; j < i; ++j)
      if (vars[j] == v) throw InputError("duplicate variable '" + v + "'");
  }
  return detail::PolyParser(text, vars).parse();
}

inline Poly derivative(const Poly& p, std::size_t var) {
  if (var >= p.nvars()) throw InputError("derivative: variable index out of range");
  Poly r(p.vars());
  for (const auto& [m, c] : p.terms()) {
    if (m.exps[var] == 0) continue;
    Monomial dm = m;
    --dm.exps[var];
    --dm.deg;
    r.add_term(dm, c * m.exps[var]);
  }
  return r;
}

inline Poly derivative(const Poly& p, std::string_view var) { return derivative(p, p.var_index(var)); }

/// Sum of the terms of total degree exactly k.
inline Poly graded_part(const Poly& p, int k) {
  Poly r(p.vars());
  for (const auto& [m, c] : p.terms())
    if (m.deg == k) r.add_term(m, c);
  return r;
}

/// Appends `newvar` and pads every term up to degree d.
inline Poly homogenize(const Poly& p, const std::string& newvar, int d) {
  if (!p.is_zero() && d < p.degree())
    throw InputError("homogenize: target degree " + std::to_string(d) + " below polynomial degree");
  auto vars = p.vars();
  for (const auto& v : vars)
    if (v == newvar) throw InputError("homogenize: variable '" + newvar + "' already present");
  const std::size_t slot = vars.size();
  vars.push_back(newvar);
  Poly r(vars);
  for (const auto& [m, c] : p.terms()) {
    Monomial hm = m;
    hm.exps[slot] = static_cast<std::uint16_t>(d - m.deg);
    hm.deg = d;
    r.add_term(hm, c);
  }
  return r;
}

/// Substitutes var := value and drops var from the ring.
inline Poly dehomogenize(const Poly& p, std::size_t var, const Rational& value) {
  if (var >= p.nvars()) throw InputError("dehomogenize: variable index out of range");
  auto vars = p.vars();
  vars.erase(vars.begin() + static_cast<std::ptrdiff_t>(var));
  Poly r(vars);
  for (const auto& [m, c] : p.terms()) {
    Monomial dm;
    for (std::size_t i = 0, j = 0; i < p.nvars(); ++i) {
      if (i == var) continue;
      dm.exps[j++] = m.exps[i];
    }
    dm.deg = m.deg - m.exps[var];
    Rational scale;
    mpz_class num, den;
    mpz_pow_ui(num.get_mpz_t(), value.get_num_mpz_t(), m.exps[var]);
    mpz_pow_ui(den.get_mpz_t(), value.get_den_mpz_t(), m.exps[var]);
    scale = Rational(num, den);
    scale.canonicalize();
    r.add_term(dm, c * scale);
  }
  return r;
}

inline Poly dehomogenize(const Poly& p, std::string_view var, const Rational& value) {
  return dehomogenize(p, p.var_index(var), value);
}

/// Evaluates p with every variable substituted by the given polynomials (all in one ring).
inline Poly substitute(const Poly& p, std::span<const Poly> images) {
  if (images.size() != p.nvars()) throw InputError("substitute: need one image per variable");
  if (images.empty()) return p;
  const auto& target_vars = images.front().vars();
  Poly r(target_vars);
  // Cache powers of each image; degrees stay small.
  std::vector<std::vector<Poly>> powers(images.size());
  auto power_of = [&](std::size_t i, unsigned e) -> const Poly& {
    auto& cache = powers[i];
    if (cache.empty()) cache.push_back(Poly::constant(target_vars, 1));
    while (cache.size() <= e) cache.push_back(cache.back() * images[i]);
    return cache[e];
  };
  for (const auto& [m, c] : p.terms()) {
    Poly t = Poly::constant(target_vars, c);
    for (std::size_t i = 0; i < p.nvars(); ++i)
      if (m.exps[i]) t *= power_of(i, m.exps[i]);
    r += t;
  }
  return r;
}

/// f(x + point).
inline Poly translate(const Poly& p, std::span<const Rational> point) {
  if (point.size() != p.nvars()) throw InputError("translate: point dimension mismatch");
  std::vector<Poly> images;
  images.reserve(p.nvars());
  for (std::size_t i = 0; i < p.nvars(); ++i)
    images.push_back(Poly::variable(p.vars(), i) + Poly::constant(p.vars(), point[i]));
  return substitute(p, images);
}

inline Rational evaluate(const Poly& p, std::span<const Rational> point) {
  if (point.size() != p.nvars()) throw InputError("evaluate: point dimension mismatch");
  Rational total = 0;
  for (const auto& [m, c] : p.terms()) {
    Rational t = c;
    for (std::size_t i = 0; i < p.nvars(); ++i)
      for (unsigned k = 0; k < m.exps[i]; ++k) t *= point[i];
    total += t;
  }
  return total;
}

/// a / b when b divides a exactly in Q[x]; throws otherwise.
inline Poly divide_exact(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw InputError("divide_exact: division by zero");
  auto lead = [](const Poly& p) {
    auto it = p.terms().begin();
    for (auto jt = p.terms().begin(); jt != p.terms().end(); ++jt)
      if (compare_degrevlex(jt->first, it->first) > 0) it = jt;
    return *it;
  };
  const auto [lb, cb] = lead(b);
  Poly rest = a;
  Poly quotient(a.vars());
  while (!rest.is_zero()) {
    const auto [lr, cr] = lead(rest);
    if (!lb.divides(lr)) throw InputError("divide_exact: not divisible");
    Poly step = Poly::monomial(a.vars(), lr / lb, cr / cb);
    quotient += step;
    rest -= step * b;
  }
  return quotient;
}

using RationalMatrix = std::vector<std::vector<Rational>>;

namespace detail {

inline RationalMatrix identity_matrix(std::size_t n) {
  RationalMatrix m(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

/// Gauss-Jordan inverse; empty result when singular.
inline RationalMatrix invert(RationalMatrix a) {
  const std::size_t n = a.size();
  RationalMatrix inv = identity_matrix(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot][col] == 0) ++pivot;
    if (pivot == n) return {};
    std::swap(a[pivot], a[col]);
    std::swap(inv[pivot], inv[col]);
    Rational scale = 1 / a[col][col];
    for (std::size_t j = 0; j < n; ++j) {
      a[col][j] *= scale;
      inv[col][j] *= scale;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0) continue;
      Rational f = a[r][col];
      for (std::size_t j = 0; j < n; ++j) {
        a[r][j] -= f * a[col][j];
        inv[r][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

}  // namespace detail

/// Invertible linear substitution x_i := sum_j matrix[i][j] * x_j.
class LinearChange {
 public:
  explicit LinearChange(RationalMatrix matrix) : matrix_(std::move(matrix)) {
    const std::size_t n = matrix_.size();
    for (const auto& row : matrix_)
      if (row.size() != n) throw InputError("linear change: matrix must be square");
    inverse_ = detail::invert(matrix_);
    if (inverse_.empty() && n > 0) throw InputError("linear change: matrix is singular");
  }

  static LinearChange identity(std::size_t n) { return LinearChange(detail::identity_matrix(n)); }

  static LinearChange swap(std::size_t n, std::size_t i, std::size_t j) {
    auto m = detail::identity_matrix(n);
    std::swap(m[i], m[j]);
    return LinearChange(std::move(m));
  }

  std::size_t size() const { return matrix_.size(); }
  const RationalMatrix& matrix() const { return matrix_; }
  const RationalMatrix& inverse_matrix() const { return inverse_; }
  LinearChange inverse() const { return LinearChange(inverse_); }

  bool is_identity() const { return matrix_ == detail::identity_matrix(size()); }

 private:
  RationalMatrix matrix_;
  RationalMatrix inverse_;
};

inline Poly apply_change(const Poly& p, const LinearChange& c) {
  if (c.size() != p.nvars()) throw InputError("apply_change: dimension mismatch");
  std::vector<Poly> images;
  images.reserve(p.nvars());
  for (std::size_t i = 0; i < p.nvars(); ++i) {
    Poly row(p.vars());
    for (std::size_t j = 0; j < p.nvars(); ++j)
      row.add_term(Monomial::var(j), c.matrix()[i][j]);
    images.push_back(std::move(row));
  }
  return substitute(p, images);
}

}  // namespace atinf
