#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "atinf/poly.hpp"

namespace testing_support {

using atinf::Poly;

inline const std::vector<std::string> XY{"x", "y"};
inline const std::vector<std::string> XYZ{"x", "y", "z"};

inline Poly P(const std::string& text, const std::vector<std::string>& vars = XY) {
  return atinf::parse_poly(text, vars);
}

inline std::vector<std::string> vars_for(std::size_t n) {
  static const std::vector<std::string> names{"x", "y", "z", "w", "u", "v"};
  return {names.begin(), names.begin() + static_cast<long>(n)};
}

/// Random polynomial of exact degree d with small integer coefficients.
inline Poly random_poly(std::mt19937_64& rng, std::size_t n, int d, int terms, int coeff = 3) {
  const auto vars = vars_for(n);
  std::uniform_int_distribution<int> c(-coeff, coeff);
  std::uniform_int_distribution<int> var(0, static_cast<int>(n) - 1);
  std::uniform_int_distribution<int> deg(0, d);
  Poly p(vars);
  while (p.degree() != d) {
    p = Poly(vars);
    for (int k = 0; k < terms; ++k) {
      int a = c(rng);
      if (a == 0) a = 1;
      atinf::Monomial m;
      const int e = k == 0 ? d : deg(rng);
      for (int j = 0; j < e; ++j) {
        const int v = var(rng);
        ++m.exps[static_cast<std::size_t>(v)];
        ++m.deg;
      }
      p += Poly::monomial(vars, m, a);
    }
  }
  return p;
}

inline Poly random_homogeneous(std::mt19937_64& rng, std::size_t n, int d, int terms) {
  return atinf::graded_part(random_poly(rng, n, d, terms), d);
}

}  // namespace testing_support
