#pragma once

// Top Betti defect of the general fibre: the smooth-hypersurface Euler characteristic, the two
// defect formulas, the Euler sum over a stratification of {f_d = 0}, range verdicts and the
// small-defect table.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "atinf/error.hpp"
#include "atinf/poly.hpp"
#include "atinf/singularity.hpp"

namespace atinf {

/// Euler characteristic of a smooth degree-d hypersurface in P^m.
inline Rational chi_smooth(int m, int d) {
  if (m < 1 || d < 1) throw InputError("chi_smooth: need m >= 1 and d >= 1");
  Integer p;
  mpz_pow_ui(p.get_mpz_t(), Integer(d - 1).get_mpz_t(), static_cast<unsigned long>(m + 1));
  const Integer num = m % 2 == 0 ? Integer(1 + p) : Integer(1 - p);
  Rational out = Rational(m + 1) - Rational(num, Integer(d));
  out.canonicalize();
  return out;
}

inline std::int64_t chi_smooth_int(int m, int d) {
  const Rational c = chi_smooth(m, d);
  if (c.get_den() != 1) throw ComputationError("chi_smooth: non-integral value");
  return c.get_num().get_si();
}

enum class DeltaMethod { eqF, eqB, general_at_infinity, none };

inline std::string to_string(DeltaMethod m) {
  switch (m) {
    case DeltaMethod::eqF: return "eqF";
    case DeltaMethod::eqB: return "eqB";
    case DeltaMethod::general_at_infinity: return "general-at-infinity";
    case DeltaMethod::none: return "none";
  }
  return "none";
}

struct RangeVerdict {
  std::string name;
  bool passed = true;
  bool applicable = false;  // false when the hypothesis of the check does not hold
  std::string detail;
};

/// count copies of the boundary germ <A_fibre | A_boundary>.
struct BoundaryGerm {
  int count = 1;
  int fibre = 0;
  int boundary = 0;

  int mu() const { return count * (fibre + boundary); }
};

struct DefectCandidate {
  std::vector<BoundaryGerm> germs;
  std::string notation;  // "<A0|A2> + <A0|A1>"
  std::string arnold;    // "A2 + A1"
  /// Matches the computed fibre / boundary sums (only meaningful when they are known).
  std::optional<bool> mu_consistent;
};

struct BettiReport {
  int n = 0;
  int d = 0;
  std::optional<std::int64_t> delta;
  std::optional<std::int64_t> b_top;
  DeltaMethod method = DeltaMethod::none;
  std::optional<MilnorPairSums> pairs;
  std::optional<std::int64_t> mu_sum_X0bar;
  std::optional<std::int64_t> chi_fd;
  std::optional<std::int64_t> delta_chi_inf;
  std::int64_t chi_smooth = 0;
  std::vector<RangeVerdict> range_verdicts;
  std::vector<DefectCandidate> classification_candidates;

  bool verdicts_pass() const {
    for (const auto& v : range_verdicts)
      if (!v.passed) return false;
    return true;
  }
};

namespace detail {

inline std::int64_t ipow(std::int64_t b, int e) {
  std::int64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

inline BettiReport base_report(const Poly& f) {
  BettiReport r;
  r.n = static_cast<int>(f.nvars());
  r.d = f.degree();
  if (r.d < 1) throw InputError("the polynomial must have degree >= 1");
  r.chi_smooth = r.n >= 2 ? chi_smooth_int(r.n - 1, r.d) : 0;
  return r;
}

inline void set_delta(BettiReport& r, std::int64_t delta) {
  r.delta = delta;
  r.b_top = ipow(r.d - 1, r.n) - delta;
}

}  // namespace detail

/// Delta as the sum of fibre and boundary Milnor numbers at infinity.
inline BettiReport delta_eqF(const Poly& f, const MilnorPairSums& pairs, const SingularityProfile& prof) {
  BettiReport r = detail::base_report(f);
  r.pairs = pairs;
  detail::set_delta(r, pairs.total());
  r.method = *r.delta == 0 && prof.general_at_infinity ? DeltaMethod::general_at_infinity : DeltaMethod::eqF;
  return r;
}

/// Delta from the Milnor sum of the closed fibre and chi({f_d = 0}).
inline BettiReport delta_eqB(const Poly& f, std::int64_t mu_sum_X0bar, std::int64_t chi_fd) {
  BettiReport r = detail::base_report(f);
  r.mu_sum_X0bar = mu_sum_X0bar;
  r.chi_fd = chi_fd;
  r.delta_chi_inf = r.chi_smooth - chi_fd;
  const std::int64_t sign = r.n % 2 == 0 ? 1 : -1;
  detail::set_delta(r, mu_sum_X0bar + sign * *r.delta_chi_inf);
  r.method = DeltaMethod::eqB;
  return r;
}

struct CurveStratum {
  int genus = 0;
  int mu_transversal = 1;
  int nu = 0;     // axis points
  int gamma = 0;  // special points
};

struct PointStratum {
  enum class Kind { isolated_with_mu, d_infinity, custom_chi };
  Kind kind = Kind::isolated_with_mu;
  std::int64_t value = 0;  // mu for isolated points, the local Euler term for custom points
};

struct StratificationData {
  int n = 0;
  int d = 0;
  std::vector<CurveStratum> curves;
  std::vector<PointStratum> points;
};

/// Euler characteristic of {f_d = 0} from a stratification with curves and points.
/// D_infinity and custom points are the special points on the curves; points with a Milnor
/// number contribute the same term on or off a curve.
inline std::int64_t euler_sum(const StratificationData& data) {
  if (data.n < 2 || data.d < 1) throw InputError("euler_sum: need n >= 2 and d >= 1");
  std::int64_t gammas = 0;
  for (const auto& c : data.curves) {
    if (c.genus < 0 || c.nu < 0 || c.gamma < 0) throw InputError("euler_sum: negative curve data");
    if (c.mu_transversal < 1) throw InputError("euler_sum: transversal Milnor number must be >= 1");
    gammas += c.gamma;
  }
  std::int64_t special = 0;
  for (const auto& p : data.points) {
    if (p.kind == PointStratum::Kind::isolated_with_mu && p.value < 0)
      throw InputError("euler_sum: negative Milnor number");
    if (p.kind != PointStratum::Kind::isolated_with_mu) ++special;
  }
  if (special != gammas)
    throw InputError("euler_sum: curves declare " + std::to_string(gammas) + " special points but " +
                     std::to_string(special) + " D_infinity/custom points are given");

  const std::int64_t sign = data.n % 2 == 0 ? -1 : 1;  // (-1)^(n-1)
  std::int64_t chi = chi_smooth_int(data.n - 1, data.d);
  for (const auto& c : data.curves)
    chi += sign * (c.nu + c.gamma + 2 * c.genus - 2) * c.mu_transversal;
  for (const auto& p : data.points) {
    switch (p.kind) {
      case PointStratum::Kind::isolated_with_mu: chi += sign * p.value; break;
      case PointStratum::Kind::d_infinity: chi += sign; break;
      case PointStratum::Kind::custom_chi: chi += p.value; break;
    }
  }
  return chi;
}

/// Per-instance consistency checks against the range bounds.
inline std::vector<RangeVerdict> range_check(const BettiReport& r, const SingularityProfile& prof,
                                             bool line_at_infinity = false) {
  if (!r.delta) throw InputError("range_check: delta was not computed");
  const std::int64_t delta = *r.delta, d = r.d, n = r.n;
  const int sing = prof.dim_sing_affine.dim, sigma = prof.dim_sigma_inf.dim;
  const std::string dims = "dim Sing f = " + prof.dim_sing_affine.to_string() +
                           ", dim Sigma_inf = " + prof.dim_sigma_inf.to_string();
  std::vector<RangeVerdict> out;

  out.push_back({"DELTA_NONNEG", delta >= 0, true, "delta = " + std::to_string(delta)});

  out.push_back({"GAI_IFF_ZERO", (delta == 0) == prof.general_at_infinity, true,
                 std::string("delta = ") + std::to_string(delta) +
                     (prof.general_at_infinity ? ", general at infinity" : ", not general at infinity")});

  {
    const bool hyp = delta > 0 && delta <= d - 1;
    out.push_back({"RANGE_B", !hyp || (sing <= 0 && sigma <= 0), hyp, dims});
  }
  {
    const bool hyp = d >= 3 && delta >= d && delta < 2 * d - 2;
    std::string detail = dims;
    if (hyp && sing >= 1) detail += "; Sing f is positive dimensional, line alternative not decided";
    out.push_back({"RANGE_C_PARTIAL", !hyp || sigma <= 0, hyp, detail});
  }
  if (line_at_infinity) {
    const std::int64_t bound = 2 * (n - 1) * (d - 2) + 1;
    out.push_back({"LINE_INF_BOUND", delta >= bound, true,
                   "delta = " + std::to_string(delta) + ", bound = " + std::to_string(bound)});
  }
  return out;
}

/// Types of general fibres with defect 0..3, as boundary germs at points at infinity.
inline std::vector<DefectCandidate> classify_defect(int delta) {
  auto one = [](std::vector<BoundaryGerm> g, std::string notation, std::string arnold) {
    return DefectCandidate{std::move(g), std::move(notation), std::move(arnold), std::nullopt};
  };
  switch (delta) {
    case 0: return {one({{1, 0, 0}}, "<A0|A0>", "A0")};
    case 1: return {one({{1, 0, 1}}, "<A0|A1>", "A1")};
    case 2:
      return {one({{1, 0, 2}}, "<A0|A2>", "A2"), one({{2, 0, 1}}, "2<A0|A1>", "2A1"),
              one({{1, 1, 1}}, "<A1|A1>", "B2")};
    case 3:
      return {one({{1, 0, 3}}, "<A0|A3>", "A3"),
              one({{1, 0, 2}, {1, 0, 1}}, "<A0|A2> + <A0|A1>", "A2 + A1"),
              one({{3, 0, 1}}, "3<A0|A1>", "3A1"),
              one({{1, 1, 2}}, "<A1|A2>", "C3"),
              one({{1, 1, 1}, {1, 0, 1}}, "<A1|A1> + <A0|A1>", "B2 + A1"),
              one({{1, 2, 1}}, "<A2|A1>", "B3")};
    default: throw InputError("classify_defect: delta must be in 0..3, got " + std::to_string(delta));
  }
}

/// The table row for the report's delta, with candidates checked against the Milnor sums.
inline std::vector<DefectCandidate> classification_for(const BettiReport& r) {
  if (!r.delta || *r.delta > 3 || *r.delta < 0) return {};
  auto rows = classify_defect(static_cast<int>(*r.delta));
  if (r.pairs) {
    for (auto& c : rows) {
      std::int64_t fibre = 0, boundary = 0;
      for (const auto& g : c.germs) {
        fibre += g.count * g.fibre;
        boundary += g.count * g.boundary;
      }
      c.mu_consistent = fibre == r.pairs->sum_mu_fiber && boundary == r.pairs->sum_mu_boundary;
    }
  }
  return rows;
}

}  // namespace atinf
