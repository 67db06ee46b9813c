#pragma once

// Deformations f + eps*l, f + eps*l^d, f + eps*h_d and empirical checks of what they do to the
// singular loci and to the Betti defect.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "atinf/analysis.hpp"
#include "atinf/error.hpp"
#include "atinf/invariants.hpp"
#include "atinf/random.hpp"
#include "atinf/singularity.hpp"

namespace atinf {

enum class DeformKind { linear, power, general };

inline std::string to_string(DeformKind k) {
  switch (k) {
    case DeformKind::linear: return "linear";
    case DeformKind::power: return "power";
    case DeformKind::general: return "general";
  }
  return "?";
}

inline DeformKind parse_deform_kind(const std::string& s) {
  if (s == "linear") return DeformKind::linear;
  if (s == "power") return DeformKind::power;
  if (s == "general") return DeformKind::general;
  throw InputError("unknown deformation kind '" + s + "'");
}

struct DeformationSpec {
  DeformKind kind = DeformKind::general;
  Poly l_or_h;
  std::vector<Rational> epsilons;
};

struct Verdict {
  enum class Status { pass, fail, retry, incomparable };
  std::string name;
  Status status = Status::pass;
  std::string detail;

  bool passed() const { return status == Status::pass; }
};

inline std::string to_string(Verdict::Status s) {
  switch (s) {
    case Verdict::Status::pass: return "pass";
    case Verdict::Status::fail: return "fail";
    case Verdict::Status::retry: return "retry with new seed";
    case Verdict::Status::incomparable: return "incomparable";
  }
  return "?";
}

namespace detail {

inline constexpr long kEpsilonHeight = 100;
inline constexpr int kLinearFormAttempts = 10;

/// Coefficients are nonzero integers in [-5, 5].
inline Poly random_linear_form(const std::vector<std::string>& vars, SeededRng& rng) {
  Poly l(vars);
  for (std::size_t i = 0; i < vars.size(); ++i) {
    long c = 0;
    while (c == 0) c = rng.uniform(-kChartEntryBound, kChartEntryBound);
    l += Poly::variable(vars, i) * Rational(c);
  }
  return l;
}

inline bool is_general_form(const Poly& h) {
  return h.is_homogeneous() && !h.is_zero() && proj_dim(h.vars(), partials(h)).is_empty();
}

}  // namespace detail

inline Poly deform(const Poly& f, const DeformationSpec& spec, const Rational& eps) {
  if (eps == 0) throw InputError("deform: eps must be nonzero");
  if (spec.l_or_h.vars() != f.vars()) throw InputError("deform: deformation lives in a different ring");
  const int d = f.degree();
  Poly out = f;
  switch (spec.kind) {
    case DeformKind::linear:
      if (spec.l_or_h.degree() != 1 || !spec.l_or_h.is_homogeneous())
        throw InputError("deform: linear kind needs a linear form");
      out += spec.l_or_h * eps;
      break;
    case DeformKind::power:
      if (spec.l_or_h.degree() != 1 || !spec.l_or_h.is_homogeneous())
        throw InputError("deform: power kind needs a linear form");
      out += spec.l_or_h.pow(static_cast<unsigned>(d)) * eps;
      break;
    case DeformKind::general:
      if (!spec.l_or_h.is_homogeneous() || spec.l_or_h.degree() != d)
        throw InputError("deform: general kind needs a homogeneous form of degree " + std::to_string(d));
      out += spec.l_or_h * eps;
      break;
  }
  if (out.degree() != d) throw InputError("deform: degree dropped from " + std::to_string(d));
  return out;
}

/// A spec with a seeded linear form (Bertini-checked against f, and f_d for the power kind) or
/// a general-at-infinity h_d (Fermat by default), and two sampled epsilons.
inline DeformationSpec make_spec(const Poly& f, DeformKind kind, std::uint64_t seed,
                                 const std::optional<Poly>& with = std::nullopt) {
  const auto& vars = f.vars();
  const int d = f.degree();
  SeededRng rng(seed ^ 0xD1B54A32D192ED03ull);
  DeformationSpec spec;
  spec.kind = kind;
  if (kind == DeformKind::general) {
    if (with) {
      spec.l_or_h = *with;
    } else {
      spec.l_or_h = Poly(vars);
      for (std::size_t i = 0; i < vars.size(); ++i)
        spec.l_or_h += Poly::variable(vars, i).pow(static_cast<unsigned>(d));
    }
    if (!detail::is_general_form(spec.l_or_h))
      throw InputError("deform: h_d must be homogeneous of degree d with no tangencies at infinity");
  } else if (with) {
    spec.l_or_h = *with;
  } else {
    const Poly fd = graded_part(f, d);
    bool found = false;
    for (int k = 0; k < detail::kLinearFormAttempts && !found; ++k) {
      spec.l_or_h = detail::random_linear_form(vars, rng);
      found = bertini_check(f, spec.l_or_h) && (kind != DeformKind::power || bertini_check(fd, spec.l_or_h));
    }
    if (!found) throw ComputationError("deform: no generic linear form found; retry with a new seed");
  }
  for (int k = 0; k < 2; ++k) {
    Rational e = rng.small_rational(detail::kEpsilonHeight);
    while (std::find(spec.epsilons.begin(), spec.epsilons.end(), e) != spec.epsilons.end())
      e = rng.small_rational(detail::kEpsilonHeight);
    spec.epsilons.push_back(e);
  }
  return spec;
}

struct LociDims {
  VarietyDim sing;
  VarietyDim sigma;
};

inline LociDims loci_dims(const Poly& f) {
  const auto& vars = f.vars();
  return {krull_dim(standard_basis(vars, detail::partials(f))),
          proj_dim(vars, detail::partials(graded_part(f, f.degree())))};
}

/// Linear kind: Sing f_eps is at most points and Sigma_inf is unchanged. Power kind: a locus of
/// positive dimension loses exactly one dimension, one of dimension <= 0 stays so.
inline Verdict dimension_drop_check(const Poly& f, const DeformationSpec& spec) {
  Verdict v{"DIMENSION_DROP", Verdict::Status::pass, ""};
  if (spec.kind == DeformKind::general) throw InputError("dimension_drop_check: needs the linear or power kind");
  if (spec.epsilons.size() < 2) throw InputError("dimension_drop_check: needs at least two epsilons");
  const auto& vars = f.vars();
  const Poly fd = graded_part(f, f.degree());
  if (!bertini_check(f, spec.l_or_h) || (spec.kind == DeformKind::power && !bertini_check(fd, spec.l_or_h))) {
    v.status = Verdict::Status::retry;
    v.detail = "linear form is not generic";
    return v;
  }
  const LociDims before = loci_dims(f);
  const IdealBasis sigma_before = standard_basis(vars, detail::partials(fd));
  v.detail = "before (" + before.sing.to_string() + ", " + before.sigma.to_string() + ")";
  for (const auto& eps : spec.epsilons) {
    const Poly fe = deform(f, spec, eps);
    const LociDims after = loci_dims(fe);
    v.detail += "; eps " + eps.get_str() + " -> (" + after.sing.to_string() + ", " + after.sigma.to_string() + ")";
    bool ok;
    if (spec.kind == DeformKind::linear) {
      const IdealBasis sigma_after = standard_basis(vars, detail::partials(graded_part(fe, fe.degree())));
      ok = after.sing.dim <= 0 && sigma_after == sigma_before;
    } else {
      auto drop = [](VarietyDim b, VarietyDim a) { return b.dim >= 1 ? a.dim == b.dim - 1 : a.dim <= 0; };
      ok = drop(before.sing, after.sing) && drop(before.sigma, after.sigma);
    }
    if (!ok) v.status = Verdict::Status::fail;
  }
  return v;
}

struct SemicontinuityResult {
  Verdict verdict;
  std::optional<std::int64_t> delta;
  std::vector<std::optional<std::int64_t>> deformed;
};

/// Delta(f_eps) <= Delta(f) for every sampled eps.
inline SemicontinuityResult semicontinuity_check(const Poly& f, const DeformationSpec& spec, std::uint64_t seed,
                                                 const AnalysisOptions& base = {}) {
  SemicontinuityResult out{{"SEMICONTINUITY", Verdict::Status::pass, ""}, std::nullopt, {}};
  AnalysisOptions opt = base;
  opt.seed = seed;
  const auto a = analyze(f, opt);
  out.delta = a.report.delta;
  out.verdict.detail = "delta(f) = " + (a.report.delta ? std::to_string(*a.report.delta) : std::string("n/a"));
  bool incomparable = !a.report.delta;
  for (const auto& eps : spec.epsilons) {
    AnalysisOptions oe = opt;
    oe.chi_fd.reset();
    oe.line_at_infinity = false;
    const auto b = analyze(deform(f, spec, eps), oe);
    out.deformed.push_back(b.report.delta);
    out.verdict.detail += "; eps " + eps.get_str() + ": " +
                          (b.report.delta ? std::to_string(*b.report.delta) : "n/a (" + b.gate.value_or("") + ")");
    if (!b.report.delta) {
      incomparable = true;
      continue;
    }
    if (a.report.delta && *b.report.delta > *a.report.delta) out.verdict.status = Verdict::Status::fail;
  }
  if (incomparable && out.verdict.status == Verdict::Status::pass) out.verdict.status = Verdict::Status::incomparable;
  return out;
}

struct ChainStep {
  DeformKind kind;
  Poly l;
  Rational eps;
  LociDims dims;
};

struct MonotoneChain {
  std::vector<ChainStep> steps;
  Poly result;
  bool terminated = false;
};

/// A linear deformation when Sing f is positive dimensional, then powers of a linear form until
/// both loci are at most points.
inline MonotoneChain monotone_chain(const Poly& f, std::uint64_t seed, int max_steps = 8) {
  MonotoneChain chain{{}, f, false};
  LociDims dims = loci_dims(f);
  std::uint64_t s = seed;
  if (dims.sing.dim >= 1) {
    const auto spec = make_spec(chain.result, DeformKind::linear, s++);
    chain.result = deform(chain.result, spec, spec.epsilons.front());
    dims = loci_dims(chain.result);
    chain.steps.push_back({DeformKind::linear, spec.l_or_h, spec.epsilons.front(), dims});
  }
  while ((dims.sing.dim >= 1 || dims.sigma.dim >= 1) && static_cast<int>(chain.steps.size()) < max_steps) {
    const auto spec = make_spec(chain.result, DeformKind::power, s++);
    chain.result = deform(chain.result, spec, spec.epsilons.front());
    dims = loci_dims(chain.result);
    chain.steps.push_back({DeformKind::power, spec.l_or_h, spec.epsilons.front(), dims});
  }
  chain.terminated = dims.sing.dim <= 0 && dims.sigma.dim <= 0;
  return chain;
}

}  // namespace atinf
