#pragma once

// End-to-end analysis of one polynomial: profile, Milnor sums at infinity, defect and verdicts.

#include <cstdint>
#include <optional>
#include <string>

#include "atinf/betti.hpp"
#include "atinf/error.hpp"
#include "atinf/singularity.hpp"

namespace atinf {

struct AnalysisOptions {
  std::uint64_t seed = 0;
  int t_samples = 2;
  bool assume_concentrated = false;
  /// chi({f_d = 0}); needed when the tangencies at infinity are positive dimensional.
  std::optional<std::int64_t> chi_fd;
  /// Caller asserts Sigma_inf is a reduced line with Morse transversal type.
  bool line_at_infinity = false;
};

struct AnalysisResult {
  SingularityProfile profile;
  BettiReport report;
  /// Why delta was not computed, if it was not.
  std::optional<std::string> gate;
};

inline AnalysisResult analyze(const Poly& f, const AnalysisOptions& opt = {}) {
  if (opt.t_samples < 2) throw InputError("t_samples must be at least 2");
  AnalysisResult out;
  out.profile = singularity_profile(f, opt.seed);
  out.report = detail::base_report(f);
  const auto& prof = out.profile;
  try {
    if (prof.dim_sigma_inf.dim <= 0) {
      const auto pairs = infinity_milnor_pairs(f, prof, opt.seed, opt.t_samples, opt.assume_concentrated);
      out.report = delta_eqF(f, pairs, prof);
    } else if (prof.dim_sigma_cap_fd1.dim <= 0) {
      if (!opt.chi_fd)
        throw GateError("tangencies at infinity are positive dimensional; eqB needs chi({f_d = 0})");
      std::vector<Rational> t_used;
      const auto mu = fiber_milnor_sum(f, prof, opt.seed, opt.t_samples, opt.assume_concentrated, t_used);
      out.report = delta_eqB(f, mu, *opt.chi_fd);
    } else {
      throw GateError("singular points at infinity of the closed fibre are not isolated (dim " +
                      prof.dim_sigma_cap_fd1.to_string() + ")");
    }
  } catch (const GateError& e) {
    out.gate = e.what();
    return out;
  }
  out.report.range_verdicts = range_check(out.report, prof, opt.line_at_infinity);
  out.report.classification_candidates = classification_for(out.report);
  return out;
}

}  // namespace atinf
