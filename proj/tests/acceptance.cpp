// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "atinf/deformation.hpp"
#include "atinf/report.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace atinf;
using namespace testing_support;

namespace {

struct Check {
  std::ostringstream notes;
  bool ok = true;

  template <class A, class B>
  void eq(const A& got, const B& want, const std::string& what) {
    if (got == want) return;
    ok = false;
    notes << " [" << what << ": got " << got << ", want " << want << "]";
  }
  void expect(bool cond, const std::string& what) {
    if (cond) return;
    ok = false;
    notes << " [" << what << "]";
  }
};

std::int64_t delta_of(const AnalysisResult& a) { return a.report.delta.value_or(-999); }

Poly line_at_infinity_poly(int d) {
  const std::string s = std::to_string(d), a = std::to_string(d - 2), b = std::to_string(d - 3);
  return P("z^" + s + " + z^2*x^" + a + " + z^2*y^" + a + " + x*y*(x^" + b + " - y^" + b + ")", XYZ);
}

Poly line_family(int d) {
  return P("z^2*x^" + std::to_string(d - 2) + " + z^" + std::to_string(d), {"x", "z"});
}

bool same_ideal(const IdealBasis& a, const IdealBasis& b) {
  for (const auto& g : a.gens)
    if (!ideal_contains(b, g)) return false;
  for (const auto& g : b.gens)
    if (!ideal_contains(a, g)) return false;
  return true;
}

void regression_x_x2y(Check& c) {
  const Poly f = P("x + x^2*y");
  const auto a = analyze(f);
  c.eq(delta_of(a), 3, "delta");
  c.eq(a.report.b_top.value_or(-1), 1, "b_1");
  c.expect(a.profile.dim_sing_affine.is_empty(), "Sing f empty");
  c.eq(a.profile.dim_sigma_inf.dim, 0, "dim Sigma_inf");
  // Sigma_inf = V(2xy, x^2) in P^1: [0:1] and nothing on y = 0
  const Poly fd = graded_part(f, 3);
  const auto chart = standard_basis({dehomogenize(derivative(fd, 0), 1, 1), dehomogenize(derivative(fd, 1), 1, 1)});
  c.eq(quotient_dim(chart).value(), 1u, "points with y = 1");
  const std::vector<Rational> at_y0{Rational(1), Rational(0)};
  c.expect(evaluate(derivative(fd, 1), at_y0) != 0, "no point with y = 0");
}

void line_singularity_family(Check& c) {
  AnalysisOptions conc;
  conc.assume_concentrated = true;
  for (int d = 3; d <= 5; ++d) c.eq(delta_of(analyze(line_family(d), conc)), d, "family d=" + std::to_string(d));
  c.eq(delta_of(analyze(P("x^2*y"), conc)), 3, "x^2 y");
  c.expect(analyze(P("x^2*y")).gate.has_value(), "x^2 y gated without the override");
}

void line_at_infinity_family(Check& c) {
  AnalysisOptions opt;
  opt.chi_fd = 2;
  opt.line_at_infinity = true;
  const auto a = analyze(line_at_infinity_poly(4), opt);
  c.eq(delta_of(a), 9, "d=4 delta");
  bool line_ok = false;
  for (const auto& v : a.report.range_verdicts)
    if (v.name == "LINE_INF_BOUND") line_ok = v.passed && delta_of(a) == 2 * 2 * 2 + 1;
  c.expect(line_ok, "LINE_INF_BOUND equality at d=4");
  opt.chi_fd = -25 + 30 - 6;
  const auto b = analyze(line_at_infinity_poly(5), opt);
  c.eq(delta_of(b), 13, "d=5 delta");
}

void fermat(Check& c) {
  for (auto [n, d] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}, {2, 4}, {3, 3}}) {
    const auto vars = vars_for(static_cast<std::size_t>(n));
    Poly f(vars);
    for (std::size_t i = 0; i < vars.size(); ++i) f += Poly::variable(vars, i).pow(static_cast<unsigned>(d));
    const auto a = analyze(f);
    const std::string tag = "(" + std::to_string(n) + "," + std::to_string(d) + ")";
    c.eq(delta_of(a), 0, "delta " + tag);
    c.eq(a.report.b_top.value_or(-1), detail::ipow(d - 1, n), "b " + tag);
  }
}

void chi_suite(Check& c) {
  for (int d = 1; d <= 6; ++d) c.eq(chi_smooth_int(1, d), d, "chi(1," + std::to_string(d) + ")");
  c.eq(chi_smooth_int(2, 3), 0, "chi(2,3)");
  c.eq(chi_smooth_int(3, 2), 4, "chi(3,2)");
  for (int d = 4; d <= 5; ++d) {
    StratificationData data{3, d - 1, {}, {}};
    for (int k = 0; k < d - 2; ++k) data.points.push_back({PointStratum::Kind::isolated_with_mu, 1});
    c.eq(euler_sum(data), -d * d + 6 * d - 6, "euler_sum d=" + std::to_string(d));
  }
}

void milnor_oracle(Check& c) {
  const std::vector<mpq_class> o{0, 0};
  for (int a = 2; a <= 5; ++a)
    for (int b = 2; b <= 5; ++b) {
      const Poly f = P("x^" + std::to_string(a) + " + y^" + std::to_string(b));
      const auto want = static_cast<std::uint64_t>((a - 1) * (b - 1));
      c.eq(local_milnor(f).value_or(0), want, f.to_string());
      c.eq(oracle::local_milnor(f, o, 8), want, "oracle " + f.to_string());
    }
  const Poly d4 = P("x^2*y + y^3");
  c.eq(local_milnor(d4).value_or(0), 4u, "D4");
  c.eq(oracle::local_milnor(d4, o, 8), 4u, "oracle D4");
}

void fibre_sums(Check& c) {
  c.eq(milnor_sum_on_fiber(P("x^3 + y^3 - 3*x*y")), 1, "folium");
  c.eq(milnor_sum_on_fiber(P("x^2 + y^2 - 1")), 0, "circle");
  c.eq(milnor_sum_on_fiber(P("x^2 + y^2")), 1, "cone");
}

std::vector<Poly> random_ideal(std::mt19937_64& rng, std::size_t n) {
  return {random_poly(rng, n, 2, 4), random_poly(rng, n, 3, 4)};
}

void properties(Check& c) {
  std::mt19937_64 rng(2024);
  int bad = 0;
  for (int k = 0; k < 100; ++k) {
    const auto b = standard_basis(random_ideal(rng, 2 + static_cast<std::size_t>(k % 2)));
    if (!satisfies_buchberger_criterion(b)) ++bad;
  }
  c.eq(bad, 0, "Buchberger criterion failures");

  bad = 0;
  for (int k = 0; k < 100; ++k) {
    const std::size_t n = 2 + static_cast<std::size_t>(k % 2);
    const auto b = standard_basis(random_ideal(rng, n));
    const Poly r = normal_form(random_poly(rng, n, 4, 6), b);
    if (normal_form(r, b) != r) ++bad;
  }
  c.eq(bad, 0, "normal form idempotence failures");

  bad = 0;
  for (int k = 0; k < 100; ++k) {
    const Poly f = random_homogeneous(rng, 2 + static_cast<std::size_t>(k % 3), 1 + k % 5, 6);
    Poly lhs(f.vars());
    for (std::size_t i = 0; i < f.nvars(); ++i) lhs += Poly::variable(f.vars(), i) * derivative(f, i);
    if (lhs != f * Rational(f.degree())) ++bad;
  }
  c.eq(bad, 0, "Euler relation failures");

  bad = 0;
  for (int k = 0; k < 100; ++k) {
    const auto gens = random_ideal(rng, 2);
    const Poly h = random_poly(rng, 2, 1 + k % 2, 3);
    const auto s = saturate(gens, h);
    if (!same_ideal(s, saturate(s.vars, s.gens, h))) ++bad;
  }
  c.eq(bad, 0, "saturation idempotence failures");

  bad = 0;
  int runs = 0;
  const std::vector<std::pair<Poly, bool>> fixtures = {
      {P("x + x^2*y"), false}, {P("x^2*y"), true}, {line_family(3), true}, {line_family(4), true},
      {line_family(5), true},  {P("x^3 + y^3"), false}, {P("x^2*y + x*y + y"), false}};
  for (const auto& [f, conc] : fixtures) {
    const auto ref = infinity_milnor_pairs(f, 0, 2, conc);
    for (std::uint64_t seed = 1; seed <= 15; ++seed, ++runs) {
      const auto p = infinity_milnor_pairs(f, seed, 2, conc);
      if (p.sum_mu_fiber != ref.sum_mu_fiber || p.sum_mu_boundary != ref.sum_mu_boundary) ++bad;
    }
  }
  c.eq(bad, 0, "chart/seed invariance failures (" + std::to_string(runs) + " runs)");

  bad = 0;
  int analyzed = 0, violations = 0;
  for (int k = 0; k < 400 && analyzed < 100; ++k) {
    const std::size_t n = 2 + static_cast<std::size_t>(k % 2);
    AnalysisOptions opt;
    opt.seed = static_cast<std::uint64_t>(k);
    AnalysisResult a;
    try {
      a = analyze(random_poly(rng, n, 2 + k % 3, n == 2 ? 4 : 5), opt);
    } catch (const ComputationError&) {
      continue;
    }
    if (!a.report.delta) continue;
    ++analyzed;
    if (*a.report.delta < 0) ++bad;
    if (!a.report.verdicts_pass()) ++violations;
  }
  c.expect(analyzed >= 100, "only " + std::to_string(analyzed) + " analyzable random inputs");
  c.eq(bad, 0, "negative delta");
  c.eq(violations, 0, "range verdict violations");

  bad = 0;
  int compared = 0;
  for (int k = 0; k < 300 && compared < 100; ++k) {
    const Poly f = random_poly(rng, 2, 2 + k % 3, 4);
    const auto prof = singularity_profile(f, 0);
    if (prof.dim_sigma_inf.dim > 0 || prof.dim_sing_affine.dim > 0) continue;
    try {
      const auto pairs = infinity_milnor_pairs(f, prof, 0, 2, false);
      std::vector<Rational> t;
      const auto mu = fiber_milnor_sum(f, prof, 0, 2, false, t);
      const std::int64_t chi_fd = squarefree_part(graded_part(f, f.degree())).degree();
      if (*delta_eqF(f, pairs, prof).delta != *delta_eqB(f, mu, chi_fd).delta) ++bad;
      ++compared;
    } catch (const Error&) {
    }
  }
  c.expect(compared >= 100, "only " + std::to_string(compared) + " eqF/eqB comparisons");
  c.eq(bad, 0, "eqF/eqB disagreements");
}

void semicontinuity(Check& c) {
  namespace fs = std::filesystem;
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(fs::path(ATINF_SOURCE_DIR) / "corpus" / "reference"))
    if (e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  int audited = 0;
  for (const auto& file : files) {
    std::ifstream in(file);
    const Json fx = Json::parse(in);
    const Poly f = parse_poly(fx.at("poly").get<std::string>(), fx.at("vars").get<std::vector<std::string>>());
    AnalysisOptions opt;
    opt.seed = fx.value("seed", std::uint64_t{0});
    opt.assume_concentrated = fx.value("assume_concentrated", false);
    if (fx.contains("chi_fd")) opt.chi_fd = fx.at("chi_fd").get<std::int64_t>();
    const auto base = analyze(f, opt);
    if (!base.report.delta) continue;
    const auto r = semicontinuity_check(f, make_spec(f, DeformKind::general, opt.seed), opt.seed, opt);
    c.expect(r.verdict.passed() && r.deformed.size() == 2, file.filename().string() + ": " + r.verdict.detail);
    ++audited;
  }
  c.expect(audited >= 10, "only " + std::to_string(audited) + " fixtures audited");

  const Poly x2y = P("x^2*y");
  for (auto kind : {DeformKind::linear, DeformKind::power}) {
    const auto v = dimension_drop_check(x2y, make_spec(x2y, kind, 0));
    c.expect(v.passed(), "x^2 y " + to_string(kind) + ": " + v.detail);
  }
  const Poly ex = line_at_infinity_poly(4);
  for (auto kind : {DeformKind::linear, DeformKind::power}) {
    const auto v = dimension_drop_check(ex, make_spec(ex, kind, 0));
    c.expect(v.passed(), "line at infinity " + to_string(kind) + ": " + v.detail);
  }
}

void classification(Check& c) {
  const std::vector<std::vector<std::pair<std::string, std::string>>> table = {
      {{"<A0|A0>", "A0"}},
      {{"<A0|A1>", "A1"}},
      {{"<A0|A2>", "A2"}, {"2<A0|A1>", "2A1"}, {"<A1|A1>", "B2"}},
      {{"<A0|A3>", "A3"},
       {"<A0|A2> + <A0|A1>", "A2 + A1"},
       {"3<A0|A1>", "3A1"},
       {"<A1|A2>", "C3"},
       {"<A1|A1> + <A0|A1>", "B2 + A1"},
       {"<A2|A1>", "B3"}}};
  for (int delta = 0; delta <= 3; ++delta) {
    std::vector<std::pair<std::string, std::string>> got;
    for (const auto& row : classify_defect(delta)) got.emplace_back(row.notation, row.arnold);
    c.expect(got == table[static_cast<std::size_t>(delta)], "rows for delta " + std::to_string(delta));
  }
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria = {
      {"1 x + x^2 y regression", regression_x_x2y},
      {"2 line singularity family", line_singularity_family},
      {"3 line at infinity family", line_at_infinity_family},
      {"4 general at infinity (Fermat)", fermat},
      {"5 chi formula suite", chi_suite},
      {"6 Milnor oracle equivalence", milnor_oracle},
      {"7 on-fibre sums", fibre_sums},
      {"8 property suites", properties},
      {"9 semi-continuity audit", semicontinuity},
      {"10 classification table", classification},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Check c;
    const auto start = std::chrono::steady_clock::now();
    try {
      run(c);
    } catch (const std::exception& e) {
      c.ok = false;
      c.notes << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ostringstream t;
    t.precision(1);
    t << std::fixed << secs << "s";
    std::cout << (c.ok ? "PASS " : "FAIL ") << name << " (" << t.str() << ")" << c.notes.str() << std::endl;
    if (!c.ok) ++failed;
  }
  std::cout << criteria.size() - static_cast<std::size_t>(failed) << "/" << criteria.size() << " criteria pass"
            << std::endl;
  return failed == 0 ? 0 : 1;
}
