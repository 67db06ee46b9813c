#pragma once

// JSON reports, request handling with guardrails and exit codes, and the fixture corpus runner.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "atinf/analysis.hpp"
#include "atinf/betti.hpp"
#include "atinf/deformation.hpp"
#include "atinf/error.hpp"
#include "atinf/poly.hpp"

namespace atinf {

using Json = nlohmann::ordered_json;

inline constexpr const char* kReportSchema = "atinf.report/1";
inline constexpr std::size_t kGuardMaxVars = 8;
inline constexpr int kGuardMaxDegree = 12;

enum ExitCode : int { kExitPass = 0, kExitVerdictFailed = 1, kExitGate = 2, kExitInputError = 3 };

struct AnalysisRequest {
  std::string poly_text;
  std::vector<std::string> vars;
  std::uint64_t seed = 0;
  int t_samples = 2;
  bool assume_concentrated = false;
  std::optional<std::int64_t> chi_fd;
  bool line_at_infinity = false;
  bool unsafe = false;
};

struct Outcome {
  Json report;
  int exit_code = kExitPass;
};

inline std::vector<std::string> split_vars(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ',' || c == ' ') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

inline Poly parse_request_poly(const AnalysisRequest& req) {
  if (req.vars.empty()) throw InputError("no variables given");
  if (req.vars.size() > kGuardMaxVars && !req.unsafe)
    throw InputError("more than " + std::to_string(kGuardMaxVars) + " variables; pass --unsafe to proceed");
  Poly f = parse_poly(req.poly_text, req.vars);
  if (f.is_zero() || f.degree() < 1) throw InputError("the polynomial must be nonconstant");
  if (f.degree() > kGuardMaxDegree && !req.unsafe)
    throw InputError("degree " + std::to_string(f.degree()) + " exceeds " + std::to_string(kGuardMaxDegree) +
                     "; pass --unsafe to proceed");
  return f;
}

namespace detail {

inline Json rational_list(const std::vector<Rational>& xs) {
  Json a = Json::array();
  for (const auto& x : xs) a.push_back(x.get_str());
  return a;
}

template <class T>
Json opt(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

inline Json input_json(const AnalysisRequest& req) {
  return Json{{"poly", req.poly_text},
              {"vars", req.vars},
              {"seed", req.seed},
              {"t_samples", req.t_samples},
              {"assume_concentrated", req.assume_concentrated},
              {"chi_fd", opt(req.chi_fd)},
              {"line_at_infinity", req.line_at_infinity}};
}

inline Json matrix_json(const std::optional<LinearChange>& c) {
  if (!c) return nullptr;
  Json m = Json::array();
  for (const auto& row : c->matrix()) m.push_back(rational_list(row));
  return m;
}

}  // namespace detail

inline Json profile_json(const SingularityProfile& p, const Poly& f) {
  return Json{{"n", f.nvars()},
              {"d", p.degree},
              {"dim_sing", p.dim_sing_affine.dim},
              {"dim_sigma_inf", p.dim_sigma_inf.dim},
              {"dim_sigma_cap_fd1", p.dim_sigma_cap_fd1.dim},
              {"general_at_infinity", p.general_at_infinity},
              {"chart", detail::matrix_json(p.chart_change)},
              {"fiber_chart", detail::matrix_json(p.fiber_chart_change)}};
}

inline Json betti_json(const BettiReport& r) {
  Json j{{"n", r.n},
         {"d", r.d},
         {"delta", detail::opt(r.delta)},
         {"b_top", detail::opt(r.b_top)},
         {"method", to_string(r.method)},
         {"chi_smooth", r.chi_smooth},
         {"chi_fd", detail::opt(r.chi_fd)},
         {"delta_chi_inf", detail::opt(r.delta_chi_inf)},
         {"mu_sum_X0bar", detail::opt(r.mu_sum_X0bar)}};
  if (r.pairs) {
    j["mu_fiber_sum"] = r.pairs->sum_mu_fiber;
    j["mu_boundary_sum"] = r.pairs->sum_mu_boundary;
    j["t_used"] = detail::rational_list(r.pairs->t_used);
  } else {
    j["mu_fiber_sum"] = nullptr;
    j["mu_boundary_sum"] = nullptr;
  }
  return j;
}

inline Json verdicts_json(const std::vector<RangeVerdict>& vs) {
  Json a = Json::array();
  for (const auto& v : vs)
    a.push_back(Json{{"name", v.name}, {"passed", v.passed}, {"applicable", v.applicable}, {"detail", v.detail}});
  return a;
}

inline Json candidates_json(const std::vector<DefectCandidate>& cs) {
  Json a = Json::array();
  for (const auto& c : cs)
    a.push_back(Json{{"notation", c.notation}, {"arnold", c.arnold}, {"mu_consistent", detail::opt(c.mu_consistent)}});
  return a;
}

inline Json error_report(const std::string& mode, const std::string& message) {
  return Json{{"schema", kReportSchema}, {"mode", mode}, {"error", message}, {"exit_code", kExitInputError}};
}

inline Outcome run_analyze(const AnalysisRequest& req) {
  Outcome out;
  try {
    const Poly f = parse_request_poly(req);
    AnalysisOptions opt;
    opt.seed = req.seed;
    opt.t_samples = req.t_samples;
    opt.assume_concentrated = req.assume_concentrated;
    opt.chi_fd = req.chi_fd;
    opt.line_at_infinity = req.line_at_infinity;
    const auto a = analyze(f, opt);
    out.exit_code = a.gate ? kExitGate : a.report.verdicts_pass() ? kExitPass : kExitVerdictFailed;
    out.report = Json{{"schema", kReportSchema},
                      {"mode", "analyze"},
                      {"input", detail::input_json(req)},
                      {"profile", profile_json(a.profile, f)},
                      {"betti", betti_json(a.report)},
                      {"range_verdicts", verdicts_json(a.report.range_verdicts)},
                      {"classification_candidates", candidates_json(a.report.classification_candidates)},
                      {"gate", detail::opt(a.gate)},
                      {"exit_code", out.exit_code}};
  } catch (const InputError& e) {
    out = {error_report("analyze", e.what()), kExitInputError};
  } catch (const GateError& e) {
    out.exit_code = kExitGate;
    out.report = Json{{"schema", kReportSchema}, {"mode", "analyze"}, {"input", detail::input_json(req)},
                      {"gate", e.what()}, {"exit_code", kExitGate}};
  } catch (const ComputationError& e) {
    out.exit_code = kExitGate;
    out.report = Json{{"schema", kReportSchema}, {"mode", "analyze"}, {"input", detail::input_json(req)},
                      {"gate", std::string("computation: ") + e.what()}, {"exit_code", kExitGate}};
  }
  return out;
}

inline int exit_for(const Verdict& v) {
  switch (v.status) {
    case Verdict::Status::pass: return kExitPass;
    case Verdict::Status::fail: return kExitVerdictFailed;
    default: return kExitGate;
  }
}

inline Outcome run_deform(const AnalysisRequest& req, DeformKind kind, const std::optional<std::string>& with) {
  Outcome out;
  try {
    const Poly f = parse_request_poly(req);
    std::optional<Poly> w;
    if (with) w = parse_poly(*with, req.vars);
    const auto spec = make_spec(f, kind, req.seed, w);
    Json deformed = Json::array();
    for (const auto& e : spec.epsilons) deformed.push_back(deform(f, spec, e).to_string());

    std::vector<Verdict> verdicts;
    if (kind != DeformKind::general) verdicts.push_back(dimension_drop_check(f, spec));
    if (kind == DeformKind::general) {
      Verdict g{"GENERAL_AT_INFINITY", Verdict::Status::pass, ""};
      for (const auto& e : spec.epsilons) {
        const Poly fe = deform(f, spec, e);
        const bool gai = proj_dim(f.vars(), detail::partials(graded_part(fe, fe.degree()))).is_empty();
        g.detail += (g.detail.empty() ? "" : "; ") + std::string("eps ") + e.get_str() + (gai ? ": yes" : ": no");
        if (!gai) g.status = Verdict::Status::fail;
      }
      verdicts.push_back(g);
    }
    AnalysisOptions opt;
    opt.t_samples = req.t_samples;
    opt.assume_concentrated = req.assume_concentrated;
    opt.chi_fd = req.chi_fd;
    const auto semi = semicontinuity_check(f, spec, req.seed, opt);
    verdicts.push_back(semi.verdict);

    Json vs = Json::array();
    out.exit_code = kExitPass;
    for (const auto& v : verdicts) {
      vs.push_back(Json{{"name", v.name}, {"status", to_string(v.status)}, {"detail", v.detail}});
      const int code = exit_for(v);
      if (code == kExitVerdictFailed || out.exit_code == kExitPass) out.exit_code = code;
    }
    Json deltas = Json::array();
    for (const auto& d : semi.deformed) deltas.push_back(detail::opt(d));
    out.report = Json{{"schema", kReportSchema},
                      {"mode", "deform"},
                      {"input", detail::input_json(req)},
                      {"kind", to_string(kind)},
                      {"l_or_h", spec.l_or_h.to_string()},
                      {"epsilons", detail::rational_list(spec.epsilons)},
                      {"deformed", deformed},
                      {"delta", detail::opt(semi.delta)},
                      {"delta_deformed", deltas},
                      {"verdicts", vs},
                      {"exit_code", out.exit_code}};
  } catch (const InputError& e) {
    out = {error_report("deform", e.what()), kExitInputError};
  } catch (const Error& e) {
    out.exit_code = kExitGate;
    out.report = Json{{"schema", kReportSchema}, {"mode", "deform"}, {"gate", e.what()}, {"exit_code", kExitGate}};
  }
  return out;
}

inline StratificationData parse_strata(const Json& j) {
  try {
    StratificationData data;
    data.n = j.at("n").get<int>();
    data.d = j.at("d").get<int>();
    if (j.contains("curves"))
      for (const auto& c : j.at("curves"))
        data.curves.push_back({c.value("g", 0), c.value("mu_t", 1), c.value("nu", 0), c.value("gamma", 0)});
    if (j.contains("points")) {
      for (const auto& p : j.at("points")) {
        const auto kind = p.at("kind").get<std::string>();
        PointStratum s;
        if (kind == "mu") s.kind = PointStratum::Kind::isolated_with_mu;
        else if (kind == "dinf") s.kind = PointStratum::Kind::d_infinity;
        else if (kind == "chi") s.kind = PointStratum::Kind::custom_chi;
        else throw InputError("unknown point kind '" + kind + "'");
        s.value = p.value("value", std::int64_t{s.kind == PointStratum::Kind::d_infinity ? 0 : 1});
        data.points.push_back(s);
      }
    }
    return data;
  } catch (const Json::exception& e) {
    throw InputError(std::string("stratification data: ") + e.what());
  }
}

inline StratificationData read_strata(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  try {
    return parse_strata(Json::parse(in));
  } catch (const Json::parse_error& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

inline Outcome run_euler(const std::filesystem::path& path) {
  try {
    const auto data = read_strata(path);
    const auto chi = euler_sum(data);
    return {Json{{"schema", kReportSchema},
                 {"mode", "euler"},
                 {"n", data.n},
                 {"d", data.d},
                 {"chi_smooth", chi_smooth_int(data.n - 1, data.d)},
                 {"chi", chi},
                 {"exit_code", kExitPass}},
            kExitPass};
  } catch (const InputError& e) {
    return {error_report("euler", e.what()), kExitInputError};
  }
}

inline Outcome run_table(int delta) {
  try {
    const auto rows = classify_defect(delta);
    return {Json{{"schema", kReportSchema},
                 {"mode", "table"},
                 {"delta", delta},
                 {"rows", candidates_json(rows)},
                 {"exit_code", kExitPass}},
            kExitPass};
  } catch (const InputError& e) {
    return {error_report("table", e.what()), kExitInputError};
  }
}

/// Dotted lookup into an analyze report for the fields fixtures may pin.
inline std::optional<Json> report_field(const Json& report, const std::string& key) {
  static const std::vector<std::pair<std::string, std::string>> places = {
      {"delta", "betti"},           {"b_top", "betti"},          {"method", "betti"},
      {"chi_smooth", "betti"},      {"delta_chi_inf", "betti"},  {"mu_fiber_sum", "betti"},
      {"mu_boundary_sum", "betti"}, {"mu_sum_X0bar", "betti"},   {"chi_fd", "betti"},
      {"dim_sing", "profile"},      {"dim_sigma_inf", "profile"}, {"dim_sigma_cap_fd1", "profile"},
      {"general_at_infinity", "profile"}};
  if (key == "exit_code") return report.at("exit_code");
  if (key == "gate") return report.contains("gate") ? report.at("gate") : Json(nullptr);
  for (const auto& [k, section] : places) {
    if (k != key) continue;
    if (!report.contains(section)) return std::nullopt;
    const auto& s = report.at(section);
    return s.contains(key) ? std::optional<Json>(s.at(key)) : std::nullopt;
  }
  return std::nullopt;
}

struct FixtureResult {
  std::string file;
  std::string name;
  bool passed = false;
  std::vector<std::string> diffs;
  std::string error;
};

inline FixtureResult run_fixture(const std::filesystem::path& path) {
  FixtureResult r;
  r.file = path.filename().string();
  r.name = r.file;
  try {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open file");
    const Json fx = Json::parse(in);
    r.name = fx.value("name", r.file);
    AnalysisRequest req;
    req.poly_text = fx.at("poly").get<std::string>();
    req.vars = fx.at("vars").get<std::vector<std::string>>();
    req.seed = fx.value("seed", std::uint64_t{0});
    req.t_samples = fx.value("t_samples", 2);
    req.assume_concentrated = fx.value("assume_concentrated", false);
    if (fx.contains("chi_fd")) req.chi_fd = fx.at("chi_fd").get<std::int64_t>();
    req.line_at_infinity = fx.value("line_at_infinity", false);
    req.unsafe = fx.value("unsafe", false);
    const auto out = run_analyze(req);
    for (const auto& [key, want] : fx.at("expect").items()) {
      const auto got = report_field(out.report, key);
      if (!got) r.diffs.push_back(key + ": expected " + want.dump() + ", field missing");
      else if (*got != want) r.diffs.push_back(key + ": expected " + want.dump() + ", got " + got->dump());
    }
    r.passed = r.diffs.empty();
  } catch (const std::exception& e) {
    r.error = e.what();
    r.passed = false;
  }
  return r;
}

struct CorpusSummary {
  std::vector<FixtureResult> results;
  bool empty = false;

  std::size_t failures() const {
    return static_cast<std::size_t>(std::count_if(results.begin(), results.end(), [](const auto& r) { return !r.passed; }));
  }
  int exit_code() const { return failures() == 0 ? kExitPass : kExitVerdictFailed; }
};

/// Runs every *.json fixture in the directory, a few at a time.
inline CorpusSummary corpus_run(const std::filesystem::path& dir, unsigned workers = 0) {
  if (!std::filesystem::is_directory(dir)) throw InputError("not a directory: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  CorpusSummary s;
  s.empty = files.empty();
  s.results.resize(files.size());
  if (workers == 0) workers = std::max(1u, std::min(4u, std::thread::hardware_concurrency()));
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t k = next++; k < files.size(); k = next++) s.results[k] = run_fixture(files[k]);
      });
  }
  return s;
}

inline std::string format_summary(const CorpusSummary& s) {
  std::ostringstream os;
  if (s.empty) {
    os << "warning: corpus is empty\n";
    return os.str();
  }
  std::size_t width = 4;
  for (const auto& r : s.results) width = std::max(width, r.name.size());
  for (const auto& r : s.results) {
    os << (r.passed ? "PASS  " : "FAIL  ") << r.name << std::string(width - r.name.size() + 2, ' ') << r.file << "\n";
    if (!r.error.empty()) os << "      error: " << r.error << "\n";
    for (const auto& d : r.diffs) os << "      " << d << "\n";
  }
  os << s.results.size() - s.failures() << "/" << s.results.size() << " fixtures pass\n";
  return os.str();
}

inline Json summary_json(const CorpusSummary& s) {
  Json a = Json::array();
  for (const auto& r : s.results)
    a.push_back(Json{{"file", r.file}, {"name", r.name}, {"passed", r.passed}, {"diffs", r.diffs}, {"error", r.error}});
  return Json{{"schema", kReportSchema}, {"mode", "corpus"}, {"fixtures", a}, {"failures", s.failures()},
              {"exit_code", s.exit_code()}};
}

}  // namespace atinf
