// atinf: singularities at infinity and the top Betti defect of a polynomial.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "atinf/report.hpp"

namespace {

void add_poly_options(CLI::App* cmd, atinf::AnalysisRequest& req, std::string& vars) {
  cmd->add_option("--poly", req.poly_text, "polynomial, e.g. \"x + x^2*y\"")->required();
  cmd->add_option("--vars", vars, "comma separated variable names")->required();
  cmd->add_option("--seed", req.seed, "seed for charts, samples and generic forms");
  cmd->add_option("--t-samples", req.t_samples, "number of sampled fibres (>= 2)");
  cmd->add_flag("--assume-concentrated", req.assume_concentrated,
                "treat non-isolated Sing f as having concentrated fibre homology");
  cmd->add_flag("--unsafe", req.unsafe, "lift the variable and degree guardrails");
}

int emit(const atinf::Outcome& out) {
  std::cout << out.report.dump(2) << std::endl;
  return out.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Singularities at infinity and the top Betti defect of the general fibre"};
  app.require_subcommand(1);

  atinf::AnalysisRequest req;
  std::string vars;
  std::optional<std::int64_t> chi_fd;
  std::string strata;

  auto* analyze = app.add_subcommand("analyze", "profile, Milnor sums at infinity and the defect");
  add_poly_options(analyze, req, vars);
  analyze->add_option("--chi-fd", chi_fd, "Euler characteristic of {f_d = 0}, for the eqB formula");
  analyze->add_option("--strata", strata, "stratification of {f_d = 0} (JSON) giving chi-fd");
  analyze->add_flag("--line-at-infinity", req.line_at_infinity,
                    "Sigma_inf is a reduced line with Morse transversal type; check the line bound");

  std::string kind = "general";
  std::optional<std::string> with;
  auto* deform = app.add_subcommand("deform", "deform f and check dimension drop and semi-continuity");
  add_poly_options(deform, req, vars);
  deform->add_option("--kind", kind, "linear | power | general")->check(CLI::IsMember({"linear", "power", "general"}));
  deform->add_option("--with", with, "linear form l, or h_d for the general kind");
  deform->add_option("--chi-fd", chi_fd, "Euler characteristic of {f_d = 0}, for the eqB formula");

  std::string strata_file;
  auto* euler = app.add_subcommand("euler", "Euler characteristic of {f_d = 0} from a stratification");
  euler->add_option("--strata", strata_file, "stratification JSON")->required();

  int delta = 0;
  auto* table = app.add_subcommand("table", "boundary types of general fibres with small defect");
  table->add_option("--delta", delta, "defect, 0..3")->required();

  std::string corpus_dir;
  bool corpus_json = false;
  auto* corpus = app.add_subcommand("corpus", "run a directory of fixtures");
  corpus->add_option("dir", corpus_dir, "fixture directory")->required();
  corpus->add_flag("--json", corpus_json, "print the summary as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : atinf::kExitInputError;
  }

  req.vars = atinf::split_vars(vars);
  req.chi_fd = chi_fd;

  try {
    if (*analyze) {
      if (!strata.empty()) {
        if (chi_fd) throw atinf::InputError("give either --chi-fd or --strata, not both");
        req.chi_fd = atinf::euler_sum(atinf::read_strata(strata));
      }
      return emit(atinf::run_analyze(req));
    }
    if (*deform) return emit(atinf::run_deform(req, atinf::parse_deform_kind(kind), with));
    if (*euler) return emit(atinf::run_euler(strata_file));
    if (*table) return emit(atinf::run_table(delta));
    if (*corpus) {
      const auto summary = atinf::corpus_run(corpus_dir);
      if (corpus_json) {
        std::cout << atinf::summary_json(summary).dump(2) << std::endl;
      } else {
        if (summary.empty) std::cerr << "warning: corpus is empty" << std::endl;
        else std::cout << atinf::format_summary(summary);
      }
      return summary.exit_code();
    }
  } catch (const atinf::InputError& e) {
    std::cerr << "input error: " << e.what() << std::endl;
    return atinf::kExitInputError;
  } catch (const atinf::Error& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return atinf::kExitGate;
  }
  return atinf::kExitInputError;
}
