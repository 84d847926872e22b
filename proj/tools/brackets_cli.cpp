#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "brackets/catalog.hpp"
#include "brackets/corpus.hpp"
#include "brackets/errors.hpp"
#include "brackets/pipeline.hpp"

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kMethodFails = 2;
constexpr int kUsage = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw brackets::Error(brackets::ErrorKind::ParseError, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_eval(const std::string& path, bool trace, bool json, bool verify, double tol,
             const std::vector<std::string>& reps) {
  using namespace brackets;
  IntegrandSpec spec;
  EvalOptions opt;
  try {
    spec = parse_spec(read_file(path));
    for (const auto& r : reps) parse_rep_choices(r, opt.reps);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return kUsage;
  }
  opt.verify = verify;
  opt.tol = tol;
  EvalReport report;
  try {
    report = run_pipeline(spec, opt);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return e.kind() == ErrorKind::UnknownRepresentation ? kUsage : kMethodFails;
  }
  std::cout << (json ? report.json() + "\n" : report.text(trace));
  if (report.methodFails) return kMethodFails;
  if (report.verdict && !report.verdict->pass) return kFail;
  return kPass;
}

int run_corpus(const std::string& path, const std::string& filter, int jobs, bool json,
               const std::string& summaryPath) {
  using namespace brackets;
  CorpusSummary s;
  try {
    s = run_corpus_file(path, filter, jobs);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return kUsage;
  }
  std::cout << (json ? s.json() + "\n" : s.text());
  if (!summaryPath.empty()) {
    std::ofstream out(summaryPath);
    out << s.json() << "\n";
  }
  if (s.failed > 0) return kFail;
  if (s.methodFails > 0) return kMethodFails;
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Definite integrals by the method of brackets, with a quadrature cross-check"};
  app.require_subcommand(1);

  auto* eval = app.add_subcommand("eval", "Evaluate one integrand specification");
  std::string specPath;
  bool trace = false, json = false, noVerify = false;
  double tol = 1e-8;
  std::vector<std::string> reps;
  eval->add_option("specfile", specPath, "Spec file")->required();
  eval->add_flag("--trace", trace, "Print candidates, diagnostics and groups");
  eval->add_option("--rep", reps, "Force a representation, e.g. f1=divergent")->take_all();
  eval->add_flag("--json", json, "Print the report as JSON");
  eval->add_flag("--no-verify", noVerify, "Skip the quadrature oracle");
  eval->add_option("--tol", tol, "Oracle tolerance");

  auto* corpus = app.add_subcommand("corpus", "Run a corpus file");
  std::string corpusPath, filter, summaryPath;
  int jobs = 1;
  bool corpusJson = false;
  corpus->add_option("path", corpusPath, "Corpus file")->required();
  corpus->add_option("--filter", filter, "Glob on entry ids");
  corpus->add_option("--jobs", jobs, "Parallel entries")->check(CLI::PositiveNumber);
  corpus->add_flag("--json", corpusJson, "Print the summary as JSON");
  corpus->add_option("--summary", summaryPath, "Also write the JSON summary to this file");

  app.add_subcommand("catalog", "Print the built-in catalog in the data-file format");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }
  if (*eval) return run_eval(specPath, trace, json, !noVerify, tol, reps);
  if (app.got_subcommand("catalog")) {
    std::cout << brackets::serialize_catalog(brackets::builtin_catalog());
    return kPass;
  }
  return run_corpus(corpusPath, filter, jobs, corpusJson, summaryPath);
}
