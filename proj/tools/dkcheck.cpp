// dkcheck: check .dk files in order, or evaluate a term against them.

#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "dk/driver.hpp"

namespace {

constexpr const char* kVersion = "dkcheck 0.1.0";
constexpr const char* kFuelEnv = "DKCHECK_FUEL";

int emit(const dk::RunResult& r) {
  std::cout << r.report;
  std::cerr << r.errors;
  return r.status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"type checker for the lambda-Pi calculus modulo rewriting"};
  app.require_subcommand(1);

  dk::RunConfig cfg;
  std::string term_text;
  bool fuel_given = false;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--manifest", cfg.manifest, "file list, checked in order before FILES");
    sub->add_option("--fuel", cfg.fuel, "reduction budget in steps")->check(CLI::PositiveNumber)
        ->each([&](const std::string&) { fuel_given = true; });
    sub->add_flag("--raw-errors", cfg.raw_errors, "print terms in errors without normalizing");
    sub->add_flag("--standalone-hol", cfg.standalone_hol, "admit hol.dk without bridge hooks");
  };

  auto* check = app.add_subcommand("check", "admit files into one signature");
  common(check);
  check->add_option("files", cfg.files, "theory files");

  auto* eval = app.add_subcommand("eval", "print the normal form of TERM");
  common(eval);
  eval->add_option("term", term_text, "term to evaluate")->required();
  eval->add_option("files", cfg.files, "theory files");

  app.add_subcommand("version", "print version");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : dk::kExitError;
  }

  if (!fuel_given) {
    if (const char* env = std::getenv(kFuelEnv)) {
      try {
        std::size_t used = 0;
        cfg.fuel = std::stoull(env, &used);
        if (used != std::string(env).size()) throw std::invalid_argument(env);
      } catch (const std::exception&) {
        std::cerr << "error: " << kFuelEnv << " is not a number\n";
        return dk::kExitError;
      }
    }
  }

  if (app.got_subcommand("version")) {
    std::cout << kVersion << "\n";
    return 0;
  }
  if (app.got_subcommand("eval")) return emit(dk::run_eval(cfg, term_text));
  return emit(dk::run_check(cfg));
}
