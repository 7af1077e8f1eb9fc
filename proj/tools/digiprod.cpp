// digiprod: evaluate and verify digit-exponent infinite products.

#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"

#include "digiprod/cli.hpp"

namespace {

using digiprod::Command;
using digiprod::OutputFormat;
using digiprod::RunConfig;

struct Flags {
  std::string spec;
  std::string spec_file;
  std::string output;
};

void add_common(CLI::App* sub, RunConfig& cfg, Flags& flags) {
  sub->add_option("--terms", cfg.terms, "truncation N (number of terms)")->check(CLI::PositiveNumber);
  sub->add_option("--tol", cfg.tol, "override the tolerance of a claim");
  sub->add_option("--output", flags.output, "json, csv or plain")
      ->check(CLI::IsMember({"json", "csv", "plain"}));
  sub->add_option("--threads", cfg.threads, "worker threads (0 = hardware)");
}

void add_spec(CLI::App* sub, Flags& flags) {
  auto* text = sub->add_option("--spec", flags.spec, "specification text");
  auto* file = sub->add_option("--spec-file", flags.spec_file, "file holding the specification");
  text->excludes(file);
  file->excludes(text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Digit-exponent infinite products: evaluation and verification"};
  app.require_subcommand(1);

  RunConfig cfg;
  Flags flags;
  std::string method = "extrapolated";

  auto* eval = app.add_subcommand("eval", "evaluate a product specification");
  add_common(eval, cfg, flags);
  add_spec(eval, flags);
  eval->add_option("--method", method, "naive, abel or extrapolated")
      ->check(CLI::IsMember({"naive", "abel", "extrapolated"}));

  auto* verify = app.add_subcommand("verify", "verify one catalog claim");
  add_common(verify, cfg, flags);
  verify->add_option("--claim", cfg.claim, "claim name")->required();

  auto* verify_all = app.add_subcommand("verify-all", "verify the whole catalog");
  add_common(verify_all, cfg, flags);

  auto* claims = app.add_subcommand("claims", "list catalog claim names");

  auto* summatory = app.add_subcommand("summatory", "summatory function table of a sequence");
  add_common(summatory, cfg, flags);
  add_spec(summatory, flags);

  auto* estimate = app.add_subcommand("estimate", "estimate open constants (QR)");
  add_common(estimate, cfg, flags);
  estimate->add_option("target", cfg.estimate_target, "what to estimate")->required();

  auto* gamma = app.add_subcommand("gamma", "Gamma quotients and odd-base products");
  add_common(gamma, cfg, flags);
  auto* quotient = gamma->add_option("--quotient", cfg.quotient, "e.g. a=1|1,b=1/2|3/2");
  auto* odd = gamma->add_option("--odd-base", cfg.odd_base, "odd base B >= 3");
  quotient->excludes(odd);

  auto* digits = app.add_subcommand("digits", "base-B expansion and digit statistics");
  add_common(digits, cfg, flags);
  digits->add_option("--n", cfg.n, "integer")->required();
  digits->add_option("--base", cfg.base, "base B >= 2")->check(CLI::Range(2u, 36u));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return digiprod::exit_usage;
  }

  if (claims->parsed()) {
    for (const auto& c : digiprod::catalog()) std::cout << c.name << '\n';
    return digiprod::exit_ok;
  }

  const std::map<CLI::App*, Command> commands = {
      {eval, Command::eval},           {verify, Command::verify}, {verify_all, Command::verify_all},
      {summatory, Command::summatory}, {estimate, Command::estimate}, {gamma, Command::gamma},
      {digits, Command::digits}};
  for (const auto& [sub, command] : commands)
    if (sub->parsed()) cfg.command = command;

  if (!flags.output.empty())
    cfg.output = flags.output == "json" ? OutputFormat::json
                 : flags.output == "csv" ? OutputFormat::csv
                                         : OutputFormat::plain;
  cfg.method = method == "naive" ? digiprod::EvalMethod::naive
               : method == "abel" ? digiprod::EvalMethod::abel
                                  : digiprod::EvalMethod::extrapolated;

  try {
    if (!flags.spec_file.empty())
      cfg.seed_spec = digiprod::read_spec_file(flags.spec_file);
    else
      cfg.seed_spec = flags.spec;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return digiprod::exit_usage;
  }
  if ((cfg.command == Command::eval || cfg.command == Command::summatory) && cfg.seed_spec.empty()) {
    std::cerr << "error: --spec or --spec-file is required\n";
    return digiprod::exit_usage;
  }
  return digiprod::run(cfg, std::cout, std::cerr);
}
