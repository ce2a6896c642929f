#include "nullcalc/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

using namespace nullcalc::cli;

namespace {

int emit(const CommandResult& r) {
  std::cout << r.out;
  std::cerr << r.err;
  return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nullcalc: frame algebra, signature bookkeeping and energy-estimate replay"};
  app.require_subcommand(1);
  app.fallthrough();

  CliConfig cfg;
  if (const char* s = std::getenv("NULLCALC_SEED")) {
    try {
      cfg.seed = std::stoull(s);
    } catch (const std::exception&) {
      std::cerr << "NULLCALC_SEED is not an unsigned integer: " << s << "\n";
      return 2;
    }
  }
  app.add_option("--seed", cfg.seed, "RNG seed (default 42, or $NULLCALC_SEED)");
  app.add_option("--trials", cfg.trials, "random draws per identity family");
  app.add_option("--tol", cfg.tol, "residual tolerance");
  app.add_flag("--json", cfg.json, "machine-readable output");

  auto* ident = app.add_subcommand("check-identities", "randomized frame and Weyl identity checks");

  std::string expr;
  std::optional<std::string> norm;
  auto* classify = app.add_subcommand("classify", "signature, scale and anomaly class of a term");
  classify->add_option("expr", expr, "schematic term, e.g. \"trchib0 * alpha\"")->required();
  classify->add_option("--norm", norm, "norm wrapper, e.g. \"||.||_{L2sc(H)}\"");

  auto* list = app.add_subcommand("list-equations", "registered structure, Bianchi and commutator equations");
  list->add_option("--equation", cfg.equations, "restrict to these ids");
  auto* check = app.add_subcommand("check-equations", "signature consistency of the registry");
  check->add_option("--equation", cfg.equations, "restrict to these ids");

  bool use_auto = false;
  auto* rep = app.add_subcommand("replay", "replay the bound derivations of a campaign");
  rep->add_option("campaign,--campaign", cfg.campaigns, "nab4_alpha, nab3_alphab, outgoing, incoming (default all)");
  auto* scripted = rep->add_flag("--scripted", "follow the recorded derivation (default)");
  rep->add_flag("--auto", use_auto, "bounded automatic search")->excludes(scripted);

  auto* canc = app.add_subcommand("verify-cancellation", "exact J222 cancellation check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*ident) return emit(cmd_check_identities(cfg));
    if (*classify) return emit(cmd_classify(expr, norm, cfg));
    if (*list) return emit(cmd_list_equations(cfg));
    if (*check) return emit(cmd_check_equations(cfg));
    if (*rep) return emit(cmd_replay(cfg, !use_auto));
    if (*canc) return emit(cmd_verify_cancellation(cfg));
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
