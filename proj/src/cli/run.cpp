#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "prwalk/cli.hpp"

namespace prwalk::cli {

namespace {

void add_walk_options(CLI::App* sub, ExperimentConfig& cfg) {
  sub->add_option("--walk", cfg.walk, "transvection | one-column | pa-pra")->capture_default_str();
  sub->add_option("-n", cfg.n, "number of rows (transvection)")->capture_default_str();
  sub->add_option("-k", cfg.k, "columns (transvection)")->capture_default_str();
  sub->add_option("-r", cfg.r, "tuple length (one-column, pa-pra)")->capture_default_str();
  sub->add_option("-p", cfg.p, "prime")->capture_default_str();
  sub->add_option("-m", cfg.m, "Heisenberg rank, h = 2m")->capture_default_str();
  sub->add_option("--laziness", cfg.laziness, "holding probability");
  sub->add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();
  sub->add_option("--budget", cfg.budget, "state enumeration budget")->capture_default_str();
  sub->add_option("--epsilon", cfg.epsilon, "good-set parameter used to pick beta0")->capture_default_str();
  sub->add_option("--beta0", cfg.beta0, "explicit beta0 (0 derives it from epsilon)")->capture_default_str();
  sub->add_option("--out", cfg.out, "JSON output path (default stdout)");
}

void write_json(const ExperimentConfig& cfg, const json& doc, std::ostream& out) {
  if (cfg.out.empty()) {
    out << doc.dump(2) << '\n';
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f) throw InvalidArgument("cannot open output file " + cfg.out);
  f << doc.dump(2) << '\n';
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"prwalk: random walks on generating tuples"};
  app.set_config("--config", "", "TOML or INI config file; command line flags win");
  app.require_subcommand(1, 1);
  ExperimentConfig cfg;

  auto* sim = app.add_subcommand("simulate", "simulate trajectories and write observer CSV");
  add_walk_options(sim, cfg);
  sim->add_option("--steps", cfg.steps)->capture_default_str();
  sim->add_option("--trials", cfg.trials, "number of trajectories")->capture_default_str();
  sim->add_option("--stride", cfg.stride, "record every stride steps")->capture_default_str();
  sim->add_option("--csv", cfg.csv, "CSV path (default stdout); writes <csv>.meta.json alongside");

  auto* spec = app.add_subcommand("spectrum", "kernel spectrum and fibre-gap histograms");
  add_walk_options(spec, cfg);
  spec->add_option("--dense-budget", cfg.dense_budget)->capture_default_str();
  spec->add_option("--max-fibres", cfg.max_fibres)->capture_default_str();

  auto* mix = app.add_subcommand("mixing", "exact or lumped TV curves with counting lower bounds");
  add_walk_options(mix, cfg);
  mix->add_option("--t-max", cfg.t_max)->capture_default_str();
  mix->add_option("--mixing-eps", cfg.mixing_eps)->capture_default_str();
  mix->add_option("--trials", cfg.trials, "Monte Carlo trajectories (lumped method)")->capture_default_str();
  mix->add_option("--stride", cfg.stride, "Monte Carlo time spacing")->capture_default_str();

  auto* bd = app.add_subcommand("birthdeath", "support chain tables, hitting times, crossings, rate constants");
  add_walk_options(bd, cfg);
  bd->add_option("--alpha", cfg.alpha, "hitting target is ceil(alpha r)")->capture_default_str();
  bd->add_option("--a0", cfg.a0, "lower crossing level (0: r/5)");
  bd->add_option("--a1", cfg.a1, "upper crossing level (0: 3r/5)");

  auto* rep = app.add_subcommand("repcheck", "representation axioms and projection norms");
  add_walk_options(rep, cfg);
  rep->add_option("--lambda", cfg.lambdas, "central characters (default all)");
  rep->add_option("--dense-budget", cfg.dense_budget, "matrix dimension budget")->capture_default_str();

  auto* pipe = app.add_subcommand("pipeline", "good-set mixing bound evaluated exactly");
  add_walk_options(pipe, cfg);
  pipe->add_option("--good-set", cfg.good_set, "good | full")->capture_default_str();
  pipe->add_option("--t-star", cfg.t_star)->capture_default_str();
  pipe->add_option("-L", cfg.L, "window length (0: chosen from t_conf)")->capture_default_str();
  pipe->add_option("-A", cfg.A, "LSI constant (negative: 1.05 x numeric)")->capture_default_str();
  pipe->add_option("--s-span", cfg.s_span)->capture_default_str();
  pipe->add_option("--lsi-restarts", cfg.lsi_restarts)->capture_default_str();
  pipe->add_option("--lsi-cap", cfg.lsi_cap)->capture_default_str();
  pipe->add_option("--dense-budget", cfg.dense_budget)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kOk;
    }
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  }

  CLI::App* chosen = app.get_subcommands().front();
  cfg.command = chosen->get_name();
  if (chosen->get_option("--laziness")->count() == 0)
    cfg.laziness = (cfg.command == "mixing" || cfg.command == "pipeline") ? 0.5 : 0.0;

  try {
    cfg.validate();
    const json config = cfg.to_json();
    if (cfg.command == "simulate") {
      json summary;
      if (cfg.csv.empty()) {
        summary = cmd_simulate(cfg, out);
      } else {
        std::ofstream f(cfg.csv, std::ios::binary);
        if (!f) throw InvalidArgument("cannot open CSV file " + cfg.csv);
        summary = cmd_simulate(cfg, f);
        std::ofstream meta(cfg.csv + ".meta.json", std::ios::binary);
        if (!meta) throw InvalidArgument("cannot open sidecar file " + cfg.csv + ".meta.json");
        meta << envelope(cfg.command, cfg.seed, config, summary).dump(2) << '\n';
      }
      if (!cfg.out.empty()) write_json(cfg, envelope(cfg.command, cfg.seed, config, summary), out);
      return kOk;
    }
    json result;
    if (cfg.command == "spectrum") result = cmd_spectrum(cfg);
    else if (cfg.command == "mixing") result = cmd_mixing(cfg);
    else if (cfg.command == "birthdeath") result = cmd_birthdeath(cfg);
    else if (cfg.command == "repcheck") result = cmd_repcheck(cfg);
    else result = cmd_pipeline(cfg);
    write_json(cfg, envelope(cfg.command, cfg.seed, config, std::move(result)), out);
    return kOk;
  } catch (const BudgetExceeded& e) {
    err << "budget refusal: " << e.what() << '\n';
    return kBudgetRefusal;
  } catch (const InvalidArgument& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const DimensionMismatch& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const UnsupportedCharacteristic& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "invariant violation: " << e.what() << '\n';
    return kInvariantViolation;
  }
}

}  // namespace prwalk::cli
