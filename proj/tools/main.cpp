#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "weakfock/cli.hpp"

namespace wc = weakfock::cli;

int main(int argc, char** argv) {
  CLI::App app{"Weak-value direct tomography of a cavity Fock state"};
  app.require_subcommand(1);
  app.fallthrough();
  std::optional<std::string> out_flag;
  app.add_option("-o,--out", out_flag, "output directory (default: $WEAKFOCK_OUT_DIR or .)");

  std::string config;
  bool record_time = false;
  auto* sim = app.add_subcommand("simulate", "sampled run over all targets, then reconstruct");
  sim->add_option("config", config, "config or manifest JSON")->required();
  sim->add_flag("--record-time", record_time, "add a wall-clock timestamp to the manifest");

  auto* exact = app.add_subcommand("exact", "infinite-ensemble run (no sampling)");
  exact->add_option("config", config, "config or manifest JSON")->required();
  exact->add_flag("--record-time", record_time, "add a wall-clock timestamp to the manifest");

  double chi = 1.0, gamma = 0.02, t = 3.141592653589793;
  int m_max = 8;
  auto* sel = app.add_subcommand("selectivity", "off-resonant excitation table");
  sel->add_option("--chi", chi, "dispersive shift")->capture_default_str();
  sel->add_option("--gamma", gamma, "drive strength")->capture_default_str();
  sel->add_option("--t", t, "drive duration")->capture_default_str();
  sel->add_option("--m-max", m_max, "largest detuning index")->capture_default_str();
  bool sel_stdout = false;
  sel->add_flag("--stdout", sel_stdout, "print instead of writing selectivity.csv");

  std::string axis;
  std::vector<double> values;
  bool sweep_exact = false;
  auto* sweep = app.add_subcommand("sweep", "fidelity and error along one axis");
  sweep->add_option("config", config, "config JSON")->required();
  sweep->add_option("--axis", axis, "shots | gamma_tau | phi")->required();
  sweep->add_option("--values", values, "axis values")->required()->delimiter(',');
  sweep->add_flag("--exact", sweep_exact, "use exact averages instead of sampling");

  std::string csv;
  auto* rec = app.add_subcommand("reconstruct", "reconstruct from a weak-values CSV");
  rec->add_option("csv", csv, "weak_values.csv")->required();
  rec->add_option("config", config, "config JSON (phi, model, n_max)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? wc::kExitOk : wc::kExitConfig;
  }

  const auto out = wc::output_dir(out_flag);
  if (sim->parsed()) return wc::cmd_simulate(config, out, false, record_time);
  if (exact->parsed()) return wc::cmd_simulate(config, out, true, record_time);
  if (sel->parsed()) {
    std::optional<std::filesystem::path> file;
    if (!sel_stdout) file = out / "selectivity.csv";
    return wc::cmd_selectivity(chi, gamma, t, m_max, file);
  }
  if (sweep->parsed()) return wc::cmd_sweep(config, axis, values, sweep_exact, out);
  if (rec->parsed()) return wc::cmd_reconstruct(csv, config, out);
  return wc::kExitOther;
}
