#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "weakfock/cli.hpp"
#include "weakfock/errors.hpp"
#include "weakfock/oracle.hpp"

using namespace weakfock;
using namespace weakfock::cli;

namespace {

json fock1(std::uint64_t shots = 200000) {
  return json{{"n_max", 3}, {"state", {{"preset", "fock:1"}}}, {"shots", shots}, {"seed", 7}};
}

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("weakfock_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST(Preset, Parsing) {
  EXPECT_NEAR(fidelity(parse_preset("vacuum", 3), CavityState::vacuum(3)), 1.0, 1e-15);
  EXPECT_NEAR(fidelity(parse_preset("fock:2", 3), CavityState::fock(2, 3)), 1.0, 1e-15);
  const CavityState coh = parse_preset("coherent:0.5,0", 10);
  EXPECT_NEAR(std::abs(coh[1] / coh[0]), 0.5, 1e-12);
  EXPECT_NEAR(std::abs(coh[2] / coh[0]), 0.25 / std::sqrt(2.0), 1e-12);
  const CavityState cat = parse_preset("cat:1,0", 6);
  for (int n = 1; n <= 6; n += 2) EXPECT_NEAR(std::abs(cat[n]), 0.0, 1e-15);
  EXPECT_THROW(parse_preset("fock:4", 3), ConfigError);
  EXPECT_THROW(parse_preset("fock:1.5", 3), ConfigError);
  EXPECT_THROW(parse_preset("squeezed:1", 3), ConfigError);
  EXPECT_THROW(parse_preset("coherent:1", 3), ConfigError);
}

TEST(Config, ParsesAndRejects) {
  RunConfig c = parse_config(fock1());
  EXPECT_EQ(c.n_max, 3);
  EXPECT_EQ(c.seed, 7u);
  EXPECT_FALSE(c.phi.has_value());
  EXPECT_NEAR(c.resolved_phi(), default_phi(3, PostSelectionModel::effect), 1e-15);

  json j = fock1();
  j["shots"] = 0;
  EXPECT_THROW(parse_config(j), ConfigError);
  j = fock1();
  j["gamma"] = 0.0;
  EXPECT_THROW(parse_config(j), ConfigError);
  j = fock1();
  j["basis_split"] = 1.0;
  EXPECT_THROW(parse_config(j), ConfigError);
  j = fock1();
  j["colour"] = "red";
  EXPECT_THROW(parse_config(j), ConfigError);
  j = fock1();
  j["state"] = {{"amps", json::array({json::array({0, 0})})}};
  EXPECT_THROW(parse_config(j), ConfigError);
  j = fock1();
  j["mode"] = "fast";
  EXPECT_THROW(parse_config(j), ConfigError);
  j = fock1();
  j["phi"] = "big";
  EXPECT_THROW(parse_config(j), ConfigError);
  j = fock1();
  j.erase("n_max");
  EXPECT_THROW(parse_config(j), ConfigError);

  j = fock1();
  j["state"] = {{"amps", json::array({json::array({1, 0}), json::array({0, 1})})}};
  j["phi"] = 0.4;
  c = parse_config(j);
  EXPECT_NEAR(std::abs(c.true_state[1]), 1 / std::sqrt(2.0), 1e-15);
  EXPECT_EQ(c.resolved_phi(), 0.4);
}

TEST(Execute, ExactFockRecovered) {
  const RunResult r = execute(parse_config(fock1()), RunMode::exact);
  ASSERT_EQ(r.rows.size(), 4u);
  EXPECT_GT(r.fidelity, 0.999);
  EXPECT_TRUE(r.recon.converged);
  EXPECT_LT(r.oracle_sum_rule_dev, 1e-12);
}

TEST(Execute, SampledIsDeterministic) {
  const RunConfig c = parse_config(fock1());
  const RunResult a = execute(c, RunMode::sampled);
  const RunResult b = execute(c, RunMode::sampled);
  EXPECT_EQ(weak_values_csv(a), weak_values_csv(b));
  EXPECT_EQ(manifest_json(c, a, std::nullopt).dump(), manifest_json(c, b, std::nullopt).dump());
}

TEST(Csv, RoundTrip) {
  const RunResult r = execute(parse_config(fock1()), RunMode::sampled);
  const auto rows = read_weak_values_csv(weak_values_csv(r));
  ASSERT_EQ(rows.size(), r.rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].n, r.rows[i].n);
    EXPECT_EQ(rows[i].w.value, r.rows[i].w.value);
    EXPECT_EQ(rows[i].w.stderr_re, r.rows[i].w.stderr_re);
    EXPECT_EQ(rows[i].population.value, r.rows[i].population.value);
  }
  EXPECT_THROW(read_weak_values_csv(""), ConfigError);
  EXPECT_THROW(read_weak_values_csv("n,w_re\n0,1\n"), ConfigError);
}

TEST(Manifest, ReproducesRun) {
  const RunConfig c = parse_config(fock1());
  const RunResult r = execute(c, RunMode::sampled);
  const json m = manifest_json(c, r, std::nullopt);
  EXPECT_EQ(m.at("code_version"), kCodeVersion);
  EXPECT_EQ(m.at("master_seed"), 7);
  EXPECT_FALSE(m.contains("timestamp"));
  const RunConfig again = parse_config(m);
  EXPECT_EQ(weak_values_csv(execute(again, RunMode::sampled)), weak_values_csv(r));
}

TEST(Selectivity, CsvShape) {
  const std::string csv = selectivity_csv(1.0, 0.02, 3.141592653589793, 4);
  std::istringstream is(csv);
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "m,epsilon,gamma_tilde,P_e,bound,P_e_propagator");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  EXPECT_EQ(rows, 5);
  EXPECT_THROW(selectivity_csv(1.0, 0.02, 1.0, 0), ConfigError);
}

TEST(Sweep, AxisParsing) {
  EXPECT_EQ(parse_axis("shots"), SweepAxis::shots);
  EXPECT_EQ(parse_axis("gamma_tau"), SweepAxis::gamma_tau);
  EXPECT_EQ(parse_axis("phi"), SweepAxis::phi);
  EXPECT_THROW(parse_axis("chi"), ConfigError);
  const std::string csv = sweep_csv(parse_config(fock1()), SweepAxis::gamma_tau, {0.05, 0.1}, RunMode::exact);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "value,fidelity,wv_rms_error,wv_stderr_mean,ps_success,converged,phi_violations,status,wall_time_s");
}

TEST(Commands, ExitCodes) {
  const auto dir = scratch("cmds");
  const auto cfg = dir / "c.json";
  {
    std::ofstream(cfg) << fock1().dump();
  }
  EXPECT_EQ(cmd_simulate(cfg, dir, false, false), kExitOk);
  EXPECT_TRUE(std::filesystem::exists(dir / "weak_values.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "reconstruction.json"));
  const std::string first = slurp(dir / "manifest.json");
  EXPECT_EQ(cmd_simulate(dir / "manifest.json", dir, false, false), kExitOk);
  EXPECT_EQ(slurp(dir / "manifest.json"), first);
  EXPECT_EQ(cmd_reconstruct(dir / "weak_values.csv", cfg, dir), kExitOk);

  const auto bad = dir / "bad.json";
  json j = fock1();
  j["shots"] = 0;
  {
    std::ofstream(bad) << j.dump();
  }
  EXPECT_EQ(cmd_simulate(bad, dir, false, false), kExitConfig);
  EXPECT_EQ(cmd_simulate(dir / "missing.json", dir, false, false), kExitConfig);

  // (|0> + i|1>)/sqrt2 at phi = pi/2 never post-selects.
  const auto deg = dir / "deg.json";
  j = json{{"n_max", 1},
           {"state", {{"amps", json::array({json::array({1, 0}), json::array({0, 1})})}}},
           {"phi", 1.5707963267948966},
           {"gamma", 1e-10},
           {"mode", "exact"}};
  {
    std::ofstream(deg) << j.dump();
  }
  EXPECT_EQ(cmd_simulate(deg, dir, false, false), kExitDegenerate);
}

TEST(OutputDir, Precedence) {
  ::setenv("WEAKFOCK_OUT_DIR", "/tmp/env_out", 1);
  EXPECT_EQ(output_dir(std::string("/x")), std::filesystem::path("/x"));
  EXPECT_EQ(output_dir(std::nullopt), std::filesystem::path("/tmp/env_out"));
  ::unsetenv("WEAKFOCK_OUT_DIR");
  EXPECT_EQ(output_dir(std::nullopt), std::filesystem::path("."));
}
