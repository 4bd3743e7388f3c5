#pragma once

// Config parsing, run orchestration and result files for the command-line tool.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "weakfock/protocol.hpp"
#include "weakfock/tomography.hpp"

namespace weakfock::cli {

using json = nlohmann::ordered_json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitOther = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitDegenerate = 3;
inline constexpr int kExitNonConvergence = 4;

inline constexpr const char* kCodeVersion = "weakfock 0.1.0";

struct RunConfig {
  int n_max = 5;
  CavityState true_state = CavityState::vacuum(1);
  double chi = 1.0;
  double gamma = 0.02;
  double tau = 3.141592653589793;
  double delta1 = 10.0;
  std::optional<double> phi;  // empty = auto
  std::uint64_t shots = 1000000;
  std::uint64_t seed = 1;
  RunMode mode = RunMode::sampled;
  double basis_split = 0.5;
  PostSelectionModel model = PostSelectionModel::effect;
  int workers = 1;
  json raw;  // the document as given

  double resolved_phi() const;
};

/// "vacuum" | "fock:k" | "coherent:re,im" | "cat:re,im", truncated at n_max
/// and renormalized. Throws ConfigError.
CavityState parse_preset(const std::string& preset, int n_max);

/// Accepts a config document or a manifest (config under "config").
/// Throws ConfigError on any invalid or unknown field.
RunConfig parse_config(const json& doc);
RunConfig load_config(const std::filesystem::path& file);

struct TargetRow {
  int n = 0;
  WeakValueEstimate w;
  cplx oracle{0.0};           // post-selected-state ratio
  cplx effect_oracle{0.0};    // what the meter records
  PopulationEstimate population;
  double ps_success = 0.0;
  double ps_stderr = 0.0;
};

struct RunResult {
  double phi = 0.0;
  std::vector<int> phi_violations;
  std::vector<TargetRow> rows;
  ReconstructionResult recon;
  double fidelity = 0.0;
  double sum_rule_dev = 0.0;         // of the estimates
  double oracle_sum_rule_dev = 0.0;  // of the post-selected-state oracle
  double wv_rms_error = 0.0;  // against the effect oracle
  double wv_max_z = 0.0;      // largest |estimate - effect oracle| / stderr, sampled only
  double ps_success = 0.0;
};

/// Runs every target n = 0..n_max in the given mode and reconstructs.
RunResult execute(const RunConfig& cfg, RunMode mode);

ReconstructionOptions reconstruction_options(const RunConfig& cfg, const std::vector<TargetRow>& rows);

std::string weak_values_csv(const RunResult& r);
json reconstruction_json(const ReconstructionResult& rec, const CavityState* truth);
json manifest_json(const RunConfig& cfg, const RunResult& r, std::optional<std::string> timestamp);

/// Parses a weak-values CSV written by weak_values_csv (header required).
std::vector<TargetRow> read_weak_values_csv(const std::string& text);

std::string selectivity_csv(double chi, double gamma, double t, int m_max);

enum class SweepAxis { shots, gamma_tau, phi };
SweepAxis parse_axis(const std::string& s);
std::string sweep_csv(const RunConfig& cfg, SweepAxis axis, const std::vector<double>& values, RunMode mode);

/// Output directory: explicit flag, else $WEAKFOCK_OUT_DIR, else ".".
std::filesystem::path output_dir(const std::optional<std::string>& flag);

void write_file(const std::filesystem::path& p, const std::string& text);

/// Subcommand bodies; they map exceptions to exit codes and print errors to stderr.
int cmd_simulate(const std::filesystem::path& config, const std::filesystem::path& out, bool force_exact,
                 bool record_time);
int cmd_reconstruct(const std::filesystem::path& csv, const std::filesystem::path& config,
                    const std::filesystem::path& out);
int cmd_selectivity(double chi, double gamma, double t, int m_max, const std::optional<std::filesystem::path>& out);
int cmd_sweep(const std::filesystem::path& config, const std::string& axis, const std::vector<double>& values,
              bool exact, const std::filesystem::path& out);

}  // namespace weakfock::cli
