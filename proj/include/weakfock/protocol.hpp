#pragma once

// One run of the measurement: weak selective drive on the meter, the
// post-selection circuit, then exact or sampled meter statistics
// conditioned on the post-selection qubit being found in |g>.

#include <array>
#include <cstdint>

#include "weakfock/dynamics.hpp"
#include "weakfock/hilbert.hpp"

namespace weakfock {

enum class RunMode { sampled, exact };
enum class DriveModel { exact, first_order };

struct ProtocolConfig {
  int n_max = 1;
  CavityState true_state = CavityState::vacuum(1);
  double chi = 1.0;
  double gamma = 0.02;
  double tau = 3.141592653589793;
  double delta1 = 10.0;
  double phi = 0.0;
  int target_n = 0;
  std::uint64_t shots = 1000000;  // per target, split over the X and Y settings
  std::uint64_t seed = 1;
  RunMode mode = RunMode::sampled;
  double basis_split = 0.5;  // fraction of shots measured in X
  DriveModel drive = DriveModel::exact;
  DriveFrame frame = DriveFrame::interaction;
  int workers = 1;

  double gamma_tau() const { return gamma * tau; }
  std::uint64_t shots_x() const;
  std::uint64_t shots_y() const { return shots - shots_x(); }
  /// Throws ConfigError on any violated invariant.
  void validate() const;
};

using OutcomeCounts = std::array<std::array<std::uint64_t, 2>, 2>;  // [meter +/-][ps g/e]

struct ShotBatch {
  OutcomeCounts x{};
  OutcomeCounts y{};
  std::uint64_t shots_x = 0;
  std::uint64_t shots_y = 0;
  std::uint64_t seed = 0;

  std::uint64_t total() const { return shots_x + shots_y; }
};

struct ConditionalAverages {
  double avg_sx = 0.0;
  double avg_sy = 0.0;
  double stderr_sx = 0.0;
  double stderr_sy = 0.0;
  double ps_success_rate = 0.0;
  double stderr_ps = 0.0;
  // Meter averages over all shots, post-selection ignored. For the
  // resonant block these carry |c_n|^2.
  double uncond_sx = 0.0;
  double uncond_sy = 0.0;
  double stderr_uncond_sx = 0.0;
  double stderr_uncond_sy = 0.0;
};

struct SampledAverages {
  ConditionalAverages averages;
  ShotBatch batch;
};

/// tensor(true_state, |g>, |g>) followed by the selective drive resonant
/// with target_n for duration tau on cavity (x) meter.
JointState run_weak_interaction(const ProtocolConfig& config);

/// JC coupling on cavity (x) ps, then Ry(pi/2) on ps. No measurement.
JointState run_postselection_circuit(const JointState& state, double phi);

/// Weak interaction followed by the post-selection circuit.
JointState final_state(const ProtocolConfig& config);

/// Infinite-ensemble averages. Throws DegeneratePostSelection if P(g) < 1e-12.
ConditionalAverages conditional_averages_exact(const ProtocolConfig& config);

/// Draws the four-outcome record for each shot. Deterministic in
/// (config, seed) and independent of the worker count.
ShotBatch sample_shots(const ProtocolConfig& config);

/// Averages from a batch. Throws DegeneratePostSelection if either setting
/// has no post-selected shots.
ConditionalAverages averages_from_batch(const ShotBatch& batch);

SampledAverages conditional_averages_sampled(const ProtocolConfig& config);

/// Meter density matrix conditioned on ps = g, cavity traced out.
CMatrix conditioned_meter_density(const ProtocolConfig& config);

/// Shot-chunk size used for sub-seeding.
inline constexpr std::uint64_t kShotChunk = 1u << 16;

/// splitmix64 finalizer; used to derive chunk sub-seeds.
std::uint64_t splitmix64(std::uint64_t x);

}  // namespace weakfock
