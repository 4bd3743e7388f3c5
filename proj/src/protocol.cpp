#include "weakfock/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "weakfock/errors.hpp"

namespace weakfock {

std::uint64_t ProtocolConfig::shots_x() const {
  return static_cast<std::uint64_t>(std::llround(basis_split * static_cast<double>(shots)));
}

void ProtocolConfig::validate() const {
  if (n_max < 1 || n_max > kMaxTruncation) {
    throw ConfigError("n_max must be in [1, " + std::to_string(kMaxTruncation) + "]");
  }
  if (true_state.n_max() != n_max) throw ConfigError("true_state truncation differs from n_max");
  if (target_n < 0 || target_n > n_max) throw ConfigError("target_n outside [0, n_max]");
  if (!(chi > 0.0)) throw ConfigError("chi must be positive");
  if (!(gamma >= 0.0) || !(tau > 0.0)) throw ConfigError("gamma must be >= 0 and tau > 0");
  if (!std::isfinite(delta1) || !std::isfinite(phi)) throw ConfigError("delta1 and phi must be finite");
  if (!(basis_split >= 0.0 && basis_split <= 1.0)) throw ConfigError("basis_split must be in [0, 1]");
  if (mode == RunMode::sampled && shots < 1) throw ConfigError("shots must be >= 1 in sampled mode");
  if (workers < 1) throw ConfigError("workers must be >= 1");
}

JointState run_weak_interaction(const ProtocolConfig& config) {
  config.validate();
  const JointState init = tensor(config.true_state, QubitState::ground(), QubitState::ground());
  if (config.drive == DriveModel::first_order) {
    const CMatrix m = first_order_drive(config.gamma_tau(), config.target_n, config.n_max);
    return JointState(apply_matrix(m, init.amps(), config.n_max, Subsystem::cavity_meter), config.n_max);
  }
  DispersiveDriveParams p;
  p.delta1 = config.delta1;
  p.chi = config.chi;
  p.gamma = config.gamma;
  p.omega = DispersiveDriveParams::resonant_omega(config.delta1, config.chi, config.target_n);
  p.t = config.tau;
  return apply(selective_drive_propagator(p, config.n_max, config.frame), init, Subsystem::cavity_meter);
}

JointState run_postselection_circuit(const JointState& state, double phi) {
  const JointState after_jc = apply(jc_propagator(phi, state.n_max()), state, Subsystem::cavity_postselect);
  return apply(ry_half_pi(), after_jc, Subsystem::postselect);
}

JointState final_state(const ProtocolConfig& config) {
  return run_postselection_circuit(run_weak_interaction(config), config.phi);
}

ConditionalAverages conditional_averages_exact(const ProtocolConfig& config) {
  const JointState s = final_state(config);
  const OutcomeTable tx = outcome_distribution(s, MeterBasis::x);
  const OutcomeTable ty = outcome_distribution(s, MeterBasis::y);
  const double pg = tx.ps_marginal(Level::g);
  if (pg < 1e-12) throw DegeneratePostSelection("post-selection probability below 1e-12");
  ConditionalAverages a;
  a.avg_sx = (tx(0, Level::g) - tx(1, Level::g)) / pg;
  a.avg_sy = (ty(0, Level::g) - ty(1, Level::g)) / pg;
  a.ps_success_rate = pg;
  a.uncond_sx = tx.meter_marginal(0) - tx.meter_marginal(1);
  a.uncond_sy = ty.meter_marginal(0) - ty.meter_marginal(1);
  return a;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

namespace {

std::uint64_t chunk_seed(std::uint64_t master, int target, int basis, std::uint64_t chunk) {
  std::uint64_t h = splitmix64(master);
  h = splitmix64(h ^ static_cast<std::uint64_t>(target));
  h = splitmix64(h ^ static_cast<std::uint64_t>(basis));
  return splitmix64(h ^ chunk);
}

// Cumulative table over the four outcomes in order (+,g), (+,e), (-,g), (-,e).
std::array<double, 4> cumulative(const OutcomeTable& t) {
  const double total = t.total();
  std::array<double, 4> c{};
  double acc = 0.0;
  for (int k = 0; k < 4; ++k) {
    acc += t.p[k / 2][k % 2] / total;
    c[k] = acc;
  }
  c[3] = 1.0;
  return c;
}

OutcomeCounts draw_chunk(const std::array<double, 4>& cdf, std::uint64_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  OutcomeCounts counts{};
  for (std::uint64_t i = 0; i < n; ++i) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    int k = 0;
    while (k < 3 && u >= cdf[k]) ++k;
    ++counts[k / 2][k % 2];
  }
  return counts;
}

OutcomeCounts sample_setting(const std::array<double, 4>& cdf, std::uint64_t shots, std::uint64_t master,
                             int target, int basis, int workers) {
  const std::uint64_t n_chunks = (shots + kShotChunk - 1) / kShotChunk;
  std::vector<OutcomeCounts> per_chunk(n_chunks);
  auto work = [&](std::uint64_t first, std::uint64_t stride) {
    for (std::uint64_t c = first; c < n_chunks; c += stride) {
      const std::uint64_t n = std::min(kShotChunk, shots - c * kShotChunk);
      per_chunk[c] = draw_chunk(cdf, n, chunk_seed(master, target, basis, c));
    }
  };
  const auto n_threads = static_cast<std::uint64_t>(
      std::max<std::int64_t>(1, std::min<std::int64_t>(workers, static_cast<std::int64_t>(n_chunks))));
  if (n_threads <= 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (std::uint64_t w = 0; w < n_threads; ++w) pool.emplace_back(work, w, n_threads);
    for (auto& t : pool) t.join();
  }
  OutcomeCounts total{};
  for (const auto& c : per_chunk) {
    for (int m = 0; m < 2; ++m) {
      for (int p = 0; p < 2; ++p) total[m][p] += c[m][p];
    }
  }
  return total;
}

struct SettingStats {
  double cond = 0.0, cond_se = 0.0, uncond = 0.0, uncond_se = 0.0;
  std::uint64_t n_g = 0;
};

SettingStats stats_of(const OutcomeCounts& c, std::uint64_t shots, const char* name) {
  SettingStats s;
  s.n_g = c[0][0] + c[1][0];
  if (s.n_g == 0) {
    throw DegeneratePostSelection(std::string("no post-selected shots in the ") + name + " setting");
  }
  const double ng = static_cast<double>(s.n_g);
  s.cond = (static_cast<double>(c[0][0]) - static_cast<double>(c[1][0])) / ng;
  s.cond_se = std::sqrt(std::max(0.0, 1.0 - s.cond * s.cond) / ng);
  const double n = static_cast<double>(shots);
  s.uncond = (static_cast<double>(c[0][0] + c[0][1]) - static_cast<double>(c[1][0] + c[1][1])) / n;
  s.uncond_se = std::sqrt(std::max(0.0, 1.0 - s.uncond * s.uncond) / n);
  return s;
}

}  // namespace

ShotBatch sample_shots(const ProtocolConfig& config) {
  config.validate();
  if (config.shots < 1) throw ConfigError("shots must be >= 1");
  const JointState s = final_state(config);
  ShotBatch b;
  b.seed = config.seed;
  b.shots_x = config.shots_x();
  b.shots_y = config.shots_y();
  b.x = sample_setting(cumulative(outcome_distribution(s, MeterBasis::x)), b.shots_x, config.seed,
                       config.target_n, 0, config.workers);
  b.y = sample_setting(cumulative(outcome_distribution(s, MeterBasis::y)), b.shots_y, config.seed,
                       config.target_n, 1, config.workers);
  return b;
}

ConditionalAverages averages_from_batch(const ShotBatch& batch) {
  const SettingStats sx = stats_of(batch.x, batch.shots_x, "X");
  const SettingStats sy = stats_of(batch.y, batch.shots_y, "Y");
  ConditionalAverages a;
  a.avg_sx = sx.cond;
  a.stderr_sx = sx.cond_se;
  a.avg_sy = sy.cond;
  a.stderr_sy = sy.cond_se;
  const double n = static_cast<double>(batch.total());
  const double p = static_cast<double>(sx.n_g + sy.n_g) / n;
  a.ps_success_rate = p;
  a.stderr_ps = std::sqrt(p * (1.0 - p) / n);
  a.uncond_sx = sx.uncond;
  a.stderr_uncond_sx = sx.uncond_se;
  a.uncond_sy = sy.uncond;
  a.stderr_uncond_sy = sy.uncond_se;
  return a;
}

SampledAverages conditional_averages_sampled(const ProtocolConfig& config) {
  SampledAverages out;
  out.batch = sample_shots(config);
  out.averages = averages_from_batch(out.batch);
  return out;
}

CMatrix conditioned_meter_density(const ProtocolConfig& config) {
  const JointState s = final_state(config);
  CMatrix rho = CMatrix::Zero(2, 2);
  for (int n = 0; n <= s.n_max(); ++n) {
    Eigen::Vector2cd v(s.amp(n, Level::g, Level::g), s.amp(n, Level::e, Level::g));
    rho += v * v.adjoint();
  }
  const double tr = rho.trace().real();
  if (tr < 1e-12) throw DegeneratePostSelection("post-selection probability below 1e-12");
  return rho / tr;
}

}  // namespace weakfock
