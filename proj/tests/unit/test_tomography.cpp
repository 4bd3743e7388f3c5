#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "weakfock/oracle.hpp"
#include "weakfock/protocol.hpp"
#include "weakfock/tomography.hpp"

using namespace weakfock;
using namespace std::complex_literals;
using std::numbers::pi;

namespace {

std::vector<WeakValueEstimate> exact_estimates(const std::vector<cplx>& w, double se = 0.0) {
  std::vector<WeakValueEstimate> out;
  for (std::size_t n = 0; n < w.size(); ++n) {
    WeakValueEstimate e;
    e.n = static_cast<int>(n);
    e.value = w[n];
    e.stderr_re = e.stderr_im = se;
    e.gamma_tau = 0.05;
    out.push_back(e);
  }
  return out;
}

CavityState random_state(int n_max, std::mt19937_64& rng, double min_abs) {
  for (;;) {
    CavityState s = haar_random_state(n_max, rng);
    if (s.amps().cwiseAbs().minCoeff() >= min_abs) return s;
  }
}

}  // namespace

TEST(WeakValueFromAverages, Examples) {
  ConditionalAverages a;
  a.avg_sx = 0.0;
  a.avg_sy = -0.1;
  auto w = weak_value_from_averages(a, 0.05, 3);
  EXPECT_EQ(w.n, 3);
  EXPECT_NEAR(std::abs(w.value - 1.0), 0.0, 1e-15);
  a.avg_sx = 0.1;
  a.avg_sy = 0.0;
  a.stderr_sx = 0.01;
  a.stderr_sy = 0.02;
  w = weak_value_from_averages(a, 0.05);
  EXPECT_NEAR(std::abs(w.value - 1.0i), 0.0, 1e-15);
  EXPECT_NEAR(w.stderr_im, 0.1, 1e-15);
  EXPECT_NEAR(w.stderr_re, 0.2, 1e-15);
  EXPECT_THROW(weak_value_from_averages(a, 0.0), std::invalid_argument);
  EXPECT_THROW(weak_value_from_averages(a, -0.1), std::invalid_argument);
}

TEST(WeakValueFromAverages, PopulationEstimate) {
  ConditionalAverages a;
  a.uncond_sy = -std::sin(0.1) * 0.3;
  a.stderr_uncond_sy = 1e-3;
  const auto p = population_from_averages(a, 0.05);
  EXPECT_NEAR(p.value, 0.3, 1e-14);
  EXPECT_NEAR(p.stderr, 1e-3 / std::sin(0.1), 1e-15);
}

TEST(SumCheck, ExactAndErrors) {
  std::mt19937_64 rng(3);
  const CavityState psi = haar_random_state(4, rng);
  EXPECT_LT(exact_weak_value_sum_check(exact_estimates(oracle_weak_values(psi, 0.7))), 1e-12);
  auto est = exact_estimates(oracle_weak_values(psi, 0.7));
  est.erase(est.begin() + 1);
  EXPECT_THROW(exact_weak_value_sum_check(est), std::invalid_argument);
  est = exact_estimates(oracle_weak_values(psi, 0.7));
  est[1].n = 0;
  EXPECT_THROW(exact_weak_value_sum_check(est), std::invalid_argument);
}

TEST(RelationMatrix, ReproducesOracles) {
  std::mt19937_64 rng(5);
  const CavityState psi = haar_random_state(5, rng);
  const double phi = 0.61;
  const auto jc = jc_coefficients(phi, 5);
  const auto wp = model_weak_values(psi.amps(), relation_matrix(PostSelectionModel::pure, jc, 5));
  const auto we = model_weak_values(psi.amps(), relation_matrix(PostSelectionModel::effect, jc, 5));
  for (int n = 0; n <= 5; ++n) {
    EXPECT_LT(std::abs(wp[n] - oracle_weak_value(psi, phi, n).value), 1e-12);
    EXPECT_LT(std::abs(we[n] - oracle_measured_weak_value(psi, phi, n)), 1e-12);
  }
}

TEST(Reconstruct, Vacuum) {
  const double phi = default_phi(3, PostSelectionModel::effect);
  const auto est = exact_estimates(oracle_measured_weak_values(CavityState::vacuum(3), phi));
  ReconstructionOptions o;
  o.success_probability = oracle_success_probability(CavityState::vacuum(3), phi);
  const auto r = reconstruct(est, jc_coefficients(phi, 3), o);
  EXPECT_NEAR(fidelity(r.amps, CavityState::vacuum(3)), 1.0, 1e-9);
  EXPECT_TRUE(r.converged);
}

// Weak values alone leave a discrete ambiguity in the pure model; the
// result says so, and P(g) removes it.
TEST(Reconstruct, PureModelFromAlphaBetaLists) {
  CVector v(3);
  v << 0.8, 0.5i, -0.33;
  const CavityState psi(v);
  const double phi = default_phi(2, PostSelectionModel::pure);
  const auto jc = jc_coefficients(phi, 2);
  const auto est = exact_estimates(oracle_weak_values(psi, phi));
  const std::vector<cplx> alpha(jc.alpha.begin(), jc.alpha.begin() + 3);
  const std::vector<cplx> beta(jc.beta.begin(), jc.beta.begin() + 3);
  const auto r = reconstruct(est, alpha, beta);
  EXPECT_LT(r.chi2, 1e-12);
  const auto wr = oracle_weak_values(r.amps, phi);
  for (int n = 0; n <= 2; ++n) EXPECT_LT(std::abs(wr[n] - est[n].value), 1e-8);
  if (fidelity(r.amps, psi) < 1 - 1e-8) EXPECT_TRUE(r.ambiguous);
  ReconstructionOptions o;
  o.model = PostSelectionModel::pure;
  o.success_probability = oracle_success_probability(psi, phi);
  EXPECT_NEAR(fidelity(reconstruct(est, jc, o).amps, psi), 1.0, 1e-8);
}

TEST(Reconstruct, RandomRoundTripEffectModel) {
  std::mt19937_64 rng(11);
  int good = 0;
  const int trials = 30;
  for (int k = 0; k < trials; ++k) {
    const int N = 1 + k % 6;
    const CavityState psi = random_state(N, rng, 0.05);
    const double phi = default_phi(N, PostSelectionModel::effect);
    ReconstructionOptions o;
    o.success_probability = oracle_success_probability(psi, phi);
    std::vector<double> pops;
    for (int n = 0; n <= N; ++n) pops.push_back(std::norm(psi[n]));
    o.populations = pops;
    const auto r = reconstruct(exact_estimates(oracle_measured_weak_values(psi, phi)), jc_coefficients(phi, N), o);
    if (fidelity(r.amps, psi) > 1 - 1e-6) ++good;
  }
  EXPECT_EQ(good, trials);
}

TEST(Reconstruct, RandomRoundTripPureModel) {
  std::mt19937_64 rng(12);
  int good = 0;
  const int trials = 30;
  for (int k = 0; k < trials; ++k) {
    const int N = 1 + k % 6;
    const CavityState psi = random_state(N, rng, 0.05);
    const double phi = default_phi(N, PostSelectionModel::pure);
    ReconstructionOptions o;
    o.model = PostSelectionModel::pure;
    o.success_probability = oracle_success_probability(psi, phi);
    const auto r = reconstruct(exact_estimates(oracle_weak_values(psi, phi)), jc_coefficients(phi, N), o);
    if (fidelity(r.amps, psi) > 1 - 1e-6) ++good;
  }
  EXPECT_EQ(good, trials);
}

TEST(Reconstruct, GaugeIsFixed) {
  std::mt19937_64 rng(14);
  const CavityState psi = random_state(3, rng, 0.1);
  const double phi = default_phi(3, PostSelectionModel::effect);
  ReconstructionOptions o;
  o.success_probability = oracle_success_probability(psi, phi);
  const auto r = reconstruct(exact_estimates(oracle_measured_weak_values(psi, phi)), jc_coefficients(phi, 3), o);
  EXPECT_NEAR(r.amps[0].imag(), 0.0, 1e-12);
  EXPECT_GT(r.amps[0].real(), 0.0);
  EXPECT_NEAR(r.amps.norm(), 1.0, 1e-12);
}

TEST(Reconstruct, RejectsVanishingCoupling) {
  // phi = pi zeroes beta_1 while the n = 0 weak value is large.
  std::vector<WeakValueEstimate> est = exact_estimates({1.0, 0.0, 0.0}, 0.01);
  EXPECT_THROW(reconstruct(est, jc_coefficients(pi, 2), ReconstructionOptions{}), std::invalid_argument);
}

TEST(Fidelity, Properties) {
  std::mt19937_64 rng(6);
  const CavityState a = haar_random_state(4, rng);
  const CavityState b = haar_random_state(4, rng);
  EXPECT_NEAR(fidelity(a, a), 1.0, 1e-14);
  EXPECT_NEAR(fidelity(a, b), fidelity(b, a), 1e-15);
  EXPECT_GE(fidelity(a, b), 0.0);
  EXPECT_LE(fidelity(a, b), 1.0);
  EXPECT_NEAR(fidelity(a, CavityState(a.amps() * std::exp(0.9i))), 1.0, 1e-14);
  EXPECT_NEAR(fidelity(CavityState::fock(1, 4), CavityState::fock(2, 4)), 0.0, 0.0);
  EXPECT_THROW(fidelity(a, CavityState::vacuum(3)), std::invalid_argument);
}

TEST(Gauge, FirstSignificantAmplitudeReal) {
  CVector v(3);
  v << 1e-12, 0.3i, 0.4;
  const CVector g = apply_gauge(v);
  EXPECT_NEAR(g[1].imag(), 0.0, 1e-15);
  EXPECT_GT(g[1].real(), 0.0);
  EXPECT_NEAR(g.norm(), v.norm(), 1e-15);
}

// Shrinking gamma tau removes the estimator bias quadratically.
TEST(Bias, VacuumEstimatorApproachesOne) {
  for (double gt : {0.2, 0.1, 0.05}) {
    ProtocolConfig c;
    c.n_max = 3;
    c.true_state = CavityState::vacuum(3);
    c.tau = pi;
    c.gamma = gt / pi;
    c.phi = default_phi(3, PostSelectionModel::effect);
    const auto w = weak_value_from_averages(conditional_averages_exact(c), gt, 0);
    EXPECT_NEAR(w.value.real(), std::sin(2 * gt) / (2 * gt), 1e-12);
    EXPECT_NEAR(1.0 - w.value.real(), 2 * gt * gt / 3, 2 * std::pow(gt, 4));
  }
}
