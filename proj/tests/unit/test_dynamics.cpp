#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "weakfock/dynamics.hpp"

using namespace weakfock;
using namespace std::complex_literals;
using std::numbers::pi;

namespace {

DispersiveDriveParams resonant(int target, double gamma, double t, double chi = 1.0, double delta1 = 10.0) {
  DispersiveDriveParams p;
  p.delta1 = delta1;
  p.chi = chi;
  p.gamma = gamma;
  p.t = t;
  p.omega = DispersiveDriveParams::resonant_omega(delta1, chi, target);
  return p;
}

double unitarity_error(const CMatrix& u) {
  return (u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

}  // namespace

TEST(SelectiveDrive, NoDriveIsDiagonal) {
  for (DriveFrame f : {DriveFrame::rotating, DriveFrame::interaction}) {
    const CMatrix u = selective_drive_propagator(resonant(1, 0.0, 2.3), 4, f).matrix();
    for (int n = 0; n <= 4; ++n) EXPECT_EQ(u(2 * n + 1, 2 * n), cplx(0.0));
    EXPECT_LT(unitarity_error(u), 1e-12);
  }
}

TEST(SelectiveDrive, ResonantBlockIsRabi) {
  const double g = 0.02, t = 7.1;
  const CMatrix u = selective_drive_propagator(resonant(2, g, t), 4).matrix();
  EXPECT_NEAR(std::abs(u(4, 4) - std::cos(g * t)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(u(5, 4) - (-1.0i) * std::sin(g * t)), 0.0, 1e-14);
}

TEST(SelectiveDrive, OffResonantMatchesRabiFormula) {
  const double chi = 1.0, g = 0.05, t = 2.7;
  for (DriveFrame f : {DriveFrame::rotating, DriveFrame::interaction}) {
    const CMatrix u = selective_drive_propagator(resonant(0, g, t, chi), 6, f).matrix();
    for (int m = 1; m <= 6; ++m) {
      EXPECT_NEAR(std::norm(u(2 * m + 1, 2 * m)), rabi_transition_probability(m * chi, g, t), 1e-15);
    }
  }
}

TEST(SelectiveDrive, UnitaryForRandomDraws) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    DispersiveDriveParams p;
    p.delta1 = 20 * u01(rng) - 10;
    p.chi = 0.1 + u01(rng);
    p.gamma = u01(rng);
    p.omega = 40 * u01(rng);
    p.t = 10 * u01(rng);
    for (DriveFrame f : {DriveFrame::rotating, DriveFrame::interaction}) {
      EXPECT_LT(unitarity_error(selective_drive_propagator(p, 1 + k % 8, f).matrix()), 1e-10);
    }
  }
}

TEST(SelectiveDrive, RejectsBadParams) {
  auto p = resonant(0, 0.02, 1.0);
  p.chi = 0.0;
  EXPECT_THROW(selective_drive_propagator(p, 3), std::invalid_argument);
  p = resonant(0, -0.1, 1.0);
  EXPECT_THROW(selective_drive_propagator(p, 3), std::invalid_argument);
  p = resonant(0, 0.1, -1.0);
  EXPECT_THROW(selective_drive_propagator(p, 3), std::invalid_argument);
}

// First-order invariant at gamma t = 0.05, chi t = pi, chi/gamma = 50.
TEST(SelectiveDrive, FirstOrderModelInInteractionFrame) {
  const double chi = 1.0, t = pi, g = 0.05 / t;
  const CMatrix u = selective_drive_propagator(resonant(1, g, t, chi), 6, DriveFrame::interaction).matrix();
  const double dev = (u - first_order_drive(g * t, 1, 6)).cwiseAbs().maxCoeff();
  EXPECT_LT(dev, 0.05);
  EXPECT_LT(dev, 2.0 * (g * t) * (g * t));
}

// The rotating frame keeps the free precession exp(+-i m chi t) on the
// off-resonant blocks; at chi t = pi that is a sign flip per odd block.
TEST(SelectiveDrive, RotatingFrameCarriesFreePhase) {
  const double t = pi, g = 0.05 / t;
  const CMatrix u = selective_drive_propagator(resonant(0, g, t), 3, DriveFrame::rotating).matrix();
  EXPECT_NEAR(u(2, 2).real(), -1.0, 1e-3);
  EXPECT_GT((u - first_order_drive(g * t, 0, 3)).cwiseAbs().maxCoeff(), 1.0);
}

TEST(Rabi, Examples) {
  EXPECT_NEAR(rabi_transition_probability(0.0, 1.0, pi / 2), 1.0, 1e-15);
  EXPECT_NEAR(rabi_transition_probability(0.0, 1.0, 0.05), 0.0024979173609871, 1e-15);
  EXPECT_EQ(rabi_transition_probability(0.0, 0.3, 1.7) - std::pow(std::sin(0.3 * 1.7), 2), 0.0);
  EXPECT_THROW(rabi_transition_probability(0.0, 1.0, -1.0), std::invalid_argument);
}

TEST(Rabi, BoundAndSincForm) {
  const double chi = 1.0, g = 0.02;
  for (int m = 1; m <= 8; ++m) {
    for (double t : {0.3, 1.0, pi, 5.0}) {
      const double p = rabi_transition_probability(m * chi, g, t);
      EXPECT_LE(p, std::pow(g / (m * chi), 2));
      const double gt = std::hypot(m * chi, g);
      const double sinc_form = std::pow(g * t, 2) * std::pow(std::sin(gt * t) / (gt * t), 2);
      EXPECT_NEAR(p, sinc_form, 1e-15);
    }
  }
}

TEST(Selectivity, RowsAndBound) {
  const double chi = 1.0, g = 0.02, t = pi;
  const auto rows = selectivity_map(chi, g, t, {0, 1, 2, 3, 4, 5, 6, 7, 8});
  ASSERT_EQ(rows.size(), 9u);
  EXPECT_NEAR(rows[0].p_e, std::pow(std::sin(g * t), 2), 1e-15);
  for (const auto& r : rows) {
    EXPECT_GE(r.gamma_tilde, std::max(r.epsilon, g));
    EXPECT_LE(r.p_e, r.bound);
    if (r.m >= 1) EXPECT_LE(r.p_e, 4e-4);
  }
  EXPECT_THROW(selectivity_map(chi, g, t, {}), std::invalid_argument);
}

TEST(JC, Coefficients) {
  const auto c = jc_coefficients(pi / 2, 3);
  ASSERT_EQ(c.alpha.size(), 5u);
  EXPECT_EQ(c.alpha[0], cplx(1.0));
  EXPECT_EQ(c.beta[0], cplx(0.0));
  EXPECT_NEAR(std::abs(c.alpha[1]), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(c.beta[1] - (-1.0i)), 0.0, 1e-15);
  const auto d = jc_coefficients(0.731, 8);
  for (std::size_t n = 0; n < d.alpha.size(); ++n) EXPECT_NEAR(std::norm(d.alpha[n]) + std::norm(d.beta[n]), 1.0, 1e-15);
}

TEST(JC, PropagatorAction) {
  EXPECT_TRUE(jc_propagator(0.0, 4).matrix().isIdentity(0.0));
  const double phi = 0.83;
  const int N = 5;
  const auto c = jc_coefficients(phi, N);
  const CMatrix u = jc_propagator(phi, N).matrix();
  EXPECT_LT(unitarity_error(u), 1e-12);
  for (int n = 1; n <= N; ++n) {
    EXPECT_EQ(u(2 * n, 2 * n), c.alpha[n]);
    EXPECT_EQ(u(2 * (n - 1) + 1, 2 * n), c.beta[n]);
    // excitation number conserved: no other entries in the |g,n> column
    for (int r = 0; r < u.rows(); ++r) {
      if (r != 2 * n && r != 2 * (n - 1) + 1) EXPECT_EQ(u(r, 2 * n), cplx(0.0));
    }
  }
  EXPECT_EQ(u(0, 0), cplx(1.0));
}

TEST(JC, RotationConvention) {
  const CMatrix r = ry_half_pi().matrix();
  const double s = 1.0 / std::sqrt(2.0);
  EXPECT_TRUE((r * Eigen::Vector2cd(1.0, 0.0)).isApprox(Eigen::Vector2cd(s, s)));
  EXPECT_TRUE((r * Eigen::Vector2cd(0.0, 1.0)).isApprox(Eigen::Vector2cd(-s, s)));
  EXPECT_TRUE((r * r * Eigen::Vector2cd(1.0, 0.0)).isApprox(Eigen::Vector2cd(0.0, 1.0)));
}

TEST(DefaultPhi, AvoidsZerosAndDependsOnModel) {
  for (int N = 1; N <= 12; ++N) {
    for (auto m : {PostSelectionModel::pure, PostSelectionModel::effect}) {
      const double phi = default_phi(N, m);
      EXPECT_TRUE(phi_violations(phi, N).empty()) << N;
    }
    EXPECT_NEAR(default_phi(N, PostSelectionModel::pure), 0.6 * pi / std::sqrt(N + 1.0), 1e-12);
  }
  EXPECT_NEAR(default_phi(5, PostSelectionModel::effect), 0.503, 2e-3);
  EXPECT_EQ(phi_violations(pi, 4), std::vector<int>({1, 4}));
}
