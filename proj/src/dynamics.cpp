#include "weakfock/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace weakfock {

void DispersiveDriveParams::validate() const {
  if (!(chi > 0.0)) throw std::invalid_argument("chi must be positive");
  if (!(gamma >= 0.0)) throw std::invalid_argument("gamma must be non-negative");
  if (!(t >= 0.0)) throw std::invalid_argument("duration must be non-negative");
}

DetuningProfile detuning_profile(double epsilon, double gamma) {
  return {std::abs(epsilon), std::hypot(epsilon, gamma)};
}

LinearOp selective_drive_propagator(const DispersiveDriveParams& p, int n_max, DriveFrame frame) {
  p.validate();
  if (n_max < 1 || n_max > kMaxTruncation) throw std::invalid_argument("n_max out of range");
  using namespace std::complex_literals;
  const int dim = 2 * (n_max + 1);
  CMatrix u = CMatrix::Zero(dim, dim);
  for (int n = 0; n <= n_max; ++n) {
    const double eps = p.delta1 + n * p.chi - 0.5 * p.omega;
    const double gt = std::hypot(eps, p.gamma);
    // exp(-iHt) = cos(gt) I - i sin(gt)/gt H, with H = eps sz + gamma sx, sz = diag(-1, 1).
    const double c = std::cos(gt * p.t);
    const double s_over = gt > 0.0 ? std::sin(gt * p.t) / gt : p.t;
    cplx gg = c + 1.0i * s_over * eps;
    cplx ee = c - 1.0i * s_over * eps;
    cplx eg = -1.0i * s_over * p.gamma;  // <e|U|g>
    cplx ge = eg;
    if (frame == DriveFrame::interaction) {
      // left-multiply by exp(i eps sz t): row g picks up e^{-i eps t}, row e e^{+i eps t}
      const cplx pg = std::exp(-1.0i * eps * p.t);
      const cplx pe = std::exp(1.0i * eps * p.t);
      gg *= pg;
      ge *= pg;
      eg *= pe;
      ee *= pe;
    }
    u(2 * n, 2 * n) = gg;
    u(2 * n, 2 * n + 1) = ge;
    u(2 * n + 1, 2 * n) = eg;
    u(2 * n + 1, 2 * n + 1) = ee;
  }
  return LinearOp(std::move(u), OpKind::unitary);
}

CMatrix first_order_drive(double gamma_t, int target_n, int n_max) {
  if (target_n < 0 || target_n > n_max) throw std::invalid_argument("target out of range");
  using namespace std::complex_literals;
  const int dim = 2 * (n_max + 1);
  CMatrix m = CMatrix::Identity(dim, dim);
  m(2 * target_n, 2 * target_n + 1) = -1.0i * gamma_t;
  m(2 * target_n + 1, 2 * target_n) = -1.0i * gamma_t;
  return m;
}

double rabi_transition_probability(double epsilon, double gamma, double t) {
  if (t < 0.0) throw std::invalid_argument("duration must be non-negative");
  if (epsilon == 0.0) {
    const double s = std::sin(gamma * t);
    return s * s;
  }
  const double gt = std::hypot(epsilon, gamma);
  const double s = std::sin(gt * t);
  return (gamma / gt) * (gamma / gt) * s * s;
}

std::vector<SelectivityRow> selectivity_map(double chi, double gamma, double t,
                                            const std::vector<int>& m_range) {
  if (m_range.empty()) throw std::invalid_argument("m_range is empty");
  if (!(chi > 0.0)) throw std::invalid_argument("chi must be positive");
  std::vector<SelectivityRow> rows;
  rows.reserve(m_range.size());
  for (int m : m_range) {
    if (m < 0) throw std::invalid_argument("m must be non-negative");
    SelectivityRow r;
    r.m = m;
    r.epsilon = m * chi;
    r.gamma_tilde = std::hypot(r.epsilon, gamma);
    r.p_e = rabi_transition_probability(r.epsilon, gamma, t);
    r.bound = m == 0 ? 1.0 : (gamma / r.epsilon) * (gamma / r.epsilon);
    rows.push_back(r);
  }
  return rows;
}

JCCoefficients jc_coefficients(double phi, int n_max) {
  if (n_max < 0) throw std::invalid_argument("n_max must be non-negative");
  JCCoefficients c;
  c.alpha.resize(n_max + 2);
  c.beta.resize(n_max + 2);
  for (int n = 0; n <= n_max + 1; ++n) {
    const double x = std::sqrt(static_cast<double>(n)) * phi;
    c.alpha[n] = std::cos(x);
    c.beta[n] = cplx(0.0, -std::sin(x));
  }
  c.beta[0] = 0.0;
  return c;
}

LinearOp jc_propagator(double phi, int n_max) {
  if (n_max < 1 || n_max > kMaxTruncation) throw std::invalid_argument("n_max out of range");
  const auto jc = jc_coefficients(phi, n_max);
  const int dim = 2 * (n_max + 1);
  CMatrix u = CMatrix::Identity(dim, dim);
  for (int n = 1; n <= n_max; ++n) {
    const int gn = 2 * n;            // |g, n>
    const int em = 2 * (n - 1) + 1;  // |e, n-1>
    u(gn, gn) = jc.alpha[n];
    u(em, gn) = jc.beta[n];
    u(gn, em) = jc.beta[n];
    u(em, em) = jc.alpha[n];
  }
  return LinearOp(std::move(u), OpKind::unitary);
}

LinearOp ry_half_pi() {
  const double s = 1.0 / std::sqrt(2.0);
  CMatrix u(2, 2);
  u << s, -s, s, s;
  return LinearOp(std::move(u), OpKind::unitary);
}

std::vector<int> phi_violations(double phi, int n_max, double margin) {
  std::vector<int> bad;
  for (int n = 1; n <= n_max; ++n) {
    if (std::abs(std::sin(std::sqrt(static_cast<double>(n)) * phi)) < margin) bad.push_back(n);
  }
  return bad;
}

namespace {

double effect_score(double phi, int n_max) {
  double worst = 1.0;
  for (int n = 0; n < n_max; ++n) {
    const double v = std::abs(std::cos(std::sqrt(static_cast<double>(n)) * phi) *
                              std::sin(std::sqrt(static_cast<double>(n + 1)) * phi));
    worst = std::min(worst, v);
  }
  return worst;
}

}  // namespace

double default_phi(int n_max, PostSelectionModel model) {
  if (n_max < 1 || n_max > kMaxTruncation) throw std::invalid_argument("n_max out of range");
  double phi = 0.6 * std::numbers::pi / std::sqrt(n_max + 1.0);
  if (model == PostSelectionModel::effect) {
    constexpr int kGrid = 4000;
    double best = -1.0;
    for (int i = 1; i <= kGrid; ++i) {
      const double trial = std::numbers::pi * i / kGrid;
      const double sc = effect_score(trial, n_max);
      if (sc > best) {
        best = sc;
        phi = trial;
      }
    }
  }
  for (int k = 0; k < 1000 && !phi_violations(phi, n_max).empty(); ++k) {
    phi += 1e-3;
  }
  return phi;
}

}  // namespace weakfock
