#include "weakfock/oracle.hpp"

#include <cmath>
#include <stdexcept>

#include "weakfock/dynamics.hpp"
#include "weakfock/errors.hpp"

namespace weakfock {
namespace {

// Unnormalized Psi_f as a plain vector.
std::vector<cplx> postselected(const CavityState& psi, double phi) {
  const int N = psi.n_max();
  const auto jc = jc_coefficients(phi, N);
  std::vector<cplx> f(N + 1, 0.0);
  for (int n = 0; n <= N; ++n) {
    f[n] += psi[n] * jc.alpha[n];
    if (n > 0) f[n - 1] -= psi[n] * jc.beta[n];
  }
  return f;
}

// Kraus operator of the g outcome, built entry by entry.
CMatrix kraus_g(double phi, int N) {
  const auto jc = jc_coefficients(phi, N);
  CMatrix k = CMatrix::Zero(N + 1, N + 1);
  for (int n = 0; n <= N; ++n) {
    k(n, n) = jc.alpha[n];
    if (n > 0) k(n - 1, n) = -jc.beta[n];
  }
  return k / std::sqrt(2.0);
}

void check_index(const CavityState& psi, int n) {
  if (n < 0 || n > psi.n_max()) throw std::invalid_argument("Fock index out of range");
}

}  // namespace

OracleWeakValue oracle_weak_value(const CavityState& psi, double phi, int n) {
  check_index(psi, n);
  const auto f = postselected(psi, phi);
  cplx overlap = 0.0;
  for (int k = 0; k <= psi.n_max(); ++k) overlap += std::conj(f[k]) * psi[k];
  const bool orth = std::abs(overlap) < 1e-12;
  return {std::conj(f[n]) * psi[n] / overlap, overlap, orth};
}

std::vector<cplx> oracle_weak_values(const CavityState& psi, double phi) {
  std::vector<cplx> w;
  for (int n = 0; n <= psi.n_max(); ++n) w.push_back(oracle_weak_value(psi, phi, n).value);
  return w;
}

CavityState oracle_postselected_state(const CavityState& psi, double phi) {
  const auto f = postselected(psi, phi);
  CVector v(psi.n_max() + 1);
  for (int n = 0; n <= psi.n_max(); ++n) v[n] = f[n];
  if (v.norm() < 1e-12) throw DegeneratePostSelection("post-selected state has zero norm");
  return CavityState(v);
}

QubitState oracle_meter_state(const CavityState& psi, double phi, int n, double gamma_tau) {
  const cplx w = oracle_weak_value(psi, phi, n).value;
  return QubitState{1.0, cplx(0.0, -gamma_tau) * w}.normalized();
}

cplx oracle_measured_weak_value(const CavityState& psi, double phi, int n) {
  check_index(psi, n);
  const CMatrix k = kraus_g(phi, psi.n_max());
  const CMatrix e = k.adjoint() * k;
  const CVector ec = e * psi.amps();
  const cplx denom = psi.amps().dot(ec);  // conjugates the first argument
  if (std::abs(denom) < 1e-12) throw DegeneratePostSelection("post-selection probability below 1e-12");
  return std::conj(ec[n]) * psi[n] / std::conj(denom);
}

std::vector<cplx> oracle_measured_weak_values(const CavityState& psi, double phi) {
  std::vector<cplx> w;
  for (int n = 0; n <= psi.n_max(); ++n) w.push_back(oracle_measured_weak_value(psi, phi, n));
  return w;
}

double oracle_success_probability(const CavityState& psi, double phi) {
  return (kraus_g(phi, psi.n_max()) * psi.amps()).squaredNorm();
}

}  // namespace weakfock
