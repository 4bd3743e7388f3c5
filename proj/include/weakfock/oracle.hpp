#pragma once

// Reference values computed directly from the defining formulas. Shares
// nothing with protocol/tomography beyond jc_coefficients.

#include <vector>

#include "weakfock/hilbert.hpp"

namespace weakfock {

struct OracleWeakValue {
  cplx value;
  cplx overlap;     // <Psi_f|Psi> with Psi_f unnormalized
  bool orthogonal;  // |overlap| < 1e-12; value is then meaningless
};

/// <Psi_f|Pi_n|Psi> / <Psi_f|Psi>, Psi_f = sum_n c_n (alpha_n |n> - beta_n |n-1>).
OracleWeakValue oracle_weak_value(const CavityState& psi, double phi, int n);
std::vector<cplx> oracle_weak_values(const CavityState& psi, double phi);

/// Normalized Psi_f. Throws DegeneratePostSelection when its norm is below 1e-12.
CavityState oracle_postselected_state(const CavityState& psi, double phi);

/// First-order meter state |g> - i gamma_tau W |e>, normalized.
QubitState oracle_meter_state(const CavityState& psi, double phi, int n, double gamma_tau);

/// What the meter actually records: <Psi|E Pi_n|Psi> / <Psi|E|Psi> with
/// E = K^dag K the post-selection effect on the cavity.
cplx oracle_measured_weak_value(const CavityState& psi, double phi, int n);
std::vector<cplx> oracle_measured_weak_values(const CavityState& psi, double phi);

/// Probability of finding the post-selection qubit in |g>: <Psi|E|Psi>.
double oracle_success_probability(const CavityState& psi, double phi);

}  // namespace weakfock
