#pragma once

// Weak values from meter averages, and Fock-amplitude reconstruction from
// a full set of weak values.
//
// Both post-selection models share the relation
//   W_n * D = c_n * conj((M c)_n),  D = sum_n c_n conj((M c)_n)
// with M an (N+1) x (N+2) matrix (the extra column feeds the truncation
// residual). pure:   M_nn = alpha_n, M_n,n+1 = -beta_{n+1}, D = <Psi_f|Psi>.
//                  effect: M = K^dag K, D = P(g) (real).

#include <optional>
#include <string>
#include <vector>

#include "weakfock/dynamics.hpp"
#include "weakfock/hilbert.hpp"
#include "weakfock/protocol.hpp"

namespace weakfock {

struct WeakValueEstimate {
  int n = 0;
  cplx value{0.0};
  double stderr_re = 0.0;
  double stderr_im = 0.0;
  double gamma_tau = 0.0;
};

/// (i <sx> - <sy>) / (2 gamma_tau). Throws std::invalid_argument for gamma_tau <= 0.
WeakValueEstimate weak_value_from_averages(const ConditionalAverages& avgs, double gamma_tau, int n = 0);

struct PopulationEstimate {
  double value = 0.0;
  double stderr = 0.0;
};

/// |c_n|^2 from the unconditioned meter: <sy> = -sin(2 gamma_tau) |c_n|^2
/// on the resonant block.
PopulationEstimate population_from_averages(const ConditionalAverages& avgs, double gamma_tau);

/// |sum_n W_n - 1|. Throws std::invalid_argument unless the estimates cover
/// n = 0..N exactly once.
double exact_weak_value_sum_check(const std::vector<WeakValueEstimate>& estimates);

/// Relation matrix M for the given coefficients (length N+2 each).
CMatrix relation_matrix(PostSelectionModel model, const JCCoefficients& jc, int n_max);

/// Model weak values of c under relation matrix M (truncated to N+1 columns).
std::vector<cplx> model_weak_values(const CVector& c, const CMatrix& m);

struct ReconstructionOptions {
  PostSelectionModel model = PostSelectionModel::effect;
  std::optional<double> success_probability;  // measured P(g)
  double stderr_success = 0.0;
  std::optional<std::vector<double>> populations;  // measured |c_n|^2
  std::vector<double> stderr_populations;
  std::vector<CVector> initial_guesses;  // extra starting points
  bool rescale_sum = true;
  int random_starts = 12;
  int max_polished = 8;
  int max_function_evals = 20000;
};

struct ReconstructionResult {
  CavityState amps = CavityState::vacuum(1);  // first nonzero amplitude real positive
  cplx d_factor{0.0};
  double residual_truncation = 0.0;
  int iterations = 0;
  bool converged = false;
  bool ambiguous = false;  // a distinct state fits the data within 1 unit of chi^2
  int candidates = 0;
  double chi2 = 0.0;
  std::string note;
};

ReconstructionResult reconstruct(const std::vector<WeakValueEstimate>& estimates,
                                 const JCCoefficients& jc, const ReconstructionOptions& options);

/// Pure-model reconstruction from explicit alpha/beta lists (length >= N+1;
/// a missing beta_{N+1} is taken as zero).
ReconstructionResult reconstruct(const std::vector<WeakValueEstimate>& estimates,
                                 const std::vector<cplx>& alpha, const std::vector<cplx>& beta);

/// |<a|b>|^2. Throws std::invalid_argument on dimension mismatch.
double fidelity(const CavityState& a, const CavityState& b);

/// Global phase convention: first amplitude with |c_n| > 1e-9 max|c| made real positive.
CVector apply_gauge(const CVector& c);

}  // namespace weakfock
