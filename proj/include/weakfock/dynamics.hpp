#pragma once

// Propagators for the dispersive selective drive, the resonant JC
// post-selection coupling, and the qubit rotation that follows it.

#include <vector>

#include "weakfock/hilbert.hpp"

namespace weakfock {

struct DispersiveDriveParams {
  double delta1 = 10.0;  // meter half-splitting
  double chi = 1.0;      // dispersive shift
  double gamma = 0.02;   // drive strength
  double omega = 20.0;   // drive frequency; resonance with block n at 2(delta1 + n chi)
  double t = 0.0;        // duration

  /// Throws std::invalid_argument unless chi > 0, gamma >= 0, t >= 0.
  void validate() const;
  /// Drive frequency resonant with photon-number block n.
  static double resonant_omega(double delta1, double chi, int n) { return 2.0 * (delta1 + n * chi); }
};

struct DetuningProfile {
  double epsilon = 0.0;
  double gamma_tilde = 0.0;
};

DetuningProfile detuning_profile(double epsilon, double gamma);

/// Frame in which the block propagators are returned.
///  rotating:    exp(-i H t), H = eps sigma_z + gamma sigma_x per block.
///  interaction: exp(i eps sigma_z t) exp(-i H t), i.e. the free dispersive
///               precession removed. Identical transition probabilities.
enum class DriveFrame { rotating, interaction };

/// Block-diagonal unitary on cavity (x) meter, dimension 2(n_max+1), in the
/// cavity-major layout 2n + meter.
LinearOp selective_drive_propagator(const DispersiveDriveParams& p, int n_max,
                                    DriveFrame frame = DriveFrame::rotating);

/// First-order model 1 - i gamma t Pi_n sigma_x on cavity (x) meter. Not unitary.
CMatrix first_order_drive(double gamma_t, int target_n, int n_max);

/// (gamma/gamma_tilde)^2 sin^2(gamma_tilde t).
double rabi_transition_probability(double epsilon, double gamma, double t);

struct SelectivityRow {
  int m = 0;
  double epsilon = 0.0;
  double gamma_tilde = 0.0;
  double p_e = 0.0;
  double bound = 0.0;  // (gamma/(m chi))^2, 1 for m = 0
};

/// Throws std::invalid_argument for an empty m_range or chi <= 0.
std::vector<SelectivityRow> selectivity_map(double chi, double gamma, double t,
                                            const std::vector<int>& m_range);

struct JCCoefficients {
  std::vector<cplx> alpha;  // cos(sqrt(n) phi)
  std::vector<cplx> beta;   // -i sin(sqrt(n) phi)
};

/// Coefficients for n = 0..n_max+1 (one past the truncation, which the
/// top row of the reconstruction relations needs).
JCCoefficients jc_coefficients(double phi, int n_max);

/// Unitary on cavity (x) post-selection qubit (layout 2n + ps):
/// |g,n> -> alpha_n |g,n> + beta_n |e,n-1>, |e,n-1> -> beta_n |g,n> + alpha_n |e,n-1>.
/// |g,0> and |e,n_max> are left unchanged.
LinearOp jc_propagator(double phi, int n_max);

/// exp(-i (pi/4) sigma_y): |g> -> (|g>+|e>)/sqrt2, |e> -> (|e>-|g>)/sqrt2.
LinearOp ry_half_pi();

/// Default JC angle. The pure model uses 0.6 pi / sqrt(n_max+1); the
/// effect model maximizes min_n |cos(sqrt n phi) sin(sqrt(n+1) phi)| over
/// (0, pi]. In both cases phi is nudged so |sin(sqrt n phi)| >= 0.05 for
/// 1 <= n <= n_max.
enum class PostSelectionModel { pure, effect };
double default_phi(int n_max, PostSelectionModel model);

/// Indices n in [1, n_max] with |sin(sqrt n phi)| < margin.
std::vector<int> phi_violations(double phi, int n_max, double margin = 0.05);

}  // namespace weakfock
