#pragma once

// State and operator types over the truncated Fock space of the cavity
// tensored with two qubits: the meter (weak probe) and the post-selection
// qubit. Units are hbar = 1 throughout.
//
// Qubit convention: basis order (g, e), sigma_z|g> = -|g>,
// sigma_x|g> = |e>, sigma_y|g> = i|e>.
//
// Joint index layout is n-major, meter next, post-selection qubit fastest:
//   index(n, meter, ps) = 4*n + 2*meter + ps,  with g = 0, e = 1.

#include <array>
#include <complex>
#include <cstddef>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace weakfock {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr double kNormTolerance = 1e-12;
inline constexpr int kMaxTruncation = 32;

enum class Level : int { g = 0, e = 1 };

/// Pure cavity state sum_n c_n |n> truncated at n_max.
class CavityState {
 public:
  /// Normalizes unless `normalize` is false, in which case the norm is checked.
  explicit CavityState(CVector amps, bool normalize = true);

  static CavityState fock(int n, int n_max);
  static CavityState vacuum(int n_max) { return fock(0, n_max); }
  static CavityState from_amplitudes(std::span<const cplx> amps);

  int n_max() const { return static_cast<int>(amps_.size()) - 1; }
  const CVector& amps() const { return amps_; }
  cplx operator[](int n) const { return amps_[n]; }
  double norm() const { return amps_.norm(); }

 private:
  CVector amps_;
};

struct QubitState {
  cplx g{1.0};
  cplx e{0.0};

  static QubitState ground() { return {1.0, 0.0}; }
  static QubitState excited() { return {0.0, 1.0}; }
  double norm() const { return std::sqrt(std::norm(g) + std::norm(e)); }
  QubitState normalized() const;
};

class JointState {
 public:
  JointState(CVector amps, int n_max);

  static std::size_t index(int n, Level meter, Level ps) {
    return 4 * static_cast<std::size_t>(n) + 2 * static_cast<std::size_t>(meter) +
           static_cast<std::size_t>(ps);
  }
  static JointState basis(int n, Level meter, Level ps, int n_max);

  int n_max() const { return n_max_; }
  std::size_t dim() const { return static_cast<std::size_t>(amps_.size()); }
  const CVector& amps() const { return amps_; }
  cplx amp(int n, Level meter, Level ps) const { return amps_[index(n, meter, ps)]; }
  double norm() const { return amps_.norm(); }

  /// Cavity vector for a fixed (meter, ps) branch.
  CVector branch(Level meter, Level ps) const;

 private:
  CVector amps_;
  int n_max_;
};

enum class OpKind { unitary, hermitian, general };

/// Dense operator with a declared algebraic property. The property is
/// verified on construction (unitary: U^dag U = I within 1e-10; hermitian:
/// A = A^dag within 1e-12).
class LinearOp {
 public:
  LinearOp(CMatrix m, OpKind kind);

  const CMatrix& matrix() const { return m_; }
  OpKind kind() const { return kind_; }
  Eigen::Index dim() const { return m_.rows(); }

  LinearOp adjoint() const;
  LinearOp operator*(const LinearOp& rhs) const;

 private:
  CMatrix m_;
  OpKind kind_;
};

/// Subsystem an operator acts on. Composite factors use the joint layout
/// restricted to their members (cavity-major).
enum class Subsystem { cavity, meter, postselect, cavity_meter, cavity_postselect, all };

struct PauliSet {
  LinearOp identity;
  LinearOp x;
  LinearOp y;
  LinearOp z;
  LinearOp lower;  // sigma^- = |g><e|
};

class FockOperators {
 public:
  explicit FockOperators(int n_max);

  int n_max() const { return n_max_; }
  const LinearOp& a() const { return a_; }
  const LinearOp& a_dag() const { return a_dag_; }
  const LinearOp& number() const { return number_; }
  const LinearOp& identity() const { return identity_; }
  LinearOp projector(int n) const;

 private:
  int n_max_;
  LinearOp a_;
  LinearOp a_dag_;
  LinearOp number_;
  LinearOp identity_;
};

struct Operators {
  FockOperators fock;
  PauliSet pauli;
};

/// Throws std::invalid_argument for n_max < 1 or n_max > kMaxTruncation.
Operators make_operators(int n_max);
PauliSet pauli_operators();

JointState tensor(const CavityState& cavity, const QubitState& meter, const QubitState& ps);

/// Applies `op` to the given factor, identity elsewhere. Throws
/// std::invalid_argument when the operator dimension does not match.
JointState apply(const LinearOp& op, const JointState& state, Subsystem factor);

/// Same as apply() but for an arbitrary (possibly non-unitary) matrix;
/// the result is not renormalized.
CVector apply_matrix(const CMatrix& m, const CVector& amps, int n_max, Subsystem factor);

enum class MeterBasis { x, y };

/// Joint probabilities of (meter outcome +/-, post-selection outcome g/e),
/// cavity traced out. Indexed [meter][ps] with meter 0 = "+", 1 = "-".
struct OutcomeTable {
  std::array<std::array<double, 2>, 2> p{};

  double operator()(int meter, Level ps) const { return p[meter][static_cast<int>(ps)]; }
  double ps_marginal(Level ps) const { return p[0][static_cast<int>(ps)] + p[1][static_cast<int>(ps)]; }
  double meter_marginal(int meter) const { return p[meter][0] + p[meter][1]; }
  double total() const { return p[0][0] + p[0][1] + p[1][0] + p[1][1]; }
};

/// Meter eigenvector for outcome `sign` (+1 or -1) of the given basis,
/// expressed in (g, e): X: (|g> +/- |e>)/sqrt2, Y: (|g> +/- i|e>)/sqrt2.
std::array<cplx, 2> meter_basis_vector(MeterBasis basis, int sign);

OutcomeTable outcome_distribution(const JointState& state, MeterBasis basis);

/// Reduced cavity density matrix (meter and post-selection qubit traced out).
CMatrix reduced_cavity(const JointState& state);

/// Trace distance 0.5*||rho - sigma||_1 between density matrices.
double trace_distance(const CMatrix& rho, const CMatrix& sigma);

/// Normalized complex Gaussian vector: Haar-distributed pure state.
CavityState haar_random_state(int n_max, std::mt19937_64& rng);

}  // namespace weakfock
