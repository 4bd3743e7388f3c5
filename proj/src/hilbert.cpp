#include "weakfock/hilbert.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace weakfock {
namespace {

void check_truncation(int n_max) {
  if (n_max < 1 || n_max > kMaxTruncation) {
    throw std::invalid_argument("n_max must be in [1, " + std::to_string(kMaxTruncation) +
                                "], got " + std::to_string(n_max));
  }
}

Eigen::Index factor_dim(Subsystem factor, int n_max) {
  const Eigen::Index cav = n_max + 1;
  switch (factor) {
    case Subsystem::cavity:
      return cav;
    case Subsystem::meter:
    case Subsystem::postselect:
      return 2;
    case Subsystem::cavity_meter:
    case Subsystem::cavity_postselect:
      return 2 * cav;
    case Subsystem::all:
      return 4 * cav;
  }
  return 0;
}

// Splits a joint index into (index within the factor, index of the rest).
// The rest index only needs to be a bijection on the complement.
struct Split {
  Eigen::Index inner;
  Eigen::Index outer;
};

Split split(std::size_t joint, Subsystem factor) {
  const auto n = static_cast<Eigen::Index>(joint / 4);
  const auto meter = static_cast<Eigen::Index>((joint / 2) % 2);
  const auto ps = static_cast<Eigen::Index>(joint % 2);
  switch (factor) {
    case Subsystem::cavity:
      return {n, 2 * meter + ps};
    case Subsystem::meter:
      return {meter, 2 * n + ps};
    case Subsystem::postselect:
      return {ps, 2 * n + meter};
    case Subsystem::cavity_meter:
      return {2 * n + meter, ps};
    case Subsystem::cavity_postselect:
      return {2 * n + ps, meter};
    case Subsystem::all:
      return {static_cast<Eigen::Index>(joint), 0};
  }
  return {0, 0};
}

}  // namespace

CavityState::CavityState(CVector amps, bool normalize) : amps_(std::move(amps)) {
  if (amps_.size() < 2) {
    throw std::invalid_argument("cavity state needs at least two Fock levels");
  }
  const double nrm = amps_.norm();
  if (!std::isfinite(nrm) || nrm < kNormTolerance) {
    throw std::invalid_argument("cavity state has zero or non-finite norm");
  }
  if (normalize) {
    amps_ /= nrm;
  } else if (std::abs(nrm - 1.0) > kNormTolerance) {
    throw std::invalid_argument("cavity state is not normalized");
  }
}

CavityState CavityState::fock(int n, int n_max) {
  check_truncation(n_max);
  if (n < 0 || n > n_max) {
    throw std::invalid_argument("Fock index out of range");
  }
  CVector v = CVector::Zero(n_max + 1);
  v[n] = 1.0;
  return CavityState(std::move(v));
}

CavityState CavityState::from_amplitudes(std::span<const cplx> amps) {
  CVector v(static_cast<Eigen::Index>(amps.size()));
  for (std::size_t i = 0; i < amps.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = amps[i];
  }
  return CavityState(std::move(v));
}

QubitState QubitState::normalized() const {
  const double n = norm();
  if (n < kNormTolerance) {
    throw std::invalid_argument("qubit state has zero norm");
  }
  return {g / n, e / n};
}

JointState::JointState(CVector amps, int n_max) : amps_(std::move(amps)), n_max_(n_max) {
  check_truncation(n_max);
  if (amps_.size() != 4 * (n_max + 1)) {
    throw std::invalid_argument("joint state dimension does not match n_max");
  }
}

JointState JointState::basis(int n, Level meter, Level ps, int n_max) {
  CVector v = CVector::Zero(4 * (n_max + 1));
  v[static_cast<Eigen::Index>(index(n, meter, ps))] = 1.0;
  return JointState(std::move(v), n_max);
}

CVector JointState::branch(Level meter, Level ps) const {
  CVector out(n_max_ + 1);
  for (int n = 0; n <= n_max_; ++n) {
    out[n] = amp(n, meter, ps);
  }
  return out;
}

LinearOp::LinearOp(CMatrix m, OpKind kind) : m_(std::move(m)), kind_(kind) {
  if (m_.rows() != m_.cols()) {
    throw std::invalid_argument("operator matrix must be square");
  }
  const auto id = CMatrix::Identity(m_.rows(), m_.cols());
  if (kind_ == OpKind::unitary) {
    const double dev = (m_.adjoint() * m_ - id).cwiseAbs().maxCoeff();
    if (dev > 1e-10) {
      throw std::invalid_argument("operator flagged unitary deviates from U^dag U = I by " +
                                  std::to_string(dev));
    }
  } else if (kind_ == OpKind::hermitian) {
    const double dev = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
    if (dev > 1e-12) {
      throw std::invalid_argument("operator flagged hermitian is not self-adjoint");
    }
  }
}

LinearOp LinearOp::adjoint() const { return LinearOp(m_.adjoint(), kind_); }

LinearOp LinearOp::operator*(const LinearOp& rhs) const {
  const OpKind k =
      (kind_ == OpKind::unitary && rhs.kind_ == OpKind::unitary) ? OpKind::unitary : OpKind::general;
  return LinearOp(m_ * rhs.m_, k);
}

FockOperators::FockOperators(int n_max)
    : n_max_((check_truncation(n_max), n_max)),
      a_(CMatrix::Zero(n_max + 1, n_max + 1), OpKind::general),
      a_dag_(CMatrix::Zero(n_max + 1, n_max + 1), OpKind::general),
      number_(CMatrix::Zero(n_max + 1, n_max + 1), OpKind::hermitian),
      identity_(CMatrix::Identity(n_max + 1, n_max + 1), OpKind::unitary) {
  CMatrix a = CMatrix::Zero(n_max + 1, n_max + 1);
  for (int n = 1; n <= n_max; ++n) {
    a(n - 1, n) = std::sqrt(static_cast<double>(n));
  }
  a_ = LinearOp(a, OpKind::general);
  a_dag_ = LinearOp(a.adjoint(), OpKind::general);
  number_ = LinearOp(a.adjoint() * a, OpKind::hermitian);
}

LinearOp FockOperators::projector(int n) const {
  if (n < 0 || n > n_max_) {
    throw std::invalid_argument("projector index out of range");
  }
  CMatrix p = CMatrix::Zero(n_max_ + 1, n_max_ + 1);
  p(n, n) = 1.0;
  return LinearOp(std::move(p), OpKind::hermitian);
}

PauliSet pauli_operators() {
  using namespace std::complex_literals;
  CMatrix x(2, 2), y(2, 2), z(2, 2), lower(2, 2);
  // Columns are images of |g>, |e>.
  x << 0.0, 1.0, 1.0, 0.0;
  y << 0.0, -1.0i, 1.0i, 0.0;
  z << -1.0, 0.0, 0.0, 1.0;
  lower << 0.0, 1.0, 0.0, 0.0;
  return PauliSet{LinearOp(CMatrix::Identity(2, 2), OpKind::unitary), LinearOp(x, OpKind::hermitian),
                  LinearOp(y, OpKind::hermitian), LinearOp(z, OpKind::hermitian),
                  LinearOp(lower, OpKind::general)};
}

Operators make_operators(int n_max) { return Operators{FockOperators(n_max), pauli_operators()}; }

JointState tensor(const CavityState& cavity, const QubitState& meter, const QubitState& ps) {
  if (std::abs(meter.norm() - 1.0) > kNormTolerance || std::abs(ps.norm() - 1.0) > kNormTolerance) {
    throw std::invalid_argument("tensor() requires normalized qubit states");
  }
  const int n_max = cavity.n_max();
  CVector v(4 * (n_max + 1));
  const std::array<cplx, 2> m{meter.g, meter.e};
  const std::array<cplx, 2> p{ps.g, ps.e};
  for (int n = 0; n <= n_max; ++n) {
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        v[static_cast<Eigen::Index>(JointState::index(n, Level{i}, Level{j}))] = cavity[n] * m[i] * p[j];
      }
    }
  }
  return JointState(std::move(v), n_max);
}

CVector apply_matrix(const CMatrix& m, const CVector& amps, int n_max, Subsystem factor) {
  const Eigen::Index d = factor_dim(factor, n_max);
  if (m.rows() != d || m.cols() != d) {
    throw std::invalid_argument("operator dimension " + std::to_string(m.rows()) +
                                " does not match factor dimension " + std::to_string(d));
  }
  const auto total = static_cast<std::size_t>(amps.size());
  const Eigen::Index outer_dim = static_cast<Eigen::Index>(total) / d;
  // Gather into (inner x outer), multiply, scatter back.
  CMatrix block(d, outer_dim);
  for (std::size_t j = 0; j < total; ++j) {
    const Split s = split(j, factor);
    block(s.inner, s.outer) = amps[static_cast<Eigen::Index>(j)];
  }
  const CMatrix out_block = m * block;
  CVector out(amps.size());
  for (std::size_t j = 0; j < total; ++j) {
    const Split s = split(j, factor);
    out[static_cast<Eigen::Index>(j)] = out_block(s.inner, s.outer);
  }
  return out;
}

JointState apply(const LinearOp& op, const JointState& state, Subsystem factor) {
  return JointState(apply_matrix(op.matrix(), state.amps(), state.n_max(), factor), state.n_max());
}

std::array<cplx, 2> meter_basis_vector(MeterBasis basis, int sign) {
  using namespace std::complex_literals;
  const double s = 1.0 / std::sqrt(2.0);
  const double sg = sign >= 0 ? 1.0 : -1.0;
  if (basis == MeterBasis::x) {
    return {s, sg * s};
  }
  return {s, sg * s * 1.0i};
}

OutcomeTable outcome_distribution(const JointState& state, MeterBasis basis) {
  OutcomeTable t;
  for (int k = 0; k < 2; ++k) {
    const auto v = meter_basis_vector(basis, k == 0 ? +1 : -1);
    for (int ps = 0; ps < 2; ++ps) {
      double acc = 0.0;
      for (int n = 0; n <= state.n_max(); ++n) {
        const cplx a = std::conj(v[0]) * state.amp(n, Level::g, Level{ps}) +
                       std::conj(v[1]) * state.amp(n, Level::e, Level{ps});
        acc += std::norm(a);
      }
      t.p[k][ps] = acc;
    }
  }
  return t;
}

CMatrix reduced_cavity(const JointState& state) {
  const int d = state.n_max() + 1;
  CMatrix rho = CMatrix::Zero(d, d);
  for (int m = 0; m < 2; ++m) {
    for (int p = 0; p < 2; ++p) {
      const CVector b = state.branch(Level{m}, Level{p});
      rho += b * b.adjoint();
    }
  }
  return rho;
}

double trace_distance(const CMatrix& rho, const CMatrix& sigma) {
  const CMatrix diff = rho - sigma;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (diff + diff.adjoint()), Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

CavityState haar_random_state(int n_max, std::mt19937_64& rng) {
  check_truncation(n_max);
  std::normal_distribution<double> gauss(0.0, 1.0);
  CVector v(n_max + 1);
  for (int n = 0; n <= n_max; ++n) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    v[n] = cplx(re, im);
  }
  return CavityState(std::move(v));
}

}  // namespace weakfock
