#include "weakfock/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>

namespace weakfock {

WeakValueEstimate weak_value_from_averages(const ConditionalAverages& avgs, double gamma_tau, int n) {
  if (!(gamma_tau > 0.0)) throw std::invalid_argument("gamma_tau must be positive");
  WeakValueEstimate w;
  w.n = n;
  w.gamma_tau = gamma_tau;
  w.value = cplx(-avgs.avg_sy, avgs.avg_sx) / (2.0 * gamma_tau);
  w.stderr_re = avgs.stderr_sy / (2.0 * gamma_tau);
  w.stderr_im = avgs.stderr_sx / (2.0 * gamma_tau);
  return w;
}

PopulationEstimate population_from_averages(const ConditionalAverages& avgs, double gamma_tau) {
  const double s = std::sin(2.0 * gamma_tau);
  if (std::abs(s) < 1e-12) throw std::invalid_argument("gamma_tau gives no population signal");
  return {-avgs.uncond_sy / s, avgs.stderr_uncond_sy / std::abs(s)};
}

namespace {

int checked_n_max(const std::vector<WeakValueEstimate>& est) {
  if (est.size() < 2) throw std::invalid_argument("need weak values for at least n = 0, 1");
  std::vector<bool> seen(est.size(), false);
  for (const auto& e : est) {
    if (e.n < 0 || e.n >= static_cast<int>(est.size()) || seen[e.n]) {
      throw std::invalid_argument("weak values must cover n = 0..N exactly once");
    }
    seen[e.n] = true;
  }
  return static_cast<int>(est.size()) - 1;
}

std::vector<WeakValueEstimate> sorted_by_n(std::vector<WeakValueEstimate> est) {
  std::sort(est.begin(), est.end(), [](const auto& a, const auto& b) { return a.n < b.n; });
  return est;
}

}  // namespace

double exact_weak_value_sum_check(const std::vector<WeakValueEstimate>& estimates) {
  checked_n_max(estimates);
  cplx sum = 0.0;
  for (const auto& e : estimates) sum += e.value;
  return std::abs(sum - 1.0);
}

CMatrix relation_matrix(PostSelectionModel model, const JCCoefficients& jc, int n_max) {
  if (static_cast<int>(jc.alpha.size()) < n_max + 2 || static_cast<int>(jc.beta.size()) < n_max + 2) {
    throw std::invalid_argument("need JC coefficients up to n_max + 1");
  }
  const int N = n_max;
  CMatrix m = CMatrix::Zero(N + 1, N + 2);
  if (model == PostSelectionModel::pure) {
    for (int n = 0; n <= N; ++n) {
      m(n, n) = jc.alpha[n];
      m(n, n + 1) = -jc.beta[n + 1];
    }
    return m;
  }
  // K^dag K with K = (sum alpha_n |n><n| - beta_n |n-1><n|) / sqrt2 on N+2 levels.
  CMatrix k = CMatrix::Zero(N + 2, N + 2);
  for (int n = 0; n <= N + 1; ++n) {
    k(n, n) = jc.alpha[n];
    if (n > 0) k(n - 1, n) = -jc.beta[n];
  }
  const CMatrix e = 0.5 * k.adjoint() * k;
  return e.topRows(N + 1);
}

std::vector<cplx> model_weak_values(const CVector& c, const CMatrix& m) {
  const Eigen::Index d = c.size();
  const CVector mc = m.leftCols(d) * c;
  std::vector<cplx> num(d);
  cplx sum = 0.0;
  for (Eigen::Index n = 0; n < d; ++n) {
    num[n] = c[n] * std::conj(mc[n]);
    sum += num[n];
  }
  for (auto& v : num) v /= sum;
  return num;
}

CVector apply_gauge(const CVector& c) {
  const double mx = c.cwiseAbs().maxCoeff();
  for (Eigen::Index n = 0; n < c.size(); ++n) {
    if (std::abs(c[n]) > 1e-9 * mx) {
      return c * (std::abs(c[n]) / c[n]);
    }
  }
  return c;
}

double fidelity(const CavityState& a, const CavityState& b) {
  if (a.n_max() != b.n_max()) throw std::invalid_argument("fidelity: dimension mismatch");
  return std::min(1.0, std::norm(a.amps().dot(b.amps())));
}

namespace {

struct Problem {
  int N = 0;
  std::vector<cplx> w;
  std::vector<double> sig_re, sig_im;
  CMatrix m;  // (N+1) x (N+1)
  CMatrix e;  // (N+1) x (N+1), success-probability effect
  std::optional<double> p;
  double sig_p = 1e-6;
  std::optional<std::vector<double>> x;
  std::vector<double> sig_x;

  int n_residuals() const {
    return 2 * (N + 1) + (p ? 1 : 0) + (x ? N + 1 : 0);
  }

  // Weighted data residuals of a normalized amplitude vector.
  void residuals(const CVector& c, Eigen::Ref<Eigen::VectorXd> r) const {
    const CVector mc = m * c;
    cplx d = 0.0;
    std::vector<cplx> num(N + 1);
    for (int n = 0; n <= N; ++n) {
      num[n] = c[n] * std::conj(mc[n]);
      d += num[n];
    }
    int k = 0;
    for (int n = 0; n <= N; ++n) {
      const cplx diff = num[n] / d - w[n];
      r[k++] = diff.real() / sig_re[n];
      r[k++] = diff.imag() / sig_im[n];
    }
    if (p) r[k++] = (c.dot(e * c).real() - *p) / sig_p;
    if (x) {
      for (int n = 0; n <= N; ++n) r[k++] = (std::norm(c[n]) - (*x)[n]) / sig_x[n];
    }
  }

  double chi2(const CVector& c) const {
    Eigen::VectorXd r(n_residuals());
    residuals(c.normalized(), r);
    const double v = r.squaredNorm();
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  }
};

struct Functor {
  using Scalar = double;
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

  const Problem* prob = nullptr;
  int gauge_index = 0;

  int inputs() const { return 2 * (prob->N + 1); }
  int values() const { return prob->n_residuals() + 2; }

  int operator()(const Eigen::VectorXd& q, Eigen::VectorXd& f) const {
    const int d = prob->N + 1;
    CVector c(d);
    for (int n = 0; n < d; ++n) c[n] = cplx(q[n], q[d + n]);
    const double nrm = c.norm();
    const int nr = prob->n_residuals();
    if (nrm < 1e-300) {
      f.setConstant(1e6);
      return 0;
    }
    prob->residuals(c / nrm, f.head(nr));
    f[nr] = nrm - 1.0;
    f[nr + 1] = q[d + gauge_index];
    for (Eigen::Index i = 0; i < f.size(); ++i) {
      if (!std::isfinite(f[i])) f[i] = 1e6;
    }
    return 0;
  }
};

struct Polished {
  CVector c;
  double chi2 = 0.0;
  int iterations = 0;
  bool converged = false;
};

Polished polish(const Problem& prob, const CVector& start, int max_fev) {
  const int d = prob.N + 1;
  CVector s = start;
  if (!(s.norm() > 0.0) || !s.allFinite()) s = CVector::Ones(d);
  s.normalize();
  Eigen::Index k0 = 0;
  s.cwiseAbs().maxCoeff(&k0);
  s *= std::abs(s[k0]) / s[k0];

  Functor f;
  f.prob = &prob;
  f.gauge_index = static_cast<int>(k0);
  Eigen::NumericalDiff<Functor, Eigen::Central> nd(f);
  Eigen::LevenbergMarquardt<Eigen::NumericalDiff<Functor, Eigen::Central>> lm(nd);
  lm.parameters.xtol = 1e-10;
  lm.parameters.ftol = 1e-10;
  lm.parameters.gtol = 0.0;
  lm.parameters.maxfev = max_fev;

  Eigen::VectorXd q(2 * d);
  for (int n = 0; n < d; ++n) {
    q[n] = s[n].real();
    q[d + n] = s[n].imag();
  }
  const auto status = lm.minimize(q);
  Polished out;
  out.c = CVector(d);
  for (int n = 0; n < d; ++n) out.c[n] = cplx(q[n], q[d + n]);
  if (!(out.c.norm() > 0.0) || !out.c.allFinite()) {
    out.c = s;
  }
  out.c.normalize();
  out.chi2 = prob.chi2(out.c);
  out.iterations = static_cast<int>(lm.iter);
  using S = Eigen::LevenbergMarquardtSpace::Status;
  out.converged = status != S::TooManyFunctionEvaluation && status != S::ImproperInputParameters &&
                  status != S::NotStarted && status != S::Running && std::isfinite(out.chi2);
  return out;
}

// Downward enumeration of exact preimages for the pure relations, top
// level `top` with x_top = 1 and c above it zero.
void enumerate_pure(const Problem& prob, const CMatrix& m, std::vector<CVector>& out) {
  const int N = prob.N;
  int top = -1;
  double wmax = 0.0;
  for (int n = 0; n <= N; ++n) wmax = std::max(wmax, std::abs(prob.w[n]));
  for (int n = N; n >= 0; --n) {
    if (std::abs(prob.w[n]) > 1e-9 * wmax) {
      top = n;
      break;
    }
  }
  if (top < 0 || top > 14) return;
  const double a_top = m(top, top).real();
  if (std::abs(a_top) < 1e-9) return;
  const cplx d = a_top / prob.w[top];
  for (int n = 0; n < top; ++n) {
    if (std::abs(m(n, n + 1).imag()) < 1e-9) return;
  }

  constexpr std::size_t kMaxLeaves = 4096;
  std::vector<double> x(top + 1, 0.0);
  std::vector<cplx> z(top + 1, 0.0);  // z_n = c_{n+1} conj(c_n)
  x[top] = 1.0;

  auto emit = [&]() {
    CVector c = CVector::Zero(N + 1);
    c[0] = std::sqrt(x[0]);
    for (int n = 0; n < top; ++n) c[n + 1] = z[n] * c[n] / x[n];
    if (c.allFinite() && c.norm() > 0.0) out.push_back(c / c.norm());
  };

  auto rec = [&](auto&& self, int n) -> void {
    if (out.size() >= kMaxLeaves) return;
    if (n < 0) {
      emit();
      return;
    }
    const cplx dw = d * prob.w[n];
    const double a = m(n, n).real();
    const double s = m(n, n + 1).imag();
    const double A = -dw.imag() / s;
    const double R = dw.real();
    const double qa = a * a / (s * s);
    const double qb = -(2.0 * R * a / (s * s) + x[n + 1]);
    const double qc = R * R / (s * s) + A * A;
    double roots[2];
    int nroots = 0;
    if (qa > 1e-300) {
      double disc = qb * qb - 4.0 * qa * qc;
      if (disc < -1e-9 * std::max(1.0, qb * qb)) return;
      disc = std::sqrt(std::max(disc, 0.0));
      roots[nroots++] = (-qb + disc) / (2.0 * qa);
      if (disc > 0.0) roots[nroots++] = (-qb - disc) / (2.0 * qa);
    } else if (std::abs(qb) > 1e-300) {
      roots[nroots++] = -qc / qb;
    }
    for (int i = 0; i < nroots; ++i) {
      const double xn = roots[i];
      if (!(xn > 0.0)) continue;
      x[n] = xn;
      z[n] = std::conj(cplx(A, (R - a * xn) / s));
      self(self, n - 1);
    }
  };
  rec(rec, top - 1);
}

// Effect relations made linear by the measured populations.
std::optional<CVector> population_start(const Problem& prob, const CMatrix& m) {
  if (!prob.x) return std::nullopt;
  const int N = prob.N;
  const double P = prob.p.value_or(0.5);
  std::vector<double> t(N);
  for (int n = 0; n < N; ++n) {
    t[n] = m(n, n + 1).imag();
    if (std::abs(t[n]) < 1e-9) return std::nullopt;
  }
  Eigen::VectorXd u(N);
  double s = 0.0;
  for (int n = 0; n < N; ++n) {
    s += prob.w[n].imag();
    u[n] = -P * s / t[n];
  }
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(N + 1, N);
  Eigen::VectorXd b(N + 1);
  for (int n = 0; n <= N; ++n) {
    if (n > 0) a(n, n - 1) = t[n - 1];
    if (n < N) a(n, n) = t[n];
    b[n] = 0.5 * (*prob.x)[n] - P * prob.w[n].real();
  }
  const Eigen::VectorXd v = a.colPivHouseholderQr().solve(b);
  CVector c(N + 1);
  double theta = 0.0;
  for (int n = 0; n <= N; ++n) {
    c[n] = std::polar(std::sqrt(std::max((*prob.x)[n], 0.0)), theta);
    if (n < N) theta += std::atan2(v[n], u[n]);
  }
  if (!(c.norm() > 0.0)) return std::nullopt;
  return c;
}

ReconstructionResult run(const std::vector<WeakValueEstimate>& estimates, const JCCoefficients& jc,
                         const ReconstructionOptions& opt) {
  const int N = checked_n_max(estimates);
  const auto est = sorted_by_n(estimates);
  if (static_cast<int>(jc.alpha.size()) < N + 2 || static_cast<int>(jc.beta.size()) < N + 2) {
    throw std::invalid_argument("need JC coefficients up to n_max + 1");
  }

  Problem prob;
  prob.N = N;
  cplx sum = 0.0;
  for (const auto& e : est) {
    if (!std::isfinite(e.value.real()) || !std::isfinite(e.value.imag())) {
      throw std::invalid_argument("weak value is not finite");
    }
    prob.w.push_back(e.value);
    prob.sig_re.push_back(std::max(e.stderr_re, 1e-6));
    prob.sig_im.push_back(std::max(e.stderr_im, 1e-6));
    sum += e.value;
  }
  if (opt.rescale_sum) {
    if (std::abs(sum) < 1e-12) throw std::invalid_argument("weak values sum to zero");
    for (auto& w : prob.w) w /= sum;
  }
  // beta_{n+1} appears as a divisor wherever W_n carries signal.
  for (int n = 0; n < N; ++n) {
    const double signal = std::abs(prob.w[n]) - 4.0 * std::hypot(est[n].stderr_re, est[n].stderr_im);
    if (signal > 1e-9 && std::abs(jc.beta[n + 1]) < 1e-3) {
      throw std::invalid_argument("|beta_" + std::to_string(n + 1) + "| < 1e-3");
    }
  }
  const CMatrix mfull = relation_matrix(opt.model, jc, N);
  prob.m = mfull.leftCols(N + 1);
  prob.e = relation_matrix(PostSelectionModel::effect, jc, N).leftCols(N + 1);
  if (opt.success_probability) {
    prob.p = opt.success_probability;
    prob.sig_p = std::max(opt.stderr_success, 1e-6);
  }
  if (opt.populations) {
    if (static_cast<int>(opt.populations->size()) != N + 1) {
      throw std::invalid_argument("populations must have N+1 entries");
    }
    prob.x = opt.populations;
    prob.sig_x.assign(N + 1, 1e-6);
    for (int n = 0; n <= N && n < static_cast<int>(opt.stderr_populations.size()); ++n) {
      prob.sig_x[n] = std::max(opt.stderr_populations[n], 1e-6);
    }
  }

  // Structured candidates first.
  std::vector<CVector> starts;
  if (opt.model == PostSelectionModel::pure) enumerate_pure(prob, prob.m, starts);
  if (opt.model == PostSelectionModel::effect) {
    if (auto c = population_start(prob, prob.m)) starts.push_back(*c);
  }
  for (const auto& g : opt.initial_guesses) {
    if (g.size() != N + 1) throw std::invalid_argument("initial guess has wrong dimension");
    starts.push_back(g);
  }
  {
    CVector c(N + 1);
    for (int n = 0; n <= N; ++n) c[n] = std::sqrt(std::max(prob.w[n].real(), 1e-6));
    starts.push_back(c);
  }
  std::vector<std::pair<double, std::size_t>> ranked;
  for (std::size_t i = 0; i < starts.size(); ++i) ranked.emplace_back(prob.chi2(starts[i]), i);
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  if (static_cast<int>(ranked.size()) > opt.max_polished) ranked.resize(opt.max_polished);

  std::vector<Polished> pol;
  for (const auto& [cost, i] : ranked) pol.push_back(polish(prob, starts[i], opt.max_function_evals));

  const double dof = static_cast<double>(prob.n_residuals());
  auto best_chi2 = [&]() {
    double b = std::numeric_limits<double>::infinity();
    for (const auto& p : pol) b = std::min(b, p.chi2);
    return b;
  };
  if (!(best_chi2() <= dof)) {
    std::mt19937_64 rng(0x9e3779b97f4a7c15ull + static_cast<std::uint64_t>(N));
    std::uniform_real_distribution<double> ph(0.0, 2.0 * 3.141592653589793);
    for (int k = 0; k < opt.random_starts; ++k) {
      CVector c(N + 1);
      for (int n = 0; n <= N; ++n) c[n] = std::polar(std::sqrt(std::max(std::abs(prob.w[n]), 1e-4)), ph(rng));
      pol.push_back(polish(prob, c, opt.max_function_evals));
    }
  }

  std::size_t bi = 0;
  for (std::size_t i = 1; i < pol.size(); ++i) {
    if (pol[i].chi2 < pol[bi].chi2) bi = i;
  }
  const Polished& best = pol[bi];

  ReconstructionResult res;
  res.candidates = static_cast<int>(starts.size());
  res.amps = CavityState(apply_gauge(best.c));
  res.iterations = best.iterations;
  res.chi2 = best.chi2;
  res.converged = best.converged;
  const CavityState best_state(best.c);
  for (std::size_t i = 0; i < pol.size(); ++i) {
    if (i == bi) continue;
    if (pol[i].chi2 <= best.chi2 + 1.0 && fidelity(CavityState(pol[i].c), best_state) < 0.999) {
      res.ambiguous = true;
    }
  }

  const CVector& c = res.amps.amps();
  const CVector mc = prob.m * c;
  cplx d = 0.0;
  for (int n = 0; n <= N; ++n) d += c[n] * std::conj(mc[n]);
  res.d_factor = d;
  const cplx m_top = mfull(N, N + 1);
  if (std::abs(c[N]) > 1e-6 && std::abs(m_top) > 1e-12) {
    const cplx implied = (std::conj(d * prob.w[N] / c[N]) - mfull(N, N) * c[N]) / m_top;
    res.residual_truncation = std::abs(implied);
  }
  if (res.ambiguous) res.note = "another state fits the data equally well";
  return res;
}

}  // namespace

ReconstructionResult reconstruct(const std::vector<WeakValueEstimate>& estimates, const JCCoefficients& jc,
                                 const ReconstructionOptions& options) {
  return run(estimates, jc, options);
}

ReconstructionResult reconstruct(const std::vector<WeakValueEstimate>& estimates,
                                 const std::vector<cplx>& alpha, const std::vector<cplx>& beta) {
  const std::size_t d = estimates.size();
  if (alpha.size() < d || beta.size() < d) throw std::invalid_argument("alpha/beta shorter than estimates");
  JCCoefficients jc;
  jc.alpha.assign(alpha.begin(), alpha.begin() + static_cast<std::ptrdiff_t>(d));
  jc.beta.assign(beta.begin(), beta.begin() + static_cast<std::ptrdiff_t>(d));
  jc.alpha.push_back(alpha.size() > d ? alpha[d] : cplx(1.0));
  jc.beta.push_back(beta.size() > d ? beta[d] : cplx(0.0));
  ReconstructionOptions opt;
  opt.model = PostSelectionModel::pure;
  return run(estimates, jc, opt);
}

}  // namespace weakfock
