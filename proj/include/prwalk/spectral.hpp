#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "prwalk/chains.hpp"

namespace prwalk {

enum class Flavor { Stochastic, Substochastic, General };

class DenseOperator {
 public:
  DenseOperator(Eigen::MatrixXd matrix, Flavor flavor);

  const Eigen::MatrixXd& matrix() const noexcept { return m_; }
  Flavor flavor() const noexcept { return flavor_; }
  Eigen::Index size() const noexcept { return m_.rows(); }

 private:
  Eigen::MatrixXd m_;
  Flavor flavor_;
};

class Distribution {
 public:
  explicit Distribution(Eigen::VectorXd weights);
  static Distribution uniform(Eigen::Index n);

  const Eigen::VectorXd& weights() const noexcept { return w_; }
  double mass() const { return w_.sum(); }
  double min_weight() const { return w_.minCoeff(); }
  Eigen::Index size() const noexcept { return w_.size(); }

 private:
  Eigen::VectorXd w_;
};

// D^{1/2} K D^{-1/2}, symmetrised; asymmetry above 1e-12 raises ReversibilityViolation.
Eigen::MatrixXd symmetrized(const DenseOperator& op, const Distribution& rho);

// Eigenvalues of the self-adjoint version, descending.
Eigen::VectorXd reversible_spectrum(const DenseOperator& op, const Distribution& rho);

double spectral_gap(const DenseOperator& op, const Distribution& rho);

// (xi code, eigenvalue) for every xi in V*, ordered by code.
std::vector<std::pair<std::uint64_t, double>> fibre_eigenvalues_tr(std::span<const FieldVector> state, std::size_t i,
                                                                   std::uint64_t budget = kDefaultEnumerationBudget);

double dirichlet_form(const DenseOperator& op, const Distribution& rho, const Eigen::VectorXd& f,
                      const Eigen::VectorXd& g);
// H_rho(u) = rho[u log(u / rho(u))]
double entropy(const Distribution& rho, const Eigen::VectorXd& u);
// Ent_rho(f^2) = rho(f^2 log f^2) - rho(f^2) log rho(f^2)
double ent_squared(const Distribution& rho, const Eigen::VectorXd& f);
double variance(const Distribution& rho, const Eigen::VectorXd& f);

// 1 / spectral_gap; +infinity when the gap vanishes.
double poincare_constant(const DenseOperator& op, const Distribution& rho);

// C * C_P * log(1 / rho_*), with the universal constant C left to the caller.
double gap_lsi_bound(double poincare, double rho_min, double universal_constant = 4.0);

struct LsiOptions {
  int restarts = 64;
  int steps = 10000;
  std::uint64_t seed = 1;
  std::size_t cap = 64;
  // Optional 0/1 mask: only functions supported on the mask are considered.
  std::vector<char> support;
};

struct LsiResult {
  double constant;               // best ratio found; a certified lower bound
  Eigen::VectorXd certificate;   // function attaining it
  double linearised;             // ratio of 1 + eps * (second eigenfunction)
};

LsiResult lsi_constant_numeric(const DenseOperator& op, const Distribution& rho, const LsiOptions& opts = {});

// Ent(f^2) / E(f,f) for one function; +infinity if E vanishes and Ent does not.
double lsi_ratio(const DenseOperator& op, const Distribution& rho, const Eigen::VectorXd& f);

struct KilledKernel {
  DenseOperator kernel;          // on the states of G, in the given order
  Distribution stationary;       // pi conditioned on G
  double delta;                  // pi_G(1 - K_G 1)
  double pi_complement;          // pi(G^c)
  std::vector<std::size_t> states;
};

KilledKernel killed_kernel(const DenseOperator& P, const Distribution& pi, std::span<const std::size_t> G);

struct PoissonWeights {
  std::vector<double> weights;  // j = 0 .. weights.size()-1
};
// Poisson(t) pmf up to the point where the remaining tail is below tol.
PoissonWeights poisson_weights(double t, double tol = 1e-12);
// P(Poi(t) > L)
double poisson_upper_tail(double t, std::uint64_t L);
// P(Poi(t) < x)
double poisson_lower_tail(double t, double x);

// e^{t(K - I)} u by uniformisation; transpose = true evolves a row measure.
template <class Mat>
Eigen::VectorXd semigroup_apply(const Mat& K, const Eigen::VectorXd& u0, double t, bool transpose) {
  if (!(t >= 0.0)) throw InvalidArgument("semigroup time must be nonnegative");
  if (K.rows() != u0.size()) throw DimensionMismatch("semigroup: operand size mismatch");
  if (t == 0.0) return u0;
  const PoissonWeights pw = poisson_weights(t);
  Eigen::VectorXd term = u0;
  Eigen::VectorXd out = pw.weights[0] * term;
  for (std::size_t j = 1; j < pw.weights.size(); ++j) {
    if (transpose)
      term = (term.transpose() * K).transpose();
    else
      term = K * term;
    out += pw.weights[j] * term;
  }
  return out;
}

Eigen::VectorXd semigroup_evolve(const DenseOperator& op, const Eigen::VectorXd& u0, double t);
Eigen::VectorXd semigroup_evolve_measure(const DenseOperator& op, const Eigen::VectorXd& lambda0, double t);

struct EntropyDecayRow {
  double t;
  double lhs;
  double rhs;
};

struct EntropyDecayReport {
  bool hypothesis_ok;     // A >= numeric LSI constant of the killed kernel
  double A;
  double lsi_numeric;
  std::size_t violations;
  double min_slack;       // min over the grid of rhs - lhs
  std::vector<EntropyDecayRow> rows;
};

// Pass lsi_numeric < 0 to have it computed here.
EntropyDecayReport entropy_decay_check(const KilledKernel& killed, const Eigen::VectorXd& u0,
                                       std::span<const double> t_grid, double A, double lsi_numeric = -1.0,
                                       const LsiOptions& opts = {});

// sup_A |a(A) - b(A)|; equals half the L1 distance for equal masses.
double tv_sup(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

struct SubprobTv {
  double actual;
  double bound;
  double mass;
  double entropy;
};
SubprobTv subprob_tv_bound(const Eigen::VectorXd& lambda, const Distribution& rho);

struct PipelineReport {
  double A;
  double omega_size;
  double log_omega;
  double t_conf;
  double L;
  double zeta;
  double R;
  double eta;
  double pi_good_complement;
  double tv_bound;
  double t_star;
  double poisson_lower;
  double condition_lhs;
  bool condition_holds;
  double t_mix_bound;
};

PipelineReport pipeline_report(double A, double omega_size, double pi_gc, double eta, std::uint64_t L,
                               double t_star);

struct PathComparison {
  double discrepancy;
  double exit_probability;
  double poisson_tail;
  double bound;
  double lost_mass;
  double sigma;  // Monte Carlo standard error; 0 for exact evaluation
};

// Exact evaluation on an enumerated space; in_G is a 0/1 mask.
PathComparison path_comparison_exact(const SparseKernel& P, std::span<const char> in_G, std::size_t x,
                                     std::uint64_t s, double t, std::uint64_t L);

// Poisson(t) draw by inversion from one uniform.
std::uint64_t sample_poisson(double t, Philox4x32& rng);

// Monte Carlo: the gap between the two laws is exactly the mass of paths that
// leave G within J ~ Poi(t) steps after time s.
template <class W, class Pred>
PathComparison path_comparison_check(const Kernel<W>& kernel, Pred in_G, const typename W::State& x,
                                     std::uint64_t s, double t, std::uint64_t L, std::uint64_t trials,
                                     std::uint64_t seed) {
  if (!kernel.walk().in_omega(x)) throw InvalidArgument("path comparison: start outside the state space");
  if (trials == 0) throw InvalidArgument("path comparison needs trials > 0");
  std::uint64_t by_jump = 0, by_window = 0, lost = 0;
  for (std::uint64_t trial = 0; trial < trials; ++trial) {
    Philox4x32 rng(seed, trial);
    rng.seek(std::numeric_limits<std::uint64_t>::max());
    const std::uint64_t J = sample_poisson(t, rng);
    auto state = x;
    for (std::uint64_t step = 0; step < s; ++step) {
      rng.seek(step);
      kernel.sample(state, rng);
    }
    const std::uint64_t horizon = std::max(J, L);
    std::uint64_t exit_at = std::numeric_limits<std::uint64_t>::max();
    for (std::uint64_t u = 0;; ++u) {
      if (!in_G(state)) {
        exit_at = u;
        break;
      }
      if (u == horizon) break;
      rng.seek(s + u);
      kernel.sample(state, rng);
    }
    by_jump += exit_at <= J;
    by_window += exit_at <= L;
    lost += exit_at <= J;
  }
  const double n = static_cast<double>(trials);
  const double disc = by_jump / n, win = by_window / n;
  const double tail = poisson_upper_tail(t, L);
  const double sd = std::sqrt(std::max(disc * (1 - disc), win * (1 - win)) / n);
  return {disc, win, tail, win + tail, lost / n, sd};
}

struct TensorizationCheck {
  double lhs;
  double rhs;
};
// F on S^N (coordinate 0 least significant), uniform product measure.
TensorizationCheck tensorization_check(const Eigen::VectorXd& F, std::uint32_t S, std::uint32_t N);

}  // namespace prwalk
