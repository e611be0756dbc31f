#include <algorithm>
#include <cmath>

#include "prwalk/spectral.hpp"

namespace prwalk {

namespace {

double log_poisson_pmf(double t, std::uint64_t j) {
  const double dj = static_cast<double>(j);
  if (t == 0.0) return j == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
  return -t + dj * std::log(t) - std::lgamma(dj + 1.0);
}

// Sum of pmf over j in [from, inf), walking upward from the given index.
double upward_tail(double t, std::uint64_t from) {
  double total = 0.0;
  for (std::uint64_t j = from;; ++j) {
    const double term = std::exp(log_poisson_pmf(t, j));
    total += term;
    if (static_cast<double>(j) > t && term <= total * 1e-17) break;
    if (term == 0.0 && static_cast<double>(j) > t) break;
  }
  return std::min(total, 1.0);
}

}  // namespace

PoissonWeights poisson_weights(double t, double tol) {
  if (!(t >= 0.0)) throw InvalidArgument("Poisson rate must be nonnegative");
  PoissonWeights pw;
  double cum = 0.0;
  for (std::uint64_t j = 0;; ++j) {
    const double w = std::exp(log_poisson_pmf(t, j));
    pw.weights.push_back(w);
    cum += w;
    if (static_cast<double>(j) >= t && 1.0 - cum < tol) break;
    if (static_cast<double>(j) > t && upward_tail(t, j + 1) < tol) break;
  }
  return pw;
}

double poisson_upper_tail(double t, std::uint64_t L) {
  if (!(t >= 0.0)) throw InvalidArgument("Poisson rate must be nonnegative");
  if (static_cast<double>(L) >= t) return upward_tail(t, L + 1);
  double cdf = 0.0;
  for (std::uint64_t j = 0; j <= L; ++j) cdf += std::exp(log_poisson_pmf(t, j));
  return std::clamp(1.0 - cdf, 0.0, 1.0);
}

double poisson_lower_tail(double t, double x) {
  if (!(t >= 0.0)) throw InvalidArgument("Poisson rate must be nonnegative");
  if (x <= 0.0) return 0.0;
  // j < x  <=>  j <= ceil(x) - 1
  const auto last = static_cast<std::uint64_t>(std::ceil(x)) - 1;
  if (static_cast<double>(last) < t) {
    double cdf = 0.0;
    for (std::uint64_t j = 0; j <= last; ++j) cdf += std::exp(log_poisson_pmf(t, j));
    return std::min(cdf, 1.0);
  }
  return std::clamp(1.0 - upward_tail(t, last + 1), 0.0, 1.0);
}

std::uint64_t sample_poisson(double t, Philox4x32& rng) {
  if (!(t >= 0.0)) throw InvalidArgument("Poisson rate must be nonnegative");
  const double u = rng.uniform();
  double cum = 0.0;
  std::uint64_t j = 0;
  for (;; ++j) {
    cum += std::exp(log_poisson_pmf(t, j));
    if (u < cum) return j;
    if (static_cast<double>(j) > t + 50.0 * std::sqrt(t + 1.0) + 50.0) return j;
  }
}

Eigen::VectorXd semigroup_evolve(const DenseOperator& op, const Eigen::VectorXd& u0, double t) {
  return semigroup_apply(op.matrix(), u0, t, false);
}

Eigen::VectorXd semigroup_evolve_measure(const DenseOperator& op, const Eigen::VectorXd& lambda0, double t) {
  return semigroup_apply(op.matrix(), lambda0, t, true);
}

KilledKernel killed_kernel(const DenseOperator& P, const Distribution& pi, std::span<const std::size_t> G) {
  if (G.empty()) throw InvalidArgument("killed kernel needs a nonempty set");
  if (P.size() != pi.size()) throw DimensionMismatch("operator and distribution sizes differ");
  std::vector<std::size_t> states(G.begin(), G.end());
  std::sort(states.begin(), states.end());
  if (std::adjacent_find(states.begin(), states.end()) != states.end())
    throw InvalidArgument("killed kernel set has duplicates");
  if (states.back() >= static_cast<std::size_t>(P.size())) throw InvalidArgument("state index out of range");
  const auto m = static_cast<Eigen::Index>(states.size());
  Eigen::MatrixXd KG(m, m);
  Eigen::VectorXd w(m);
  for (Eigen::Index a = 0; a < m; ++a) {
    w(a) = pi.weights()(static_cast<Eigen::Index>(states[a]));
    for (Eigen::Index b = 0; b < m; ++b)
      KG(a, b) = P.matrix()(static_cast<Eigen::Index>(states[a]), static_cast<Eigen::Index>(states[b]));
  }
  const double piG = w.sum();
  if (!(piG > 0.0)) throw InvalidArgument("killed kernel set has zero stationary mass");
  Distribution piG_dist(w / piG);
  const Eigen::VectorXd leak = Eigen::VectorXd::Ones(m) - KG.rowwise().sum();
  const double delta = std::max(0.0, piG_dist.weights().dot(leak));
  return {DenseOperator(std::move(KG), Flavor::Substochastic), std::move(piG_dist), delta,
          std::max(0.0, pi.mass() - piG), std::move(states)};
}

EntropyDecayReport entropy_decay_check(const KilledKernel& killed, const Eigen::VectorXd& u0,
                                       std::span<const double> t_grid, double A, double lsi_numeric,
                                       const LsiOptions& opts) {
  if (u0.size() != killed.kernel.size()) throw DimensionMismatch("initial density size mismatch");
  if (!(A > 0.0)) throw InvalidArgument("A must be positive");
  if (lsi_numeric < 0.0) lsi_numeric = lsi_constant_numeric(killed.kernel, killed.stationary, opts).constant;
  EntropyDecayReport rep{A >= lsi_numeric, A, lsi_numeric, 0, std::numeric_limits<double>::infinity(), {}};
  const double h0 = entropy(killed.stationary, u0);
  const double m0 = killed.stationary.weights().dot(u0);
  for (double t : t_grid) {
    const Eigen::VectorXd ut = semigroup_evolve(killed.kernel, u0, t);
    const double lhs = entropy(killed.stationary, ut.cwiseMax(0.0));
    const double decay = std::exp(-t / A);
    const double rhs = decay * h0 + A * killed.delta * m0 * (1.0 - decay);
    rep.rows.push_back({t, lhs, rhs});
    rep.min_slack = std::min(rep.min_slack, rhs - lhs);
    if (lhs > rhs + 1e-12 * std::max(1.0, rhs)) ++rep.violations;
  }
  return rep;
}

double tv_sup(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size()) throw DimensionMismatch("measure sizes differ");
  const Eigen::VectorXd d = a - b;
  return std::max(d.cwiseMax(0.0).sum(), (-d).cwiseMax(0.0).sum());
}

SubprobTv subprob_tv_bound(const Eigen::VectorXd& lambda, const Distribution& rho) {
  if (lambda.size() != rho.size()) throw DimensionMismatch("measure sizes differ");
  if (lambda.size() && lambda.minCoeff() < 0.0) throw InvalidArgument("lambda must be nonnegative");
  if (lambda.sum() > 1.0 + 1e-12) throw InvalidArgument("lambda mass exceeds 1");
  Eigen::VectorXd u = Eigen::VectorXd::Zero(lambda.size());
  for (Eigen::Index x = 0; x < lambda.size(); ++x) {
    const double r = rho.weights()(x);
    if (r > 0.0)
      u(x) = lambda(x) / r;
    else if (lambda(x) > 0.0)
      throw InvalidArgument("lambda is not absolutely continuous with respect to rho");
  }
  const double m = lambda.sum();
  const double H = entropy(rho, u);
  return {tv_sup(lambda, rho.weights()), (1.0 - m) + std::sqrt(H / 2.0), m, H};
}

PipelineReport pipeline_report(double A, double omega_size, double pi_gc, double eta, std::uint64_t L,
                               double t_star) {
  if (!(A >= 0.0 && pi_gc >= 0.0 && eta >= 0.0 && t_star >= 0.0)) throw InvalidArgument("pipeline inputs must be nonnegative");
  if (pi_gc >= 1.0) throw InvalidArgument("pi(G^c) must be below 1");
  if (!(omega_size >= 1.0)) throw InvalidArgument("state space size must be at least 1");
  PipelineReport r{};
  r.A = A;
  r.omega_size = omega_size;
  r.log_omega = std::log(omega_size);
  r.t_conf = 2.0 * A * std::log(std::exp(1.0) + r.log_omega);
  r.L = static_cast<double>(L);
  r.zeta = poisson_upper_tail(r.t_conf, L);
  const double decay = A > 0.0 ? std::exp(-r.t_conf / A) : 0.0;
  r.R = decay * r.log_omega + A * pi_gc / (1.0 - pi_gc);
  r.eta = eta;
  r.pi_good_complement = pi_gc;
  r.tv_bound = 2.0 * (eta + r.zeta) + std::sqrt(r.R / 2.0) + pi_gc;
  r.t_star = t_star;
  r.poisson_lower = poisson_lower_tail(2.0 * t_star, t_star);
  r.condition_lhs = r.tv_bound + r.poisson_lower;
  r.condition_holds = r.condition_lhs <= 0.25;
  r.t_mix_bound = 2.0 * t_star + r.t_conf;
  return r;
}

PathComparison path_comparison_exact(const SparseKernel& P, std::span<const char> in_G, std::size_t x,
                                     std::uint64_t s, double t, std::uint64_t L) {
  const auto n = P.rows();
  if (static_cast<Eigen::Index>(in_G.size()) != n) throw DimensionMismatch("mask size mismatch");
  if (x >= static_cast<std::size_t>(n)) throw InvalidArgument("start index out of range");
  Eigen::VectorXd g(n);
  for (Eigen::Index y = 0; y < n; ++y) g(y) = in_G[y] ? 1.0 : 0.0;

  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
  alpha(static_cast<Eigen::Index>(x)) = 1.0;
  for (std::uint64_t step = 0; step < s; ++step) alpha = (alpha.transpose() * P).transpose();

  Eigen::VectorXd stay = g;
  for (std::uint64_t u = 0; u < L; ++u) stay = g.cwiseProduct(P * stay);
  const double exit_prob = std::clamp(1.0 - alpha.dot(stay), 0.0, 1.0);

  SparseKernel KG = g.asDiagonal() * P * g.asDiagonal();
  const Eigen::VectorXd full = semigroup_apply(P, alpha, t, true);
  const Eigen::VectorXd killed = semigroup_apply(KG, alpha.cwiseProduct(g), t, true);
  const double tail = poisson_upper_tail(t, L);
  return {tv_sup(full, killed), exit_prob, tail, exit_prob + tail, 1.0 - killed.sum(), 0.0};
}

TensorizationCheck tensorization_check(const Eigen::VectorXd& F, std::uint32_t S, std::uint32_t N) {
  const std::uint64_t size = saturating_pow(S, N);
  if (static_cast<std::uint64_t>(F.size()) != size) throw DimensionMismatch("function size is not S^N");
  const Eigen::VectorXd F2 = F.cwiseAbs2();
  const double inv = 1.0 / static_cast<double>(size);
  auto ent = [](const std::vector<double>& vals) {
    double m = 0.0;
    for (double v : vals) m += v;
    m /= static_cast<double>(vals.size());
    if (m <= 0.0) return 0.0;
    double h = 0.0;
    for (double v : vals)
      if (v > 0.0) h += v * std::log(v / m);
    return h / static_cast<double>(vals.size());
  };
  std::vector<double> all(F2.data(), F2.data() + F2.size());
  const double lhs = ent(all);
  double rhs = 0.0;
  std::vector<double> fibre(S);
  std::uint64_t stride = 1;
  for (std::uint32_t i = 0; i < N; ++i, stride *= S) {
    for (std::uint64_t base = 0; base < size; ++base) {
      if ((base / stride) % S != 0) continue;
      for (std::uint32_t u = 0; u < S; ++u) fibre[u] = F2(static_cast<Eigen::Index>(base + u * stride));
      rhs += ent(fibre) * static_cast<double>(S) * inv;
    }
  }
  return {lhs, rhs};
}

}  // namespace prwalk
