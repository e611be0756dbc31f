#include "prwalk/pipeline.hpp"

#include <algorithm>
#include <cmath>

namespace prwalk {

namespace {

void check_inputs(const SparseKernel& Q, std::span<const char> in_G, std::span<const std::size_t> starts) {
  if (Q.rows() != Q.cols()) throw DimensionMismatch("kernel must be square");
  if (static_cast<Eigen::Index>(in_G.size()) != Q.rows()) throw DimensionMismatch("mask size mismatch");
  if (starts.empty()) throw InvalidArgument("pipeline needs at least one start");
  for (auto s : starts)
    if (s >= static_cast<std::size_t>(Q.rows())) throw InvalidArgument("start index out of range");
}

Eigen::MatrixXd point_masses(Eigen::Index n, std::span<const std::size_t> starts) {
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(starts.size()), n);
  for (std::size_t i = 0; i < starts.size(); ++i) D(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(starts[i])) = 1.0;
  return D;
}

double worst_tv_uniform(const Eigen::MatrixXd& D) {
  const double u = 1.0 / static_cast<double>(D.cols());
  return 0.5 * (D.array() - u).abs().rowwise().sum().maxCoeff();
}

}  // namespace

double exit_probability_sup(const SparseKernel& Q, std::span<const char> in_G, std::span<const std::size_t> starts,
                            std::uint64_t t_star, std::uint64_t L, std::uint64_t* horizon) {
  check_inputs(Q, in_G, starts);
  if (horizon) *horizon = t_star;
  if (std::all_of(in_G.begin(), in_G.end(), [](char c) { return c != 0; })) return 0.0;
  const auto n = Q.rows();
  Eigen::VectorXd g(n);
  for (Eigen::Index y = 0; y < n; ++y) g(y) = in_G[y] ? 1.0 : 0.0;
  // stay(y) = P_y(X_0..X_L all in G)
  Eigen::VectorXd stay = g;
  for (std::uint64_t u = 0; u < L; ++u) stay = g.cwiseProduct(Q * stay);
  const double stationary_exit = 1.0 - stay.mean();

  Eigen::MatrixXd D = point_masses(n, starts);
  for (std::uint64_t s = 0; s < t_star; ++s) D = D * Q;
  double eta = 0.0;
  std::uint64_t s = t_star;
  constexpr std::uint64_t kMaxHorizon = 1000000;
  for (;; ++s) {
    eta = std::max(eta, (Eigen::VectorXd::Ones(D.rows()) - D * stay).maxCoeff());
    const double d = worst_tv_uniform(D);
    if (d <= 1e-13 || s - t_star >= kMaxHorizon) {
      // For later times |P_x(exit) - stationary exit| <= worst-start TV, which is nonincreasing.
      eta = std::max(eta, std::min(1.0, stationary_exit + d));
      break;
    }
    D = D * Q;
  }
  if (horizon) *horizon = s;
  return std::clamp(eta, 0.0, 1.0);
}

PipelineExact pipeline_exact(const SparseKernel& Q, std::span<const char> in_G, std::span<const std::size_t> starts,
                             const PipelineOptions& opts) {
  check_inputs(Q, in_G, starts);
  const auto n = Q.rows();
  std::vector<std::size_t> G;
  for (Eigen::Index y = 0; y < n; ++y)
    if (in_G[y]) G.push_back(static_cast<std::size_t>(y));
  if (G.empty()) throw InvalidArgument("good set is empty");

  PipelineExact out{};
  out.good_size = G.size();
  const Distribution pi = Distribution::uniform(n);
  const double pi_gc = 1.0 - static_cast<double>(G.size()) / static_cast<double>(n);

  double A = opts.A;
  out.lsi_killed = -1.0;
  if (A < 0.0) {
    const DenseOperator P(Eigen::MatrixXd(Q), Flavor::Stochastic);
    const KilledKernel killed = killed_kernel(P, pi, G);
    out.lsi_killed = lsi_constant_numeric(killed.kernel, killed.stationary, opts.lsi).constant;
    A = opts.a_margin * out.lsi_killed;
  }

  const double omega = static_cast<double>(n);
  const double t_conf = pipeline_report(A, omega, pi_gc, 0.0, 0, 0.0).t_conf;
  std::uint64_t L = opts.L;
  if (L == 0) {
    L = 1;
    while (poisson_upper_tail(t_conf, L) > opts.zeta_target) ++L;
  }
  const double eta = exit_probability_sup(Q, in_G, starts, opts.t_star, L, &out.eta_horizon);
  out.report = pipeline_report(A, omega, pi_gc, eta, L, static_cast<double>(opts.t_star));

  // F = delta_x e^{t_conf (Q - I)}, then F Q^s for s >= t_star.
  const PoissonWeights pw = poisson_weights(t_conf);
  Eigen::MatrixXd term = point_masses(n, starts);
  Eigen::MatrixXd F = pw.weights[0] * term;
  for (std::size_t j = 1; j < pw.weights.size(); ++j) {
    term = term * Q;
    F += pw.weights[j] * term;
  }
  for (std::uint64_t s = 0; s < opts.t_star; ++s) F = F * Q;
  out.max_tv = 0.0;
  for (std::uint64_t s = opts.t_star;; ++s) {
    const double tv = worst_tv_uniform(F);
    out.tv.emplace_back(s, tv);
    out.max_tv = std::max(out.max_tv, tv);
    if (s == opts.t_star + opts.s_span) break;
    F = F * Q;
  }
  out.dominated = out.max_tv <= out.report.tv_bound;
  return out;
}

}  // namespace prwalk
