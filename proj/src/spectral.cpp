#include "prwalk/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <numbers>

#include "prwalk/parallel.hpp"

namespace prwalk {

DenseOperator::DenseOperator(Eigen::MatrixXd matrix, Flavor flavor) : m_(std::move(matrix)), flavor_(flavor) {
  if (m_.rows() != m_.cols()) throw DimensionMismatch("operator must be square");
  if (flavor_ == Flavor::General) return;
  if (m_.size() && m_.minCoeff() < -1e-15) throw InvalidArgument("kernel has negative entries");
  for (Eigen::Index x = 0; x < m_.rows(); ++x) {
    const double s = m_.row(x).sum();
    if (flavor_ == Flavor::Stochastic && std::abs(s - 1.0) > 1e-12)
      throw InvalidArgument("stochastic kernel row " + std::to_string(x) + " sums to " + std::to_string(s));
    if (flavor_ == Flavor::Substochastic && s > 1.0 + 1e-12)
      throw InvalidArgument("substochastic kernel row " + std::to_string(x) + " exceeds 1");
  }
}

Distribution::Distribution(Eigen::VectorXd weights) : w_(std::move(weights)) {
  if (w_.size() && w_.minCoeff() < 0.0) throw InvalidArgument("distribution has negative weights");
  if (w_.sum() > 1.0 + 1e-12) throw InvalidArgument("distribution mass exceeds 1");
}

Distribution Distribution::uniform(Eigen::Index n) {
  if (n <= 0) throw InvalidArgument("uniform distribution needs a nonempty space");
  return Distribution(Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n)));
}

namespace {

void require_sizes(const DenseOperator& op, const Distribution& rho) {
  if (op.size() != rho.size()) throw DimensionMismatch("operator and distribution sizes differ");
}

// sum_x w(x) u(x) log(u(x)/m), m = w.u, written as a sum of nonnegative terms
// m * phi(u/m) with phi(x) = x log x - x + 1, plus m (1 - sum w).
double relative_entropy_sum(const Eigen::VectorXd& w, const Eigen::VectorXd& u) {
  const double m = w.dot(u);
  if (m <= 0.0) return 0.0;
  double h = 0.0;
  for (Eigen::Index x = 0; x < u.size(); ++x) {
    if (w(x) <= 0.0) continue;
    const double d = u(x) / m - 1.0;
    h += w(x) * (d <= -1.0 ? 1.0 : (1.0 + d) * std::log1p(d) - d);
  }
  return std::max(0.0, m * h + m * (1.0 - w.sum()));
}

}  // namespace

Eigen::MatrixXd symmetrized(const DenseOperator& op, const Distribution& rho) {
  require_sizes(op, rho);
  const Eigen::VectorXd& w = rho.weights();
  if (w.size() && w.minCoeff() <= 0.0) throw InvalidArgument("reference measure must be positive");
  const Eigen::VectorXd s = w.cwiseSqrt();
  Eigen::MatrixXd S = s.asDiagonal() * op.matrix() * s.cwiseInverse().asDiagonal();
  const double asym = S.size() ? (S - S.transpose()).cwiseAbs().maxCoeff() : 0.0;
  if (asym > 1e-12) throw ReversibilityViolation("kernel is not reversible (asymmetry " + std::to_string(asym) + ")");
  return 0.5 * (S + S.transpose());
}

Eigen::VectorXd reversible_spectrum(const DenseOperator& op, const Distribution& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrized(op, rho), Eigen::EigenvaluesOnly);
  Eigen::VectorXd ev = es.eigenvalues().reverse();
  return ev;
}

double spectral_gap(const DenseOperator& op, const Distribution& rho) {
  const Eigen::VectorXd ev = reversible_spectrum(op, rho);
  if (op.flavor() == Flavor::Substochastic) return 1.0 - ev(0);
  if (ev.size() < 2) return 1.0;
  return 1.0 - ev(1);
}

std::vector<std::pair<std::uint64_t, double>> fibre_eigenvalues_tr(std::span<const FieldVector> state, std::size_t i,
                                                                   std::uint64_t budget) {
  if (state.size() < 2) throw InvalidArgument("fibre needs at least two rows");
  if (i >= state.size()) throw InvalidArgument("recipient index out of range");
  const std::uint32_t k = state[0].dim();
  std::vector<std::pair<std::uint64_t, double>> out;
  for (const auto& xi : enumerate_functionals(k, 2, true, budget)) {
    int s = 0;
    for (std::size_t j = 0; j < state.size(); ++j)
      if (j != i) s += eval_functional(xi, state[j]).value() ? -1 : 1;
    out.emplace_back(xi.code(), static_cast<double>(s) / static_cast<double>(state.size() - 1));
  }
  return out;
}

double dirichlet_form(const DenseOperator& op, const Distribution& rho, const Eigen::VectorXd& f,
                      const Eigen::VectorXd& g) {
  require_sizes(op, rho);
  if (f.size() != op.size() || g.size() != op.size()) throw DimensionMismatch("function size mismatch");
  symmetrized(op, rho);  // reversibility check
  const Eigen::MatrixXd& K = op.matrix();
  const Eigen::VectorXd& w = rho.weights();
  if (op.flavor() == Flavor::Substochastic) return w.dot(f.cwiseProduct(g - K * g));
  double e = 0.0;
  for (Eigen::Index x = 0; x < K.rows(); ++x)
    for (Eigen::Index y = 0; y < K.cols(); ++y)
      if (K(x, y) != 0.0) e += w(x) * K(x, y) * (f(x) - f(y)) * (g(x) - g(y));
  return 0.5 * e;
}

double entropy(const Distribution& rho, const Eigen::VectorXd& u) {
  if (u.size() != rho.size()) throw DimensionMismatch("function size mismatch");
  if (u.size() && u.minCoeff() < 0.0) throw InvalidArgument("entropy needs a nonnegative function");
  return relative_entropy_sum(rho.weights(), u);
}

double ent_squared(const Distribution& rho, const Eigen::VectorXd& f) {
  return entropy(rho, f.cwiseAbs2());
}

double variance(const Distribution& rho, const Eigen::VectorXd& f) {
  if (f.size() != rho.size()) throw DimensionMismatch("function size mismatch");
  const Eigen::VectorXd& w = rho.weights();
  const double m = w.dot(f);
  return std::max(0.0, w.dot(f.cwiseAbs2()) - m * m);
}

double poincare_constant(const DenseOperator& op, const Distribution& rho) {
  const double gap = spectral_gap(op, rho);
  if (gap <= 1e-14) return std::numeric_limits<double>::infinity();
  return 1.0 / gap;
}

double gap_lsi_bound(double poincare, double rho_min, double universal_constant) {
  if (!(rho_min > 0.0 && rho_min <= 1.0)) throw InvalidArgument("rho_min must lie in (0, 1]");
  return universal_constant * poincare * std::log(1.0 / rho_min);
}

namespace {

// Ratio machinery on a sparse copy of the kernel.
struct LsiProblem {
  SparseKernel K;
  Eigen::VectorXd w;
  std::vector<char> mask;
  Eigen::VectorXd kill;  // 1 - row sums; zero for stochastic kernels

  // Sum of nonnegative terms: 1/2 sum w K (f(x) - f(y))^2 + sum w kill f^2.
  double dirichlet(const Eigen::VectorXd& f, Eigen::VectorXd* lap) const {
    double e = 0.0;
    for (Eigen::Index x = 0; x < K.outerSize(); ++x) {
      double row = 0.0;
      for (SparseKernel::InnerIterator it(K, x); it; ++it) {
        const double d = f(x) - f(it.col());
        row += it.value() * d * d;
      }
      e += w(x) * (0.5 * row + kill(x) * f(x) * f(x));
    }
    if (lap) *lap = f - K * f;
    return e;
  }

  double ent(const Eigen::VectorXd& f) const { return relative_entropy_sum(w, f.cwiseAbs2()); }

  double ratio(const Eigen::VectorXd& f) const {
    const double e = dirichlet(f, nullptr);
    const double h = ent(f);
    // Below this the ratio is dominated by rounding in Ent.
    if (!(e > 1e-12 * w.dot(f.cwiseAbs2()))) return 0.0;
    return std::max(h, 0.0) / e;
  }

  void normalise(Eigen::VectorXd& f) const {
    for (Eigen::Index x = 0; x < f.size(); ++x)
      if (!mask[x] || f(x) < 0.0) f(x) = 0.0;
    const double m = w.dot(f.cwiseAbs2());
    if (m > 0.0) f /= std::sqrt(m);
  }

  // Natural-gradient (divided by w) of the ratio.
  Eigen::VectorXd gradient(const Eigen::VectorXd& f, double R) const {
    Eigen::VectorXd L;
    const double e = dirichlet(f, &L);
    const double m = w.dot(f.cwiseAbs2());
    const double logm = std::log(m);
    Eigen::VectorXd g(f.size());
    for (Eigen::Index x = 0; x < f.size(); ++x) {
      if (!mask[x]) {
        g(x) = 0.0;
        continue;
      }
      const double gent = f(x) > 0.0 ? 2.0 * f(x) * (std::log(f(x) * f(x)) - logm) : 0.0;
      g(x) = (gent - R * 2.0 * L(x)) / e;
    }
    return g;
  }

  double ascend(Eigen::VectorXd f, int steps, Eigen::VectorXd& best_f) const {
    normalise(f);
    double R = ratio(f);
    double eta = 0.1;
    int stale = 0;
    for (int s = 0; s < steps; ++s) {
      const Eigen::VectorXd g = gradient(f, R);
      bool accepted = false;
      for (int tries = 0; tries < 40; ++tries) {
        Eigen::VectorXd cand = f + eta * g;
        normalise(cand);
        const double Rc = ratio(cand);
        if (Rc > R) {
          stale = (Rc - R) <= 1e-12 * R ? stale + 1 : 0;
          f = std::move(cand);
          R = Rc;
          eta *= 1.5;
          accepted = true;
          break;
        }
        eta *= 0.5;
      }
      if (!accepted || stale > 100) break;
    }
    best_f = f;
    return R;
  }
};

double gaussian(Philox4x32& rng) {
  const double u1 = 1.0 - rng.uniform(), u2 = rng.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace

double lsi_ratio(const DenseOperator& op, const Distribution& rho, const Eigen::VectorXd& f) {
  require_sizes(op, rho);
  if (f.size() != op.size()) throw DimensionMismatch("function size mismatch");
  const double e = dirichlet_form(op, rho, f, f);
  const double h = ent_squared(rho, f);
  if (e <= 0.0) return h > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  return h / e;
}

LsiResult lsi_constant_numeric(const DenseOperator& op, const Distribution& rho, const LsiOptions& opts) {
  require_sizes(op, rho);
  symmetrized(op, rho);  // reversibility check
  const auto n = op.size();
  std::vector<char> mask = opts.support.empty() ? std::vector<char>(n, 1) : opts.support;
  if (static_cast<Eigen::Index>(mask.size()) != n) throw DimensionMismatch("support mask size mismatch");
  const auto active = static_cast<std::size_t>(std::count(mask.begin(), mask.end(), 1));
  if (active > opts.cap) throw BudgetExceeded("LSI optimisation space too large", active, opts.cap);
  if (active == 0) throw InvalidArgument("LSI support is empty");

  LsiProblem prob{op.matrix().sparseView(), rho.weights(), mask,
                  op.flavor() == Flavor::Stochastic
                      ? Eigen::VectorXd::Zero(n)
                      : (Eigen::VectorXd::Ones(n) - op.matrix().rowwise().sum()).cwiseMax(0.0).eval()};

  LsiResult result{0.0, Eigen::VectorXd::Zero(n), 0.0};
  // Near-constant witness built from the slowest nontrivial mode.
  if (opts.support.empty() && op.flavor() == Flavor::Stochastic && n >= 2) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrized(op, rho));
    Eigen::VectorXd phi = es.eigenvectors().col(n - 2).cwiseQuotient(rho.weights().cwiseSqrt());
    phi /= phi.cwiseAbs().maxCoeff();
    Eigen::VectorXd f = Eigen::VectorXd::Ones(n) + 1e-3 * phi;
    result.linearised = prob.ratio(f);
    result.constant = result.linearised;
    result.certificate = f;
  }

  const int restarts = std::max(1, opts.restarts);
  std::vector<double> best(restarts, 0.0);
  std::vector<Eigen::VectorXd> cert(restarts);
  parallel_for(static_cast<std::size_t>(restarts), [&](std::size_t r) {
    Philox4x32 rng(opts.seed, r);
    Eigen::VectorXd f(n);
    switch (r % 4) {
      case 0: {
        const double sigma = 0.5 + static_cast<double>((r / 4) % 4);
        for (Eigen::Index x = 0; x < n; ++x) f(x) = std::exp(sigma * gaussian(rng));
        break;
      }
      case 1:
        for (Eigen::Index x = 0; x < n; ++x) f(x) = 1.0 + 0.3 * gaussian(rng);
        break;
      case 2: {
        const double frac = rng.uniform();
        for (Eigen::Index x = 0; x < n; ++x) f(x) = (rng.uniform() < frac ? 1.0 : 0.0) + 1e-2;
        break;
      }
      default: {
        f.setConstant(1e-2);
        std::vector<Eigen::Index> on;
        for (Eigen::Index x = 0; x < n; ++x)
          if (mask[x]) on.push_back(x);
        f(on[rng.below(on.size())]) = 1.0;
        break;
      }
    }
    best[r] = prob.ascend(f, opts.steps, cert[r]);
  });
  for (int r = 0; r < restarts; ++r)
    if (best[r] > result.constant) {
      result.constant = best[r];
      result.certificate = cert[r];
    }
  return result;
}

}  // namespace prwalk
