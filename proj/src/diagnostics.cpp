#include "prwalk/diagnostics.hpp"

#include <bit>
#include <cmath>

namespace prwalk {

int s_xi(std::span<const FieldVector> z, const LinearFunctional& xi) {
  if (xi.modulus() != 2) throw UnsupportedCharacteristic("S_xi is defined over F_2");
  int s = 0;
  for (const auto& row : z) {
    if (row.dim() != xi.dim() || row.modulus() != 2) throw DimensionMismatch("S_xi: row and functional differ");
    s += eval_functional(xi, row).value() ? -1 : 1;
  }
  return s;
}

std::vector<int> all_s_xi(std::span<const FieldVector> z) {
  if (z.empty()) throw InvalidArgument("S_xi needs at least one row");
  const std::uint32_t k = z[0].dim();
  if (k > 24) throw BudgetExceeded("Walsh-Hadamard transform too large", std::uint64_t{1} << k, std::uint64_t{1} << 24);
  std::vector<int> c(std::size_t{1} << k, 0);
  for (const auto& row : z) {
    if (row.dim() != k || row.modulus() != 2) throw DimensionMismatch("S_xi: rows must share dimension over F_2");
    ++c[row.code()];
  }
  for (std::size_t len = 1; len < c.size(); len <<= 1)
    for (std::size_t i = 0; i < c.size(); i += 2 * len)
      for (std::size_t j = i; j < i + len; ++j) {
        const int a = c[j], b = c[j + len];
        c[j] = a + b;
        c[j + len] = a - b;
      }
  return c;
}

int s_xi_column(const FieldVector& y) {
  if (y.modulus() != 2) throw UnsupportedCharacteristic("S_xi is defined over F_2");
  return static_cast<int>(y.dim()) - 2 * static_cast<int>(y.weight());
}

std::uint32_t n_xi(std::span<const HeisenbergElement> g, const LinearFunctional& xi) {
  std::uint32_t count = 0;
  for (const auto& e : g) {
    if (e.v.dim() != xi.dim() || e.v.modulus() != xi.modulus())
      throw DimensionMismatch("N_xi: element and functional differ");
    count += eval_functional(xi, e.v).value() == 0;
  }
  return count;
}

std::vector<std::uint32_t> all_n_xi(std::span<const HeisenbergElement> g, std::uint64_t budget) {
  if (g.empty()) throw InvalidArgument("N_xi needs at least one element");
  const std::uint32_t h = g[0].v.dim(), p = g[0].v.modulus();
  std::vector<std::uint32_t> out;
  for (const auto& xi : enumerate_functionals(h, p, true, budget)) out.push_back(n_xi(g, xi));
  return out;
}

GoodSetSpec GoodSetSpec::heisenberg(double beta0) {
  if (!(beta0 > 0.0 && beta0 < 1.0)) throw InvalidArgument("beta0 must lie in (0, 1)");
  return {Kind::Heisenberg, beta0};
}

std::uint32_t GoodSetSpec::heisenberg_threshold(std::uint32_t r) const {
  return static_cast<std::uint32_t>(std::floor(beta0 * static_cast<double>(r) + 1e-9));
}

bool in_good_set(std::span<const FieldVector> z, const GoodSetSpec& spec) {
  if (spec.kind != GoodSetSpec::Kind::Transvection) throw InvalidArgument("tuple of vectors needs a transvection good set");
  const auto s = all_s_xi(z);
  const auto n = static_cast<long>(z.size());
  for (std::size_t xi = 1; xi < s.size(); ++xi)
    if (4 * std::labs(s[xi]) > n) return false;
  return true;
}

bool in_good_set(std::span<const HeisenbergElement> g, const GoodSetSpec& spec) {
  if (spec.kind != GoodSetSpec::Kind::Heisenberg) throw InvalidArgument("Heisenberg tuple needs a Heisenberg good set");
  if (g.empty()) throw InvalidArgument("empty tuple");
  const std::uint32_t limit = spec.heisenberg_threshold(static_cast<std::uint32_t>(g.size()));
  for (const auto& xi : enumerate_functionals(g[0].v.dim(), g[0].v.modulus(), false, kDefaultEnumerationBudget))
    if (n_xi(g, xi) > limit) return false;
  return true;
}

bool in_good_set(const FieldVector& y, const GoodSetSpec& spec) {
  if (y.modulus() == 2) {
    if (spec.kind != GoodSetSpec::Kind::Transvection) throw InvalidArgument("binary column needs a transvection good set");
    return 4 * std::abs(s_xi_column(y)) <= static_cast<int>(y.dim());
  }
  if (spec.kind != GoodSetSpec::Kind::Heisenberg) throw InvalidArgument("p-ary column needs a Heisenberg good set");
  return y.dim() - y.weight() <= spec.heisenberg_threshold(y.dim());
}

double heisenberg_fibre_gap_bound(std::uint32_t p, double beta) {
  require_prime(p);
  if (!(beta > 0.0 && beta < 1.0)) throw InvalidArgument("beta must lie in (0, 1)");
  const double q = 1.0 - beta;
  return std::min(q, 0.5 * q * q * (1.0 - 1.0 / std::sqrt(static_cast<double>(p))));
}

Estimate wilson(std::uint64_t successes, std::uint64_t trials, double z) {
  if (successes > trials) throw InvalidArgument("successes exceed trials");
  if (trials == 0) return {0.0, 0.0, 1.0, 0, 0};
  const double n = static_cast<double>(trials);
  const double ph = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double centre = (ph + z2 / (2 * n)) / (1 + z2 / n);
  const double half = z / (1 + z2 / n) * std::sqrt(ph * (1 - ph) / n + z2 / (4 * n * n));
  return {ph, std::max(0.0, centre - half), std::min(1.0, centre + half), successes, trials};
}

namespace {

FieldVector random_vector(std::uint32_t dim, std::uint32_t p, Philox4x32& rng) {
  FieldVector v(dim, p);
  for (std::uint32_t i = 0; i < dim; ++i) v.set(i, static_cast<std::uint32_t>(rng.below(p)));
  return v;
}

}  // namespace

RowTuple sample_ambient(const TransvectionWalk& w, Philox4x32& rng) {
  RowTuple z;
  for (std::uint32_t i = 0; i < w.n(); ++i) z.push_back(random_vector(w.k(), 2, rng));
  return z;
}

RowTuple sample_ambient(const PAryTransvectionWalk& w, Philox4x32& rng) {
  RowTuple v;
  for (std::uint32_t i = 0; i < w.r(); ++i) v.push_back(random_vector(w.h(), w.p(), rng));
  return v;
}

FieldVector sample_ambient(const OneColumnWalk& w, Philox4x32& rng) { return random_vector(w.r(), w.p(), rng); }

HeisTuple sample_ambient(const PaPraWalk& w, Philox4x32& rng) {
  HeisTuple g;
  for (std::uint32_t i = 0; i < w.r(); ++i)
    g.emplace_back(random_vector(w.h(), w.p(), rng), FieldScalar(rng.below(w.p()), w.p()));
  return g;
}

double tv_exact(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size()) throw DimensionMismatch("distributions live on different spaces");
  return 0.5 * (a - b).cwiseAbs().sum();
}

namespace {

void check_starts(const SparseKernel& K, const Eigen::VectorXd& pi, std::span<const std::size_t> starts) {
  if (K.rows() != K.cols() || K.rows() != pi.size()) throw DimensionMismatch("kernel and stationary law differ");
  if (starts.empty()) throw InvalidArgument("mixing needs at least one start");
  for (auto s : starts)
    if (s >= static_cast<std::size_t>(K.rows())) throw InvalidArgument("start index out of range");
}

Eigen::MatrixXd point_masses(Eigen::Index n, std::span<const std::size_t> starts) {
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(starts.size()), n);
  for (std::size_t i = 0; i < starts.size(); ++i) D(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(starts[i])) = 1.0;
  return D;
}

double worst_tv(const Eigen::MatrixXd& D, const Eigen::VectorXd& pi) {
  return 0.5 * (D.rowwise() - pi.transpose()).cwiseAbs().rowwise().sum().maxCoeff();
}

}  // namespace

std::vector<double> mixing_curve_exact(const SparseKernel& K, const Eigen::VectorXd& pi,
                                       std::span<const std::size_t> starts, std::uint64_t t_max) {
  check_starts(K, pi, starts);
  Eigen::MatrixXd D = point_masses(K.rows(), starts);
  std::vector<double> curve{worst_tv(D, pi)};
  for (std::uint64_t t = 1; t <= t_max; ++t) {
    D = D * K;
    curve.push_back(worst_tv(D, pi));
  }
  return curve;
}

std::uint64_t mixing_time_exact(const SparseKernel& K, const Eigen::VectorXd& pi, std::span<const std::size_t> starts,
                                double eps, std::uint64_t max_steps) {
  check_starts(K, pi, starts);
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidArgument("epsilon must lie in (0, 1)");
  Eigen::MatrixXd D = point_masses(K.rows(), starts);
  for (std::uint64_t t = 0;; ++t) {
    if (worst_tv(D, pi) <= eps) return t;
    if (t == max_steps) throw BudgetExceeded("mixing time not reached", t + 1, max_steps);
    D = D * K;
  }
}

double tv_counting_lower(std::uint64_t t, double move_count, double omega_size) {
  if (!(move_count >= 1.0 && omega_size >= 1.0)) throw InvalidArgument("counting bound needs M >= 1 and |Omega| >= 1");
  const double log_ratio = static_cast<double>(t) * std::log(move_count) - std::log(omega_size);
  if (log_ratio >= 0.0) return 0.0;
  return -std::expm1(log_ratio);
}

OneColumnLumped one_column_lumped(std::uint32_t n, double laziness) {
  if (n < 2 || n > 1000) throw InvalidArgument("lumped one-column chain needs 2 <= n <= 1000");
  if (!(laziness >= 0.0 && laziness < 1.0)) throw InvalidArgument("laziness must lie in [0, 1)");
  const std::uint32_t m = n - 1;
  const auto size = static_cast<Eigen::Index>(2 * n - 1);
  auto idx = [&](std::uint32_t y1, std::uint32_t w) { return static_cast<int>(y1 * n + w - 1); };
  const double total = static_cast<double>(n) * m;
  std::vector<Eigen::Triplet<double>> trips;
  auto add = [&](int from, int to, double count) {
    if (count > 0.0) trips.emplace_back(from, to, (1.0 - laziness) * count / total);
  };
  for (std::uint32_t y1 = 0; y1 < 2; ++y1)
    for (std::uint32_t w = 0; w <= m; ++w) {
      if (y1 == 0 && w == 0) continue;
      const int x = idx(y1, w);
      if (laziness > 0.0) trips.emplace_back(x, x, laziness);
      const double dw = w, dm = m;
      // donor 1, recipient in the rest
      if (y1 == 1) {
        if (w > 0) add(x, idx(1, w - 1), dw);
        if (w < m) add(x, idx(1, w + 1), dm - dw);
      } else {
        add(x, x, dm);
      }
      // recipient 1, donor in the rest
      if (w > 0) add(x, idx(1 - y1, w), dw);
      add(x, x, dm - dw);
      // both in the rest
      if (w > 1) add(x, idx(y1, w - 1), dw * (dw - 1));
      if (w < m) add(x, idx(y1, w + 1), dw * (dm - dw));
      add(x, x, (dm - dw) * (dm - 1));
    }
  OneColumnLumped out{n, SparseKernel(size, size), Eigen::VectorXd(size), static_cast<std::size_t>(idx(1, 0))};
  out.kernel.setFromTriplets(trips.begin(), trips.end());
  out.kernel.makeCompressed();
  const double log_total = static_cast<double>(n) * std::log(2.0) + std::log1p(-std::ldexp(1.0, -static_cast<int>(n)));
  for (std::uint32_t y1 = 0; y1 < 2; ++y1)
    for (std::uint32_t w = 0; w <= m; ++w) {
      if (y1 == 0 && w == 0) continue;
      const double lc = std::lgamma(m + 1.0) - std::lgamma(w + 1.0) - std::lgamma(m - w + 1.0);
      out.pi(idx(y1, w)) = std::exp(lc - log_total);
    }
  return out;
}

std::size_t one_column_lump(const FieldVector& y) {
  if (y.modulus() != 2) throw UnsupportedCharacteristic("lumping is for the binary one-column walk");
  if (y.is_zero()) throw InvalidArgument("zero vector is outside the state space");
  const std::uint32_t y1 = y.get(0);
  return static_cast<std::size_t>(y1) * y.dim() + (y.weight() - y1) - 1;
}

std::vector<double> one_column_tv_curve(const OneColumnLumped& lumped, std::uint64_t t_max) {
  const std::size_t start[] = {lumped.start};
  return mixing_curve_exact(lumped.kernel, lumped.pi, start, t_max);
}

}  // namespace prwalk
