#pragma once

// Independent reference implementations. None of these call into the library;
// they work on plain integer vectors and dense matrices.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <set>
#include <utility>
#include <vector>

namespace oracle {

using Vec = std::vector<int>;

inline int mod(long long a, int p) { return static_cast<int>(((a % p) + p) % p); }

inline int inv_mod(int a, int p) {
  for (int x = 1; x < p; ++x)
    if (mod(static_cast<long long>(a) * x, p) == 1) return x;
  return 0;
}

// Gaussian elimination over F_p on a copy.
inline std::size_t rank(std::vector<Vec> rows, int p) {
  if (rows.empty()) return 0;
  const std::size_t cols = rows[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    std::size_t piv = r;
    while (piv < rows.size() && mod(rows[piv][c], p) == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[r], rows[piv]);
    const int inv = inv_mod(mod(rows[r][c], p), p);
    for (auto& x : rows[r]) x = mod(static_cast<long long>(x) * inv, p);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r) continue;
      const int f = mod(rows[i][c], p);
      for (std::size_t j = 0; j < cols; ++j) rows[i][j] = mod(rows[i][j] - static_cast<long long>(f) * rows[r][j], p);
    }
    ++r;
  }
  return r;
}

// Size of the span by enumerating every linear combination.
inline std::size_t span_size(const std::vector<Vec>& rows, int p) {
  if (rows.empty()) return 1;
  const std::size_t d = rows[0].size();
  std::set<Vec> seen;
  std::vector<int> coef(rows.size(), 0);
  while (true) {
    Vec v(d, 0);
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < d; ++j) v[j] = mod(v[j] + coef[i] * rows[i][j], p);
    seen.insert(v);
    std::size_t i = 0;
    while (i < coef.size() && ++coef[i] == p) coef[i++] = 0;
    if (i == coef.size()) break;
  }
  return seen.size();
}

inline Vec digits(std::uint64_t code, std::size_t d, int p) {
  Vec v(d);
  for (std::size_t i = 0; i < d; ++i) {
    v[i] = static_cast<int>(code % p);
    code /= p;
  }
  return v;
}

inline int dot(const Vec& a, const Vec& b, int p) {
  long long s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += static_cast<long long>(a[i]) * b[i];
  return mod(s, p);
}

// omega on consecutive pairs (e_1,e_2), (e_3,e_4), ...
inline int omega(const Vec& v, const Vec& w, int p) {
  long long s = 0;
  for (std::size_t q = 0; q + 1 < v.size(); q += 2) s += static_cast<long long>(v[q]) * w[q + 1] - static_cast<long long>(v[q + 1]) * w[q];
  return mod(s, p);
}

struct Heis {
  Vec v;
  int z;
  bool operator<(const Heis& o) const { return std::tie(v, z) < std::tie(o.v, o.z); }
  bool operator==(const Heis& o) const { return v == o.v && z == o.z; }
};

inline Heis heis_mul(const Heis& a, const Heis& b, int p) {
  Vec v(a.v.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = mod(a.v[i] + b.v[i], p);
  const int half = (p + 1) / 2;
  return {v, mod(a.z + b.z + static_cast<long long>(half) * omega(a.v, b.v, p), p)};
}

// Order of the subgroup generated by gens, by closure under multiplication.
inline std::size_t subgroup_order(const std::vector<Heis>& gens, int p) {
  const std::size_t h = gens.empty() ? 0 : gens[0].v.size();
  std::set<Heis> seen{{Vec(h, 0), 0}};
  std::vector<Heis> frontier{{Vec(h, 0), 0}};
  while (!frontier.empty()) {
    std::vector<Heis> next;
    for (const auto& x : frontier)
      for (const auto& g : gens) {
        Heis y = heis_mul(x, g, p);
        if (seen.insert(y).second) next.push_back(y);
      }
    frontier.swap(next);
  }
  return seen.size();
}

inline int s_xi(const std::vector<Vec>& z, const Vec& xi) {
  int s = 0;
  for (const auto& row : z) s += dot(row, xi, 2) ? -1 : 1;
  return s;
}

inline double binom(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

// P(Poi(t) > L) by direct summation in long double.
inline double poisson_upper(double t, std::uint64_t L) {
  long double term = std::exp(static_cast<long double>(-t)), cdf = 0;
  for (std::uint64_t j = 0; j <= L; ++j) {
    cdf += term;
    term *= static_cast<long double>(t) / static_cast<long double>(j + 1);
  }
  return static_cast<double>(std::max<long double>(0, 1 - cdf));
}

inline double tv(const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return 0.5 * (a - b).cwiseAbs().sum(); }

// Worst-start TV to uniform after t steps by dense matrix powers.
inline double worst_tv(const Eigen::MatrixXd& K, int t) {
  Eigen::MatrixXd M = Eigen::MatrixXd::Identity(K.rows(), K.cols());
  for (int i = 0; i < t; ++i) M = M * K;
  const double u = 1.0 / static_cast<double>(K.rows());
  return 0.5 * (M.array() - u).abs().rowwise().sum().maxCoeff();
}

// Birth-death support chain on {1..r}: birth and death probabilities.
inline std::pair<double, double> bd(int s, int r, int p) {
  const double b = (p - 1.0) / p * s * (r - s) / (r * (r - 1.0));
  const double d = 1.0 / p * s * (s - 1.0) / (r * (r - 1.0));
  return {b, d};
}

// E_s[time to hit A] by solving the first-step linear system on {1..A-1}.
inline double bd_hitting(int s, int A, int r, int p) {
  if (s >= A) return 0.0;
  const int n = A - 1;
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd rhs = Eigen::VectorXd::Ones(n);
  for (int x = 1; x <= n; ++x) {
    auto [b, d] = bd(x, r, p);
    M(x - 1, x - 1) = b + d;
    if (x + 1 <= n) M(x - 1, x) = -b;
    if (x - 1 >= 1) M(x - 1, x - 2) = -d;
  }
  return M.partialPivLu().solve(rhs)(s - 1);
}

// P_s(hit A0 before A1) for the embedded jump chain by a linear solve.
inline double bd_crossing(int s, int A0, int A1, int r, int p) {
  if (s <= A0) return 1.0;
  if (s >= A1) return 0.0;
  const int n = A1 - A0 - 1;
  Eigen::MatrixXd M = Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  for (int x = A0 + 1; x < A1; ++x) {
    auto [b, d] = bd(x, r, p);
    const double up = b / (b + d), down = d / (b + d);
    const int i = x - A0 - 1;
    if (x + 1 < A1) M(i, i + 1) -= up;
    if (x - 1 > A0) M(i, i - 1) -= down;
    else rhs(i) += down;
  }
  return M.partialPivLu().solve(rhs)(s - A0 - 1);
}

// Antiderivative of log((p-1)(1-u)/u).
inline double j_antiderivative(int p, double u) {
  return u * std::log(p - 1.0) - (1.0 - u) * std::log(1.0 - u) - u * std::log(u);
}

inline double kl_bernoulli(double beta, double q) {
  double s = beta * std::log(beta / q);
  if (beta < 1.0) s += (1.0 - beta) * std::log((1.0 - beta) / (1.0 - q));
  return s;
}

}  // namespace oracle
