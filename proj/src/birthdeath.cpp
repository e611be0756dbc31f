#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "prwalk/diagnostics.hpp"

namespace prwalk {

BDParams::BDParams(std::uint32_t r, std::uint32_t p) : r_(r), p_(p), b_(r + 1, 0.0), d_(r + 1, 0.0) {
  if (r < 2) throw InvalidArgument("support chain needs r >= 2");
  require_prime(p);
  const double rr = static_cast<double>(r) * (r - 1), dp = p;
  for (std::uint32_t s = 1; s <= r; ++s) {
    const double ds = s;
    b_[s] = (dp - 1) / dp * ds * (r - ds) / rr;
    d_[s] = 1.0 / dp * ds * (ds - 1) / rr;
  }
}

void BDParams::check(std::uint32_t s) const {
  if (s < 1 || s > r_) throw InvalidArgument("support size out of range");
}

double BDParams::birth(std::uint32_t s) const {
  check(s);
  return b_[s];
}

double BDParams::death(std::uint32_t s) const {
  check(s);
  return d_[s];
}

double BDParams::ratio(std::uint32_t s) const {
  check(s);
  if (s == r_) throw InvalidArgument("ratio undefined at s = r");
  return (s - 1.0) / ((p_ - 1.0) * (r_ - s));
}

std::pair<double, double> bd_probs(std::uint32_t s, const BDParams& params) {
  return {params.birth(s), params.death(s)};
}

double bd_hitting_time(std::uint32_t s, std::uint32_t A, const BDParams& params) {
  if (s < 1 || A < 1 || A > params.r() || s > params.r()) throw InvalidArgument("hitting time arguments out of range");
  if (s >= A) return 0.0;
  // d_k = 1/B_k + rho_k d_{k-1}: expected time to step from k to k+1.
  double d = 0.0, e = 0.0;
  for (std::uint32_t k = 1; k < A; ++k) {
    d = 1.0 / params.birth(k) + params.ratio(k) * d;
    if (k >= s) e += d;
  }
  return e;
}

double bd_crossing_prob(std::uint32_t s, std::uint32_t A0, std::uint32_t A1, const BDParams& params) {
  if (!(1 <= A0 && A0 < A1 && A1 <= params.r())) throw InvalidArgument("crossing levels must satisfy 1 <= A0 < A1 <= r");
  if (s < A0 || s > A1) throw InvalidArgument("start must lie between the crossing levels");
  // Weights w_k = prod_{m=A0+1}^{k} rho_m for k in [A0, A1).
  double num = 0.0, den = 0.0, w = 1.0;
  for (std::uint32_t k = A0; k < A1; ++k) {
    if (k > A0) w *= params.ratio(k);
    den += w;
    if (k >= s) num += w;
  }
  return num / den;
}

double rate_I(std::uint32_t p, double beta) {
  require_prime(p);
  const double dp = p;
  if (!(beta >= 1.0 / dp && beta <= 1.0)) throw InvalidArgument("I_p needs 1/p <= beta <= 1");
  const double rest = beta < 1.0 ? (1.0 - beta) * std::log((1.0 - beta) * dp / (dp - 1.0)) : 0.0;
  return beta * std::log(beta * dp) + rest;
}

double rate_J(std::uint32_t p, double a, double b) {
  require_prime(p);
  const double dp = p, alpha_star = (dp - 1.0) / dp;
  if (!(a > 0.0 && a <= b && b <= alpha_star)) throw InvalidArgument("J_p needs 0 < a <= b <= (p-1)/p");
  if (a == b) return 0.0;
  auto f = [dp](double u) { return std::log((dp - 1.0) * (1.0 - u) / u); };
  double err = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-13, &err);
  if (!(err <= 1e-10 * std::max(1.0, std::abs(v)))) throw InvariantViolation("J_p quadrature did not converge");
  return v;
}

RateConstants select_constants(std::uint32_t p, double epsilon) {
  require_prime(p);
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidArgument("epsilon must lie in (0, 1)");
  const double dp = p, target = epsilon * std::log(dp);
  double beta0 = -1.0;
  for (int k = static_cast<int>(std::floor(1000.0 / dp)) + 1; k < 1000; ++k) {
    const double b = k / 1000.0;
    if (b <= 1.0 / dp) continue;
    if (rate_I(p, b) > target + 1e-6) {
      beta0 = b;
      break;
    }
  }
  if (beta0 < 0.0) throw InvalidArgument("no beta0 on the grid satisfies the rate condition");
  RateConstants c{p, epsilon, beta0, 0.5 * (1.0 + beta0), 1.0 - beta0, (dp - 1.0) / dp, 0.0, 0.0};
  // alpha1 with J(alpha0, alpha1) halfway between eps log p and I_p(beta0)
  const double goal = 0.5 * (target + rate_I(p, beta0));
  double lo = c.alpha0, hi = c.alpha_star;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    (rate_J(p, c.alpha0, mid) < goal ? lo : hi) = mid;
  }
  c.alpha1 = hi;
  c.eta0 = (rate_J(p, c.alpha0, c.alpha1) - target) / 3.0;
  if (!(c.eta0 > 0.0 && c.alpha1 < c.alpha_star)) throw InvariantViolation("constant selection failed");
  return c;
}

SupportGrowthReport support_growth_mean_check(std::uint32_t p, double alpha, std::span<const std::uint32_t> r_grid,
                                              std::uint64_t trials, std::uint64_t seed) {
  require_prime(p);
  if (p == 2) throw UnsupportedCharacteristic("support growth uses the p-ary walk with random exponent; p must be odd");
  if (!(alpha > 0.0 && alpha < (p - 1.0) / p)) throw InvalidArgument("alpha must lie in (0, (p-1)/p)");
  if (trials < 2) throw InvalidArgument("support growth needs at least two trials");
  SupportGrowthReport rep{p, alpha, {}, 0.0};
  for (std::uint32_t r : r_grid) {
    const BDParams params(r, p);
    const auto target = static_cast<std::uint32_t>(std::max(1.0, std::ceil(alpha * r - 1e-12)));
    const Kernel<OneColumnWalk> kernel(OneColumnWalk(r, p));
    std::vector<double> times(trials, 0.0);
    parallel_for(trials, [&](std::size_t trial) {
      Philox4x32 rng(seed, (std::uint64_t{r} << 32) | trial);
      FieldVector y = FieldVector::basis(r, p, 0);
      std::uint64_t t = 0;
      while (y.weight() < target) {
        rng.seek(t++);
        kernel.sample(y, rng);
      }
      times[trial] = static_cast<double>(t);
    });
    double mean = 0.0, sq = 0.0;
    for (double t : times) mean += t;
    mean /= static_cast<double>(trials);
    for (double t : times) sq += (t - mean) * (t - mean);
    const double se = std::sqrt(sq / static_cast<double>(trials - 1) / static_cast<double>(trials));
    const double rlogr = r * std::log(static_cast<double>(r));
    rep.rows.push_back({r, target, mean, se, bd_hitting_time(1, target, params), mean / rlogr});
  }
  // least squares slope on rows with positive means
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (const auto& row : rep.rows) {
    if (row.mean <= 0.0 || row.r < 2) continue;
    const double x = std::log(row.r * std::log(static_cast<double>(row.r))), y = std::log(row.mean);
    sx += x, sy += y, sxx += x * x, sxy += x * y, ++cnt;
  }
  if (cnt >= 2) rep.fitted_exponent = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  return rep;
}

}  // namespace prwalk
