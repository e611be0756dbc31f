#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "prwalk/chains.hpp"
#include "prwalk/parallel.hpp"
#include "prwalk/spectral.hpp"

namespace prwalk {

// ---- character statistics ----

// S_xi(z) = sum_i (-1)^{xi(z_i)} over F_2.
int s_xi(std::span<const FieldVector> z, const LinearFunctional& xi);
// All S_xi indexed by functional code (entry 0 is n), by a Walsh-Hadamard transform.
std::vector<int> all_s_xi(std::span<const FieldVector> z);
// One-column embedding: y in F_2^n read as n one-dimensional rows.
int s_xi_column(const FieldVector& y);

// N_xi(g) = #{i : xi(v_i) = 0}, xi on the horizontal part F_p^{2m}.
std::uint32_t n_xi(std::span<const HeisenbergElement> g, const LinearFunctional& xi);
// All N_xi indexed by functional code.
std::vector<std::uint32_t> all_n_xi(std::span<const HeisenbergElement> g,
                                    std::uint64_t budget = kDefaultEnumerationBudget);

// ---- good sets ----

struct GoodSetSpec {
  enum class Kind { Transvection, Heisenberg } kind = Kind::Transvection;
  double beta0 = 0.0;  // Heisenberg only

  static GoodSetSpec transvection() { return {Kind::Transvection, 0.0}; }
  static GoodSetSpec heisenberg(double beta0);
  // Largest admissible count beta0 * r, as an integer.
  std::uint32_t heisenberg_threshold(std::uint32_t r) const;
};

// 4 |S_xi| <= n for every xi != 0.
bool in_good_set(std::span<const FieldVector> z, const GoodSetSpec& spec);
// N_xi <= beta0 r for every xi != 0.
bool in_good_set(std::span<const HeisenbergElement> g, const GoodSetSpec& spec);
// One-column vectors: p = 2 uses the transvection rule with k = 1; odd p uses the
// Heisenberg rule with h = 1, where N_xi is the number of zero entries.
bool in_good_set(const FieldVector& y, const GoodSetSpec& spec);

// Lower bound on the Heisenberg fibre gap when every hyperplane carries at most a
// beta fraction of the frozen horizontal parts: min{1 - beta, (1 - beta)^2 (1 - p^{-1/2}) / 2}.
double heisenberg_fibre_gap_bound(std::uint32_t p, double beta);

// ---- estimators ----

struct Estimate {
  double value;
  double lo;
  double hi;
  std::uint64_t successes;
  std::uint64_t trials;
};

inline constexpr double kWilsonZ99 = 2.5758293035489004;

Estimate wilson(std::uint64_t successes, std::uint64_t trials, double z = kWilsonZ99);

// Uniform draw from the ambient set (all tuples, no spanning condition).
RowTuple sample_ambient(const TransvectionWalk& w, Philox4x32& rng);
RowTuple sample_ambient(const PAryTransvectionWalk& w, Philox4x32& rng);
FieldVector sample_ambient(const OneColumnWalk& w, Philox4x32& rng);
HeisTuple sample_ambient(const PaPraWalk& w, Philox4x32& rng);

struct GoodSetMeasure {
  Estimate pi_complement;  // uniform on Omega
  Estimate mu_complement;  // uniform on the ambient set
  bool exact;
};

template <class W>
GoodSetMeasure good_set_measure_exact(const W& walk, const GoodSetSpec& spec,
                                      std::uint64_t budget = kDefaultEnumerationBudget) {
  const std::uint64_t ambient = walk.ambient_size();
  if (ambient > budget) throw BudgetExceeded("good set enumeration too large", ambient, budget);
  std::uint64_t omega = 0, bad_omega = 0, bad_ambient = 0;
  walk.for_each_ambient([&](std::uint64_t c) {
    const auto s = walk.decode(c);
    const bool bad = !in_good_set(s, spec);
    bad_ambient += bad;
    if (walk.in_omega(s)) {
      ++omega;
      bad_omega += bad;
    }
  });
  const double po = omega ? static_cast<double>(bad_omega) / static_cast<double>(omega) : 0.0;
  const double pa = static_cast<double>(bad_ambient) / static_cast<double>(ambient);
  return {{po, po, po, bad_omega, omega}, {pa, pa, pa, bad_ambient, ambient}, true};
}

// Draws `samples` ambient tuples; Omega-conditioned estimate uses those that land in Omega.
template <class W>
GoodSetMeasure good_set_measure_mc(const W& walk, const GoodSetSpec& spec, std::uint64_t samples,
                                   std::uint64_t seed) {
  if (samples == 0) throw InvalidArgument("good_set_measure needs samples > 0");
  std::uint64_t omega = 0, bad_omega = 0, bad_ambient = 0;
  Philox4x32 rng(seed, 0);
  for (std::uint64_t i = 0; i < samples; ++i) {
    rng.seek(i);
    const auto s = sample_ambient(walk, rng);
    const bool bad = !in_good_set(s, spec);
    bad_ambient += bad;
    if (walk.in_omega(s)) {
      ++omega;
      bad_omega += bad;
    }
  }
  return {wilson(bad_omega, omega), wilson(bad_ambient, samples), false};
}

struct OccupancyRow {
  std::uint64_t t;
  Estimate failure;  // P(X_t not in G)
};

// Trajectory `trial` uses the stream (seed, trial); step t is seeked to t.
template <class W>
std::vector<OccupancyRow> burnin_occupancy(const Kernel<W>& kernel, const GoodSetSpec& spec,
                                           const typename W::State& start, std::span<const std::uint64_t> t_grid,
                                           std::uint64_t trials, std::uint64_t seed) {
  if (!kernel.walk().in_omega(start)) throw InvalidArgument("burn-in start outside the state space");
  if (trials == 0) throw InvalidArgument("burn-in needs trials > 0");
  std::vector<std::uint64_t> grid(t_grid.begin(), t_grid.end());
  if (!std::is_sorted(grid.begin(), grid.end())) throw InvalidArgument("time grid must be sorted");
  std::vector<std::vector<char>> bad(trials, std::vector<char>(grid.size(), 0));
  parallel_for(trials, [&](std::size_t trial) {
    Philox4x32 rng(seed, trial);
    auto state = start;
    std::uint64_t t = 0;
    for (std::size_t g = 0; g < grid.size(); ++g) {
      for (; t < grid[g]; ++t) {
        rng.seek(t);
        kernel.sample(state, rng);
      }
      bad[trial][g] = !in_good_set(state, spec);
    }
  });
  std::vector<OccupancyRow> rows;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    std::uint64_t f = 0;
    for (const auto& b : bad) f += b[g];
    rows.push_back({grid[g], wilson(f, trials)});
  }
  return rows;
}

// ---- total variation ----

// Half the L1 distance.
double tv_exact(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

// Worst-start TV to pi at t = 0..t_max for the given start indices.
std::vector<double> mixing_curve_exact(const SparseKernel& K, const Eigen::VectorXd& pi,
                                       std::span<const std::size_t> starts, std::uint64_t t_max);

// min t with worst-start TV <= eps; throws BudgetExceeded if not reached by max_steps.
std::uint64_t mixing_time_exact(const SparseKernel& K, const Eigen::VectorXd& pi, std::span<const std::size_t> starts,
                                double eps = 0.25, std::uint64_t max_steps = 1000000);

template <class W>
std::uint64_t mixing_time_exact(const Kernel<W>& kernel, double eps = 0.25,
                                std::uint64_t budget = kDefaultEnumerationBudget) {
  const EnumeratedSpace space = enumerate_space(kernel.walk(), budget);
  const SparseKernel K = sparse_kernel(kernel, space);
  const auto n = static_cast<Eigen::Index>(space.size());
  const Eigen::VectorXd pi = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  std::vector<std::size_t> starts;
  if constexpr (std::is_same_v<W, TransvectionWalk>) {
    for (const auto& o : transvection_orbits(kernel.walk(), space)) starts.push_back(o.representative);
  } else {
    for (std::size_t x = 0; x < space.size(); ++x) starts.push_back(x);
  }
  return mixing_time_exact(K, pi, starts, eps);
}

// max(0, 1 - M^t / |Omega|), evaluated in log space.
double tv_counting_lower(std::uint64_t t, double move_count, double omega_size);

// One-column walk on F_2^n \ {0} started at e_1, lumped by (y_1, weight of y_2..y_n).
// The law from e_1 is uniform on each lump, so the lumped TV equals the exact TV.
struct OneColumnLumped {
  std::uint32_t n;
  SparseKernel kernel;      // on lumps, index = y1 * n + w (lump (0,0) unused and absorbing-free)
  Eigen::VectorXd pi;       // lumped uniform law on nonzero vectors
  std::size_t start;        // lump of e_1
};
OneColumnLumped one_column_lumped(std::uint32_t n, double laziness = 0.0);
std::size_t one_column_lump(const FieldVector& y);
std::vector<double> one_column_tv_curve(const OneColumnLumped& lumped, std::uint64_t t_max);

// ---- birth-death support chain ----

class BDParams {
 public:
  BDParams(std::uint32_t r, std::uint32_t p);

  std::uint32_t r() const noexcept { return r_; }
  std::uint32_t p() const noexcept { return p_; }
  // 1-based s in [1, r].
  double birth(std::uint32_t s) const;
  double death(std::uint32_t s) const;
  // D_s / B_s for s < r.
  double ratio(std::uint32_t s) const;

 private:
  void check(std::uint32_t s) const;
  std::uint32_t r_;
  std::uint32_t p_;
  std::vector<double> b_, d_;
};

std::pair<double, double> bd_probs(std::uint32_t s, const BDParams& params);
// Expected hitting time of A from s; 0 when s >= A.
double bd_hitting_time(std::uint32_t s, std::uint32_t A, const BDParams& params);
// P_s(hit A0 before A1).
double bd_crossing_prob(std::uint32_t s, std::uint32_t A0, std::uint32_t A1, const BDParams& params);

// ---- rate functions ----

// KL divergence of Bernoulli(beta) from Bernoulli(1/p), for 1/p <= beta <= 1.
double rate_I(std::uint32_t p, double beta);
// Integral of log((p-1)(1-u)/u) over [a, b], Gauss-Kronrod to 1e-10.
double rate_J(std::uint32_t p, double a, double b);

struct RateConstants {
  std::uint32_t p;
  double epsilon;
  double beta0;
  double beta1;
  double alpha0;
  double alpha_star;
  double alpha1;
  double eta0;
};

RateConstants select_constants(std::uint32_t p, double epsilon);

struct SupportGrowthRow {
  std::uint32_t r;
  std::uint32_t target;     // ceil(alpha r)
  double mean;              // Monte Carlo mean hitting time from s = 1
  double stderr_mean;
  double formula;           // bd_hitting_time(1, target)
  double normalised;        // mean / (r log r)
};

struct SupportGrowthReport {
  std::uint32_t p;
  double alpha;
  std::vector<SupportGrowthRow> rows;
  double fitted_exponent;   // slope of log(mean) against log(r log r)
};

// Simulates the one-column p-ary walk from a weight-1 vector until the support reaches ceil(alpha r).
SupportGrowthReport support_growth_mean_check(std::uint32_t p, double alpha, std::span<const std::uint32_t> r_grid,
                                              std::uint64_t trials, std::uint64_t seed);

}  // namespace prwalk
