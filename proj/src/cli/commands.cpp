#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "prwalk/cli.hpp"

namespace prwalk::cli {

namespace {

constexpr int kHistogramBins = 40;  // width 0.05 on [0, 2]

bool walk_is(const ExperimentConfig& cfg, const char* name) { return cfg.walk == name; }

double beta0_of(const ExperimentConfig& cfg) {
  return cfg.beta0 > 0.0 ? cfg.beta0 : select_constants(cfg.p, cfg.epsilon).beta0;
}

GoodSetSpec good_set_of(const ExperimentConfig& cfg) {
  if (walk_is(cfg, "transvection") || (walk_is(cfg, "one-column") && cfg.p == 2)) return GoodSetSpec::transvection();
  return GoodSetSpec::heisenberg(beta0_of(cfg));
}

struct GapHistogram {
  std::uint64_t count = 0;
  double min_gap = std::numeric_limits<double>::infinity();
  double max_gap = -std::numeric_limits<double>::infinity();
  std::vector<std::uint64_t> bins = std::vector<std::uint64_t>(kHistogramBins, 0);

  void add(double gap) {
    ++count;
    min_gap = std::min(min_gap, gap);
    max_gap = std::max(max_gap, gap);
    const int b = std::clamp(static_cast<int>(std::floor(gap / 0.05)), 0, kHistogramBins - 1);
    ++bins[b];
  }
  json to_json() const {
    return {{"count", count},
            {"min_gap", count ? json(min_gap) : json(nullptr)},
            {"max_gap", count ? json(max_gap) : json(nullptr)},
            {"bin_width", 0.05},
            {"histogram", bins}};
  }
};

template <class W>
json spectrum_of(const Kernel<W>& kernel, const ExperimentConfig& cfg, const EnumeratedSpace& space) {
  if (space.size() > cfg.dense_budget) throw BudgetExceeded("dense spectrum too large", space.size(), cfg.dense_budget);
  const SparseKernel K = sparse_kernel(kernel, space);
  const DenseOperator op(Eigen::MatrixXd(K), Flavor::Stochastic);
  const Distribution pi = Distribution::uniform(op.size());
  const Eigen::VectorXd ev = reversible_spectrum(op, pi);
  std::vector<double> eig(ev.data(), ev.data() + ev.size());
  json eigen;
  if (eig.size() <= 64) {
    eigen = eig;
  } else {
    eigen = {{"largest", std::vector<double>(eig.begin(), eig.begin() + 16)},
             {"smallest", std::vector<double>(eig.end() - 16, eig.end())}};
  }
  return {{"omega_size", space.size()},
          {"connectivity", to_json(connectivity(K))},
          {"spectral_gap", spectral_gap(op, pi)},
          {"eigenvalues", eigen}};
}

json transvection_fibres(const TransvectionWalk& walk, const EnumeratedSpace& space, const ExperimentConfig& cfg) {
  const GoodSetSpec spec = GoodSetSpec::transvection();
  GapHistogram good, bad;
  std::set<std::pair<std::uint32_t, std::uint64_t>> seen;
  bool truncated = false;
  for (std::size_t x = 0; x < space.size() && !truncated; ++x) {
    RowTuple z = walk.decode(space.code(x));
    for (std::uint32_t i = 0; i < walk.n(); ++i) {
      RowTuple key = z;
      key[i] = FieldVector(walk.k(), 2);
      if (!seen.insert({i, walk.encode(key)}).second) continue;
      if (seen.size() > cfg.max_fibres) {
        truncated = true;
        break;
      }
      double lam = -1.0;
      for (const auto& [code, v] : fibre_eigenvalues_tr(z, i))
        if (code != 0) lam = std::max(lam, v);
      bool is_good = false;
      for (std::uint64_t u = 0; u < (std::uint64_t{1} << walk.k()) && !is_good; ++u) {
        key[i] = FieldVector::from_code(u, walk.k(), 2);
        is_good = walk.in_omega(key) && in_good_set(key, spec);
      }
      (is_good ? good : bad).add(1.0 - lam);
    }
  }
  return {{"good", good.to_json()}, {"bad", bad.to_json()}, {"truncated", truncated}};
}

json heisenberg_fibres(const PaPraWalk& walk, const EnumeratedSpace& space, const ExperimentConfig& cfg) {
  const GoodSetSpec spec = GoodSetSpec::heisenberg(beta0_of(cfg));
  const std::uint64_t order = walk.group_order();
  const Distribution uni = Distribution::uniform(static_cast<Eigen::Index>(order));
  GapHistogram good, bad;
  std::set<std::pair<std::uint32_t, std::uint64_t>> seen;
  bool truncated = false;
  for (std::size_t x = 0; x < space.size() && !truncated; ++x) {
    HeisTuple g = walk.decode(space.code(x));
    for (std::uint32_t i = 0; i < walk.r(); ++i) {
      HeisTuple key = g;
      key[i] = HeisenbergElement::identity(walk.h(), walk.p());
      if (!seen.insert({i, walk.encode(key)}).second) continue;
      if (seen.size() > cfg.max_fibres) {
        truncated = true;
        break;
      }
      const FibreKernel fk = build_fibre_kernel(g, i);
      const double gap = spectral_gap(DenseOperator(fk.matrix, Flavor::Stochastic), uni);
      bool is_good = false;
      for (std::uint64_t u = 0; u < order && !is_good; ++u) {
        key[i] = HeisenbergElement::from_code(u, walk.h(), walk.p());
        is_good = walk.in_omega(key) && in_good_set(key, spec);
      }
      (is_good ? good : bad).add(gap);
    }
  }
  return {{"good", good.to_json()}, {"bad", bad.to_json()}, {"truncated", truncated}};
}

template <class W>
json mixing_enumerated(const Kernel<W>& kernel, const ExperimentConfig& cfg, double move_bound) {
  const EnumeratedSpace space = enumerate_space(kernel.walk(), cfg.budget);
  const SparseKernel K = sparse_kernel(kernel, space);
  const auto n = static_cast<Eigen::Index>(space.size());
  const Eigen::VectorXd pi = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  std::vector<std::size_t> starts;
  if constexpr (std::is_same_v<W, TransvectionWalk>) {
    for (const auto& o : transvection_orbits(kernel.walk(), space)) starts.push_back(o.representative);
  } else if constexpr (std::is_same_v<W, OneColumnWalk>) {
    // monomial maps are automorphisms, so the support size determines the TV curve
    std::vector<char> seen(kernel.walk().r() + 1, 0);
    for (std::size_t x = 0; x < space.size(); ++x) {
      const auto w = kernel.walk().decode(space.code(x)).weight();
      if (!seen[w]) {
        seen[w] = 1;
        starts.push_back(x);
      }
    }
  } else {
    for (std::size_t x = 0; x < space.size(); ++x) starts.push_back(x);
  }
  const auto curve = mixing_curve_exact(K, pi, starts, cfg.t_max);
  json tau = nullptr;
  for (std::size_t t = 0; t < curve.size(); ++t)
    if (curve[t] <= cfg.mixing_eps) {
      tau = t;
      break;
    }
  std::vector<double> lower;
  std::uint64_t violations = 0;
  for (std::size_t t = 0; t < curve.size(); ++t) {
    lower.push_back(tv_counting_lower(t, move_bound, static_cast<double>(space.size())));
    violations += curve[t] < lower.back() - 1e-12;
  }
  return {{"method", "exact"},
          {"omega_size", space.size()},
          {"starts", starts.size()},
          {"epsilon", cfg.mixing_eps},
          {"tau_mix", tau},
          {"tv_curve", curve},
          {"move_bound", move_bound},
          {"counting_lower", lower},
          {"counting_violations", violations}};
}

json mixing_one_column_lumped(const ExperimentConfig& cfg) {
  const std::uint32_t n = cfg.r;
  const OneColumnLumped lumped = one_column_lumped(n, cfg.laziness);
  const auto exact = one_column_tv_curve(lumped, cfg.t_max);
  json tau = nullptr;
  for (std::size_t t = 0; t < exact.size(); ++t)
    if (exact[t] <= cfg.mixing_eps) {
      tau = t;
      break;
    }
  // Monte Carlo histogram of the lump statistic at t = 0, stride, 2 stride, ...
  const Kernel<OneColumnWalk> kernel(OneColumnWalk(n, 2), cfg.laziness);
  std::vector<std::uint64_t> grid;
  for (std::uint64_t t = 0; t <= cfg.t_max; t += cfg.stride) grid.push_back(t);
  const auto lumps = static_cast<std::size_t>(lumped.pi.size());
  std::vector<std::vector<std::uint32_t>> hist(grid.size(), std::vector<std::uint32_t>(lumps, 0));
  for (std::uint64_t trial = 0; trial < cfg.trials; ++trial) {
    Philox4x32 rng(cfg.seed, trial);
    FieldVector y = FieldVector::basis(n, 2, 0);
    std::uint64_t t = 0;
    for (std::size_t g = 0; g < grid.size(); ++g) {
      for (; t < grid[g]; ++t) {
        rng.seek(t);
        kernel.sample(y, rng);
      }
      ++hist[g][one_column_lump(y)];
    }
  }
  std::vector<double> mc;
  for (const auto& h : hist) {
    double tv = 0.0;
    for (std::size_t l = 0; l < lumps; ++l)
      tv += std::abs(h[l] / static_cast<double>(cfg.trials) - lumped.pi(static_cast<Eigen::Index>(l)));
    mc.push_back(0.5 * tv);
  }
  const double omega = std::ldexp(1.0, static_cast<int>(n)) - 1.0;
  const double moves = static_cast<double>(n) * (n - 1) + (cfg.laziness > 0.0 ? 1.0 : 0.0);
  std::vector<double> lower;
  for (std::size_t t = 0; t < exact.size(); ++t) lower.push_back(tv_counting_lower(t, moves, omega));
  return {{"method", "lumped"},
          {"omega_size", omega},
          {"start", "e_1"},
          {"epsilon", cfg.mixing_eps},
          {"tau_mix", tau},
          {"tv_curve", exact},
          {"mc_times", grid},
          {"mc_tv", mc},
          {"trials", cfg.trials},
          {"move_bound", moves},
          {"counting_lower", lower}};
}

template <class W>
std::vector<Trajectory> run_trajectories(const Kernel<W>& kernel, const typename W::State& start,
                                         const std::vector<Observer<typename W::State>>& obs,
                                         const ExperimentConfig& cfg) {
  std::vector<Trajectory> out;
  for (std::uint64_t id = 0; id < cfg.trials; ++id)
    out.push_back(simulate(kernel, start, cfg.steps, cfg.seed, id, obs, cfg.stride));
  return out;
}

}  // namespace

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& msg) { throw InvalidArgument("config: " + msg); };
  if (walk != "transvection" && walk != "one-column" && walk != "pa-pra")
    fail("walk must be transvection, one-column or pa-pra");
  if (walk == "transvection") {
    if (n < 2) fail("n must be at least 2");
    if (k < 1 || k > 24) fail("k must lie in [1, 24]");
    if (std::uint64_t{n} * k > 64) fail("n * k must not exceed 64");
  } else {
    if (r < 2) fail("r must be at least 2");
    if (!is_prime(p) || p > kMaxPrime) fail("p must be a prime <= 251");
    if (walk == "pa-pra" && p == 2) fail("pa-pra needs an odd prime");
    if (walk == "pa-pra" && m < 1) fail("m must be at least 1");
  }
  if (!(laziness >= 0.0 && laziness < 1.0)) fail("laziness must lie in [0, 1)");
  if (trials < 1) fail("trials must be positive");
  if (stride < 1) fail("stride must be positive");
  if (!(mixing_eps > 0.0 && mixing_eps < 1.0)) fail("mixing epsilon must lie in (0, 1)");
  if (!(epsilon > 0.0 && epsilon < 1.0)) fail("epsilon must lie in (0, 1)");
  if (!(beta0 >= 0.0 && beta0 < 1.0)) fail("beta0 must lie in [0, 1)");
  if (good_set != "good" && good_set != "full") fail("good-set must be good or full");
  if (!(universal_c > 0.0)) fail("universal constant must be positive");
  if (lsi_restarts < 1) fail("lsi restarts must be positive");
  for (auto l : lambdas)
    if (l == 0 || l >= p) fail("lambda must lie in [1, p-1]");
}

json ExperimentConfig::to_json() const {
  return {{"command", command},   {"walk", walk},
          {"n", n},               {"k", k},
          {"r", r},               {"p", p},
          {"m", m},               {"laziness", laziness},
          {"seed", seed},         {"steps", steps},
          {"trials", trials},     {"stride", stride},
          {"t_max", t_max},       {"mixing_eps", mixing_eps},
          {"epsilon", epsilon},   {"beta0", beta0},
          {"good_set", good_set}, {"budget", budget},
          {"dense_budget", dense_budget}, {"max_fibres", max_fibres},
          {"universal_c", universal_c},   {"alpha", alpha},
          {"a0", a0},             {"a1", a1},
          {"lambdas", lambdas},   {"t_star", t_star},
          {"L", L},               {"s_span", s_span},
          {"A", A},               {"lsi_restarts", lsi_restarts},
          {"lsi_cap", lsi_cap},   {"out", out},
          {"csv", csv}};
}

json cmd_simulate(const ExperimentConfig& cfg, std::ostream& csv) {
  std::vector<Trajectory> trs;
  if (walk_is(cfg, "transvection")) {
    const Kernel<TransvectionWalk> kernel(TransvectionWalk(cfg.n, cfg.k), cfg.laziness);
    std::vector<Observer<RowTuple>> obs;
    if (cfg.k <= 4)
      for (std::uint64_t xi = 1; xi < (std::uint64_t{1} << cfg.k); ++xi)
        obs.push_back({"S_xi[" + std::to_string(xi) + "]",
                       [xi](const RowTuple& z) { return static_cast<double>(all_s_xi(z)[xi]); }});
    obs.push_back({"max_abs_S_xi", [](const RowTuple& z) {
                     const auto s = all_s_xi(z);
                     int best = 0;
                     for (std::size_t xi = 1; xi < s.size(); ++xi) best = std::max(best, std::abs(s[xi]));
                     return static_cast<double>(best);
                   }});
    obs.push_back({"in_good_set", [](const RowTuple& z) {
                     return in_good_set(z, GoodSetSpec::transvection()) ? 1.0 : 0.0;
                   }});
    trs = run_trajectories(kernel, kernel.walk().canonical_start(), obs, cfg);
  } else if (walk_is(cfg, "one-column")) {
    const Kernel<OneColumnWalk> kernel(OneColumnWalk(cfg.r, cfg.p), cfg.laziness);
    const GoodSetSpec spec = good_set_of(cfg);
    std::vector<Observer<FieldVector>> obs;
    if (cfg.p == 2) {
      obs.push_back({"S_xi", [](const FieldVector& y) { return static_cast<double>(s_xi_column(y)); }});
      obs.push_back({"weight", [](const FieldVector& y) { return static_cast<double>(y.weight()); }});
    } else {
      obs.push_back({"N_xi", [](const FieldVector& y) { return static_cast<double>(y.dim() - y.weight()); }});
      obs.push_back({"support", [](const FieldVector& y) { return static_cast<double>(y.weight()); }});
    }
    obs.push_back({"in_good_set", [spec](const FieldVector& y) { return in_good_set(y, spec) ? 1.0 : 0.0; }});
    trs = run_trajectories(kernel, FieldVector::basis(cfg.r, cfg.p, 0), obs, cfg);
  } else {
    const Kernel<PaPraWalk> kernel(PaPraWalk(cfg.r, cfg.p, cfg.m), cfg.laziness);
    const GoodSetSpec spec = good_set_of(cfg);
    const std::uint32_t h = 2 * cfg.m;
    std::vector<Observer<HeisTuple>> obs;
    const std::uint64_t nfun = saturating_pow(cfg.p, h);
    if (nfun <= 27)
      for (std::uint64_t xi = 1; xi < nfun; ++xi) {
        const LinearFunctional f(FieldVector::from_code(xi, h, cfg.p));
        obs.push_back({"N_xi[" + std::to_string(xi) + "]",
                       [f](const HeisTuple& g) { return static_cast<double>(n_xi(g, f)); }});
      }
    auto max_n = [](const HeisTuple& g) {
      const auto all = all_n_xi(g);
      return *std::max_element(all.begin() + 1, all.end());
    };
    obs.push_back({"max_N_xi", [max_n](const HeisTuple& g) { return static_cast<double>(max_n(g)); }});
    obs.push_back({"min_support", [max_n](const HeisTuple& g) {
                     return static_cast<double>(g.size() - max_n(g));
                   }});
    obs.push_back({"in_good_set", [spec](const HeisTuple& g) { return in_good_set(g, spec) ? 1.0 : 0.0; }});
    trs = run_trajectories(kernel, kernel.walk().canonical_start(), obs, cfg);
  }
  write_csv(csv, trs);
  std::uint64_t rows = 0;
  for (const auto& t : trs) rows += t.records.size();
  return {{"walk", cfg.walk},
          {"trajectories", trs.size()},
          {"steps", cfg.steps},
          {"rows", rows},
          {"observers", trs.empty() ? json::array() : json(trs.front().observer_names)}};
}

json cmd_spectrum(const ExperimentConfig& cfg) {
  if (walk_is(cfg, "transvection")) {
    const Kernel<TransvectionWalk> kernel(TransvectionWalk(cfg.n, cfg.k), cfg.laziness);
    const EnumeratedSpace space = enumerate_space(kernel.walk(), cfg.budget);
    json res = spectrum_of(kernel, cfg, space);
    res["fibres"] = transvection_fibres(kernel.walk(), space, cfg);
    return res;
  }
  if (walk_is(cfg, "pa-pra")) {
    const Kernel<PaPraWalk> kernel(PaPraWalk(cfg.r, cfg.p, cfg.m), cfg.laziness);
    const EnumeratedSpace space = enumerate_space(kernel.walk(), cfg.budget);
    json res = spectrum_of(kernel, cfg, space);
    res["fibres"] = heisenberg_fibres(kernel.walk(), space, cfg);
    return res;
  }
  const Kernel<OneColumnWalk> kernel(OneColumnWalk(cfg.r, cfg.p), cfg.laziness);
  const EnumeratedSpace space = enumerate_space(kernel.walk(), cfg.budget);
  json res = spectrum_of(kernel, cfg, space);
  res["fibres"] = nullptr;
  return res;
}

json cmd_mixing(const ExperimentConfig& cfg) {
  const double hold = cfg.laziness > 0.0 ? 1.0 : 0.0;
  if (walk_is(cfg, "transvection")) {
    const TransvectionWalk w(cfg.n, cfg.k);
    return mixing_enumerated(Kernel<TransvectionWalk>(w, cfg.laziness), cfg, static_cast<double>(w.move_count()) + hold);
  }
  if (walk_is(cfg, "pa-pra")) {
    const PaPraWalk w(cfg.r, cfg.p, cfg.m);
    return mixing_enumerated(Kernel<PaPraWalk>(w, cfg.laziness), cfg,
                             1.0 + 2.0 * cfg.p * cfg.r * (cfg.r - 1.0));
  }
  const OneColumnWalk w(cfg.r, cfg.p);
  if (w.ambient_size() <= cfg.budget && (cfg.p != 2 || w.ambient_size() <= cfg.dense_budget))
    return mixing_enumerated(Kernel<OneColumnWalk>(w, cfg.laziness), cfg, static_cast<double>(w.move_count()) + hold);
  if (cfg.p != 2) throw BudgetExceeded("one-column state space too large", w.ambient_size(), cfg.budget);
  return mixing_one_column_lumped(cfg);
}

json cmd_birthdeath(const ExperimentConfig& cfg) {
  const BDParams params(cfg.r, cfg.p);
  json table = json::array();
  for (std::uint32_t s = 1; s <= cfg.r; ++s) {
    const auto [B, D] = bd_probs(s, params);
    table.push_back({{"s", s}, {"B", B}, {"D", D}, {"rho", s < cfg.r ? json(params.ratio(s)) : json(nullptr)}});
  }
  if (!(cfg.alpha > 0.0 && cfg.alpha <= 1.0)) throw InvalidArgument("config: alpha must lie in (0, 1]");
  const auto target = static_cast<std::uint32_t>(std::clamp(std::ceil(cfg.alpha * cfg.r - 1e-12), 1.0, double(cfg.r)));
  json hitting = json::array();
  for (std::uint32_t s = 1; s <= target; ++s) hitting.push_back({{"s", s}, {"expected", bd_hitting_time(s, target, params)}});
  const std::uint32_t a0 = cfg.a0 ? cfg.a0 : std::max(1u, cfg.r / 5);
  const std::uint32_t a1 = cfg.a1 ? cfg.a1 : std::max(a0 + 1, 3 * cfg.r / 5);
  json crossing = json::array();
  for (std::uint32_t s = a0; s <= a1; ++s) crossing.push_back({{"s", s}, {"probability", bd_crossing_prob(s, a0, a1, params)}});
  return {{"r", cfg.r},
          {"p", cfg.p},
          {"table", table},
          {"hitting", {{"target", target}, {"alpha", cfg.alpha}, {"times", hitting}}},
          {"crossing", {{"A0", a0}, {"A1", a1}, {"probabilities", crossing}}},
          {"constants", to_json(select_constants(cfg.p, cfg.epsilon))}};
}

json cmd_repcheck(const ExperimentConfig& cfg) {
  if (cfg.p == 2 || !is_prime(cfg.p)) throw InvalidArgument("config: repcheck needs an odd prime p");
  std::vector<std::uint32_t> lambdas = cfg.lambdas;
  if (lambdas.empty())
    for (std::uint32_t l = 1; l < cfg.p; ++l) lambdas.push_back(l);
  json reps = json::array();
  const double target = 1.0 / std::sqrt(static_cast<double>(cfg.p));
  for (auto lambda : lambdas) {
    const Representation rho = build_representation(cfg.p, cfg.m, lambda, cfg.dense_budget);
    const auto rows = projection_norm_table(rho, cfg.budget);
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0, dev = 0.0;
    for (const auto& row : rows) {
      lo = std::min(lo, row.norm);
      hi = std::max(hi, row.norm);
      dev = std::max(dev, std::abs(row.norm - target));
    }
    json entry = {{"lambda", lambda},
                  {"dimension", rho.dimension()},
                  {"residuals", to_json(representation_residuals(rho, cfg.budget))},
                  {"projection_norms",
                   {{"pairs", rows.size()}, {"min", rows.empty() ? json(nullptr) : json(lo)},
                    {"max", rows.empty() ? json(nullptr) : json(hi)}, {"target", target}, {"max_deviation", dev}}}};
    if (rows.size() <= 1000) {
      json table = json::array();
      for (const auto& row : rows) table.push_back({{"v", row.v}, {"w", row.w}, {"omega", row.omega}, {"norm", row.norm}});
      entry["projection_norms"]["table"] = table;
    }
    reps.push_back(entry);
  }
  const std::uint64_t sum = dimension_sum_squares(cfg.p, cfg.m, cfg.dense_budget);
  const std::uint64_t order = heisenberg_order(cfg.p, cfg.m);
  return {{"p", cfg.p},
          {"m", cfg.m},
          {"representations", reps},
          {"dimension_sum", {{"sum_of_squares", sum}, {"group_order", order}, {"equal", sum == order}}}};
}

json cmd_pipeline(const ExperimentConfig& cfg) {
  PipelineOptions opts;
  opts.t_star = cfg.t_star;
  opts.L = cfg.L;
  opts.A = cfg.A;
  opts.s_span = cfg.s_span;
  opts.lsi.restarts = cfg.lsi_restarts;
  opts.lsi.cap = cfg.lsi_cap;
  opts.lsi.seed = cfg.seed;
  const bool full = cfg.good_set == "full";
  auto finish = [&](const auto& kernel, const EnumeratedSpace& space, std::vector<std::size_t> starts) {
    const GoodSetSpec spec = good_set_of(cfg);
    std::vector<char> mask(space.size(), 1);
    if (!full)
      for (std::size_t x = 0; x < space.size(); ++x) mask[x] = in_good_set(kernel.walk().decode(space.code(x)), spec);
    const SparseKernel Q = sparse_kernel(kernel, space);
    json res = to_json(pipeline_exact(Q, mask, starts, opts));
    res["good_set"] = cfg.good_set;
    res["omega_size"] = space.size();
    return res;
  };
  if (walk_is(cfg, "transvection")) {
    const Kernel<TransvectionWalk> kernel(TransvectionWalk(cfg.n, cfg.k), cfg.laziness);
    const EnumeratedSpace space = enumerate_space(kernel.walk(), cfg.budget);
    if (space.size() > cfg.dense_budget) throw BudgetExceeded("pipeline space too large", space.size(), cfg.dense_budget);
    std::vector<std::size_t> starts;
    for (const auto& o : transvection_orbits(kernel.walk(), space)) starts.push_back(o.representative);
    return finish(kernel, space, starts);
  }
  if (walk_is(cfg, "pa-pra")) {
    const Kernel<PaPraWalk> kernel(PaPraWalk(cfg.r, cfg.p, cfg.m), cfg.laziness);
    const EnumeratedSpace space = enumerate_space(kernel.walk(), cfg.budget);
    if (space.size() > cfg.dense_budget) throw BudgetExceeded("pipeline space too large", space.size(), cfg.dense_budget);
    std::vector<std::size_t> starts(space.size());
    for (std::size_t x = 0; x < starts.size(); ++x) starts[x] = x;
    return finish(kernel, space, starts);
  }
  const Kernel<OneColumnWalk> kernel(OneColumnWalk(cfg.r, cfg.p), cfg.laziness);
  const EnumeratedSpace space = enumerate_space(kernel.walk(), cfg.budget);
  if (space.size() > cfg.dense_budget) throw BudgetExceeded("pipeline space too large", space.size(), cfg.dense_budget);
  std::vector<std::size_t> starts(space.size());
  for (std::size_t x = 0; x < starts.size(); ++x) starts[x] = x;
  return finish(kernel, space, starts);
}

}  // namespace prwalk::cli
