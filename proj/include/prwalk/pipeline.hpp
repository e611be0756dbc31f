#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "prwalk/spectral.hpp"

namespace prwalk {

struct PipelineOptions {
  std::uint64_t t_star = 0;
  std::uint64_t L = 0;             // 0: smallest L with P(Poi(t_conf) > L) <= zeta_target
  double zeta_target = 1e-3;
  double A = -1.0;                 // < 0: a_margin times the numeric LSI constant of the killed kernel
  double a_margin = 1.05;
  std::uint64_t s_span = 20;       // exact TV is evaluated for s in [t_star, t_star + s_span]
  LsiOptions lsi;
};

struct PipelineExact {
  PipelineReport report;
  double lsi_killed;               // numeric constant of K_G on pi_G, or -1 when A was given
  std::size_t good_size;
  std::uint64_t eta_horizon;       // last s examined before the stationary tail bound
  std::vector<std::pair<std::uint64_t, double>> tv;  // (s, worst-start TV at time t_conf)
  double max_tv;
  bool dominated;                  // max_tv <= tv_bound
};

// Exact evaluation for a doubly stochastic kernel on an enumerated space: pi is
// uniform, in_G is a 0/1 mask, and `starts` must contain a representative of every
// start up to kernel symmetries that also preserve G.
PipelineExact pipeline_exact(const SparseKernel& Q, std::span<const char> in_G, std::span<const std::size_t> starts,
                             const PipelineOptions& opts = {});

// sup over s >= t_star and x in starts of P_x(exists u in [0, L] : X_{s+u} not in G).
// The tail beyond the examined horizon is bounded through the worst-start TV.
double exit_probability_sup(const SparseKernel& Q, std::span<const char> in_G, std::span<const std::size_t> starts,
                            std::uint64_t t_star, std::uint64_t L, std::uint64_t* horizon = nullptr);

}  // namespace prwalk
