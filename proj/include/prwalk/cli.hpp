#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "prwalk/report.hpp"

namespace prwalk::cli {

enum ExitCode : int { kOk = 0, kConfigError = 1, kBudgetRefusal = 2, kInvariantViolation = 3 };

struct ExperimentConfig {
  std::string command;
  std::string walk = "transvection";  // transvection | one-column | pa-pra
  std::uint32_t n = 8, k = 2, r = 8, p = 3, m = 1;
  double laziness = 0.0;
  std::uint64_t seed = 1;
  std::uint64_t steps = 1000;
  std::uint64_t trials = 1;
  std::uint64_t stride = 1;
  std::uint64_t t_max = 1000;
  double mixing_eps = 0.25;
  double epsilon = 0.25;       // good-set parameter for beta0
  double beta0 = 0.0;          // 0: derived from epsilon
  std::string good_set = "good";  // good | full
  std::uint64_t budget = std::uint64_t{1} << 24;
  std::uint64_t dense_budget = 2048;
  std::uint64_t max_fibres = 20000;
  double universal_c = 4.0;
  double alpha = 0.5;
  std::uint32_t a0 = 0, a1 = 0;  // crossing levels, 0: r/5 and 3r/5
  std::vector<std::uint32_t> lambdas;
  std::uint64_t t_star = 0;
  std::uint64_t L = 0;
  std::uint64_t s_span = 20;
  double A = -1.0;
  int lsi_restarts = 64;
  std::uint64_t lsi_cap = 256;
  std::string out;
  std::string csv;

  // Throws InvalidArgument with a message naming the offending field.
  void validate() const;
  json to_json() const;
};

// Each returns the result block of the output envelope.
json cmd_spectrum(const ExperimentConfig& cfg);
json cmd_mixing(const ExperimentConfig& cfg);
json cmd_birthdeath(const ExperimentConfig& cfg);
json cmd_repcheck(const ExperimentConfig& cfg);
json cmd_pipeline(const ExperimentConfig& cfg);
// Writes CSV rows to `csv` and returns a summary block.
json cmd_simulate(const ExperimentConfig& cfg, std::ostream& csv);

// Full command line entry point; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace prwalk::cli
