#include "prwalk/report.hpp"

#include <openssl/sha.h>

#include <cstdio>

namespace prwalk {

std::string canonical_dump(const json& j) { return j.dump(); }

std::string config_hash(const json& config) {
  const std::string body = canonical_dump(config);
  std::string blob = "blob " + std::to_string(body.size());
  blob.push_back('\0');
  blob += body;
  unsigned char digest[SHA_DIGEST_LENGTH];
  SHA1(reinterpret_cast<const unsigned char*>(blob.data()), blob.size(), digest);
  std::string hex;
  char buf[3];
  for (unsigned char c : digest) {
    std::snprintf(buf, sizeof buf, "%02x", c);
    hex += buf;
  }
  return hex;
}

json envelope(const std::string& command, std::uint64_t seed, const json& config, json result) {
  return {{"schema_version", kSchemaVersion},
          {"command", command},
          {"seed", seed},
          {"config_hash", config_hash(config)},
          {"config", config},
          {"result", std::move(result)}};
}

json to_json(const PipelineReport& r) {
  return {{"A", r.A},
          {"omega_size", r.omega_size},
          {"log_omega", r.log_omega},
          {"t_conf", r.t_conf},
          {"L", r.L},
          {"zeta", r.zeta},
          {"R", r.R},
          {"eta", r.eta},
          {"pi_good_complement", r.pi_good_complement},
          {"tv_bound", r.tv_bound},
          {"t_star", r.t_star},
          {"poisson_lower", r.poisson_lower},
          {"condition_lhs", r.condition_lhs},
          {"condition_holds", r.condition_holds},
          {"t_mix_bound", r.t_mix_bound}};
}

json to_json(const PipelineExact& r) {
  json tv = json::array();
  for (const auto& [s, v] : r.tv) tv.push_back({{"s", s}, {"tv", v}});
  return {{"report", to_json(r.report)},
          {"lsi_killed", r.lsi_killed},
          {"good_size", r.good_size},
          {"eta_horizon", r.eta_horizon},
          {"exact_tv", tv},
          {"max_tv", r.max_tv},
          {"dominated", r.dominated}};
}

json to_json(const Estimate& e) {
  return {{"value", e.value}, {"lo", e.lo}, {"hi", e.hi}, {"successes", e.successes}, {"trials", e.trials}};
}

json to_json(const RateConstants& c) {
  return {{"p", c.p},         {"epsilon", c.epsilon},       {"beta0", c.beta0},   {"beta1", c.beta1},
          {"alpha0", c.alpha0}, {"alpha_star", c.alpha_star}, {"alpha1", c.alpha1}, {"eta0", c.eta0}};
}

json to_json(const RepresentationResiduals& r) {
  return {{"multiplicativity", r.multiplicativity},
          {"unitarity", r.unitarity},
          {"central", r.central},
          {"commutation", r.commutation},
          {"pairs", r.pairs}};
}

json to_json(const ConnectivityReport& r) {
  return {{"strongly_connected", r.strongly_connected}, {"component_sizes", r.component_sizes}};
}

json to_json(const EntropyDecayReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) rows.push_back({{"t", row.t}, {"lhs", row.lhs}, {"rhs", row.rhs}});
  return {{"hypothesis_ok", r.hypothesis_ok}, {"A", r.A},         {"lsi_numeric", r.lsi_numeric},
          {"violations", r.violations},       {"min_slack", r.min_slack}, {"rows", rows}};
}

}  // namespace prwalk
