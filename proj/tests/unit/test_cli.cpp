#include <fstream>
#include <sstream>

#include "doctest.h"
#include "prwalk/cli.hpp"

using namespace prwalk;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "prwalk");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

// Leaves become their type names; arrays keep the schema of their first element.
json schema(const json& j) {
  if (j.is_object()) {
    json out = json::object();
    for (auto it = j.begin(); it != j.end(); ++it) out[it.key()] = schema(it.value());
    return out;
  }
  if (j.is_array()) return j.empty() ? json::array() : json::array({schema(j.front())});
  if (j.is_boolean()) return "bool";
  if (j.is_number()) return "number";
  if (j.is_string()) return "string";
  return "null";
}

void check_golden(const std::string& name, const json& doc) {
  const std::string path = std::string(PRWALK_GOLDEN_DIR) + "/" + name + ".schema.json";
  const json live = schema(doc);
  if (std::getenv("PRWALK_UPDATE_GOLDEN")) {
    std::ofstream(path) << live.dump(2) << '\n';
    return;
  }
  std::ifstream f(path);
  REQUIRE_MESSAGE(f.good(), "missing golden file " << path);
  const json golden = json::parse(f);
  CHECK_MESSAGE(golden == live, name << " schema changed:\n" << json::diff(golden, live).dump(2));
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("config hash is a SHA-1 of the canonical config") {
    // git hash-object of the bytes {"a":1}
    CHECK(config_hash(json{{"a", 1}}) == "daa5053ecf5f9a37b2de733d0751cc1ab53ac010");
    CHECK(config_hash(json{{"b", 2}, {"a", 1}}) == config_hash(json{{"a", 1}, {"b", 2}}));
  }

  TEST_CASE("exit codes") {
    CHECK(run({"--help"}).code == 0);
    CHECK(run({}).code == 1);
    CHECK(run({"spectrum", "--walk", "nonsense"}).code == 1);
    CHECK(run({"spectrum", "-n", "4", "-k", "5"}).code == 1);
    CHECK(run({"spectrum", "-n", "4", "-k", "2", "--laziness", "1.5"}).code == 1);
    CHECK(run({"spectrum", "-p", "4", "--walk", "pa-pra"}).code == 1);
    const auto big = run({"spectrum", "-n", "12", "-k", "2", "--budget", "1000"});
    CHECK(big.code == 2);
    CHECK(big.err.find("required") != std::string::npos);
    CHECK(run({"mixing", "-n", "30", "-k", "2"}).code == 2);
  }

  TEST_CASE("simulate is deterministic and writes the required columns") {
    const std::vector<std::string> args{"simulate", "--walk", "transvection", "-n", "16", "-k", "2", "--steps", "10000", "--seed", "7", "--stride", "500"};
    const auto a = run(args), b = run(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.rfind("trajectory_id,step,observer_name,value\r\n", 0) == 0);
    CHECK(a.out.find(",S_xi[1],") != std::string::npos);
    CHECK(a.out.find(",in_good_set,") != std::string::npos);
    auto c = args;
    c.back() = "499";
    CHECK(run(c).out != a.out);
    auto d = args;
    d[10] = "8";
    CHECK(run(d).out != a.out);
    const auto h = run({"simulate", "--walk", "pa-pra", "-p", "3", "-m", "1", "-r", "16", "--steps", "200"});
    REQUIRE(h.code == 0);
    CHECK(h.out.find(",N_xi[1],") != std::string::npos);
    CHECK(h.out.find(",min_support,") != std::string::npos);
  }

  TEST_CASE("simulate CSV file and metadata sidecar") {
    const std::string path = "cli_test_sim.csv";
    const auto r = run({"simulate", "--walk", "one-column", "-r", "12", "-p", "3", "--steps", "100", "--trials", "3", "--csv", path});
    REQUIRE(r.code == 0);
    std::ifstream meta(path + ".meta.json");
    REQUIRE(meta.good());
    const json doc = json::parse(meta);
    CHECK(doc["command"] == "simulate");
    CHECK(doc["config"]["r"] == 12);
    CHECK(doc["config_hash"].get<std::string>().size() == 40);
    check_golden("simulate", doc);
  }

  TEST_CASE("JSON subcommands: envelope, determinism and schema") {
    const std::vector<std::pair<std::string, std::vector<std::string>>> cases{
        {"spectrum", {"spectrum", "-n", "4", "-k", "2", "--laziness", "0.5"}},
        {"spectrum_papra", {"spectrum", "--walk", "pa-pra", "-r", "2", "-p", "3", "-m", "1"}},
        {"mixing", {"mixing", "-n", "4", "-k", "2"}},
        {"mixing_lumped", {"mixing", "--walk", "one-column", "-r", "16", "-p", "2", "--trials", "200", "--t-max", "200"}},
        {"birthdeath", {"birthdeath", "-r", "12", "-p", "3"}},
        {"repcheck", {"repcheck", "-p", "3", "-m", "1"}},
        {"pipeline", {"pipeline", "-n", "4", "-k", "2", "--good-set", "full", "--lsi-restarts", "8"}},
    };
    for (const auto& [name, args] : cases) {
      CAPTURE(name);
      const auto a = run(args);
      REQUIRE_MESSAGE(a.code == 0, a.err);
      const json doc = json::parse(a.out);
      CHECK(doc["schema_version"] == kSchemaVersion);
      CHECK(doc["command"] == args[0]);
      CHECK(doc["config_hash"] == config_hash(doc["config"]));
      CHECK(run(args).out == a.out);
      check_golden(name, doc);
    }
  }

  TEST_CASE("config file with flag override") {
    const std::string path = "cli_test.toml";
    std::ofstream(path) << "[birthdeath]\nr = 10\np = 5\n";
    const auto r = run({"--config", path, "birthdeath", "-p", "3"});
    REQUIRE_MESSAGE(r.code == 0, r.err);
    const json doc = json::parse(r.out);
    CHECK(doc["config"]["r"] == 10);
    CHECK(doc["config"]["p"] == 3);
  }

  TEST_CASE("pipeline output carries every bound term") {
    const auto r = run({"pipeline", "-n", "4", "-k", "2", "--lsi-restarts", "8"});
    REQUIRE_MESSAGE(r.code == 0, r.err);
    const json rep = json::parse(r.out)["result"]["report"];
    for (const char* key : {"t_conf", "zeta", "R", "eta", "A", "tv_bound", "pi_good_complement"}) CHECK(rep.contains(key));
  }
}
