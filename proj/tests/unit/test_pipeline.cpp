#include "doctest.h"
#include "oracles.hpp"
#include "prwalk/diagnostics.hpp"
#include "prwalk/pipeline.hpp"

using namespace prwalk;

namespace {

struct Instance {
  Kernel<TransvectionWalk> K{TransvectionWalk(4, 2), 0.5};
  EnumeratedSpace space = enumerate_space(K.walk());
  SparseKernel Q = sparse_kernel(K, space);
  std::vector<char> good;
  std::vector<std::size_t> starts;
  Instance() {
    for (std::size_t x = 0; x < space.size(); ++x)
      good.push_back(in_good_set(K.walk().decode(space.code(x)), GoodSetSpec::transvection()));
    for (const auto& o : transvection_orbits(K.walk(), space)) starts.push_back(o.representative);
  }
};

PipelineOptions quick() {
  PipelineOptions o;
  o.lsi.restarts = 16;
  o.lsi.steps = 3000;
  o.lsi.cap = 256;
  return o;
}

}  // namespace

TEST_SUITE("pipeline") {
  TEST_CASE("exit probability") {
    const Instance in;
    const std::vector<char> full(in.space.size(), 1);
    CHECK(exit_probability_sup(in.Q, full, in.starts, 0, 10) == 0.0);
    // L = 0 at t_star = 0: the start itself must lie in G
    std::size_t bad = 0;
    while (in.good[bad]) ++bad;
    const std::vector<std::size_t> one{bad};
    CHECK(exit_probability_sup(in.Q, in.good, one, 0, 0) == doctest::Approx(1.0));
    // agrees with a direct computation of sup_s P(exit within L after s)
    const Eigen::MatrixXd D(in.Q);
    const std::vector<std::size_t> s0{0};
    const double eta = exit_probability_sup(in.Q, in.good, s0, 5, 3);
    double direct = 0.0;
    Eigen::RowVectorXd mu = Eigen::RowVectorXd::Zero(D.rows());
    mu(0) = 1;
    for (int s = 0; s < 400; ++s) {
      if (s >= 5) {
        Eigen::RowVectorXd m = mu;
        double stay = 0.0;
        Eigen::RowVectorXd alive = m;
        for (Eigen::Index y = 0; y < D.rows(); ++y)
          if (!in.good[y]) alive(y) = 0;
        for (int u = 0; u < 3; ++u) {
          alive = alive * D;
          for (Eigen::Index y = 0; y < D.rows(); ++y)
            if (!in.good[y]) alive(y) = 0;
        }
        stay = alive.sum();
        direct = std::max(direct, 1.0 - stay);
      }
      mu = mu * D;
    }
    CHECK(eta >= direct - 1e-12);
    CHECK(eta <= direct + 1e-6);
  }

  TEST_CASE("full good set: bound dominates the exact TV") {
    const Instance in;
    const std::vector<char> full(in.space.size(), 1);
    const auto r = pipeline_exact(in.Q, full, in.starts, quick());
    CHECK(r.report.eta == 0.0);
    CHECK(r.report.pi_good_complement == 0.0);
    CHECK(r.report.zeta <= 1e-3);
    CHECK(r.dominated);
    CHECK(r.max_tv <= r.report.tv_bound);
    CHECK(r.report.t_conf == doctest::Approx(2 * r.report.A * std::log(std::exp(1.0) + std::log(210.0))));
    // exact TV at time t_conf against a dense oracle of e^{t(Q - I)}
    const Eigen::MatrixXd D(in.Q);
    const auto pw = poisson_weights(r.report.t_conf);
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(210, 210), P = Eigen::MatrixXd::Identity(210, 210);
    for (double w : pw.weights) {
      M += w * P;
      P = P * D;
    }
    double worst = 0;
    for (auto s : in.starts) worst = std::max(worst, oracle::tv(M.row(static_cast<Eigen::Index>(s)).transpose(), Eigen::VectorXd::Constant(210, 1.0 / 210)));
    CHECK(r.tv.front().second == doctest::Approx(worst).epsilon(1e-9));
  }

  TEST_CASE("good-set pipeline reports every quantity") {
    const Instance in;
    auto o = quick();
    o.t_star = 10;
    const auto r = pipeline_exact(in.Q, in.good, in.starts, o);
    CHECK(r.good_size == 24);
    CHECK(r.lsi_killed > 0.0);
    CHECK(r.report.A == doctest::Approx(1.05 * r.lsi_killed));
    CHECK(r.report.eta >= 0.0);
    CHECK(r.report.eta <= 1.0);
    CHECK(r.report.pi_good_complement == doctest::Approx(1.0 - 24.0 / 210.0));
    CHECK(r.tv.size() == o.s_span + 1);
    CHECK(r.max_tv <= r.report.tv_bound);
  }

  TEST_CASE("input validation") {
    const Instance in;
    const std::vector<char> none(in.space.size(), 0);
    CHECK_THROWS_AS(pipeline_exact(in.Q, none, in.starts, quick()), InvalidArgument);
    const std::vector<char> shortmask(3, 1);
    CHECK_THROWS_AS(pipeline_exact(in.Q, shortmask, in.starts, quick()), DimensionMismatch);
    const std::vector<std::size_t> far{100000};
    CHECK_THROWS_AS(exit_probability_sup(in.Q, in.good, far, 0, 1), InvalidArgument);
  }
}
