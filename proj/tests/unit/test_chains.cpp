#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "prwalk/chains.hpp"
#include "prwalk/diagnostics.hpp"

using namespace prwalk;

namespace {

RowTuple rows(std::vector<std::vector<std::uint32_t>> r) {
  RowTuple out;
  for (auto& v : r) out.push_back(FieldVector::from_entries(v, 2));
  return out;
}

std::vector<oracle::Vec> plain(const RowTuple& z) {
  std::vector<oracle::Vec> out;
  for (const auto& v : z) {
    oracle::Vec w(v.dim());
    for (std::uint32_t i = 0; i < v.dim(); ++i) w[i] = static_cast<int>(v.get(i));
    out.push_back(w);
  }
  return out;
}

template <class W>
void check_kernel_exact(const Kernel<W>& K, std::size_t expected_size) {
  const auto space = enumerate_space(K.walk());
  CHECK(space.size() == expected_size);
  const Eigen::MatrixXd D = dense_kernel(K, space);
  CHECK((D.rowwise().sum().array() - 1.0).abs().maxCoeff() < 1e-12);
  CHECK((D - D.transpose()).cwiseAbs().maxCoeff() < 1e-12);
}

}  // namespace

TEST_SUITE("chains") {
  TEST_CASE("transvection step") {
    const auto z = rows({{1, 0}, {0, 1}});
    CHECK(transvection_step(z, 0, 1) == rows({{1, 0}, {1, 1}}));
    CHECK(transvection_step(transvection_step(z, 0, 1), 0, 1) == z);
    CHECK_THROWS_AS(transvection_step(z, 1, 1), InvalidArgument);
    CHECK_THROWS_AS(transvection_step(z, 0, 2), InvalidArgument);
  }

  TEST_CASE("transvection moves preserve rank") {
    const TransvectionWalk w(6, 3);
    Philox4x32 rng(3, 0);
    for (int t = 0; t < 1000; ++t) {
      auto z = sample_ambient(w, rng);
      const auto before = oracle::rank(plain(z), 2);
      const auto a = static_cast<std::uint32_t>(rng.below(6));
      const auto b = static_cast<std::uint32_t>((a + 1 + rng.below(5)) % 6);
      CHECK(oracle::rank(plain(transvection_step(z, a, b)), 2) == before);
    }
  }

  TEST_CASE("one-column step") {
    const auto y = FieldVector::from_entries({1, 0, 0}, 2);
    CHECK(one_column_step(y, 1, 0, 1) == FieldVector::from_entries({1, 1, 0}, 2));
    const auto y3 = FieldVector::from_entries({1, 2, 0, 1}, 3);
    CHECK(one_column_step(y3, 2, 0, 0) == y3);
    Philox4x32 rng(4, 0);
    for (int t = 0; t < 200; ++t) {
      FieldVector x(6, 3);
      for (std::uint32_t i = 0; i < 6; ++i) x.set(i, static_cast<std::uint32_t>(rng.below(3)));
      if (x.is_zero()) continue;
      for (std::uint32_t i = 0; i < 6; ++i)
        for (std::uint32_t j = 0; j < 6; ++j)
          for (std::uint32_t a = 0; a < 3 && i != j; ++a) {
            const int d = static_cast<int>(one_column_step(x, i, j, a).weight()) - static_cast<int>(x.weight());
            CHECK(std::abs(d) <= 1);
          }
    }
  }

  TEST_CASE("PA-PRA step projects to a row operation and inverts with -a") {
    const PaPraWalk w(4, 3, 1);
    Philox4x32 rng(5, 0);
    for (int t = 0; t < 300; ++t) {
      const auto g = sample_ambient(w, rng);
      const auto i = static_cast<std::uint32_t>(rng.below(4)), j = (i + 1 + static_cast<std::uint32_t>(rng.below(3))) % 4;
      const auto a = static_cast<std::uint32_t>(rng.below(3));
      for (Side side : {Side::Left, Side::Right}) {
        const auto moved = pa_pra_step(g, i, j, a, side);
        FieldVector expect = g[i].v;
        expect.add_scaled(g[j].v, a);
        CHECK(moved[i].v == expect);
        CHECK(pa_pra_step(moved, i, j, (3 - a) % 3, side) == g);
        if (a == 0) CHECK(moved == g);
      }
    }
  }

  TEST_CASE("apply_kernel_row") {
    const Kernel<TransvectionWalk> K(TransvectionWalk(2, 1));
    const auto row = apply_kernel_row(K, rows({{1}, {1}}));
    REQUIRE(row.size() == 2);
    for (const auto& [y, w] : row) {
      CHECK(w == doctest::Approx(0.5));
      CHECK((y[0].is_zero() != y[1].is_zero()));
    }
    const Kernel<TransvectionWalk> lazy(TransvectionWalk(4, 2), 0.5);
    const auto z = lazy.walk().canonical_start();
    for (const auto& [y, w] : apply_kernel_row(lazy, z))
      if (y == z) CHECK(w >= 0.5);
    const Kernel<PaPraWalk> pk(PaPraWalk(3, 3, 1));
    CHECK(apply_kernel_row(pk, pk.walk().canonical_start()).size() <= 2 * 3 * 3 * 2);
  }

  TEST_CASE("state space sizes") {
    CHECK(enumerate_space(TransvectionWalk(3, 2)).size() == 42);
    for (std::uint32_t n = 2; n <= 8; ++n) CHECK(enumerate_space(TransvectionWalk(n, 1)).size() == (1u << n) - 1);
    CHECK(TransvectionWalk(4, 2).omega_size() == 210);
    CHECK(enumerate_space(TransvectionWalk(4, 2)).size() == 210);
    CHECK(enumerate_space(PaPraWalk(2, 3, 1)).size() == 432);
    CHECK(PaPraWalk(2, 3, 1).omega_size() == 432);
    CHECK(enumerate_space(PAryTransvectionWalk(3, 3, 2)).size() == PAryTransvectionWalk(3, 3, 2).omega_size());
    CHECK_THROWS_AS(enumerate_space(TransvectionWalk(12, 2), 1000), BudgetExceeded);
    CHECK_THROWS_AS(TransvectionWalk(1, 1), InvalidArgument);
  }

  TEST_CASE("dense kernels are stochastic and symmetric") {
    check_kernel_exact(Kernel<TransvectionWalk>(TransvectionWalk(3, 2)), 42);
    check_kernel_exact(Kernel<TransvectionWalk>(TransvectionWalk(4, 2), 0.5), 210);
    check_kernel_exact(Kernel<OneColumnWalk>(OneColumnWalk(4, 3)), 80);
    check_kernel_exact(Kernel<PaPraWalk>(PaPraWalk(2, 3, 1)), 432);
  }

  TEST_CASE("connectivity") {
    const auto s = enumerate_space(TransvectionWalk(3, 2));
    CHECK(connectivity(sparse_kernel(Kernel<TransvectionWalk>(TransvectionWalk(3, 2)), s)).strongly_connected);
    const auto s4 = enumerate_space(TransvectionWalk(4, 2));
    CHECK(connectivity(sparse_kernel(Kernel<TransvectionWalk>(TransvectionWalk(4, 2)), s4)).strongly_connected);
    // Two generators: det(v1; v2) is invariant, so V_2(H) splits into two classes.
    const PaPraWalk w(2, 3, 1);
    const auto c = connectivity(sparse_kernel(Kernel<PaPraWalk>(w), enumerate_space(w)));
    CHECK_FALSE(c.strongly_connected);
    CHECK(c.component_sizes == std::vector<std::size_t>{216, 216});
    const PaPraWalk w3(3, 3, 1);
    CHECK(connectivity(sparse_kernel(Kernel<PaPraWalk>(w3), enumerate_space(w3))).strongly_connected);
  }

  TEST_CASE("random moves never leave the state space") {
    const TransvectionWalk tw(6, 3);
    auto z = tw.canonical_start();
    Philox4x32 rng(6, 0);
    for (int t = 0; t < 100000; ++t) {
      tw.sample_move(z, rng);
      if (t % 97 == 0) REQUIRE(oracle::rank(plain(z), 2) == 3);
    }
    const PaPraWalk pw(4, 3, 1);
    auto g = pw.canonical_start();
    for (int t = 0; t < 100000; ++t) {
      pw.sample_move(g, rng);
      if (t % 97 == 0) REQUIRE(generates(g));
    }
  }

  TEST_CASE("fibre kernels") {
    // n = 3, k = 1, frozen rows 1 and 0: K(u, .) = (delta_{u+1} + delta_u) / 2
    const auto z = rows({{0}, {1}, {0}});
    const auto fk = build_fibre_kernel(z, 0);
    CHECK(fk.matrix.isApprox((Eigen::Matrix2d() << 0.5, 0.5, 0.5, 0.5).finished()));
    const auto zero = rows({{1, 0}, {0, 0}, {0, 0}});
    CHECK(build_fibre_kernel(zero, 0).matrix.isApprox(Eigen::MatrixXd::Identity(4, 4)));
    const PaPraWalk w(4, 3, 1);
    Philox4x32 rng(8, 0);
    for (int t = 0; t < 20; ++t) {
      const auto g = sample_ambient(w, rng);
      const auto M = build_fibre_kernel(g, t % 4).matrix;
      CHECK(M.rows() == 27);
      CHECK((M.rowwise().sum().array() - 1.0).abs().maxCoeff() < 1e-12);
      CHECK((M.colwise().sum().array() - 1.0).abs().maxCoeff() < 1e-12);
      CHECK((M - M.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    }
  }

  TEST_CASE("simulation is deterministic and starts at the start") {
    const Kernel<TransvectionWalk> K(TransvectionWalk(8, 2));
    const std::vector<Observer<RowTuple>> obs{{"w0", [](const RowTuple& z) { return double(z[0].weight()); }}};
    const auto t0 = simulate(K, K.walk().canonical_start(), 0, 1, 0, obs);
    REQUIRE(t0.records.size() == 1);
    CHECK(t0.records[0].step == 0);
    const auto a = simulate(K, K.walk().canonical_start(), 500, 9, 2, obs, 7);
    const auto b = simulate(K, K.walk().canonical_start(), 500, 9, 2, obs, 7);
    std::ostringstream sa, sb;
    write_csv(sa, std::span(&a, 1));
    write_csv(sb, std::span(&b, 1));
    CHECK(sa.str() == sb.str());
    CHECK(sa.str().rfind("trajectory_id,step,observer_name,value\r\n", 0) == 0);
    CHECK(a.records.back().step == 500);
  }

  TEST_CASE("empirical one-step frequencies match the kernel row") {
    const Kernel<OneColumnWalk> K(OneColumnWalk(4, 3), 0.25);
    const auto x = FieldVector::from_entries({1, 2, 0, 0}, 3);
    std::map<FieldVector, double, StateLess> exact;
    for (const auto& [y, w] : apply_kernel_row(K, x)) exact[y] = w;
    std::map<FieldVector, double, StateLess> hits;
    const int N = 100000;
    for (int t = 0; t < N; ++t) {
      Philox4x32 rng(10, static_cast<std::uint64_t>(t));
      auto y = x;
      K.sample(y, rng);
      REQUIRE(exact.count(y) == 1);
      hits[y] += 1;
    }
    for (const auto& [y, w] : exact) {
      const double sigma = std::sqrt(w * (1 - w) / N);
      CHECK(std::abs(hits[y] / N - w) <= 3 * sigma + 1e-12);
    }
  }

  TEST_CASE("horizontal projection of PA-PRA equals the p-ary transvection walk") {
    const PaPraWalk hw(5, 3, 1);
    const PAryTransvectionWalk vw(5, 3, 2);
    auto g = hw.canonical_start();
    RowTuple v;
    for (const auto& e : g) v.push_back(e.v);
    for (std::uint64_t t = 0; t < 2000; ++t) {
      Philox4x32 r1(21, 0, t), r2(21, 0, t);
      hw.sample_move(g, r1);
      vw.sample_move(v, r2);
      for (std::size_t i = 0; i < v.size(); ++i) REQUIRE(g[i].v == v[i]);
    }
  }

  TEST_CASE("transvection walk projects onto the one-column walk") {
    const TransvectionWalk tw(10, 3);
    const OneColumnWalk ow(10, 2);
    const LinearFunctional xi(FieldVector::from_entries({1, 1, 0}, 2));
    auto z = tw.canonical_start();
    FieldVector y(10, 2);
    for (std::uint32_t i = 0; i < 10; ++i) y.set(i, eval_functional(xi, z[i]).value());
    REQUIRE_FALSE(y.is_zero());
    for (std::uint64_t t = 0; t < 2000; ++t) {
      Philox4x32 r1(22, 0, t), r2(22, 0, t);
      tw.sample_move(z, r1);
      ow.sample_move(y, r2);
      for (std::uint32_t i = 0; i < 10; ++i) REQUIRE(eval_functional(xi, z[i]).value() == y.get(i));
    }
  }

  TEST_CASE("orbit representatives reproduce the all-starts mixing time") {
    const Kernel<TransvectionWalk> K(TransvectionWalk(4, 2), 0.5);
    const auto space = enumerate_space(K.walk());
    const auto orbits = transvection_orbits(K.walk(), space);
    std::size_t total = 0;
    for (const auto& o : orbits) total += o.size;
    CHECK(total == space.size());
    std::vector<std::size_t> all(space.size());
    std::iota(all.begin(), all.end(), 0);
    const auto S = sparse_kernel(K, space);
    const Eigen::VectorXd pi = Eigen::VectorXd::Constant(S.rows(), 1.0 / S.rows());
    CHECK(mixing_time_exact(S, pi, all) == mixing_time_exact(K));
  }
}
