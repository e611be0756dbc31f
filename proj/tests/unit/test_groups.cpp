#include "doctest.h"
#include "oracles.hpp"
#include "prwalk/groups.hpp"

using namespace prwalk;

namespace {

HeisenbergElement H(std::vector<std::uint32_t> v, std::uint32_t z, std::uint32_t p) {
  return {FieldVector::from_entries(v, p), FieldScalar(z, p)};
}

oracle::Heis to_oracle(const HeisenbergElement& g) {
  oracle::Vec v(g.h());
  for (std::uint32_t i = 0; i < g.h(); ++i) v[i] = static_cast<int>(g.v.get(i));
  return {v, static_cast<int>(g.z.value())};
}

}  // namespace

TEST_SUITE("groups") {
  TEST_CASE("Heisenberg law examples") {
    const auto g = H({1, 2}, 1, 3);
    CHECK(h_mul(g, HeisenbergElement::identity(2, 3)) == g);
    CHECK(h_mul(g, h_inv(g)).is_identity());
    CHECK(h_mul(H({1, 0}, 0, 3), H({0, 1}, 0, 3)) == H({1, 1}, 2, 3));
    CHECK(h_pow(g, 0).is_identity());
    CHECK(h_pow(g, 3).is_identity());
    CHECK(h_pow(H({1, 0}, 1, 3), 2) == H({2, 0}, 2, 3));
    CHECK(h_commutator(H({1, 0}, 0, 3), H({0, 1}, 0, 3)) == H({0, 0}, 1, 3));
    CHECK(h_commutator(g, g).is_identity());
    CHECK(h_commutator(H({1, 0}, 2, 3), H({2, 0}, 1, 3)).is_identity());
  }

  TEST_CASE("multiplication table matches oracle, associativity and exponent p") {
    for (std::uint32_t p : {3u, 5u}) {
      const std::uint64_t order = heisenberg_order(p, 1);
      CHECK(order == p * p * p);
      for (std::uint64_t a = 0; a < order; ++a) {
        const auto g = HeisenbergElement::from_code(a, 2, p);
        CHECK(h_pow(g, p).is_identity());
        for (std::uint64_t b = 0; b < order; b += (p == 3 ? 1 : 3)) {
          const auto h = HeisenbergElement::from_code(b, 2, p);
          CHECK(to_oracle(h_mul(g, h)) == oracle::heis_mul(to_oracle(g), to_oracle(h), static_cast<int>(p)));
          if (p == 3)
            for (std::uint64_t c = 0; c < order; c += 5) {
              const auto k = HeisenbergElement::from_code(c, 2, p);
              CHECK(h_mul(h_mul(g, h), k) == h_mul(g, h_mul(h, k)));
            }
        }
      }
    }
  }

  TEST_CASE("power formula (a v, a z)") {
    for (std::uint64_t c = 0; c < 125; ++c) {
      const auto g = HeisenbergElement::from_code(c, 2, 5);
      HeisenbergElement acc = HeisenbergElement::identity(2, 5);
      for (std::uint64_t a = 0; a < 5; ++a) {
        CHECK(h_pow(g, a) == acc);
        CHECK(h_pow(g, a) == HeisenbergElement(g.v.scaled(static_cast<std::uint32_t>(a)), FieldScalar(a * g.z.value(), 5)));
        acc = h_mul(acc, g);
      }
    }
  }

  TEST_CASE("generation criterion agrees with subgroup closure") {
    CHECK(generates(canonical_tuple(4, 3, 1)));
    CHECK_FALSE(generates(std::vector{H({0, 0}, 1, 3), H({0, 0}, 2, 3)}));
    const std::vector pair{H({1, 0}, 0, 3), H({0, 1}, 0, 3)};
    CHECK(generates(pair));
    CHECK(oracle::subgroup_order({to_oracle(pair[0]), to_oracle(pair[1])}, 3) == 27);
    for (std::uint64_t a = 0; a < 27; ++a)
      for (std::uint64_t b = 0; b < 27; ++b) {
        const std::vector t{HeisenbergElement::from_code(a, 2, 3), HeisenbergElement::from_code(b, 2, 3)};
        CHECK(generates(t) == (oracle::subgroup_order({to_oracle(t[0]), to_oracle(t[1])}, 3) == 27));
      }
  }

  TEST_CASE("characters") {
    const Character trivial{LinearFunctional(FieldVector(2, 3))};
    CHECK(std::abs(character_value(trivial, H({1, 2}, 1, 3)) - cplx(1, 0)) < 1e-15);
    const Character c2{LinearFunctional(FieldVector::from_entries({1}, 2))};
    CHECK(std::abs(character_value(c2, FieldVector::from_entries({1}, 2)) - cplx(-1, 0)) < 1e-15);
    const Character c3{LinearFunctional(FieldVector::from_entries({1, 0}, 3))};
    CHECK(std::abs(character_value(c3, H({1, 0}, 2, 3)) - std::polar(1.0, 2 * M_PI / 3)) < 1e-14);
  }

  TEST_CASE("representations satisfy the axioms") {
    for (std::uint32_t p : {3u, 5u})
      for (std::uint32_t lam = 1; lam < p; ++lam) {
        const Representation rho = build_representation(p, 1, lam);
        CHECK(rho.dimension() == p);
        const auto r = representation_residuals(rho);
        CHECK(r.pairs == heisenberg_order(p, 1) * heisenberg_order(p, 1));
        CHECK(r.multiplicativity < 1e-10);
        CHECK(r.unitarity < 1e-10);
        CHECK(r.central < 1e-10);
        CHECK(r.commutation < 1e-10);
        const Eigen::MatrixXcd c = rho.matrix(H({0, 0}, 1, p));
        CHECK((c - root_of_unity(lam, p) * Eigen::MatrixXcd::Identity(p, p)).cwiseAbs().maxCoeff() < 1e-12);
      }
    CHECK(dimension_sum_squares(3, 1) == 27);
    CHECK(dimension_sum_squares(5, 1) == 125);
    CHECK(dimension_sum_squares(3, 2) == 243);
    CHECK_THROWS_AS(build_representation(3, 1, 0), InvalidArgument);
    CHECK_THROWS_AS(build_representation(2, 1, 1), UnsupportedCharacteristic);
    CHECK_THROWS_AS(build_representation(3, 9, 1, 4096), BudgetExceeded);
  }

  TEST_CASE("fixed projections") {
    const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(3, 3);
    CHECK((fixed_projection(I, 3).matrix - I).cwiseAbs().maxCoeff() < 1e-12);
    Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(3, 3);
    D(0, 0) = 1;
    D(1, 1) = root_of_unity(1, 3);
    D(2, 2) = root_of_unity(2, 3);
    Eigen::MatrixXcd expect = Eigen::MatrixXcd::Zero(3, 3);
    expect(0, 0) = 1;
    CHECK((fixed_projection(D, 3).matrix - expect).cwiseAbs().maxCoeff() < 1e-12);
    CHECK_THROWS_AS(fixed_projection(2.0 * I, 3), NotPTorsion);
  }

  TEST_CASE("two projections have norm p^{-1/2} when omega(v,w) != 0") {
    for (std::uint32_t p : {3u, 5u}) {
      const auto table = projection_norm_table(build_representation(p, 1, 1));
      CHECK(table.size() == (p * p - 1) * (p * p - p));
      for (const auto& row : table) CHECK(row.norm == doctest::Approx(1.0 / std::sqrt(double(p))).epsilon(1e-10));
    }
  }

  TEST_CASE("average of projections") {
    const Representation rho = build_representation(3, 1, 1);
    std::vector<Projection> fam;
    for (auto v : {std::vector<std::uint32_t>{1, 0}, {0, 1}, {1, 1}, {1, 2}})
      fam.push_back(fixed_projection(rho.matrix(H(v, 0, 3)), 3));
    const auto rep = average_projection_check(fam, 1.0 / std::sqrt(3.0) + 1e-9);
    CHECK(rep.delta == doctest::Approx(12.0 / 16.0));
    CHECK(rep.lambda_max <= rep.bound + 1e-12);
    // identical projections: no pair below alpha, bound degenerates to 1
    std::vector<Projection> same(3, fam[0]);
    const auto deg = average_projection_check(same, 0.5);
    CHECK(deg.delta == 0.0);
    CHECK(deg.lambda_max == doctest::Approx(1.0));
  }
}
