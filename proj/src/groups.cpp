#include "prwalk/groups.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <numbers>

namespace prwalk {

cplx root_of_unity(std::uint64_t t, std::uint32_t p) {
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(t % p) / p;
  return {std::cos(angle), std::sin(angle)};
}

HeisenbergElement::HeisenbergElement(FieldVector v_, FieldScalar z_) : v(std::move(v_)), z(z_) {
  if (v.modulus() != z.modulus()) throw DimensionMismatch("horizontal and central moduli differ");
  if (v.dim() % 2 != 0 || v.dim() == 0) throw InvalidArgument("horizontal dimension must be even");
  if (v.modulus() == 2) throw UnsupportedCharacteristic("Heisenberg group needs an odd prime");
}

HeisenbergElement HeisenbergElement::identity(std::uint32_t h, std::uint32_t p) {
  return {FieldVector(h, p), FieldScalar(0, p)};
}

std::uint64_t HeisenbergElement::code() const {
  const std::uint64_t ph = saturating_pow(modulus(), h());
  return saturating_mul(z.value(), ph) + v.code();
}

HeisenbergElement HeisenbergElement::from_code(std::uint64_t code, std::uint32_t h, std::uint32_t p) {
  const std::uint64_t ph = saturating_pow(p, h);
  if (code / ph >= p) throw InvalidArgument("element code out of range");
  return {FieldVector::from_code(code % ph, h, p), FieldScalar(code / ph, p)};
}

std::uint64_t heisenberg_order(std::uint32_t p, std::uint32_t m) { return saturating_pow(p, 2 * m + 1); }

namespace {

void require_same_group(const HeisenbergElement& g, const HeisenbergElement& g2) {
  if (g.h() != g2.h() || g.modulus() != g2.modulus()) throw DimensionMismatch("elements of different groups");
}

}  // namespace

HeisenbergElement h_mul(const HeisenbergElement& g, const HeisenbergElement& g2) {
  require_same_group(g, g2);
  const std::uint32_t p = g.modulus();
  const SymplecticForm form(g.h(), p);
  const FieldScalar twist = FieldScalar::half(p) * form(g.v, g2.v);
  return {g.v + g2.v, g.z + g2.z + twist};
}

HeisenbergElement h_inv(const HeisenbergElement& g) { return {-g.v, -g.z}; }

HeisenbergElement h_pow(const HeisenbergElement& g, std::uint64_t a) {
  const std::uint32_t p = g.modulus();
  const auto ar = static_cast<std::uint32_t>(a % p);
  return {g.v.scaled(ar), g.z * FieldScalar(ar, p)};
}

HeisenbergElement h_commutator(const HeisenbergElement& g, const HeisenbergElement& g2) {
  require_same_group(g, g2);
  const SymplecticForm form(g.h(), g.modulus());
  return {FieldVector(g.h(), g.modulus()), form(g.v, g2.v)};
}

bool generates(std::span<const HeisenbergElement> tuple) {
  if (tuple.empty()) throw InvalidArgument("generates: empty tuple");
  std::vector<FieldVector> horizontal;
  horizontal.reserve(tuple.size());
  for (const auto& g : tuple) {
    require_same_group(g, tuple[0]);
    horizontal.push_back(g.v);
  }
  return rank(horizontal) == tuple[0].h();
}

std::vector<HeisenbergElement> canonical_tuple(std::uint32_t r, std::uint32_t p, std::uint32_t m) {
  const std::uint32_t h = 2 * m;
  if (r < h) throw InvalidArgument("tuple length shorter than horizontal dimension cannot generate");
  std::vector<HeisenbergElement> g;
  for (std::uint32_t i = 0; i < h; ++i) g.emplace_back(FieldVector::basis(h, p, i), FieldScalar(0, p));
  if (r > h) g.emplace_back(FieldVector(h, p), FieldScalar(1, p));
  while (g.size() < r) g.push_back(HeisenbergElement::identity(h, p));
  return g;
}

cplx character_value(const Character& chi, const HeisenbergElement& g) {
  return root_of_unity(eval_functional(chi.xi, g.v).value(), g.modulus());
}

cplx character_value(const Character& chi, const FieldVector& u) {
  return root_of_unity(eval_functional(chi.xi, u).value(), u.modulus());
}

Representation::Representation(std::uint32_t p, std::uint32_t m, std::uint32_t lambda)
    : p_(p), m_(m), lambda_(lambda), dim_(saturating_pow(p, m)) {
  require_prime(p);
  if (p == 2) throw UnsupportedCharacteristic("Heisenberg representations need an odd prime");
  if (m == 0) throw InvalidArgument("m must be positive");
  if (lambda % p == 0) throw InvalidArgument("lambda must be a nonzero element of F_p");
  lambda_ = lambda % p;
}

FieldVector Representation::coset(std::uint64_t idx) const {
  FieldVector b(2 * m_, p_);
  for (std::uint32_t q = m_; q-- > 0;) {
    b.set(2 * q + 1, static_cast<std::uint32_t>(idx % p_));
    idx /= p_;
  }
  return b;
}

std::uint64_t Representation::index_of_b(const FieldVector& w) const {
  std::uint64_t idx = 0;
  for (std::uint32_t q = 0; q < m_; ++q) idx = idx * p_ + w.get(2 * q + 1);
  return idx;
}

Representation::Monomial Representation::monomial(const HeisenbergElement& g) const {
  if (g.h() != 2 * m_ || g.modulus() != p_) throw DimensionMismatch("element not in this group");
  const SymplecticForm form(2 * m_, p_);
  const FieldScalar half = FieldScalar::half(p_);
  Monomial out{std::vector<std::uint64_t>(dim_), std::vector<cplx>(dim_)};
  for (std::uint64_t row = 0; row < dim_; ++row) {
    const HeisenbergElement x = h_mul({coset(row), FieldScalar(0, p_)}, g);
    FieldVector a(2 * m_, p_), b(2 * m_, p_);
    for (std::uint32_t q = 0; q < 2 * m_; q += 2) {
      a.set(q, x.v.get(q));
      b.set(q + 1, x.v.get(q + 1));
    }
    const FieldScalar central = x.z - half * form(a, b);
    const std::uint64_t col = index_of_b(b);
    out.row_of_column[col] = row;
    out.value[col] = root_of_unity(std::uint64_t{lambda_} * central.value(), p_);
  }
  return out;
}

Eigen::MatrixXcd Representation::matrix(const HeisenbergElement& g) const {
  const Monomial mono = monomial(g);
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim_), static_cast<Eigen::Index>(dim_));
  for (std::uint64_t col = 0; col < dim_; ++col)
    M(static_cast<Eigen::Index>(mono.row_of_column[col]), static_cast<Eigen::Index>(col)) = mono.value[col];
  return M;
}

Representation build_representation(std::uint32_t p, std::uint32_t m, std::uint32_t lambda,
                                    std::uint64_t matrix_budget) {
  const std::uint64_t dim = saturating_pow(p, m);
  if (dim > matrix_budget) throw BudgetExceeded("representation dimension exceeds matrix budget", dim, matrix_budget);
  return {p, m, lambda};
}

Projection fixed_projection(const Eigen::MatrixXcd& U, std::uint32_t p, double tol) {
  if (U.rows() != U.cols()) throw DimensionMismatch("fixed_projection: matrix not square");
  const auto n = U.rows();
  Eigen::MatrixXcd power = Eigen::MatrixXcd::Identity(n, n);
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(n, n);
  for (std::uint32_t a = 0; a < p; ++a) {
    sum += power;
    power = power * U;
  }
  const double residual = n == 0 ? 0.0 : (power - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
  if (residual > tol) throw NotPTorsion("U^p differs from I by " + std::to_string(residual));
  return {sum / static_cast<double>(p)};
}

double operator_norm(const Eigen::MatrixXcd& A) {
  if (A.size() == 0) return 0.0;
  if (std::max(A.rows(), A.cols()) <= 512) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
    return svd.singularValues()(0);
  }
  Eigen::VectorXcd x = Eigen::VectorXcd::Ones(A.cols()).normalized();
  double est = 0.0;
  for (int it = 0; it < 10000; ++it) {
    Eigen::VectorXcd y = A.adjoint() * (A * x);
    const double nrm = y.norm();
    if (nrm == 0.0) return 0.0;
    x = y / nrm;
    if (std::abs(nrm - est) <= 1e-15 * nrm) {
      est = nrm;
      break;
    }
    est = nrm;
  }
  return std::sqrt(est);
}

AverageProjectionReport average_projection_check(std::span<const Projection> family, double alpha) {
  if (family.empty()) throw InvalidArgument("average_projection_check: empty family");
  const auto n = family[0].matrix.rows();
  Eigen::MatrixXcd avg = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& P : family) {
    if (P.matrix.rows() != n) throw DimensionMismatch("projection sizes differ");
    avg += P.matrix;
  }
  avg /= static_cast<double>(family.size());
  std::size_t good = 0;
  for (const auto& P : family)
    for (const auto& Q : family)
      if (operator_norm(P.matrix * Q.matrix) <= alpha + 1e-12) ++good;
  const double delta = static_cast<double>(good) / static_cast<double>(family.size() * family.size());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (avg + avg.adjoint()), Eigen::EigenvaluesOnly);
  return {es.eigenvalues().maxCoeff(), delta, 1.0 - 0.5 * delta * (1.0 - alpha)};
}

namespace {

double max_abs(const Eigen::MatrixXcd& M) { return M.size() ? M.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

RepresentationResiduals representation_residuals(const Representation& rho, std::uint64_t pair_budget) {
  const std::uint32_t p = rho.p(), h = 2 * rho.m();
  const std::uint64_t order = heisenberg_order(p, rho.m());
  const std::uint64_t pairs = saturating_mul(order, order);
  if (pairs > pair_budget) throw BudgetExceeded("representation pair check too large", pairs, pair_budget);
  std::vector<HeisenbergElement> elems;
  std::vector<Eigen::MatrixXcd> mats;
  for (std::uint64_t c = 0; c < order; ++c) {
    elems.push_back(HeisenbergElement::from_code(c, h, p));
    mats.push_back(rho.matrix(elems.back()));
  }
  const auto d = static_cast<Eigen::Index>(rho.dimension());
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(d, d);
  const SymplecticForm form(h, p);
  RepresentationResiduals r{0.0, 0.0, 0.0, 0.0, pairs};
  for (std::uint64_t a = 0; a < order; ++a) {
    const auto& A = mats[a];
    r.unitarity = std::max(r.unitarity, max_abs(A * A.adjoint() - I));
    if (elems[a].v.is_zero()) {
      const cplx expected = root_of_unity(std::uint64_t{rho.lambda()} * elems[a].z.value(), p);
      r.central = std::max(r.central, max_abs(A - expected * I));
    }
    for (std::uint64_t b = 0; b < order; ++b) {
      const auto& B = mats[b];
      const Eigen::MatrixXcd AB = A * B;
      const std::uint64_t prod = h_mul(elems[a], elems[b]).code();
      r.multiplicativity = std::max(r.multiplicativity, max_abs(mats[prod] - AB));
      const cplx twist = root_of_unity(std::uint64_t{rho.lambda()} * form(elems[a].v, elems[b].v).value(), p);
      r.commutation = std::max(r.commutation, max_abs(AB - twist * (B * A)));
    }
  }
  return r;
}

std::uint64_t dimension_sum_squares(std::uint32_t p, std::uint32_t m, std::uint64_t matrix_budget) {
  std::uint64_t total = saturating_pow(p, 2 * m);
  for (std::uint32_t lambda = 1; lambda < p; ++lambda) {
    const std::uint64_t d = build_representation(p, m, lambda, matrix_budget).dimension();
    total += d * d;
  }
  return total;
}

std::vector<ProjectionNormRow> projection_norm_table(const Representation& rho, std::uint64_t pair_budget) {
  const std::uint32_t p = rho.p(), h = 2 * rho.m();
  const std::uint64_t count = saturating_pow(p, h);
  if (saturating_mul(count, count) > pair_budget)
    throw BudgetExceeded("projection table too large", saturating_mul(count, count), pair_budget);
  const SymplecticForm form(h, p);
  std::vector<Eigen::MatrixXcd> proj(count);
  for (std::uint64_t v = 1; v < count; ++v)
    proj[v] = fixed_projection(rho.matrix(HeisenbergElement(FieldVector::from_code(v, h, p), FieldScalar(0, p))), p).matrix;
  std::vector<ProjectionNormRow> rows;
  for (std::uint64_t v = 1; v < count; ++v)
    for (std::uint64_t w = 1; w < count; ++w) {
      const std::uint32_t om = form(FieldVector::from_code(v, h, p), FieldVector::from_code(w, h, p)).value();
      if (om == 0) continue;
      rows.push_back({v, w, om, operator_norm(proj[v] * proj[w])});
    }
  return rows;
}

}  // namespace prwalk
