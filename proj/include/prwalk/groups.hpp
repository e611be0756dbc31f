#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "prwalk/algebra.hpp"

namespace prwalk {

using cplx = std::complex<double>;

// psi(t) = exp(2 pi i t / p)
cplx root_of_unity(std::uint64_t t, std::uint32_t p);

struct HeisenbergElement {
  FieldVector v;
  FieldScalar z;

  HeisenbergElement(FieldVector v_, FieldScalar z_);
  static HeisenbergElement identity(std::uint32_t h, std::uint32_t p);

  std::uint32_t h() const noexcept { return v.dim(); }
  std::uint32_t modulus() const noexcept { return v.modulus(); }
  bool is_identity() const noexcept { return v.is_zero() && z.value() == 0; }
  bool operator==(const HeisenbergElement& o) const { return v == o.v && z == o.z; }

  // z * p^h + code(v); requires p^(h+1) < 2^64.
  std::uint64_t code() const;
  static HeisenbergElement from_code(std::uint64_t code, std::uint32_t h, std::uint32_t p);
};

std::uint64_t heisenberg_order(std::uint32_t p, std::uint32_t m);

HeisenbergElement h_mul(const HeisenbergElement& g, const HeisenbergElement& g2);
HeisenbergElement h_inv(const HeisenbergElement& g);
HeisenbergElement h_pow(const HeisenbergElement& g, std::uint64_t a);
HeisenbergElement h_commutator(const HeisenbergElement& g, const HeisenbergElement& g2);

bool generates(std::span<const HeisenbergElement> tuple);

// Canonical generating tuple ((b_1,0),...,(b_h,0),(0,1),(0,0),...).
std::vector<HeisenbergElement> canonical_tuple(std::uint32_t r, std::uint32_t p, std::uint32_t m);

struct Character {
  LinearFunctional xi;
};

cplx character_value(const Character& chi, const HeisenbergElement& g);
// F_2 analogue (-1)^{xi(u)}, or psi(xi(u)) for odd p.
cplx character_value(const Character& chi, const FieldVector& u);

class Representation {
 public:
  Representation(std::uint32_t p, std::uint32_t m, std::uint32_t lambda);

  std::uint32_t p() const noexcept { return p_; }
  std::uint32_t m() const noexcept { return m_; }
  std::uint32_t lambda() const noexcept { return lambda_; }
  std::uint64_t dimension() const noexcept { return dim_; }

  // Coset representative b in B = span(b_2, b_4, ...) for basis index idx.
  FieldVector coset(std::uint64_t idx) const;

  // Monomial form: column b' has a single nonzero entry at row perm[b'].
  struct Monomial {
    std::vector<std::uint64_t> row_of_column;
    std::vector<cplx> value;
  };
  Monomial monomial(const HeisenbergElement& g) const;
  Eigen::MatrixXcd matrix(const HeisenbergElement& g) const;

 private:
  std::uint64_t index_of_b(const FieldVector& w) const;

  std::uint32_t p_;
  std::uint32_t m_;
  std::uint32_t lambda_;
  std::uint64_t dim_;
};

inline constexpr std::uint64_t kDefaultMatrixBudget = 4096;

Representation build_representation(std::uint32_t p, std::uint32_t m, std::uint32_t lambda,
                                    std::uint64_t matrix_budget = kDefaultMatrixBudget);

struct Projection {
  Eigen::MatrixXcd matrix;
};

Projection fixed_projection(const Eigen::MatrixXcd& U, std::uint32_t p, double tol = 1e-10);

// Largest singular value: full SVD up to dim 512, power iteration above.
double operator_norm(const Eigen::MatrixXcd& A);

// lambda_max of the average and the certified bound 1 - (delta/2)(1 - alpha),
// with delta the fraction of ordered pairs in [N]^2 having ||P_j P_l|| <= alpha.
struct AverageProjectionReport {
  double lambda_max;
  double delta;
  double bound;
};
AverageProjectionReport average_projection_check(std::span<const Projection> family, double alpha);

// Max-entry residuals over all ordered pairs of group elements.
struct RepresentationResiduals {
  double multiplicativity;  // rho(gh) - rho(g) rho(h)
  double unitarity;         // rho(g) rho(g)^* - I
  double central;           // rho(0,z) - psi(lambda z) I
  double commutation;       // rho(g) rho(g') - psi(lambda omega(v,w)) rho(g') rho(g)
  std::uint64_t pairs;
};
RepresentationResiduals representation_residuals(const Representation& rho,
                                                 std::uint64_t pair_budget = std::uint64_t{1} << 22);

// Sum of squared dimensions of the irreducibles built here: p^{2m} characters plus
// rho_lambda for every lambda in F_p^x.
std::uint64_t dimension_sum_squares(std::uint32_t p, std::uint32_t m,
                                    std::uint64_t matrix_budget = kDefaultMatrixBudget);

struct ProjectionNormRow {
  std::uint64_t v;      // horizontal codes of g = (v,0), g' = (w,0)
  std::uint64_t w;
  std::uint32_t omega;
  double norm;          // ||P_U P_V||_op
};
// Every ordered pair of horizontal elements with omega(v,w) != 0.
std::vector<ProjectionNormRow> projection_norm_table(const Representation& rho,
                                                     std::uint64_t pair_budget = std::uint64_t{1} << 20);

}  // namespace prwalk
