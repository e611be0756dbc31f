#pragma once

#include <cstddef>
#include <cstdint>
#include <iterator>
#include <span>
#include <string>
#include <vector>

#include "prwalk/errors.hpp"

namespace prwalk {

inline constexpr std::uint64_t kDefaultEnumerationBudget = std::uint64_t{1} << 24;
inline constexpr std::uint32_t kMaxPrime = 251;

bool is_prime(std::uint32_t p);

// Throws InvalidArgument unless p is a prime no larger than kMaxPrime.
void require_prime(std::uint32_t p);

// base^exp, saturating at UINT64_MAX.
std::uint64_t saturating_pow(std::uint64_t base, std::uint32_t exp);
std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b);

class FieldScalar {
 public:
  FieldScalar(std::uint64_t value, std::uint32_t p);

  std::uint32_t value() const noexcept { return value_; }
  std::uint32_t modulus() const noexcept { return p_; }

  FieldScalar operator+(const FieldScalar& o) const;
  FieldScalar operator-(const FieldScalar& o) const;
  FieldScalar operator*(const FieldScalar& o) const;
  FieldScalar operator-() const;
  FieldScalar inverse() const;
  bool operator==(const FieldScalar& o) const = default;

  // (p+1)/2, the inverse of 2; p = 2 is rejected.
  static FieldScalar half(std::uint32_t p);

 private:
  std::uint32_t value_;
  std::uint32_t p_;
};

// Length-d vector over F_p. p = 2 is bit-packed into 64-bit words.
class FieldVector {
 public:
  FieldVector(std::uint32_t dim, std::uint32_t p);

  static FieldVector from_entries(const std::vector<std::uint32_t>& entries, std::uint32_t p);
  static FieldVector basis(std::uint32_t dim, std::uint32_t p, std::uint32_t i);
  // Inverse of code(): base-p digits, entry 0 least significant (bit i for p = 2).
  static FieldVector from_code(std::uint64_t code, std::uint32_t dim, std::uint32_t p);

  std::uint32_t dim() const noexcept { return dim_; }
  std::uint32_t modulus() const noexcept { return p_; }

  std::uint32_t get(std::uint32_t i) const;
  void set(std::uint32_t i, std::uint32_t value);
  std::uint32_t operator[](std::uint32_t i) const { return get(i); }

  bool is_zero() const noexcept;
  std::uint32_t weight() const noexcept;

  FieldVector& operator+=(const FieldVector& o);
  FieldVector& operator-=(const FieldVector& o);
  FieldVector operator+(const FieldVector& o) const;
  FieldVector operator-(const FieldVector& o) const;
  FieldVector operator-() const;
  // this += a * o
  FieldVector& add_scaled(const FieldVector& o, std::uint32_t a);
  FieldVector scaled(std::uint32_t a) const;

  bool operator==(const FieldVector& o) const;
  bool operator<(const FieldVector& o) const;

  // Requires p^dim < 2^64.
  std::uint64_t code() const;

  const std::vector<std::uint64_t>& words() const noexcept { return words_; }
  std::string to_string() const;

 private:
  void require_compatible(const FieldVector& o) const;

  std::uint32_t dim_;
  std::uint32_t p_;
  std::vector<std::uint64_t> words_;   // p == 2
  std::vector<std::uint8_t> entries_;  // odd p
};

class LinearFunctional {
 public:
  explicit LinearFunctional(FieldVector coeffs) : coeffs_(std::move(coeffs)) {}

  const FieldVector& coeffs() const noexcept { return coeffs_; }
  std::uint32_t dim() const noexcept { return coeffs_.dim(); }
  std::uint32_t modulus() const noexcept { return coeffs_.modulus(); }
  bool is_zero() const noexcept { return coeffs_.is_zero(); }
  std::uint64_t code() const { return coeffs_.code(); }

  FieldScalar operator()(const FieldVector& v) const;

 private:
  FieldVector coeffs_;
};

FieldScalar eval_functional(const LinearFunctional& xi, const FieldVector& v);

std::size_t rank(std::span<const FieldVector> vectors);

// Alternating form with omega(b_{2q-1}, b_{2q}) = 1 on consecutive basis pairs.
class SymplecticForm {
 public:
  SymplecticForm(std::uint32_t h, std::uint32_t p);

  std::uint32_t h() const noexcept { return h_; }
  std::uint32_t modulus() const noexcept { return p_; }
  FieldScalar operator()(const FieldVector& v, const FieldVector& w) const;
  std::vector<FieldVector> gram() const;

 private:
  std::uint32_t h_;
  std::uint32_t p_;
};

FieldScalar symplectic_eval(const SymplecticForm& form, const FieldVector& v, const FieldVector& w);

// Lazy range over all functionals on F_p^dim, ordered by coefficient code.
class FunctionalRange {
 public:
  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = LinearFunctional;
    using difference_type = std::ptrdiff_t;
    using pointer = void;
    using reference = LinearFunctional;

    iterator() = default;
    iterator(std::uint64_t code, std::uint32_t dim, std::uint32_t p) : code_(code), dim_(dim), p_(p) {}
    LinearFunctional operator*() const {
      return LinearFunctional(FieldVector::from_code(code_, dim_, p_));
    }
    iterator& operator++() {
      ++code_;
      return *this;
    }
    iterator operator++(int) {
      auto t = *this;
      ++code_;
      return t;
    }
    bool operator==(const iterator& o) const { return code_ == o.code_; }

   private:
    std::uint64_t code_ = 0;
    std::uint32_t dim_ = 0;
    std::uint32_t p_ = 2;
  };

  FunctionalRange(std::uint32_t dim, std::uint32_t p, bool include_zero, std::uint64_t budget);

  iterator begin() const { return {first_, dim_, p_}; }
  iterator end() const { return {last_, dim_, p_}; }
  std::uint64_t size() const noexcept { return last_ - first_; }

 private:
  std::uint32_t dim_;
  std::uint32_t p_;
  std::uint64_t first_;
  std::uint64_t last_;
};

FunctionalRange enumerate_functionals(std::uint32_t dim, std::uint32_t p, bool include_zero,
                                      std::uint64_t budget = kDefaultEnumerationBudget);

}  // namespace prwalk
