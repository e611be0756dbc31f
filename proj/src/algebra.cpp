#include "prwalk/algebra.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <sstream>

namespace prwalk {

bool is_prime(std::uint32_t p) {
  if (p < 2) return false;
  for (std::uint32_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

void require_prime(std::uint32_t p) {
  if (p > kMaxPrime || !is_prime(p))
    throw InvalidArgument("modulus " + std::to_string(p) + " is not a supported prime");
}

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a)
    return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

std::uint64_t saturating_pow(std::uint64_t base, std::uint32_t exp) {
  std::uint64_t r = 1;
  for (std::uint32_t i = 0; i < exp; ++i) r = saturating_mul(r, base);
  return r;
}

namespace {

std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p) {
  // Fermat; p is small so plain square-and-multiply is fine.
  std::uint64_t r = 1, b = a % p;
  for (std::uint32_t e = p - 2; e; e >>= 1) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
  }
  return static_cast<std::uint32_t>(r);
}

constexpr std::uint32_t words_for(std::uint32_t dim) { return (dim + 63) / 64; }

}  // namespace

FieldScalar::FieldScalar(std::uint64_t value, std::uint32_t p) : value_(0), p_(p) {
  require_prime(p);
  value_ = static_cast<std::uint32_t>(value % p);
}

FieldScalar FieldScalar::operator+(const FieldScalar& o) const {
  if (p_ != o.p_) throw DimensionMismatch("scalar moduli differ");
  return {std::uint64_t{value_} + o.value_, p_};
}

FieldScalar FieldScalar::operator-(const FieldScalar& o) const {
  if (p_ != o.p_) throw DimensionMismatch("scalar moduli differ");
  return {std::uint64_t{value_} + p_ - o.value_, p_};
}

FieldScalar FieldScalar::operator*(const FieldScalar& o) const {
  if (p_ != o.p_) throw DimensionMismatch("scalar moduli differ");
  return {std::uint64_t{value_} * o.value_, p_};
}

FieldScalar FieldScalar::operator-() const { return {std::uint64_t{p_} - value_, p_}; }

FieldScalar FieldScalar::inverse() const {
  if (value_ == 0) throw InvalidArgument("zero has no inverse");
  return {inv_mod(value_, p_), p_};
}

FieldScalar FieldScalar::half(std::uint32_t p) {
  if (p == 2) throw UnsupportedCharacteristic("one half does not exist in characteristic 2");
  return {(std::uint64_t{p} + 1) / 2, p};
}

FieldVector::FieldVector(std::uint32_t dim, std::uint32_t p) : dim_(dim), p_(p) {
  require_prime(p);
  if (p == 2)
    words_.assign(words_for(dim), 0);
  else
    entries_.assign(dim, 0);
}

FieldVector FieldVector::from_entries(const std::vector<std::uint32_t>& entries, std::uint32_t p) {
  FieldVector v(static_cast<std::uint32_t>(entries.size()), p);
  for (std::uint32_t i = 0; i < v.dim_; ++i) v.set(i, entries[i] % p);
  return v;
}

FieldVector FieldVector::basis(std::uint32_t dim, std::uint32_t p, std::uint32_t i) {
  FieldVector v(dim, p);
  v.set(i, 1);
  return v;
}

FieldVector FieldVector::from_code(std::uint64_t code, std::uint32_t dim, std::uint32_t p) {
  FieldVector v(dim, p);
  if (p == 2) {
    if (dim < 64 && (code >> dim) != 0) throw InvalidArgument("code out of range");
    if (!v.words_.empty()) v.words_[0] = code;
    return v;
  }
  for (std::uint32_t i = 0; i < dim; ++i) {
    v.entries_[i] = static_cast<std::uint8_t>(code % p);
    code /= p;
  }
  if (code != 0) throw InvalidArgument("code out of range");
  return v;
}

std::uint32_t FieldVector::get(std::uint32_t i) const {
  if (i >= dim_) throw InvalidArgument("vector index out of range");
  if (p_ == 2) return static_cast<std::uint32_t>((words_[i >> 6] >> (i & 63)) & 1u);
  return entries_[i];
}

void FieldVector::set(std::uint32_t i, std::uint32_t value) {
  if (i >= dim_) throw InvalidArgument("vector index out of range");
  value %= p_;
  if (p_ == 2) {
    const std::uint64_t mask = std::uint64_t{1} << (i & 63);
    if (value)
      words_[i >> 6] |= mask;
    else
      words_[i >> 6] &= ~mask;
  } else {
    entries_[i] = static_cast<std::uint8_t>(value);
  }
}

bool FieldVector::is_zero() const noexcept {
  if (p_ == 2) return std::all_of(words_.begin(), words_.end(), [](auto w) { return w == 0; });
  return std::all_of(entries_.begin(), entries_.end(), [](auto e) { return e == 0; });
}

std::uint32_t FieldVector::weight() const noexcept {
  std::uint32_t w = 0;
  if (p_ == 2) {
    for (auto x : words_) w += static_cast<std::uint32_t>(std::popcount(x));
  } else {
    for (auto e : entries_) w += e != 0;
  }
  return w;
}

void FieldVector::require_compatible(const FieldVector& o) const {
  if (dim_ != o.dim_ || p_ != o.p_) throw DimensionMismatch("vector dims or moduli differ");
}

FieldVector& FieldVector::operator+=(const FieldVector& o) {
  require_compatible(o);
  if (p_ == 2) {
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= o.words_[w];
  } else {
    for (std::uint32_t i = 0; i < dim_; ++i)
      entries_[i] = static_cast<std::uint8_t>((entries_[i] + o.entries_[i]) % p_);
  }
  return *this;
}

FieldVector& FieldVector::operator-=(const FieldVector& o) { return add_scaled(o, p_ - 1); }

FieldVector FieldVector::operator+(const FieldVector& o) const {
  FieldVector r = *this;
  r += o;
  return r;
}

FieldVector FieldVector::operator-(const FieldVector& o) const {
  FieldVector r = *this;
  r -= o;
  return r;
}

FieldVector FieldVector::operator-() const { return scaled(p_ - 1); }

FieldVector& FieldVector::add_scaled(const FieldVector& o, std::uint32_t a) {
  require_compatible(o);
  a %= p_;
  if (a == 0) return *this;
  if (p_ == 2) return *this += o;
  for (std::uint32_t i = 0; i < dim_; ++i)
    entries_[i] = static_cast<std::uint8_t>((entries_[i] + a * o.entries_[i]) % p_);
  return *this;
}

FieldVector FieldVector::scaled(std::uint32_t a) const {
  FieldVector r(dim_, p_);
  return r.add_scaled(*this, a);
}

bool FieldVector::operator==(const FieldVector& o) const {
  return dim_ == o.dim_ && p_ == o.p_ && words_ == o.words_ && entries_ == o.entries_;
}

bool FieldVector::operator<(const FieldVector& o) const {
  require_compatible(o);
  if (p_ == 2) return words_ < o.words_;
  return entries_ < o.entries_;
}

std::uint64_t FieldVector::code() const {
  if (p_ == 2) {
    if (dim_ > 64) throw BudgetExceeded("vector code does not fit 64 bits", dim_, 64);
    return words_.empty() ? 0 : words_[0];
  }
  if (saturating_pow(p_, dim_) == std::numeric_limits<std::uint64_t>::max())
    throw BudgetExceeded("vector code does not fit 64 bits", dim_, 0);
  std::uint64_t c = 0;
  for (std::uint32_t i = dim_; i-- > 0;) c = c * p_ + entries_[i];
  return c;
}

std::string FieldVector::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::uint32_t i = 0; i < dim_; ++i) os << (i ? "," : "") << get(i);
  os << ')';
  return os.str();
}

FieldScalar LinearFunctional::operator()(const FieldVector& v) const {
  return eval_functional(*this, v);
}

FieldScalar eval_functional(const LinearFunctional& xi, const FieldVector& v) {
  const FieldVector& c = xi.coeffs();
  if (c.dim() != v.dim() || c.modulus() != v.modulus())
    throw DimensionMismatch("functional and vector dims differ");
  const std::uint32_t p = v.modulus();
  if (p == 2) {
    std::uint32_t parity = 0;
    for (std::size_t w = 0; w < c.words().size(); ++w)
      parity ^= static_cast<std::uint32_t>(std::popcount(c.words()[w] & v.words()[w])) & 1u;
    return {parity, 2};
  }
  std::uint64_t s = 0;
  for (std::uint32_t i = 0; i < v.dim(); ++i) s += std::uint64_t{c.get(i)} * v.get(i);
  return {s, p};
}

std::size_t rank(std::span<const FieldVector> vectors) {
  if (vectors.empty()) return 0;
  const std::uint32_t dim = vectors[0].dim(), p = vectors[0].modulus();
  for (const auto& v : vectors)
    if (v.dim() != dim || v.modulus() != p) throw DimensionMismatch("rank: vectors differ in dim or modulus");

  if (p == 2 && dim <= 64) {
    // xor basis keyed by leading bit
    std::uint64_t basis[64] = {};
    std::size_t r = 0;
    for (const auto& v : vectors) {
      std::uint64_t w = v.words().empty() ? 0 : v.words()[0];
      while (w) {
        const int top = 63 - std::countl_zero(w);
        if (!basis[top]) {
          basis[top] = w;
          ++r;
          break;
        }
        w ^= basis[top];
      }
    }
    return r;
  }

  std::vector<FieldVector> rows(vectors.begin(), vectors.end());
  std::size_t r = 0;
  for (std::uint32_t col = 0; col < dim && r < rows.size(); ++col) {
    std::size_t piv = r;
    while (piv < rows.size() && rows[piv].get(col) == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[r], rows[piv]);
    const std::uint32_t inv = p == 2 ? 1 : inv_mod(rows[r].get(col), p);
    for (std::size_t i = r + 1; i < rows.size(); ++i) {
      const std::uint32_t e = rows[i].get(col);
      if (e) rows[i].add_scaled(rows[r], (p - e) * inv % p);
    }
    ++r;
  }
  return r;
}

SymplecticForm::SymplecticForm(std::uint32_t h, std::uint32_t p) : h_(h), p_(p) {
  require_prime(p);
  if (h == 0 || h % 2 != 0) throw InvalidArgument("symplectic form needs even positive dimension");
}

FieldScalar SymplecticForm::operator()(const FieldVector& v, const FieldVector& w) const {
  if (v.dim() != h_ || w.dim() != h_ || v.modulus() != p_ || w.modulus() != p_)
    throw DimensionMismatch("symplectic form dims differ");
  std::uint64_t s = 0;
  for (std::uint32_t q = 0; q < h_; q += 2)
    s += std::uint64_t{v.get(q)} * w.get(q + 1) + std::uint64_t{p_ - v.get(q + 1)} * w.get(q);
  return {s, p_};
}

std::vector<FieldVector> SymplecticForm::gram() const {
  std::vector<FieldVector> rows;
  for (std::uint32_t i = 0; i < h_; ++i) {
    FieldVector row(h_, p_);
    for (std::uint32_t j = 0; j < h_; ++j)
      row.set(j, (*this)(FieldVector::basis(h_, p_, i), FieldVector::basis(h_, p_, j)).value());
    rows.push_back(std::move(row));
  }
  return rows;
}

FieldScalar symplectic_eval(const SymplecticForm& form, const FieldVector& v, const FieldVector& w) {
  return form(v, w);
}

FunctionalRange::FunctionalRange(std::uint32_t dim, std::uint32_t p, bool include_zero, std::uint64_t budget)
    : dim_(dim), p_(p) {
  require_prime(p);
  const std::uint64_t count = saturating_pow(p, dim);
  if (count > budget) throw BudgetExceeded("functional enumeration too large", count, budget);
  first_ = include_zero ? 0 : 1;
  last_ = count;
}

FunctionalRange enumerate_functionals(std::uint32_t dim, std::uint32_t p, bool include_zero,
                                      std::uint64_t budget) {
  return {dim, p, include_zero, budget};
}

}  // namespace prwalk
