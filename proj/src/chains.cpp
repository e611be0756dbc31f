#include "prwalk/chains.hpp"

#include <cstdio>
#include <limits>
#include <unordered_map>

namespace prwalk {

bool state_less(const FieldVector& a, const FieldVector& b) { return a < b; }

bool state_less(const RowTuple& a, const RowTuple& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

bool state_less(const HeisenbergElement& a, const HeisenbergElement& b) {
  if (a.v == b.v) return a.z.value() < b.z.value();
  return a.v < b.v;
}

bool state_less(const HeisTuple& a, const HeisTuple& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                      [](const auto& x, const auto& y) { return state_less(x, y); });
}

namespace {

// Ordered pair (donor, recipient) uniform among len*(len-1).
std::pair<std::uint32_t, std::uint32_t> sample_pair(std::uint32_t len, Philox4x32& rng) {
  const std::uint64_t u = rng.below(std::uint64_t{len} * (len - 1));
  const auto donor = static_cast<std::uint32_t>(u / (len - 1));
  auto recipient = static_cast<std::uint32_t>(u % (len - 1));
  if (recipient >= donor) ++recipient;
  return {donor, recipient};
}

void require_pair(std::uint32_t i, std::uint32_t j, std::size_t len) {
  if (i == j) throw InvalidArgument("move needs distinct indices");
  if (i >= len || j >= len) throw InvalidArgument("move index out of range");
}

std::uint64_t spanning_count(std::uint32_t p, std::uint32_t len, std::uint32_t dim) {
  // number of len-tuples spanning F_p^dim
  const std::uint64_t pl = saturating_pow(p, len);
  std::uint64_t total = 1;
  for (std::uint32_t q = 0; q < dim; ++q) {
    const std::uint64_t pq = saturating_pow(p, q);
    if (pq >= pl) return 0;
    total = saturating_mul(total, pl - pq);
  }
  return total;
}

}  // namespace

TransvectionWalk::TransvectionWalk(std::uint32_t n, std::uint32_t k) : n_(n), k_(k) {
  if (n < 2) throw InvalidArgument("transvection walk needs n >= 2");
  if (k < 1) throw InvalidArgument("transvection walk needs k >= 1");
}

void TransvectionWalk::check_shape(const State& z) const {
  if (z.size() != n_) throw DimensionMismatch("state has wrong number of rows");
  for (const auto& row : z)
    if (row.dim() != k_ || row.modulus() != 2) throw DimensionMismatch("row has wrong dimension or modulus");
}

bool TransvectionWalk::in_omega(const State& z) const {
  check_shape(z);
  return rank(z) == k_;
}

void TransvectionWalk::sample_move(State& z, Philox4x32& rng) const {
  const auto [a, b] = sample_pair(n_, rng);
  z[b] += z[a];
}

std::uint64_t TransvectionWalk::encode(const State& z) const {
  if (std::uint64_t{n_} * k_ > 64) throw BudgetExceeded("state code does not fit 64 bits", std::uint64_t{n_} * k_, 64);
  std::uint64_t c = 0;
  for (std::uint32_t i = 0; i < n_; ++i) c |= z[i].code() << (i * k_);
  return c;
}

TransvectionWalk::State TransvectionWalk::decode(std::uint64_t code) const {
  if (std::uint64_t{n_} * k_ > 64) throw BudgetExceeded("state code does not fit 64 bits", std::uint64_t{n_} * k_, 64);
  const std::uint64_t mask = k_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << k_) - 1;
  State z;
  z.reserve(n_);
  for (std::uint32_t i = 0; i < n_; ++i) z.push_back(FieldVector::from_code((code >> (i * k_)) & mask, k_, 2));
  return z;
}

std::uint64_t TransvectionWalk::ambient_size() const { return saturating_pow(2, n_ * k_); }

std::uint64_t TransvectionWalk::omega_size() const { return spanning_count(2, n_, k_); }

TransvectionWalk::State TransvectionWalk::canonical_start() const {
  if (k_ > n_) throw InvalidArgument("Stief(n,k) is empty for k > n");
  State z(n_, FieldVector(k_, 2));
  for (std::uint32_t i = 0; i < k_; ++i) z[i] = FieldVector::basis(k_, 2, i);
  return z;
}

RowTuple transvection_step(const RowTuple& z, std::uint32_t a, std::uint32_t b) {
  require_pair(a, b, z.size());
  RowTuple out = z;
  out[b] += out[a];
  return out;
}

PAryTransvectionWalk::PAryTransvectionWalk(std::uint32_t r, std::uint32_t p, std::uint32_t h)
    : r_(r), p_(p), h_(h) {
  require_prime(p);
  if (r < 2) throw InvalidArgument("walk needs tuple length >= 2");
  if (h < 1) throw InvalidArgument("walk needs positive row dimension");
}

void PAryTransvectionWalk::check_shape(const State& v) const {
  if (v.size() != r_) throw DimensionMismatch("state has wrong number of rows");
  for (const auto& row : v)
    if (row.dim() != h_ || row.modulus() != p_) throw DimensionMismatch("row has wrong dimension or modulus");
}

bool PAryTransvectionWalk::in_omega(const State& v) const {
  check_shape(v);
  return rank(v) == h_;
}

void PAryTransvectionWalk::sample_move(State& v, Philox4x32& rng) const {
  const auto [j, i] = sample_pair(r_, rng);
  const auto a = static_cast<std::uint32_t>(rng.below(p_));
  v[i].add_scaled(v[j], a);
}

std::uint64_t PAryTransvectionWalk::encode(const State& v) const {
  const std::uint64_t base = saturating_pow(p_, h_);
  if (ambient_size() == std::numeric_limits<std::uint64_t>::max())
    throw BudgetExceeded("state code does not fit 64 bits", 0, 64);
  std::uint64_t c = 0;
  for (std::uint32_t i = r_; i-- > 0;) c = c * base + v[i].code();
  return c;
}

PAryTransvectionWalk::State PAryTransvectionWalk::decode(std::uint64_t code) const {
  const std::uint64_t base = saturating_pow(p_, h_);
  State v;
  for (std::uint32_t i = 0; i < r_; ++i) {
    v.push_back(FieldVector::from_code(code % base, h_, p_));
    code /= base;
  }
  return v;
}

std::uint64_t PAryTransvectionWalk::ambient_size() const { return saturating_pow(p_, r_ * h_); }

std::uint64_t PAryTransvectionWalk::omega_size() const { return spanning_count(p_, r_, h_); }

OneColumnWalk::OneColumnWalk(std::uint32_t r, std::uint32_t p) : r_(r), p_(p) {
  require_prime(p);
  if (r < 2) throw InvalidArgument("one-column walk needs r >= 2");
}

void OneColumnWalk::check_shape(const State& y) const {
  if (y.dim() != r_ || y.modulus() != p_) throw DimensionMismatch("vector has wrong dimension or modulus");
}

bool OneColumnWalk::in_omega(const State& y) const {
  check_shape(y);
  return !y.is_zero();
}

void OneColumnWalk::sample_move(State& y, Philox4x32& rng) const {
  const auto [j, i] = sample_pair(r_, rng);
  const std::uint32_t a = p_ == 2 ? 1 : static_cast<std::uint32_t>(rng.below(p_));
  y.set(i, (y.get(i) + a * y.get(j)) % p_);
}

std::uint64_t OneColumnWalk::ambient_size() const { return saturating_pow(p_, r_); }

FieldVector one_column_step(const FieldVector& y, std::uint32_t i, std::uint32_t j, std::uint32_t a) {
  require_pair(i, j, y.dim());
  FieldVector out = y;
  out.set(i, (y.get(i) + (a % y.modulus()) * y.get(j)) % y.modulus());
  return out;
}

PaPraWalk::PaPraWalk(std::uint32_t r, std::uint32_t p, std::uint32_t m) : r_(r), p_(p), m_(m) {
  require_prime(p);
  if (p == 2) throw UnsupportedCharacteristic("PA-PRA needs an odd prime");
  if (r < 2) throw InvalidArgument("PA-PRA needs r >= 2");
  if (m < 1) throw InvalidArgument("PA-PRA needs m >= 1");
}

void PaPraWalk::check_shape(const State& g) const {
  if (g.size() != r_) throw DimensionMismatch("tuple has wrong length");
  for (const auto& x : g)
    if (x.h() != h() || x.modulus() != p_) throw DimensionMismatch("element of a different group");
}

bool PaPraWalk::in_omega(const State& g) const {
  check_shape(g);
  return generates(g);
}

void PaPraWalk::sample_move(State& g, Philox4x32& rng) const {
  const auto [j, i] = sample_pair(r_, rng);
  const auto a = static_cast<std::uint32_t>(rng.below(p_));
  const bool left = rng.below(2) == 1;
  const HeisenbergElement ga = h_pow(g[j], a);
  g[i] = left ? h_mul(ga, g[i]) : h_mul(g[i], ga);
}

std::uint64_t PaPraWalk::encode(const State& g) const {
  if (ambient_size() == std::numeric_limits<std::uint64_t>::max())
    throw BudgetExceeded("state code does not fit 64 bits", 0, 64);
  const std::uint64_t base = group_order();
  std::uint64_t c = 0;
  for (std::uint32_t i = r_; i-- > 0;) c = c * base + g[i].code();
  return c;
}

PaPraWalk::State PaPraWalk::decode(std::uint64_t code) const {
  const std::uint64_t base = group_order();
  State g;
  g.reserve(r_);
  for (std::uint32_t i = 0; i < r_; ++i) {
    g.push_back(HeisenbergElement::from_code(code % base, h(), p_));
    code /= base;
  }
  return g;
}

std::uint64_t PaPraWalk::ambient_size() const { return saturating_pow(group_order(), r_); }

std::uint64_t PaPraWalk::omega_size() const {
  return saturating_mul(saturating_pow(p_, r_), spanning_count(p_, r_, h()));
}

HeisTuple pa_pra_step(const HeisTuple& g, std::uint32_t i, std::uint32_t j, std::uint32_t a, Side side) {
  require_pair(i, j, g.size());
  HeisTuple out = g;
  const HeisenbergElement ga = h_pow(g[j], a);
  out[i] = side == Side::Right ? h_mul(g[i], ga) : h_mul(ga, g[i]);
  return out;
}

EnumeratedSpace::EnumeratedSpace(std::vector<std::uint64_t> codes) : codes_(std::move(codes)) {
  std::sort(codes_.begin(), codes_.end());
  if (std::adjacent_find(codes_.begin(), codes_.end()) != codes_.end())
    throw InvalidArgument("enumerated space has duplicate codes");
}

bool EnumeratedSpace::contains(std::uint64_t code) const {
  return std::binary_search(codes_.begin(), codes_.end(), code);
}

std::size_t EnumeratedSpace::index_of(std::uint64_t code) const {
  auto it = std::lower_bound(codes_.begin(), codes_.end(), code);
  if (it == codes_.end() || *it != code) throw InvalidArgument("code not in enumerated space");
  return static_cast<std::size_t>(it - codes_.begin());
}

ConnectivityReport connectivity(const SparseKernel& K) {
  // Kosaraju with explicit stacks.
  const auto n = static_cast<std::size_t>(K.rows());
  std::vector<std::vector<std::size_t>> fwd(n), bwd(n);
  for (Eigen::Index x = 0; x < K.outerSize(); ++x)
    for (SparseKernel::InnerIterator it(K, x); it; ++it)
      if (it.value() > 0.0) {
        fwd[x].push_back(static_cast<std::size_t>(it.col()));
        bwd[static_cast<std::size_t>(it.col())].push_back(static_cast<std::size_t>(x));
      }

  std::vector<char> seen(n, 0);
  std::vector<std::size_t> order;
  order.reserve(n);
  for (std::size_t s = 0; s < n; ++s) {
    if (seen[s]) continue;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{s, 0}};
    seen[s] = 1;
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      if (next < fwd[v].size()) {
        const std::size_t w = fwd[v][next++];
        if (!seen[w]) {
          seen[w] = 1;
          stack.push_back({w, 0});
        }
      } else {
        order.push_back(v);
        stack.pop_back();
      }
    }
  }

  std::vector<char> assigned(n, 0);
  std::vector<std::size_t> sizes;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (assigned[*it]) continue;
    std::size_t count = 0;
    std::vector<std::size_t> stack{*it};
    assigned[*it] = 1;
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      ++count;
      for (std::size_t w : bwd[v])
        if (!assigned[w]) {
          assigned[w] = 1;
          stack.push_back(w);
        }
    }
    sizes.push_back(count);
  }
  std::sort(sizes.rbegin(), sizes.rend());
  return {sizes.size() == 1, sizes};
}

std::vector<Orbit> transvection_orbits(const TransvectionWalk& walk, const EnumeratedSpace& space) {
  const std::uint32_t k = walk.k();
  // GL_k(F_2) as lists of row images; only enumerated for k <= 4.
  std::vector<std::vector<std::uint64_t>> group;
  if (k <= 4) {
    const std::uint64_t total = std::uint64_t{1} << (k * k);
    for (std::uint64_t c = 0; c < total; ++c) {
      std::vector<FieldVector> rows;
      std::vector<std::uint64_t> images;
      for (std::uint32_t i = 0; i < k; ++i) {
        const std::uint64_t img = (c >> (i * k)) & ((std::uint64_t{1} << k) - 1);
        images.push_back(img);
        rows.push_back(FieldVector::from_code(img, k, 2));
      }
      if (rank(rows) == k) group.push_back(std::move(images));
    }
  } else {
    std::vector<std::uint64_t> id;
    for (std::uint32_t i = 0; i < k; ++i) id.push_back(std::uint64_t{1} << i);
    group.push_back(std::move(id));
  }

  std::unordered_map<std::uint64_t, std::size_t> slot;
  std::vector<Orbit> orbits;
  std::vector<std::uint64_t> rows(walk.n());
  for (std::size_t x = 0; x < space.size(); ++x) {
    const std::uint64_t code = space.code(x);
    std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
    for (const auto& M : group) {
      for (std::uint32_t i = 0; i < walk.n(); ++i) {
        const std::uint64_t z = (code >> (i * k)) & ((std::uint64_t{1} << k) - 1);
        std::uint64_t img = 0;
        for (std::uint32_t c = 0; c < k; ++c)
          if ((z >> c) & 1u) img ^= M[c];
        rows[i] = img;
      }
      std::sort(rows.begin(), rows.end());
      std::uint64_t canon = 0;
      for (std::uint32_t i = 0; i < walk.n(); ++i) canon |= rows[i] << (i * k);
      best = std::min(best, canon);
    }
    auto [it, inserted] = slot.try_emplace(best, orbits.size());
    if (inserted)
      orbits.push_back({x, 1});
    else
      ++orbits[it->second].size;
  }
  return orbits;
}

FibreKernel build_fibre_kernel(std::span<const FieldVector> state, std::size_t i) {
  if (state.size() < 2) throw InvalidArgument("fibre kernel needs at least two coordinates");
  if (i >= state.size()) throw InvalidArgument("recipient index out of range");
  const std::uint32_t k = state[0].dim();
  for (const auto& z : state)
    if (z.dim() != k || z.modulus() != 2) throw DimensionMismatch("fibre rows differ in dim or modulus");
  if (k > 12) throw BudgetExceeded("fibre kernel too large", std::uint64_t{1} << k, 4096);
  const auto S = static_cast<Eigen::Index>(1) << k;
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(S, S);
  const double w = 1.0 / static_cast<double>(state.size() - 1);
  for (std::size_t j = 0; j < state.size(); ++j) {
    if (j == i) continue;
    const auto zj = static_cast<Eigen::Index>(state[j].code());
    for (Eigen::Index u = 0; u < S; ++u) K(u, u ^ zj) += w;
  }
  return {i, std::move(K)};
}

FibreKernel build_fibre_kernel(std::span<const HeisenbergElement> state, std::size_t i, std::uint64_t budget) {
  if (state.size() < 2) throw InvalidArgument("fibre kernel needs at least two coordinates");
  if (i >= state.size()) throw InvalidArgument("recipient index out of range");
  const std::uint32_t h = state[0].h(), p = state[0].modulus();
  for (const auto& g : state)
    if (g.h() != h || g.modulus() != p) throw DimensionMismatch("fibre elements from different groups");
  const std::uint64_t order = heisenberg_order(p, h / 2);
  if (order > budget) throw BudgetExceeded("fibre kernel too large", order, budget);
  const auto S = static_cast<Eigen::Index>(order);
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(S, S);
  const double w = 1.0 / (2.0 * static_cast<double>(state.size() - 1) * p);
  std::vector<HeisenbergElement> elems;
  elems.reserve(order);
  for (std::uint64_t c = 0; c < order; ++c) elems.push_back(HeisenbergElement::from_code(c, h, p));
  for (std::size_t j = 0; j < state.size(); ++j) {
    if (j == i) continue;
    for (std::uint32_t a = 0; a < p; ++a) {
      const HeisenbergElement ga = h_pow(state[j], a);
      for (Eigen::Index x = 0; x < S; ++x) {
        K(x, static_cast<Eigen::Index>(h_mul(elems[x], ga).code())) += w;
        K(x, static_cast<Eigen::Index>(h_mul(ga, elems[x]).code())) += w;
      }
    }
  }
  return {i, std::move(K)};
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

void write_csv(std::ostream& os, std::span<const Trajectory> trajectories) {
  os << "trajectory_id,step,observer_name,value\r\n";
  char buf[64];
  for (const auto& tr : trajectories)
    for (const auto& rec : tr.records) {
      std::snprintf(buf, sizeof buf, "%.17g", rec.value);
      os << rec.trajectory_id << ',' << rec.step << ',' << csv_field(tr.observer_names.at(rec.observer)) << ','
         << buf << "\r\n";
    }
}

}  // namespace prwalk
