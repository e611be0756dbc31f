#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "prwalk/algebra.hpp"
#include "prwalk/groups.hpp"
#include "prwalk/rng.hpp"

namespace prwalk {

using RowTuple = std::vector<FieldVector>;
using HeisTuple = std::vector<HeisenbergElement>;
using SparseKernel = Eigen::SparseMatrix<double, Eigen::RowMajor>;

enum class Side { Right, Left };

bool state_less(const FieldVector& a, const FieldVector& b);
bool state_less(const RowTuple& a, const RowTuple& b);
bool state_less(const HeisenbergElement& a, const HeisenbergElement& b);
bool state_less(const HeisTuple& a, const HeisTuple& b);

struct StateLess {
  template <class S>
  bool operator()(const S& a, const S& b) const {
    return state_less(a, b);
  }
};

// k-column transvection walk on Stief(n,k): ordered pair (a,b), z_b += z_a.
class TransvectionWalk {
 public:
  using State = RowTuple;

  TransvectionWalk(std::uint32_t n, std::uint32_t k);

  std::uint32_t n() const noexcept { return n_; }
  std::uint32_t k() const noexcept { return k_; }
  std::uint32_t length() const noexcept { return n_; }
  std::uint64_t move_count() const noexcept { return std::uint64_t{n_} * (n_ - 1); }
  std::string name() const { return "transvection"; }

  void check_shape(const State& z) const;
  bool in_omega(const State& z) const;

  template <class F>
  void for_each_move(const State& z, F&& f) const {
    const double w = 1.0 / static_cast<double>(move_count());
    State y = z;
    for (std::uint32_t a = 0; a < n_; ++a)
      for (std::uint32_t b = 0; b < n_; ++b) {
        if (a == b) continue;
        y[b] += y[a];
        f(static_cast<const State&>(y), w);
        y[b] += y[a];
      }
  }
  void sample_move(State& z, Philox4x32& rng) const;

  std::uint64_t encode(const State& z) const;
  State decode(std::uint64_t code) const;
  std::uint64_t ambient_size() const;
  std::uint64_t omega_size() const;
  template <class F>
  void for_each_ambient(F&& f) const {
    const std::uint64_t total = ambient_size();
    for (std::uint64_t c = 0; c < total; ++c) f(c);
  }

  State canonical_start() const;

 private:
  std::uint32_t n_;
  std::uint32_t k_;
};

RowTuple transvection_step(const RowTuple& z, std::uint32_t a, std::uint32_t b);

// p-ary transvection walk on spanning r-tuples of F_p^h: v_i += a v_j, a uniform in F_p.
class PAryTransvectionWalk {
 public:
  using State = RowTuple;

  PAryTransvectionWalk(std::uint32_t r, std::uint32_t p, std::uint32_t h);

  std::uint32_t r() const noexcept { return r_; }
  std::uint32_t p() const noexcept { return p_; }
  std::uint32_t h() const noexcept { return h_; }
  std::uint32_t length() const noexcept { return r_; }
  std::uint64_t move_count() const noexcept { return std::uint64_t{r_} * (r_ - 1) * p_; }
  std::string name() const { return "p-ary-transvection"; }

  void check_shape(const State& v) const;
  bool in_omega(const State& v) const;

  template <class F>
  void for_each_move(const State& v, F&& f) const {
    const double w = 1.0 / static_cast<double>(move_count());
    State y = v;
    for (std::uint32_t i = 0; i < r_; ++i)
      for (std::uint32_t j = 0; j < r_; ++j) {
        if (i == j) continue;
        for (std::uint32_t a = 0; a < p_; ++a) {
          y[i] = v[i];
          y[i].add_scaled(v[j], a);
          f(static_cast<const State&>(y), w);
        }
        y[i] = v[i];
      }
  }
  void sample_move(State& v, Philox4x32& rng) const;

  std::uint64_t encode(const State& v) const;
  State decode(std::uint64_t code) const;
  std::uint64_t ambient_size() const;
  std::uint64_t omega_size() const;
  template <class F>
  void for_each_ambient(F&& f) const {
    const std::uint64_t total = ambient_size();
    for (std::uint64_t c = 0; c < total; ++c) f(c);
  }

 private:
  std::uint32_t r_;
  std::uint32_t p_;
  std::uint32_t h_;
};

// One-column walk on F_p^r \ {0}. For p = 2 the exponent is always 1 (the k = 1
// transvection walk); for odd p it is uniform on F_p.
class OneColumnWalk {
 public:
  using State = FieldVector;

  OneColumnWalk(std::uint32_t r, std::uint32_t p);

  std::uint32_t r() const noexcept { return r_; }
  std::uint32_t p() const noexcept { return p_; }
  std::uint32_t length() const noexcept { return r_; }
  std::uint32_t exponent_count() const noexcept { return p_ == 2 ? 1 : p_; }
  std::uint64_t move_count() const noexcept { return std::uint64_t{r_} * (r_ - 1) * exponent_count(); }
  std::string name() const { return "one-column"; }

  void check_shape(const State& y) const;
  bool in_omega(const State& y) const;

  template <class F>
  void for_each_move(const State& y, F&& f) const {
    const double w = 1.0 / static_cast<double>(move_count());
    State x = y;
    for (std::uint32_t i = 0; i < r_; ++i)
      for (std::uint32_t j = 0; j < r_; ++j) {
        if (i == j) continue;
        for (std::uint32_t e = 0; e < exponent_count(); ++e) {
          const std::uint32_t a = p_ == 2 ? 1 : e;
          x.set(i, (y.get(i) + a * y.get(j)) % p_);
          f(static_cast<const State&>(x), w);
        }
        x.set(i, y.get(i));
      }
  }
  void sample_move(State& y, Philox4x32& rng) const;

  std::uint64_t encode(const State& y) const { return y.code(); }
  State decode(std::uint64_t code) const { return FieldVector::from_code(code, r_, p_); }
  std::uint64_t ambient_size() const;
  std::uint64_t omega_size() const { return ambient_size() - 1; }
  template <class F>
  void for_each_ambient(F&& f) const {
    const std::uint64_t total = ambient_size();
    for (std::uint64_t c = 0; c < total; ++c) f(c);
  }

 private:
  std::uint32_t r_;
  std::uint32_t p_;
};

FieldVector one_column_step(const FieldVector& y, std::uint32_t i, std::uint32_t j, std::uint32_t a);

// Power-averaged product replacement on generating r-tuples of H(F_p^{2m}).
class PaPraWalk {
 public:
  using State = HeisTuple;

  PaPraWalk(std::uint32_t r, std::uint32_t p, std::uint32_t m);

  std::uint32_t r() const noexcept { return r_; }
  std::uint32_t p() const noexcept { return p_; }
  std::uint32_t m() const noexcept { return m_; }
  std::uint32_t h() const noexcept { return 2 * m_; }
  std::uint32_t length() const noexcept { return r_; }
  std::uint64_t move_count() const noexcept { return 2ull * p_ * r_ * (r_ - 1); }
  std::string name() const { return "pa-pra"; }

  void check_shape(const State& g) const;
  bool in_omega(const State& g) const;

  template <class F>
  void for_each_move(const State& g, F&& f) const {
    const double w = 1.0 / static_cast<double>(move_count());
    State y = g;
    for (std::uint32_t i = 0; i < r_; ++i)
      for (std::uint32_t j = 0; j < r_; ++j) {
        if (i == j) continue;
        for (std::uint32_t a = 0; a < p_; ++a) {
          const HeisenbergElement ga = h_pow(g[j], a);
          y[i] = h_mul(g[i], ga);
          f(static_cast<const State&>(y), w);
          y[i] = h_mul(ga, g[i]);
          f(static_cast<const State&>(y), w);
        }
        y[i] = g[i];
      }
  }
  void sample_move(State& g, Philox4x32& rng) const;

  std::uint64_t encode(const State& g) const;
  State decode(std::uint64_t code) const;
  std::uint64_t group_order() const { return heisenberg_order(p_, m_); }
  std::uint64_t ambient_size() const;
  std::uint64_t omega_size() const;
  template <class F>
  void for_each_ambient(F&& f) const {
    const std::uint64_t total = ambient_size();
    for (std::uint64_t c = 0; c < total; ++c) f(c);
  }

  State canonical_start() const { return canonical_tuple(r_, p_, m_); }

 private:
  std::uint32_t r_;
  std::uint32_t p_;
  std::uint32_t m_;
};

HeisTuple pa_pra_step(const HeisTuple& g, std::uint32_t i, std::uint32_t j, std::uint32_t a, Side side);

// Q = laziness * I + (1 - laziness) * P.
template <class W>
class Kernel {
 public:
  using Walk = W;
  using State = typename W::State;

  explicit Kernel(W walk, double laziness = 0.0) : walk_(std::move(walk)), laziness_(laziness) {
    if (!(laziness >= 0.0 && laziness < 1.0)) throw InvalidArgument("laziness must lie in [0, 1)");
  }

  const W& walk() const noexcept { return walk_; }
  double laziness() const noexcept { return laziness_; }

  // Calls f(successor, weight) for every move including the holding mass.
  template <class F>
  void for_each_transition(const State& x, F&& f) const {
    if (laziness_ > 0.0) f(x, laziness_);
    walk_.for_each_move(x, [&](const State& y, double w) { f(y, (1.0 - laziness_) * w); });
  }

  void sample(State& x, Philox4x32& rng) const {
    if (laziness_ > 0.0 && rng.uniform() < laziness_) return;
    walk_.sample_move(x, rng);
  }

 private:
  W walk_;
  double laziness_;
};

// Aggregated successor distribution of one kernel row.
template <class W>
std::vector<std::pair<typename W::State, double>> apply_kernel_row(const Kernel<W>& kernel,
                                                                   const typename W::State& x) {
  kernel.walk().check_shape(x);
  if (!kernel.walk().in_omega(x)) throw InvalidArgument("apply_kernel_row: state outside the state space");
  std::map<typename W::State, double, StateLess> acc;
  kernel.for_each_transition(x, [&](const typename W::State& y, double w) { acc[y] += w; });
  return {acc.begin(), acc.end()};
}

class EnumeratedSpace {
 public:
  EnumeratedSpace() = default;
  explicit EnumeratedSpace(std::vector<std::uint64_t> codes);

  std::size_t size() const noexcept { return codes_.size(); }
  std::uint64_t code(std::size_t idx) const { return codes_.at(idx); }
  const std::vector<std::uint64_t>& codes() const noexcept { return codes_; }
  bool contains(std::uint64_t code) const;
  // Throws InvalidArgument when the code is absent.
  std::size_t index_of(std::uint64_t code) const;

 private:
  std::vector<std::uint64_t> codes_;
};

template <class W>
EnumeratedSpace enumerate_space(const W& walk, std::uint64_t budget = kDefaultEnumerationBudget) {
  const std::uint64_t ambient = walk.ambient_size();
  if (ambient > budget) throw BudgetExceeded("state enumeration too large", ambient, budget);
  std::vector<std::uint64_t> codes;
  walk.for_each_ambient([&](std::uint64_t c) {
    if (walk.in_omega(walk.decode(c))) codes.push_back(c);
  });
  return EnumeratedSpace(std::move(codes));
}

template <class W>
EnumeratedSpace enumerate_ambient(const W& walk, std::uint64_t budget = kDefaultEnumerationBudget) {
  const std::uint64_t ambient = walk.ambient_size();
  if (ambient > budget) throw BudgetExceeded("state enumeration too large", ambient, budget);
  std::vector<std::uint64_t> codes(ambient);
  for (std::uint64_t c = 0; c < ambient; ++c) codes[c] = c;
  return EnumeratedSpace(std::move(codes));
}

template <class W>
SparseKernel sparse_kernel(const Kernel<W>& kernel, const EnumeratedSpace& space) {
  std::vector<Eigen::Triplet<double>> trips;
  const auto& walk = kernel.walk();
  for (std::size_t x = 0; x < space.size(); ++x) {
    const auto state = walk.decode(space.code(x));
    kernel.for_each_transition(state, [&](const typename W::State& y, double w) {
      const std::uint64_t c = walk.encode(y);
      if (!space.contains(c)) throw InvariantViolation("kernel move leaves the enumerated space");
      trips.emplace_back(static_cast<int>(x), static_cast<int>(space.index_of(c)), w);
    });
  }
  const auto n = static_cast<Eigen::Index>(space.size());
  SparseKernel K(n, n);
  K.setFromTriplets(trips.begin(), trips.end());
  K.makeCompressed();
  return K;
}

template <class W>
Eigen::MatrixXd dense_kernel(const Kernel<W>& kernel, const EnumeratedSpace& space) {
  return Eigen::MatrixXd(sparse_kernel(kernel, space));
}

struct ConnectivityReport {
  bool strongly_connected;
  std::vector<std::size_t> component_sizes;  // strongly connected components, descending
};

ConnectivityReport connectivity(const SparseKernel& K);

// Representatives of orbits of S_n x GL_k(F_2) on an enumerated transvection
// space, with orbit sizes. The kernel commutes with this action.
struct Orbit {
  std::size_t representative;
  std::size_t size;
};
std::vector<Orbit> transvection_orbits(const TransvectionWalk& walk, const EnumeratedSpace& space);

struct FibreKernel {
  std::size_t recipient;
  Eigen::MatrixXd matrix;  // on S indexed by element code
};

// The entry state[i] is ignored; the remaining entries are the frozen coordinates.
FibreKernel build_fibre_kernel(std::span<const FieldVector> state, std::size_t i);
FibreKernel build_fibre_kernel(std::span<const HeisenbergElement> state, std::size_t i,
                               std::uint64_t budget = 4096);

template <class State>
struct Observer {
  std::string name;
  std::function<double(const State&)> fn;
};

struct ObservationRecord {
  std::uint64_t trajectory_id;
  std::uint64_t step;
  std::uint32_t observer;
  double value;
};

struct Trajectory {
  std::uint64_t seed = 0;
  std::uint64_t trajectory_id = 0;
  std::vector<std::string> observer_names;
  std::vector<ObservationRecord> records;
};

// Step t (producing X_{t+1}) draws from the stream seeked to (seed, trajectory_id, t).
// Observers are recorded at t = 0, stride, 2*stride, ... and at the final step.
template <class W>
Trajectory simulate(const Kernel<W>& kernel, typename W::State start, std::uint64_t steps, std::uint64_t seed,
                    std::uint64_t trajectory_id, const std::vector<Observer<typename W::State>>& observers,
                    std::uint64_t stride = 1) {
  kernel.walk().check_shape(start);
  if (!kernel.walk().in_omega(start)) throw InvalidArgument("simulate: start state outside the state space");
  if (stride == 0) throw InvalidArgument("simulate: stride must be positive");
  Trajectory tr;
  tr.seed = seed;
  tr.trajectory_id = trajectory_id;
  for (const auto& o : observers) tr.observer_names.push_back(o.name);
  auto record = [&](std::uint64_t t) {
    for (std::uint32_t o = 0; o < observers.size(); ++o)
      tr.records.push_back({trajectory_id, t, o, observers[o].fn(start)});
  };
  Philox4x32 rng(seed, trajectory_id);
  record(0);
  for (std::uint64_t t = 0; t < steps; ++t) {
    rng.seek(t);
    kernel.sample(start, rng);
    if ((t + 1) % stride == 0 || t + 1 == steps) record(t + 1);
  }
  return tr;
}

void write_csv(std::ostream& os, std::span<const Trajectory> trajectories);

}  // namespace prwalk
