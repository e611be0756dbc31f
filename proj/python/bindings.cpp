#include <pybind11/eigen.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "prwalk/cli.hpp"
#include "prwalk/diagnostics.hpp"
#include "prwalk/pipeline.hpp"
#include "prwalk/report.hpp"

namespace py = pybind11;
using namespace prwalk;

namespace {

py::object to_py(const json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

std::vector<char> mask(const std::vector<bool>& in) { return {in.begin(), in.end()}; }

template <class W>
py::tuple kernel_of(const W& walk, double laziness, std::uint64_t budget) {
  if (walk.omega_size() > budget) throw BudgetExceeded("dense kernel too large", walk.omega_size(), budget);
  const EnumeratedSpace space = enumerate_space(walk);
  return py::make_tuple(space.codes(), dense_kernel(Kernel<W>(walk, laziness), space));
}

SparseKernel to_sparse(const Eigen::MatrixXd& K) { return K.sparseView(); }

}  // namespace

PYBIND11_MODULE(_prwalk, m) {
  m.doc() = "Random walks on generating tuples: kernels, spectra, LSI and mixing diagnostics";

  static py::exception<Error> base(m, "PrwalkError", PyExc_RuntimeError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", base.ptr());
  py::register_exception<DimensionMismatch>(m, "DimensionMismatch", base.ptr());
  py::register_exception<BudgetExceeded>(m, "BudgetExceeded", base.ptr());
  py::register_exception<UnsupportedCharacteristic>(m, "UnsupportedCharacteristic", base.ptr());
  py::register_exception<NotPTorsion>(m, "NotPTorsion", base.ptr());
  py::register_exception<ReversibilityViolation>(m, "ReversibilityViolation", base.ptr());
  py::register_exception<InvariantViolation>(m, "InvariantViolation", base.ptr());

  // ---- algebra ----
  py::class_<FieldVector>(m, "FieldVector")
      .def(py::init(&FieldVector::from_entries), py::arg("entries"), py::arg("p"))
      .def_static("from_code", &FieldVector::from_code, py::arg("code"), py::arg("dim"), py::arg("p"))
      .def_static("basis", &FieldVector::basis, py::arg("dim"), py::arg("p"), py::arg("i"))
      .def_property_readonly("dim", &FieldVector::dim)
      .def_property_readonly("p", &FieldVector::modulus)
      .def("entries",
           [](const FieldVector& v) {
             std::vector<std::uint32_t> out(v.dim());
             for (std::uint32_t i = 0; i < v.dim(); ++i) out[i] = v.get(i);
             return out;
           })
      .def("weight", &FieldVector::weight)
      .def("is_zero", &FieldVector::is_zero)
      .def("code", &FieldVector::code)
      .def("scaled", &FieldVector::scaled)
      .def("__getitem__", &FieldVector::get)
      .def("__len__", &FieldVector::dim)
      .def(py::self + py::self)
      .def(py::self - py::self)
      .def(-py::self)
      .def(py::self == py::self)
      .def("__hash__", [](const FieldVector& v) { return py::hash(py::str(v.to_string() + "/" + std::to_string(v.modulus()))); })
      .def("__repr__", &FieldVector::to_string);

  m.def("rank", [](const std::vector<FieldVector>& vs) { return rank(vs); }, py::arg("vectors"));
  m.def("is_prime", &is_prime);

  // ---- groups ----
  py::class_<HeisenbergElement>(m, "HeisenbergElement")
      .def(py::init([](const FieldVector& v, std::uint32_t z) { return HeisenbergElement(v, FieldScalar(z, v.modulus())); }),
           py::arg("v"), py::arg("z"))
      .def_static("identity", &HeisenbergElement::identity)
      .def_property_readonly("v", [](const HeisenbergElement& g) { return g.v; })
      .def_property_readonly("z", [](const HeisenbergElement& g) { return g.z.value(); })
      .def("__mul__", &h_mul)
      .def("__eq__", [](const HeisenbergElement& a, const HeisenbergElement& b) { return a.v == b.v && a.z == b.z; })
      .def("inverse", &h_inv)
      .def("__pow__", &h_pow)
      .def("__repr__", [](const HeisenbergElement& g) {
        return "(" + g.v.to_string() + ", " + std::to_string(g.z.value()) + ")";
      });
  m.def("commutator", &h_commutator);
  m.def("generates", [](const std::vector<HeisenbergElement>& g) { return generates(g); });
  m.def("canonical_tuple", &canonical_tuple, py::arg("r"), py::arg("p"), py::arg("m"));
  m.def("heisenberg_order", &heisenberg_order);
  m.def(
      "representation_residuals",
      [](std::uint32_t p, std::uint32_t mm, std::uint32_t lambda) {
        return to_py(to_json(representation_residuals(build_representation(p, mm, lambda))));
      },
      py::arg("p"), py::arg("m"), py::arg("lam"));
  m.def("dimension_sum_squares", [](std::uint32_t p, std::uint32_t mm) { return dimension_sum_squares(p, mm); });

  // ---- chains ----
  py::class_<Philox4x32>(m, "Philox4x32")
      .def(py::init<std::uint64_t, std::uint64_t, std::uint64_t>(), py::arg("seed"), py::arg("stream") = 0,
           py::arg("step") = 0)
      .def("seek", &Philox4x32::seek)
      .def("next32", [](Philox4x32& r) { return r(); })
      .def("next64", &Philox4x32::next64)
      .def("below", &Philox4x32::below)
      .def("uniform", &Philox4x32::uniform);

  m.def(
      "transvection_kernel",
      [](std::uint32_t n, std::uint32_t k, double laziness, std::uint64_t budget) {
        return kernel_of(TransvectionWalk(n, k), laziness, budget);
      },
      py::arg("n"), py::arg("k"), py::arg("laziness") = 0.0, py::arg("budget") = 4096,
      "(codes, dense kernel) on Stief(n, k).");
  m.def(
      "one_column_kernel",
      [](std::uint32_t r, std::uint32_t p, double laziness, std::uint64_t budget) {
        return kernel_of(OneColumnWalk(r, p), laziness, budget);
      },
      py::arg("r"), py::arg("p"), py::arg("laziness") = 0.0, py::arg("budget") = 4096);
  m.def(
      "pa_pra_kernel",
      [](std::uint32_t r, std::uint32_t p, std::uint32_t mm, double laziness, std::uint64_t budget) {
        return kernel_of(PaPraWalk(r, p, mm), laziness, budget);
      },
      py::arg("r"), py::arg("p"), py::arg("m"), py::arg("laziness") = 0.0, py::arg("budget") = 4096);
  m.def("decode_transvection", [](std::uint32_t n, std::uint32_t k, std::uint64_t code) {
    return TransvectionWalk(n, k).decode(code);
  });
  m.def("transvection_step", &transvection_step, py::arg("z"), py::arg("a"), py::arg("b"));
  m.def(
      "simulate_transvection",
      [](std::uint32_t n, std::uint32_t k, std::uint64_t steps, std::uint64_t seed, std::uint64_t trajectory,
         double laziness) {
        const Kernel<TransvectionWalk> K(TransvectionWalk(n, k), laziness);
        std::vector<Observer<RowTuple>> obs{
            {"in_good_set", [](const RowTuple& z) { return in_good_set(z, GoodSetSpec::transvection()) ? 1.0 : 0.0; }},
            {"rank", [](const RowTuple& z) { return static_cast<double>(rank(z)); }}};
        const Trajectory tr = simulate(K, K.walk().canonical_start(), steps, seed, trajectory, obs);
        std::ostringstream os;
        write_csv(os, std::span<const Trajectory>(&tr, 1));
        return os.str();
      },
      py::arg("n"), py::arg("k"), py::arg("steps"), py::arg("seed") = 1, py::arg("trajectory") = 0,
      py::arg("laziness") = 0.0, "CSV of good-set membership and rank along one trajectory.");

  // ---- spectral ----
  auto op = [](const Eigen::MatrixXd& K) { return DenseOperator(K, Flavor::Stochastic); };
  m.def("spectral_gap", [op](const Eigen::MatrixXd& K, const Eigen::VectorXd& pi) {
    return spectral_gap(op(K), Distribution(pi));
  });
  m.def("reversible_spectrum", [op](const Eigen::MatrixXd& K, const Eigen::VectorXd& pi) {
    return reversible_spectrum(op(K), Distribution(pi));
  });
  m.def("poincare_constant", [op](const Eigen::MatrixXd& K, const Eigen::VectorXd& pi) {
    return poincare_constant(op(K), Distribution(pi));
  });
  m.def(
      "lsi_constant",
      [](const Eigen::MatrixXd& K, const Eigen::VectorXd& pi, bool substochastic, int restarts, int steps,
         std::uint64_t seed) {
        LsiOptions o;
        o.restarts = restarts;
        o.steps = steps;
        o.seed = seed;
        const auto res = lsi_constant_numeric(DenseOperator(K, substochastic ? Flavor::Substochastic : Flavor::Stochastic),
                                              Distribution(pi), o);
        return py::make_tuple(res.constant, res.certificate);
      },
      py::arg("K"), py::arg("pi"), py::arg("substochastic") = false, py::arg("restarts") = 64,
      py::arg("steps") = 10000, py::arg("seed") = 1, "(constant, certificate) of the best ratio found.");
  m.def("lsi_ratio", [op](const Eigen::MatrixXd& K, const Eigen::VectorXd& pi, const Eigen::VectorXd& f) {
    return lsi_ratio(op(K), Distribution(pi), f);
  });
  m.def("dirichlet_form", [op](const Eigen::MatrixXd& K, const Eigen::VectorXd& pi, const Eigen::VectorXd& f,
                               const Eigen::VectorXd& g) { return dirichlet_form(op(K), Distribution(pi), f, g); });
  m.def("entropy", [](const Eigen::VectorXd& rho, const Eigen::VectorXd& u) { return entropy(Distribution(rho), u); });
  m.def("ent_squared",
        [](const Eigen::VectorXd& rho, const Eigen::VectorXd& f) { return ent_squared(Distribution(rho), f); });
  m.def("variance", [](const Eigen::VectorXd& rho, const Eigen::VectorXd& f) { return variance(Distribution(rho), f); });
  m.def("gap_lsi_bound", &gap_lsi_bound, py::arg("poincare"), py::arg("rho_min"), py::arg("c") = 4.0);
  m.def("semigroup_evolve_measure", [op](const Eigen::MatrixXd& K, const Eigen::VectorXd& lambda0, double t) {
    return semigroup_evolve_measure(op(K), lambda0, t);
  });
  m.def("poisson_upper_tail", &poisson_upper_tail, py::arg("t"), py::arg("L"));
  m.def("poisson_lower_tail", &poisson_lower_tail, py::arg("t"), py::arg("x"));
  m.def(
      "pipeline_report",
      [](double A, double omega, double pi_gc, double eta, std::uint64_t L, double t_star) {
        return to_py(to_json(pipeline_report(A, omega, pi_gc, eta, L, t_star)));
      },
      py::arg("A"), py::arg("omega_size"), py::arg("pi_gc"), py::arg("eta"), py::arg("L"), py::arg("t_star"));
  m.def(
      "pipeline_exact",
      [](const Eigen::MatrixXd& Q, const std::vector<bool>& in_G, const std::vector<std::size_t>& starts,
         std::uint64_t t_star, double A, std::uint64_t s_span) {
        PipelineOptions o;
        o.t_star = t_star;
        o.A = A;
        o.s_span = s_span;
        return to_py(to_json(pipeline_exact(to_sparse(Q), mask(in_G), starts, o)));
      },
      py::arg("Q"), py::arg("in_G"), py::arg("starts"), py::arg("t_star") = 0, py::arg("A") = -1.0,
      py::arg("s_span") = 20);

  // ---- diagnostics ----
  m.def("all_s_xi", [](const std::vector<FieldVector>& z) { return all_s_xi(z); });
  m.def("all_n_xi", [](const std::vector<HeisenbergElement>& g) { return all_n_xi(g); });
  m.def("in_good_set_transvection",
        [](const std::vector<FieldVector>& z) { return in_good_set(z, GoodSetSpec::transvection()); });
  m.def("in_good_set_heisenberg", [](const std::vector<HeisenbergElement>& g, double beta0) {
    return in_good_set(g, GoodSetSpec::heisenberg(beta0));
  });
  m.def("wilson", [](std::uint64_t s, std::uint64_t n) { return to_py(to_json(wilson(s, n))); });
  m.def("tv_exact", &tv_exact);
  m.def("tv_counting_lower", &tv_counting_lower, py::arg("t"), py::arg("move_count"), py::arg("omega_size"));
  m.def(
      "mixing_curve",
      [](const Eigen::MatrixXd& K, const Eigen::VectorXd& pi, const std::vector<std::size_t>& starts,
         std::uint64_t t_max) { return mixing_curve_exact(to_sparse(K), pi, starts, t_max); },
      py::arg("K"), py::arg("pi"), py::arg("starts"), py::arg("t_max"));
  m.def(
      "mixing_time",
      [](const Eigen::MatrixXd& K, const Eigen::VectorXd& pi, const std::vector<std::size_t>& starts, double eps) {
        return mixing_time_exact(to_sparse(K), pi, starts, eps);
      },
      py::arg("K"), py::arg("pi"), py::arg("starts"), py::arg("eps") = 0.25);
  m.def(
      "one_column_tv_curve",
      [](std::uint32_t n, std::uint64_t t_max, double laziness) {
        return one_column_tv_curve(one_column_lumped(n, laziness), t_max);
      },
      py::arg("n"), py::arg("t_max"), py::arg("laziness") = 0.0);

  m.def("bd_probs", [](std::uint32_t s, std::uint32_t r, std::uint32_t p) { return bd_probs(s, BDParams(r, p)); },
        py::arg("s"), py::arg("r"), py::arg("p"));
  m.def(
      "bd_hitting_time",
      [](std::uint32_t s, std::uint32_t A, std::uint32_t r, std::uint32_t p) {
        return bd_hitting_time(s, A, BDParams(r, p));
      },
      py::arg("s"), py::arg("A"), py::arg("r"), py::arg("p"));
  m.def(
      "bd_crossing_prob",
      [](std::uint32_t s, std::uint32_t A0, std::uint32_t A1, std::uint32_t r, std::uint32_t p) {
        return bd_crossing_prob(s, A0, A1, BDParams(r, p));
      },
      py::arg("s"), py::arg("A0"), py::arg("A1"), py::arg("r"), py::arg("p"));
  m.def("rate_I", &rate_I, py::arg("p"), py::arg("beta"));
  m.def("rate_J", &rate_J, py::arg("p"), py::arg("a"), py::arg("b"));
  m.def(
      "select_constants", [](std::uint32_t p, double eps) { return to_py(to_json(select_constants(p, eps))); },
      py::arg("p"), py::arg("epsilon"));

  // ---- cli ----
  m.def(
      "run_cli",
      [](std::vector<std::string> args) {
        args.insert(args.begin(), "prwalk");
        std::vector<const char*> argv;
        for (const auto& a : args) argv.push_back(a.c_str());
        std::ostringstream out, err;
        int code;
        {
          py::gil_scoped_release release;
          code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Run the command line tool in process; returns (exit_code, stdout, stderr).");
}
