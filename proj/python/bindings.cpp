#include <pybind11/pybind11.h>
#include <pybind11/operators.h>
#include <pybind11/stl.h>

#include "ncfree/conjugate.hpp"
#include "ncfree/derivations.hpp"
#include "ncfree/errors.hpp"
#include "ncfree/randmat.hpp"
#include "ncfree/reduction.hpp"
#include "ncfree/serialize.hpp"
#include "ncfree/version.hpp"

namespace py = pybind11;
using namespace ncfree;

namespace {

// Scalars cross the boundary as strings ("1/2", "1/3-2 i") or ints.
Scalar to_scalar(const py::handle& h) {
  if (py::isinstance<Scalar>(h)) return h.cast<Scalar>();
  if (py::isinstance<py::int_>(h)) return Scalar::parse(py::str(h).cast<std::string>());
  if (py::isinstance<py::str>(h)) return Scalar::parse(h.cast<std::string>());
  throw py::type_error("expected an int, a rational string or a Scalar");
}

py::object fraction(const mpq_class& q) {
  return py::module_::import("fractions").attr("Fraction")(q.get_str());
}

py::object to_python(const io::Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

Word to_word(const std::vector<int>& letters) { return Word(std::vector<Word::Letter>(letters.begin(), letters.end())); }

std::vector<int> from_word(const Word& w) { return std::vector<int>(w.begin(), w.end()); }

Side to_side(const std::string& s) {
  if (s == "left") return Side::Left;
  if (s == "right") return Side::Right;
  throw py::value_error("side must be 'left' or 'right'");
}

}  // namespace

PYBIND11_MODULE(_ncfree, m) {
  m.doc() = "Exact noncommutative polynomials, free difference quotients and conjugate variables";
  m.attr("__version__") = kVersion;

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<GeneratorMismatch>(m, "GeneratorMismatch", base.ptr());
  py::register_exception<DegreeBoundExceeded>(m, "DegreeBoundExceeded", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<NotPositive>(m, "NotPositive", base.ptr());

  py::class_<Scalar>(m, "Scalar")
      .def(py::init([](const py::object& v) { return to_scalar(v); }))
      .def_property_readonly("real", [](const Scalar& s) { return fraction(s.re()); })
      .def_property_readonly("imag", [](const Scalar& s) { return fraction(s.im()); })
      .def("__complex__", [](const Scalar& s) { return std::complex<double>(s.re().get_d(), s.im().get_d()); })
      .def("__str__", &Scalar::str)
      .def("__repr__", [](const Scalar& s) { return "Scalar('" + s.str() + "')"; })
      .def("__eq__", [](const Scalar& a, const py::object& b) { return a == to_scalar(b); });

  py::class_<NcPoly>(m, "NcPoly")
      .def(py::init([](const std::string& text, int n) { return NcPoly::parse(text, n); }), py::arg("text"),
           py::arg("n"))
      .def_static("constant", [](int n, const py::object& c) { return NcPoly::constant(n, to_scalar(c)); })
      .def_static("generator", &NcPoly::generator)
      .def_static(
          "monomial",
          [](int n, const std::vector<int>& w, const py::object& c) { return NcPoly::monomial(n, to_word(w), to_scalar(c)); },
          py::arg("n"), py::arg("word"), py::arg("coeff") = 1)
      .def_property_readonly("n", &NcPoly::num_generators)
      .def_property_readonly("degree", [](const NcPoly& p) -> py::object {
        if (p.is_zero()) return py::none();
        return py::int_(total_degree(p));
      })
      .def("terms",
           [](const NcPoly& p) {
             py::dict out;
             for (const auto& [w, c] : p.terms()) out[py::tuple(py::cast(from_word(w)))] = c;
             return out;
           })
      .def("coeff", [](const NcPoly& p, const std::vector<int>& w) { return p.coeff(to_word(w)); })
      .def("is_zero", &NcPoly::is_zero)
      .def("is_self_adjoint", &NcPoly::is_self_adjoint)
      .def("star", [](const NcPoly& p) { return star(p); })
      .def("leading_part", [](const NcPoly& p) { return leading_part(p); })
      .def(py::self + py::self)
      .def(py::self - py::self)
      .def(py::self * py::self)
      .def(-py::self)
      .def(py::self == py::self)
      .def("__mul__", [](const NcPoly& p, const py::object& c) { return p * to_scalar(c); }, py::is_operator())
      .def("__rmul__", [](const NcPoly& p, const py::object& c) { return to_scalar(c) * p; }, py::is_operator())
      .def("__pow__", [](const NcPoly& p, int k) { return power(p, k); })
      .def("__str__", &NcPoly::str)
      .def("__repr__", [](const NcPoly& p) { return "NcPoly('" + p.str() + "', " + std::to_string(p.num_generators()) + ")"; });

  py::class_<TensorPoly2>(m, "TensorPoly")
      .def(py::init([](const std::string& text, int n) { return TensorPoly2::parse(text, n); }), py::arg("text"),
           py::arg("n"))
      .def_static("simple", [](const NcPoly& a, const NcPoly& b) { return TensorPoly2::simple({a, b}); })
      .def_property_readonly("n", &TensorPoly2::num_generators)
      .def("terms",
           [](const TensorPoly2& s) {
             py::dict out;
             for (const auto& [k, c] : s.terms())
               out[py::make_tuple(py::tuple(py::cast(from_word(k[0]))), py::tuple(py::cast(from_word(k[1]))))] = c;
             return out;
           })
      .def("is_zero", &TensorPoly2::is_zero)
      .def(py::self + py::self)
      .def(py::self - py::self)
      .def(py::self == py::self)
      .def("__mul__", [](const TensorPoly2& s, const py::object& c) { return s * to_scalar(c); }, py::is_operator())
      .def("__str__", &TensorPoly2::str)
      .def("__repr__", [](const TensorPoly2& s) { return "TensorPoly('" + s.str() + "')"; });

  m.def("d", &d, py::arg("j"), py::arg("p"), "Free difference quotient d_j P");
  m.def("sharp", &sharp);
  m.def("flip", &flip);
  m.def("tensor_star", &tensor_star);
  m.def("bimodule_mul", &bimodule_mul, py::arg("left"), py::arg("s"), py::arg("right"));
  m.def("collapse", &collapse, py::arg("eta"), py::arg("s"));

  py::class_<DistributionSpec>(m, "DistributionSpec")
      .def_static(
          "semicircular",
          [](const std::vector<py::object>& variances, int bound) {
            std::vector<mpq_class> v;
            for (const auto& x : variances) v.push_back(to_scalar(x).re());
            return DistributionSpec::semicircular(std::move(v), bound);
          },
          py::arg("variances"), py::arg("degree_bound") = 12)
      .def_static(
          "free_family",
          [](const std::vector<std::vector<py::object>>& moments, int bound) {
            std::vector<std::vector<mpq_class>> mm;
            for (const auto& row : moments) {
              mm.emplace_back();
              for (const auto& x : row) mm.back().push_back(to_scalar(x).re());
            }
            return DistributionSpec::free_family(std::move(mm), bound);
          },
          py::arg("moments"), py::arg("degree_bound") = 12)
      .def_static("from_json", [](const std::string& text) { return io::spec_from_json(io::Json::parse(text)); })
      .def("to_json", [](const DistributionSpec& s) { return io::spec_to_json(s).dump(); })
      .def_readonly("n", &DistributionSpec::n);

  py::class_<TraceFunctional>(m, "TraceFunctional")
      .def(py::init<DistributionSpec>())
      .def_property_readonly("n", &TraceFunctional::num_generators)
      .def_property_readonly("degree_bound", &TraceFunctional::degree_bound)
      .def("moment", [](const TraceFunctional& t, const std::vector<int>& w) { return t.moment(to_word(w)); })
      .def("__call__", [](const TraceFunctional& t, const NcPoly& p) { return trace_poly(t, p); })
      .def("trace", [](const TraceFunctional& t, const NcPoly& p) { return trace_poly(t, p); })
      .def("trace_tensor", [](const TraceFunctional& t, const TensorPoly2& s) { return trace_tensor(t, s); })
      .def("partial_trace",
           [](const TraceFunctional& t, const TensorPoly2& s, const std::string& side) {
             return partial_trace(t, s, to_side(side));
           },
           py::arg("s"), py::arg("contracted"))
      .def("inner", [](const TraceFunctional& t, const NcPoly& p, const NcPoly& q) { return inner(t, p, q); })
      .def("norm2", [](const TraceFunctional& t, const NcPoly& p) { return norm2(t, p); });

  m.def("free_cumulants", [](const std::vector<py::object>& moments) {
    std::vector<mpq_class> mm;
    for (const auto& x : moments) mm.push_back(to_scalar(x).re());
    py::list out;
    for (const auto& k : free_cumulants(mm)) out.append(fraction(k));
    return out;
  });

  py::class_<ConjugateCandidate>(m, "ConjugateCandidate")
      .def(py::init<std::vector<NcPoly>, TraceFunctional>(), py::arg("xi"), py::arg("trace"))
      .def_static("semicircular", &ConjugateCandidate::semicircular)
      .def_readonly("xi", &ConjugateCandidate::xi);

  m.def(
      "check_conjugate",
      [](const ConjugateCandidate& c, int D) { return to_python(io::report_to_json(check_conjugate(c, D))); },
      py::arg("candidate"), py::arg("degree"), "Exact check of the conjugate relations on all words up to a length");
  m.def("dstar", &dstar, py::arg("candidate"), py::arg("j"), py::arg("y"));
  m.def("check_duality", &check_duality, py::arg("trace"), py::arg("p1"), py::arg("p2"), py::arg("i"));
  m.def("delta", &delta, py::arg("trace"), py::arg("j"), py::arg("p"));
  m.def(
      "extract_leading_coeff",
      [](const TraceFunctional& t, const NcPoly& p, const std::vector<int>& w) {
        return extract_leading_coeff(t, p, to_word(w));
      },
      py::arg("trace"), py::arg("p"), py::arg("word"));
  m.def("relation_kernel", &relation_kernel, py::arg("trace"), py::arg("degree"));

  m.def(
      "spectrum",
      [](const NcPoly& p, const std::string& ensemble_json, std::size_t bins, bool with_eigenvalues) {
        const auto cfg = io::ensemble_from_json(io::Json{{"ensemble", io::Json::parse(ensemble_json)}});
        return to_python(io::spectral_to_json(randmat::spectrum(p, *cfg, bins), with_eigenvalues));
      },
      py::arg("p"), py::arg("ensemble"), py::arg("bins") = 80, py::arg("with_eigenvalues") = false,
      "Pooled eigenvalue statistics of p evaluated on sampled matrices; `ensemble` is a JSON object");
}
