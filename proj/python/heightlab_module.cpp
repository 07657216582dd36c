#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "heightlab/bundle.hpp"
#include "heightlab/density.hpp"
#include "heightlab/enumerate.hpp"
#include "heightlab/fano.hpp"
#include "heightlab/growth.hpp"
#include "heightlab/hyperelliptic.hpp"
#include "heightlab/variety.hpp"

#include <sstream>

namespace py = pybind11;
using namespace heightlab;

namespace {

Rational rat(const std::string& s) { return parse_rational(s); }

std::vector<Rational> rat_grid(const std::vector<std::string>& g) {
    std::vector<Rational> out;
    out.reserve(g.size());
    for (const auto& s : g) out.push_back(rat(s));
    return out;
}

CompleteIntersection variety_from(const std::string& builtin, const std::string& text) {
    if (!text.empty()) {
        std::istringstream in(text);
        return read_variety(in);
    }
    return builtin_variety(builtin);
}

} // namespace

PYBIND11_MODULE(_heightlab, m) {
    m.doc() = "rational point counts, growth fits and local densities on Fano varieties";

    py::register_exception<Error>(m, "HeightlabError");

    py::class_<ProjPoint>(m, "ProjPoint")
        .def(py::init<std::vector<i64>>())
        .def_readonly("coords", &ProjPoint::coords)
        .def("__repr__", &ProjPoint::str)
        .def("__eq__", [](const ProjPoint& a, const ProjPoint& b) { return a == b; });

    m.def("normalize", [](const std::vector<i64>& v) { return normalize(v); },
          "unique primitive sign-normalized representative");

    py::class_<CompleteIntersection>(m, "Variety")
        .def_property_readonly("n", &CompleteIntersection::n)
        .def_property_readonly("num_forms", &CompleteIntersection::num_forms)
        .def("anticanonical_exponent", &CompleteIntersection::anticanonical_exponent)
        .def("contains", &CompleteIntersection::contains)
        .def("__repr__", &CompleteIntersection::str);

    m.def("variety", &variety_from, py::arg("builtin") = "", py::arg("text") = "",
          "resolve a builtin name (pn:<n>, fermat:<n>:<d>, ct-quadrics) or parse a variety file");

    m.def("evaluate_form",
          [](const CompleteIntersection& X, int index, const std::vector<i64>& v) {
              return X.forms().at(index).evaluate(v).str();
          },
          "exact value of the i-th defining form at an integer vector, as a decimal string");

    m.def("height",
          [](const std::string& lambda, int e, const ProjPoint& p) {
              return to_string(height(HeightSpec(e, rat(lambda)), p));
          },
          "exact weighted height as a rational string");

    m.def("count",
          [](const CompleteIntersection& X, const std::string& lambda, const std::string& B,
             const std::string& strategy, int workers) {
              HeightSpec h = X.num_forms() ? X.anticanonical_height(rat(lambda))
                                           : HeightSpec(1, rat(lambda));
              EnumStrategy st = EnumStrategy::parse(strategy);
              if (workers > 1) st.workers = workers;
              return count(X, h, rat(B), st);
          },
          py::arg("variety"), py::arg("lambda_") = "1", py::arg("B") = "100",
          py::arg("strategy") = "naive", py::arg("workers") = 1);

    m.def("count_series",
          [](const CompleteIntersection& X, const std::string& lambda,
             const std::vector<std::string>& grid, const std::string& strategy) {
              HeightSpec h = X.num_forms() ? X.anticanonical_height(rat(lambda))
                                           : HeightSpec(1, rat(lambda));
              auto s = count_series(X, h, rat_grid(grid), EnumStrategy::parse(strategy));
              return s.counts;
          },
          py::arg("variety"), py::arg("lambda_"), py::arg("grid"),
          py::arg("strategy") = "naive");

    m.def("enumerate_points",
          [](const CompleteIntersection& X, const std::string& lambda, const std::string& B,
             const std::string& strategy) {
              HeightSpec h = X.num_forms() ? X.anticanonical_height(rat(lambda))
                                           : HeightSpec(1, rat(lambda));
              std::vector<std::vector<i64>> out;
              for (auto& p : enumerate_points(X, h, rat(B), EnumStrategy::parse(strategy)))
                  out.push_back(std::move(p.coords));
              return out;
          },
          py::arg("variety"), py::arg("lambda_") = "1", py::arg("B") = "100",
          py::arg("strategy") = "naive");

    m.def("fit_growth",
          [](const std::vector<std::string>& grid, const std::vector<u64>& counts, int log_power,
             int drop_low) {
              CountSeries s;
              s.grid = rat_grid(grid);
              s.counts = counts;
              auto f = fit_growth(s, log_power, drop_low);
              return py::dict(py::arg("exponent") = f.exponent, py::arg("constant") = f.constant,
                              py::arg("residual_rms") = f.residual_rms);
          },
          py::arg("grid"), py::arg("counts"), py::arg("log_power") = 0, py::arg("drop_low") = 2);

    m.def("schanuel_reference", &schanuel_reference, py::arg("n"), py::arg("B"));

    m.def("archimedean_density",
          [](const CompleteIntersection& X, const std::string& lambda, double epsilon,
             u64 samples, u64 seed, int workers) {
              auto e = archimedean_density(X, rat(lambda), epsilon, samples, seed, workers);
              return py::dict(py::arg("value") = e.value, py::arg("std_error") = e.std_error,
                              py::arg("samples") = e.samples, py::arg("epsilon") = e.epsilon,
                              py::arg("seed") = e.seed);
          },
          py::arg("variety"), py::arg("lambda_") = "1", py::arg("epsilon") = 0.0,
          py::arg("samples") = 100000, py::arg("seed") = 1, py::arg("workers") = 1);

    m.def("padic_density",
          [](const CompleteIntersection& X, i64 p, int k) {
              return to_string(padic_density(X, p, k).value);
          },
          py::arg("variety"), py::arg("p"), py::arg("k") = 1,
          "exact local density as a rational string");

    m.def("expected_dimension",
          [](int n, const std::vector<int>& degrees, int r) {
              return expected_dimension(n, degrees, r).str();
          });
    m.def("binom_inequality", [](int d, int r) {
        auto b = binom_inequality(d, r);
        return py::make_tuple(b.lhs.str(), b.rhs.str(), b.equal);
    });
    m.def("birch_bound", &birch_bound, py::arg("n"), py::arg("d"), py::arg("sigma"));

    m.def("curve_certificate",
          [](const std::vector<i64>& f, i64 p) {
              HyperellipticCurve C(f.empty() ? HyperellipticCurve::ct_quadrics_curve().f : f);
              bool good = verify_good_reduction(C, p);
              py::dict out;
              out["good_reduction"] = good;
              if (good) {
                  u64 N1 = hyperelliptic_count(C, p, 1);
                  u64 N2 = hyperelliptic_count(C, p, 2);
                  auto fc = frobenius_charpoly(N1, N2, p);
                  auto c = fc.coefficients();
                  out["N1"] = N1;
                  out["N2"] = N2;
                  out["a1"] = fc.a1;
                  out["a2"] = fc.a2;
                  out["irreducible"] = is_irreducible_quartic({c[0], c[1], c[2], c[3]});
              }
              return out;
          },
          py::arg("f") = std::vector<i64>{}, py::arg("p") = 3);

    py::enum_<FiberTag>(m, "FiberTag")
        .value("SplitCertified", FiberTag::SplitCertified)
        .value("NotSplit", FiberTag::NotSplit)
        .value("Undetermined", FiberTag::Undetermined);

    m.def("fiber_class",
          [](const std::vector<i64>& x, i64 bound) {
              auto fc = fiber_class(normalize(x), bound);
              return py::make_tuple(fc.tag, fc.witness, fc.degenerate);
          },
          py::arg("x"), py::arg("point_search_bound") = 50);

    m.def("thin_set_member", [](const std::vector<i64>& x, const std::vector<i64>& y) {
        return thin_set_member({normalize(x), normalize(y)});
    });
    m.def("accumulating_locus_member", [](const std::vector<i64>& x, const std::vector<i64>& y) {
        return accumulating_locus_member({normalize(x), normalize(y)});
    });

    m.def("bundle_count",
          [](const std::vector<std::string>& grid, bool exclude_accumulating, i64 bound,
             int workers) {
              auto rep = bundle_count(rat_grid(grid), exclude_accumulating, bound, workers);
              py::list rows;
              for (const auto& r : rep.rows)
                  rows.append(py::dict(
                      py::arg("B") = to_string(r.B), py::arg("total") = r.total,
                      py::arg("on_split_certified") = r.on_split_certified,
                      py::arg("on_not_split") = r.on_not_split,
                      py::arg("on_undetermined") = r.on_undetermined,
                      py::arg("on_accumulating") = r.on_accumulating,
                      py::arg("thin_members") = r.thin_members));
              return rows;
          },
          py::arg("grid"), py::arg("exclude_accumulating") = false,
          py::arg("point_search_bound") = 50, py::arg("workers") = 1);

#ifdef VERSION_INFO
#define STRINGIFY(x) #x
#define MACRO_STRINGIFY(x) STRINGIFY(x)
    m.attr("__version__") = MACRO_STRINGIFY(VERSION_INFO);
#else
    m.attr("__version__") = "dev";
#endif
}
