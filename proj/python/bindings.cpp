#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rmcurve/curve.hpp"
#include "rmcurve/errors.hpp"
#include "rmcurve/evolution.hpp"
#include "rmcurve/mc.hpp"
#include "rmcurve/model_rh.hpp"
#include "rmcurve/special.hpp"

namespace py = pybind11;
using namespace rmcurve;

namespace {

std::vector<Fraction> to_fractions(const std::vector<std::pair<std::int64_t, std::int64_t>>& fs) {
    std::vector<Fraction> out;
    out.reserve(fs.size());
    for (auto [num, den] : fs) out.push_back(make_fraction(num, den));
    return out;
}

curve::CurveSpec make_spec(const std::vector<double>& a,
                           const std::vector<std::pair<std::int64_t, std::int64_t>>& eps) {
    return curve::validate_spec(a, to_fractions(eps));
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Spectral curve, time evolution and universality statistics of the "
              "Gaussian matrix model with external source";

    py::register_exception<DegenerateCurveError>(m, "DegenerateCurveError");
    py::register_exception<ValidationError>(m, "SpecValidationError");
    py::register_exception<NumericsError>(m, "NumericsError");

    py::class_<curve::CurveSpec>(m, "CurveSpec")
        .def_readonly("a", &curve::CurveSpec::a)
        .def_property_readonly("eps",
                               [](const curve::CurveSpec& s) {
                                   std::vector<std::pair<std::int64_t, std::int64_t>> out;
                                   for (const auto& f : s.eps)
                                       out.emplace_back(f.numerator(), f.denominator());
                                   return out;
                               })
        .def_property_readonly("k", &curve::CurveSpec::k)
        .def("__repr__", [](const curve::CurveSpec& s) {
            return "CurveSpec(k=" + std::to_string(s.k()) + ")";
        });

    py::class_<curve::SheetId>(m, "SheetId")
        .def(py::init<int, int>(), py::arg("cut"), py::arg("sub") = 0)
        .def_readonly("cut", &curve::SheetId::cut)
        .def_readonly("sub", &curve::SheetId::sub);

    py::enum_<curve::Side>(m, "Side")
        .value("ABOVE", curve::Side::Above)
        .value("BELOW", curve::Side::Below)
        .value("AUTO", curve::Side::Auto);

    py::class_<curve::BranchPointSet>(m, "BranchPointSet")
        .def_readonly("y_roots", &curve::BranchPointSet::y_roots)
        .def_readonly("y_real", &curve::BranchPointSet::y_real)
        .def_readonly("x_real", &curve::BranchPointSet::x_real)
        .def_readonly("x_pairs", &curve::BranchPointSet::x_pairs)
        .def_readonly("min_separation", &curve::BranchPointSet::min_separation)
        .def_property_readonly("l", &curve::BranchPointSet::l);

    py::class_<curve::CutStructure::Cut>(m, "Cut")
        .def_readonly("lo", &curve::CutStructure::Cut::lo)
        .def_readonly("hi", &curve::CutStructure::Cut::hi)
        .def_readonly("mass", &curve::CutStructure::Cut::mass)
        .def_readonly("sources", &curve::CutStructure::Cut::sources)
        .def_readonly("gamma_crossings", &curve::CutStructure::Cut::gamma_crossings);

    py::class_<curve::CutStructure>(m, "CutStructure")
        .def_readonly("cuts", &curve::CutStructure::cuts)
        .def_readonly("edge_constants", &curve::CutStructure::edge_constants);

    py::class_<curve::DensityProfile>(m, "DensityProfile")
        .def_readonly("grid", &curve::DensityProfile::grid)
        .def_readonly("rho", &curve::DensityProfile::rho)
        .def_readonly("total_mass", &curve::DensityProfile::total_mass)
        .def_readonly("cut_masses", &curve::DensityProfile::cut_masses);

    m.def("validate_spec", &make_spec, py::arg("a"), py::arg("eps"));
    m.def("x_of_z", &curve::x_of_z);
    m.def("branch_points", &curve::branch_points,
          py::call_guard<py::gil_scoped_release>());
    m.def("cut_structure", &curve::cut_structure,
          py::call_guard<py::gil_scoped_release>());
    m.def("xi_branch", &curve::xi_branch, py::arg("spec"), py::arg("x"), py::arg("branch"),
          py::arg("side") = curve::Side::Auto, py::call_guard<py::gil_scoped_release>());
    m.def("density", &curve::density, py::call_guard<py::gil_scoped_release>());
    m.def("density_profile", &curve::density_profile,
          py::call_guard<py::gil_scoped_release>());
    m.def("edge_constants", &curve::edge_constants);
    m.def(
        "lambda_fn",
        [](const curve::CurveSpec& spec, curve::SheetId branch, curve::Complex z,
           curve::Side side) { return curve::lambda_fn(spec, branch, z, side).value; },
        py::arg("spec"), py::arg("branch"), py::arg("z"), py::arg("side") = curve::Side::Auto,
        py::call_guard<py::gil_scoped_release>());
    m.def("h_fn", &curve::h_fn, py::call_guard<py::gil_scoped_release>());

    // evolution
    py::class_<evolution::BridgeSpec>(m, "BridgeSpec")
        .def_readonly("endpoints", &evolution::BridgeSpec::endpoints)
        .def_readonly("n", &evolution::BridgeSpec::n);
    py::enum_<evolution::ScaleConvention>(m, "ScaleConvention")
        .value("PAPER", evolution::ScaleConvention::Paper)
        .value("SQRT", evolution::ScaleConvention::Sqrt);
    m.def(
        "validate_bridge",
        [](const std::vector<double>& endpoints,
           const std::vector<std::pair<std::int64_t, std::int64_t>>& eps, std::int64_t n) {
            return evolution::validate_bridge(endpoints, to_fractions(eps), n);
        },
        py::arg("endpoints"), py::arg("fractions"), py::arg("n"));
    m.def("eigenvalues_at", &evolution::eigenvalues_at);
    m.def("spec_at", &evolution::spec_at);
    m.def(
        "critical_times",
        [](const evolution::BridgeSpec& b, double tol) {
            return evolution::critical_times(b, tol).times;
        },
        py::arg("bridge"), py::arg("tol") = 1e-9, py::call_guard<py::gil_scoped_release>());
    m.def(
        "cut_count_timeline",
        [](const evolution::BridgeSpec& b, const std::vector<double>& grid) {
            auto t = evolution::cut_count_timeline(b, grid);
            return std::make_pair(t.times, t.cut_counts);
        },
        py::call_guard<py::gil_scoped_release>());
    m.def("bridge_density", &evolution::bridge_density, py::arg("bridge"), py::arg("t"),
          py::arg("x"), py::arg("convention") = evolution::ScaleConvention::Paper,
          py::call_guard<py::gil_scoped_release>());

    // special functions and kernels
    m.def("airy", [](curve::Complex z) { return rh::airy(z); });
    m.def("y_alpha", &rh::y_alpha);
    m.def("sine_kernel", &rh::sine_kernel);
    m.def("airy_kernel", &rh::airy_kernel);

    py::class_<rh::RHVerifyReport>(m, "RHVerifyReport")
        .def_readonly("max_jump_residual", &rh::RHVerifyReport::max_jump_residual)
        .def_readonly("per_cut_residual", &rh::RHVerifyReport::per_cut_residual)
        .def_readonly("decay_slope", &rh::RHVerifyReport::decay_slope);
    m.def("verify_model_rh", &rh::verify_model_rh, py::arg("spec"),
          py::arg("points_per_cut") = 50, py::call_guard<py::gil_scoped_release>());

    // Monte Carlo
    py::class_<mc::EnsembleSample>(m, "EnsembleSample")
        .def_readonly("n", &mc::EnsembleSample::n)
        .def_readonly("seed", &mc::EnsembleSample::seed)
        .def_readonly("draws", &mc::EnsembleSample::draws)
        .def_readonly("eigenvalues", &mc::EnsembleSample::eigenvalues);
    py::class_<mc::KernelStats>(m, "KernelStats")
        .def_readonly("spacing_count", &mc::KernelStats::spacing_count)
        .def_readonly("spacing_mean", &mc::KernelStats::spacing_mean)
        .def_readonly("ks_bulk", &mc::KernelStats::ks_bulk)
        .def_readonly("two_point", &mc::KernelStats::two_point)
        .def_readonly("edge_mean", &mc::KernelStats::edge_mean)
        .def_readonly("edge_var", &mc::KernelStats::edge_var);
    m.def("sample_matrix", &mc::sample_matrix, py::arg("spec"), py::arg("n"), py::arg("seed"),
          py::arg("draws"), py::arg("max_n") = 2048,
          py::call_guard<py::gil_scoped_release>());
    m.def("unfold", &mc::unfold, py::call_guard<py::gil_scoped_release>());
    m.def("bulk_statistics", &mc::bulk_statistics, py::arg("spacings"),
          py::arg("positions") = std::vector<std::vector<double>>{},
          py::call_guard<py::gil_scoped_release>());
    m.def("edge_statistics", &mc::edge_statistics, py::call_guard<py::gil_scoped_release>());
    m.def(
        "ks_distance",
        [](const std::vector<double>& sorted, const std::function<double(double)>& cdf) {
            return mc::ks_distance(sorted, cdf);
        });
    m.def("wigner_surmise_cdf", &mc::wigner_surmise_cdf);

    m.attr("__version__") = "0.1.0";
}
