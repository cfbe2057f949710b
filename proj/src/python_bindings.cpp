#include "bidiff/io.hpp"
#include "bidiff/projstruct.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace bidiff;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Numerical kernels for intrinsic second-kind bidifferentials: curves, periods, "
              "corrected kernels, projective structures, and moduli scans.";

    py::register_exception<Error>(m, "BidiffError");

    py::enum_<CurveKind>(m, "CurveKind")
        .value("Elliptic", CurveKind::Elliptic)
        .value("Hyperelliptic", CurveKind::Hyperelliptic);
    py::enum_<ChartKind>(m, "ChartKind")
        .value("FlatZ", ChartKind::FlatZ)
        .value("AffineX", ChartKind::AffineX)
        .value("InverseX", ChartKind::InverseX);
    py::enum_<KernelStage>(m, "KernelStage")
        .value("Raw", KernelStage::Raw)
        .value("ANormalized", KernelStage::ANormalized)
        .value("HodgeCorrected", KernelStage::HodgeCorrected);

    py::class_<Chart>(m, "Chart")
        .def(py::init<>())
        .def(py::init([](ChartKind k, int sheet) { return Chart{k, sheet}; }), py::arg("kind"),
             py::arg("sheet") = +1)
        .def_readwrite("kind", &Chart::kind)
        .def_readwrite("sheet", &Chart::sheet);

    py::class_<SurfacePoint>(m, "SurfacePoint")
        .def(py::init([](Cplx x, Cplx y) { return SurfacePoint{x, y}; }), py::arg("x"),
             py::arg("y") = Cplx(0))
        .def_readwrite("x", &SurfacePoint::x)
        .def_readwrite("y", &SurfacePoint::y);

    py::class_<Curve>(m, "Curve")
        .def_readonly("kind", &Curve::kind)
        .def_readonly("genus", &Curve::genus)
        .def_readonly("tau", &Curve::tau)
        .def_readonly("coeffs", &Curve::coeffs)
        .def_readonly("roots", &Curve::roots)
        .def_readonly("min_gap", &Curve::min_gap)
        .def_readonly("scale", &Curve::scale)
        .def_readonly("x_ref", &Curve::x_ref)
        .def("__repr__", [](const Curve& c) {
            std::ostringstream o;
            if (c.kind == CurveKind::Elliptic)
                o << "<Curve elliptic tau=(" << c.tau.real() << "," << c.tau.imag() << ")>";
            else
                o << "<Curve hyperelliptic genus=" << c.genus << ">";
            return o.str();
        });

    py::class_<num::AdaptiveOptions>(m, "AdaptiveOptions")
        .def(py::init<>())
        .def_readwrite("rel_tol", &num::AdaptiveOptions::rel_tol)
        .def_readwrite("start_nodes", &num::AdaptiveOptions::start_nodes)
        .def_readwrite("max_nodes", &num::AdaptiveOptions::max_nodes);

    py::class_<PeriodData>(m, "PeriodData")
        .def_readonly("pi_a", &PeriodData::pi_a)
        .def_readonly("pi_b", &PeriodData::pi_b)
        .def_readonly("tau", &PeriodData::tau)
        .def_readonly("normalizer", &PeriodData::normalizer);

    py::class_<PeriodVector>(m, "PeriodVector")
        .def_readonly("a", &PeriodVector::a)
        .def_readonly("b", &PeriodVector::b);

    py::class_<Kernel>(m, "Kernel")
        .def_readonly("curve", &Kernel::curve)
        .def_readonly("stage", &Kernel::stage)
        .def_readonly("correction", &Kernel::correction);

    py::class_<DiagonalJet>(m, "DiagonalJet")
        .def_readonly("biresidue", &DiagonalJet::biresidue)
        .def_readonly("residue_term", &DiagonalJet::residue_term)
        .def_readonly("finite_part", &DiagonalJet::finite_part)
        .def_readonly("err_estimate", &DiagonalJet::err_estimate);

    py::class_<ConnectionSample>(m, "ConnectionSample")
        .def_readonly("chart", &ConnectionSample::chart)
        .def_readonly("points", &ConnectionSample::points)
        .def_readonly("values", &ConnectionSample::values)
        .def_readonly("errors", &ConnectionSample::errors);

    py::class_<QuadraticDifferentialSample>(m, "QuadraticDifferentialSample")
        .def_readonly("chart", &QuadraticDifferentialSample::chart)
        .def_readonly("points", &QuadraticDifferentialSample::points)
        .def_readonly("values", &QuadraticDifferentialSample::values);

    py::class_<ModuliSample>(m, "ModuliSample")
        .def_readonly("tau", &ModuliSample::tau)
        .def_readonly("c", &ModuliSample::c)
        .def_readonly("dbar_c", &ModuliSample::dbar_c)
        .def_readonly("kappa", &ModuliSample::kappa)
        .def_readonly("richardson_residual", &ModuliSample::richardson_residual);

    py::class_<PerturbationPath>(m, "PerturbationPath")
        .def(py::init<>())
        .def_readwrite("coeff_index", &PerturbationPath::coeff_index)
        .def_readwrite("direction", &PerturbationPath::direction)
        .def_readwrite("magnitude", &PerturbationPath::magnitude)
        .def_readwrite("circle", &PerturbationPath::circle);

    py::class_<TracePoint>(m, "TracePoint")
        .def_readonly("eps", &TracePoint::eps)
        .def_readonly("connection", &TracePoint::connection);

    py::class_<Genus2Trace>(m, "Genus2Trace")
        .def_readonly("samples", &Genus2Trace::samples)
        .def_readonly("dbar", &Genus2Trace::dbar)
        .def_readonly("richardson_residual", &Genus2Trace::richardson_residual)
        .def_readonly("inconclusive", &Genus2Trace::inconclusive);

    py::class_<Modulus>(m, "Modulus")
        .def(py::init<Cplx>(), py::arg("tau"))
        .def_readonly("tau", &Modulus::tau);

    py::class_<QuasiPeriods>(m, "QuasiPeriods")
        .def_readonly("eta1", &QuasiPeriods::eta1)
        .def_readonly("eta2", &QuasiPeriods::eta2);

    py::class_<KernelDiagnostics>(m, "KernelDiagnostics")
        .def_readonly("biresidue", &KernelDiagnostics::biresidue)
        .def_readonly("residue_term", &KernelDiagnostics::residue_term)
        .def_readonly("obstruction_norms", &KernelDiagnostics::obstruction_norms)
        .def_readonly("cup_sign", &KernelDiagnostics::cup_sign)
        .def_readonly("cup_deviation", &KernelDiagnostics::cup_deviation);

    // curves
    m.def("make_elliptic", &make_elliptic, py::arg("tau"));
    m.def("make_hyperelliptic", &make_hyperelliptic, py::arg("coeffs"));
    m.def("y_plus", &y_plus, py::arg("curve"), py::arg("x"));
    m.def("point_on_sheet", &point_on_sheet, py::arg("curve"), py::arg("x"), py::arg("sheet"));

    // periods
    m.def(
        "period_data",
        [](const Curve& c, const num::AdaptiveOptions& opt) {
            return period_matrices(c, holomorphic_basis(c), opt);
        },
        py::arg("curve"), py::arg("options") = num::AdaptiveOptions{},
        "Period matrices of the holomorphic basis over the canonical cycle basis.");
    m.def("cup_product", &cup_product, py::arg("w1"), py::arg("w2"));

    // kernels
    m.def("base_kernel", &base_kernel, py::arg("curve"));
    m.def("a_normalize", &a_normalize, py::arg("kernel"), py::arg("period_data"));
    m.def("hodge_correct", &hodge_correct, py::arg("bergman"), py::arg("period_data"));
    m.def("perturb", &perturb, py::arg("kernel"), py::arg("symmetric_matrix"));
    m.def("eval_kernel", &eval_kernel, py::arg("kernel"), py::arg("x"), py::arg("y"),
          py::arg("chart") = Chart{});
    m.def("slice_periods", &slice_periods, py::arg("kernel"), py::arg("x"), py::arg("period_data"),
          py::arg("options") = num::AdaptiveOptions{});
    m.def(
        "obstruction",
        [](const PeriodVector& pv, const PeriodData& pd) { return obstruction(pv, pd).O; },
        py::arg("periods"), py::arg("period_data"),
        "O = B - conj(tau)^T A of a slice's periods, as a numpy vector.");
    m.def("obstruction_response", &obstruction_response, py::arg("kernel"), py::arg("period_data"),
          py::arg("probes"));
    m.def("kernel_diagnostics", &kernel_diagnostics, py::arg("kernel"), py::arg("period_data"),
          py::arg("probes") = 5, py::arg("options") = num::AdaptiveOptions{});

    // projective structures
    m.def("diagonal_jet", &diagonal_jet, py::arg("kernel"), py::arg("chart"), py::arg("x"));
    m.def("schwarzian", &schwarzian, py::arg("f"), py::arg("w"), py::arg("r") = 0.4);
    m.def("expansion_identity_check", &expansion_identity_check, py::arg("f"), py::arg("x"),
          py::arg("delta") = 0.1);
    m.def("connection_from_kernel", &connection_from_kernel, py::arg("kernel"), py::arg("chart"),
          py::arg("points"));
    m.def("uniformization_genus1", &uniformization_genus1, py::arg("modulus"), py::arg("points"));
    m.def("connection_difference", &connection_difference, py::arg("s1"), py::arg("s2"));

    // special functions
    m.def("theta1", &theta1, py::arg("z"), py::arg("modulus"));
    m.def("weierstrass_p", &weierstrass_p, py::arg("z"), py::arg("modulus"));
    m.def("weierstrass_zeta", &weierstrass_zeta, py::arg("z"), py::arg("modulus"));
    m.def("quasi_periods", &quasi_periods, py::arg("modulus"));
    m.def("lattice_sum_oracle", &lattice_sum_oracle, py::arg("z"), py::arg("modulus"),
          py::arg("shells"));

    // moduli
    m.def("eta_coefficient_genus1", &eta_coefficient_genus1, py::arg("tau"));
    m.def("dbar_scan", &dbar_scan, py::arg("grid"), py::arg("h"));
    m.def("genus2_section_trace", &genus2_section_trace, py::arg("curve"), py::arg("path"),
          py::arg("steps"));
    m.def(
        "siegel_density", [](Cplx tau) { return SiegelReference{}.density(tau); }, py::arg("tau"),
        "Density (Im tau)^-2 of the invariant reference form on the upper half-plane.");

    // serialization
    m.def(
        "curve_from_json",
        [](const std::string& text) { return curve_from_json(nlohmann::json::parse(text)); },
        py::arg("text"));
    m.def(
        "curve_to_json", [](const Curve& c) { return curve_to_json(c).dump(2); }, py::arg("curve"));
    m.def(
        "kernel_to_json",
        [](const Kernel& k, const KernelDiagnostics& d) { return kernel_to_json(k, d).dump(2); },
        py::arg("kernel"), py::arg("diagnostics"));
    m.def("moduli_csv", &moduli_csv, py::arg("samples"));
    m.def("trace_csv", &trace_csv, py::arg("trace"));
    m.def("connection_csv", &connection_csv, py::arg("sample"));
}
