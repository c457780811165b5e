#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "clonesim/cloners.hpp"
#include "clonesim/compensation.hpp"
#include "clonesim/counting.hpp"
#include "clonesim/imperfections.hpp"

namespace py = pybind11;
using namespace clonesim;

namespace {

py::dict report_dict(const CloneReport& r) {
    py::dict d;
    d["theta"] = r.input.theta();
    d["phi"] = r.input.phi();
    d["F1"] = r.F1;
    d["F2"] = r.F2;
    d["P_succ"] = r.P_succ;
    d["empty"] = r.empty;
    d["rho1"] = Eigen::Matrix2cd(r.rho1.entries());
    d["rho2"] = Eigen::Matrix2cd(r.rho2.entries());
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Phase-covariant cloner simulator";

    py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);

    py::class_<Qubit>(m, "Qubit")
        .def(py::init<double, double>(), py::arg("theta"), py::arg("phi"))
        .def_static("equatorial", &Qubit::equatorial, py::arg("phi"))
        .def_property_readonly("theta", &Qubit::theta)
        .def_property_readonly("phi", &Qubit::phi)
        .def("ket", &Qubit::ket)
        .def("__repr__", [](const Qubit& q) {
            return "Qubit(theta=" + std::to_string(q.theta()) + ", phi=" + std::to_string(q.phi()) + ")";
        });

    py::class_<SpecialBsParams>(m, "SpecialBsParams")
        .def(py::init<>())
        .def_readwrite("R0", &SpecialBsParams::R0)
        .def_readwrite("R1", &SpecialBsParams::R1)
        .def_readwrite("sign", &SpecialBsParams::sign)
        .def_readwrite("plate", &SpecialBsParams::plate);
    py::class_<MachZehnderParams>(m, "MachZehnderParams")
        .def(py::init<>())
        .def_readwrite("theta_V", &MachZehnderParams::theta_V)
        .def_readwrite("theta_H", &MachZehnderParams::theta_H)
        .def_readwrite("residual_phase_offsets", &MachZehnderParams::residual_phase_offsets);
    py::class_<HybridParams>(m, "HybridParams")
        .def(py::init<>())
        .def_readwrite("r", &HybridParams::r)
        .def_readwrite("t", &HybridParams::t)
        .def_readwrite("r0", &HybridParams::r0)
        .def_readwrite("t0", &HybridParams::t0)
        .def_readwrite("r1", &HybridParams::r1)
        .def_readwrite("t1", &HybridParams::t1)
        .def_readwrite("eta0", &HybridParams::eta0)
        .def_readwrite("eta1", &HybridParams::eta1)
        .def_readwrite("nu0", &HybridParams::nu0)
        .def_readwrite("nu1", &HybridParams::nu1);
    py::class_<FiberParams>(m, "FiberParams")
        .def(py::init<>())
        .def_readwrite("R_vrc0", &FiberParams::R_vrc0)
        .def_readwrite("R_vrc1", &FiberParams::R_vrc1)
        .def_readwrite("sign", &FiberParams::sign)
        .def_readwrite("analysis_phases", &FiberParams::analysis_phases)
        .def_readwrite("detector_R", &FiberParams::detector_R)
        .def_readwrite("phase_drift", &FiberParams::phase_drift);

    m.def("ideal_special_bs", &ideal_special_bs);
    m.def("ideal_mach_zehnder", &ideal_mach_zehnder);
    m.def("ideal_hybrid", &ideal_hybrid);
    m.def("universal_hybrid", &universal_hybrid);
    m.def("ideal_fiber", &ideal_fiber);

    m.def("variant_name", [](const ClonerParams& p) { return std::string(variant_name(p)); });
    m.def(
        "run_model", [](const ClonerParams& p, const Qubit& q) { return report_dict(run_model(p, q)); },
        py::arg("model"), py::arg("input"));
    m.def(
        "run_circuit",
        [](const ClonerParams& p, const Qubit& q, double M) { return report_dict(run_circuit(p, q, M)); },
        py::arg("model"), py::arg("input"), py::arg("overlap_M") = 1.0);
    m.def("closed_form_amplitudes", &closed_form_amplitudes, py::arg("model"), py::arg("input"));

    m.def("theoretical_limits", [] {
        auto l = theoretical_limits();
        return py::dict(py::arg("F_pc") = l.F_pc, py::arg("F_univ") = l.F_univ, py::arg("F_sc") = l.F_sc);
    });
    m.def("solve_ideal_reflectance", &solve_ideal_reflectance);
    m.def("hom_visibility", &hom_visibility, py::arg("overlap_M"));
    m.def("hom_coincidence_probability", &hom_coincidence_probability, py::arg("overlap_M"));

    m.def(
        "simulate_counts",
        [](const ClonerParams& model, const Qubit& q, std::uint64_t n_pairs, std::array<double, 4> eta,
           std::uint64_t seed, double overlap_M, unsigned workers) {
            NoiseConfig noise;
            noise.overlap_M = overlap_M;
            auto r = simulate_counts(model, noise, q, n_pairs, {eta[0], eta[1], eta[2], eta[3]}, seed, workers);
            return py::dict(py::arg("C_pp") = r.c_pp, py::arg("C_pm") = r.c_pm, py::arg("C_mp") = r.c_mp,
                            py::arg("C_mm") = r.c_mm, py::arg("n_pairs") = r.n_pairs);
        },
        py::arg("model"), py::arg("input"), py::arg("n_pairs"),
        py::arg("detectors") = std::array<double, 4>{1.0, 1.0, 1.0, 1.0}, py::arg("seed") = 0,
        py::arg("overlap_M") = 1.0, py::arg("workers") = 1);
}
