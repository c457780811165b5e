#include "clonesim/cloners.hpp"

#include <cmath>
#include <limits>

namespace clonesim {

namespace {

constexpr double kPi = Qubit::kPi;
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

struct SplitterAmplitudes {
    double r0, t0, r1, t1;
};

void require_unit_interval(double v, const char* field) {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw ParameterError(field, "must lie in [0, 1], got " + std::to_string(v));
    }
}

void require_amplitude(double v, const char* field) {
    if (!(v >= -1.0 && v <= 1.0)) {
        throw ParameterError(field, "amplitude must lie in [-1, 1], got " + std::to_string(v));
    }
}

void require_finite(double v, const char* field) {
    if (!std::isfinite(v)) {
        throw ParameterError(field, "must be finite");
    }
}

void require_lossless(double r, double t, const char* field) {
    if (std::abs(r * r + t * t - 1.0) > kConstructionTol) {
        throw ParameterError(field, "amplitude pair must satisfy r^2 + t^2 = 1");
    }
}

void require_sign(int s, const char* field) {
    if (s != 1 && s != -1) {
        throw ParameterError(field, "must be +1 or -1");
    }
}

SplitterAmplitudes from_reflectances(double R0, double R1, int sign) {
    return {std::sqrt(R0), std::sqrt(1.0 - R0), std::sqrt(R1), sign * std::sqrt(1.0 - R1)};
}

SplitterAmplitudes splitter_of(const SpecialBsParams& p) { return from_reflectances(p.R0, p.reflectance_r1(), p.sign); }

SplitterAmplitudes splitter_of(const MachZehnderParams& p) {
    return {std::sin(p.theta_V), std::cos(p.theta_V), std::sin(p.theta_H), std::cos(p.theta_H)};
}

SplitterAmplitudes splitter_of(const FiberParams& p) { return from_reflectances(p.R_vrc0, p.R_vrc1, p.sign); }

// Conditional amplitudes of a single rail-dependent splitter; gains multiply
// the |00>, |01>, |10> branches.
Eigen::Vector4cd splitter_map(const SplitterAmplitudes& s, const Qubit& input, Complex g00, Complex g01,
                              Complex g10) {
    const Eigen::Vector2cd in = input.ket();
    Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
    v(0) = in(0) * (s.r0 * s.r0 - s.t0 * s.t0) * g00;
    v(1) = -in(1) * s.t0 * s.t1 * g01;
    v(2) = in(1) * s.r0 * s.r1 * g10;
    return v;
}

Mode mode(Port p, int rail, int tau) { return Mode{p, static_cast<Rail>(rail), static_cast<Temporal>(tau)}; }

StateVector prepare_input(const Qubit& input, double overlap_M) {
    if (!(overlap_M >= 0.0 && overlap_M <= 1.0)) {
        throw ParameterError("overlap_M", "must lie in [0, 1], got " + std::to_string(overlap_M));
    }
    const Eigen::Vector2cd in = input.ket();
    ModeFunction signal = in(0) * unit_mode(mode(Port::out1, 0, 0)) + in(1) * unit_mode(mode(Port::out1, 1, 0));
    ModeFunction ancilla = overlap_M * unit_mode(mode(Port::out2, 0, 0)) +
                           std::sqrt(1.0 - overlap_M * overlap_M) * unit_mode(mode(Port::out2, 0, 1));
    return StateVector::two_photon(signal, ancilla);
}

StateVector interfere(StateVector s, const SplitterAmplitudes& a) {
    for (int tau = 0; tau < 2; ++tau) {
        s = apply_two_mode_coupler(s, mode(Port::out1, 0, tau), mode(Port::out2, 0, tau), a.r0, a.t0);
        s = apply_two_mode_coupler(s, mode(Port::out1, 1, tau), mode(Port::out2, 1, tau), a.r1, a.t1);
    }
    return s;
}

StateVector attenuate_port(StateVector s, Port port, double eta0, double eta1) {
    for (int tau = 0; tau < 2; ++tau) {
        s = apply_attenuator(s, mode(port, 0, tau), eta0);
        s = apply_attenuator(s, mode(port, 1, tau), eta1);
    }
    return s;
}

CloneReport empty_report(const Qubit& input) {
    CloneReport rep;
    rep.input = input;
    rep.F1 = std::numeric_limits<double>::quiet_NaN();
    rep.F2 = std::numeric_limits<double>::quiet_NaN();
    rep.P_succ = 0.0;
    rep.empty = true;
    return rep;
}

double fiber_analysis_phase(const FiberParams& p, const Qubit& input, int which) {
    return p.analysis_phases ? (*p.analysis_phases)[static_cast<std::size_t>(which)] : input.phi();
}

}  // namespace

std::string_view variant_name(const ClonerParams& params) {
    return std::visit(Overloaded{[](const SpecialBsParams&) { return std::string_view("SpecialBS"); },
                                 [](const MachZehnderParams&) { return std::string_view("MachZehnder"); },
                                 [](const HybridParams&) { return std::string_view("Hybrid"); },
                                 [](const FiberParams&) { return std::string_view("Fiber"); }},
                      params);
}

void validate(const ClonerParams& params) {
    std::visit(Overloaded{[](const SpecialBsParams& p) {
                              require_unit_interval(p.R0, "R0");
                              require_unit_interval(p.reflectance_r1(), "R1");
                              require_sign(p.sign, "sign");
                              require_unit_interval(p.plate[0], "plate[0]");
                              require_unit_interval(p.plate[1], "plate[1]");
                          },
                          [](const MachZehnderParams& p) {
                              require_finite(p.theta_V, "theta_V");
                              require_finite(p.theta_H, "theta_H");
                              require_finite(p.residual_phase_offsets[0], "residual_phase_offsets[0]");
                              require_finite(p.residual_phase_offsets[1], "residual_phase_offsets[1]");
                          },
                          [](const HybridParams& p) {
                              require_amplitude(p.r, "r");
                              require_amplitude(p.t, "t");
                              require_amplitude(p.r0, "r0");
                              require_amplitude(p.t0, "t0");
                              require_amplitude(p.r1, "r1");
                              require_amplitude(p.t1, "t1");
                              require_lossless(p.r, p.t, "t");
                              require_lossless(p.r0, p.t0, "t0");
                              require_lossless(p.r1, p.t1, "t1");
                              require_unit_interval(p.eta0, "eta0");
                              require_unit_interval(p.eta1, "eta1");
                              require_unit_interval(p.nu0, "nu0");
                              require_unit_interval(p.nu1, "nu1");
                          },
                          [](const FiberParams& p) {
                              require_unit_interval(p.R_vrc0, "R_vrc0");
                              require_unit_interval(p.R_vrc1, "R_vrc1");
                              require_sign(p.sign, "sign");
                              require_unit_interval(p.detector_R[0], "detector_R[0]");
                              require_unit_interval(p.detector_R[1], "detector_R[1]");
                              require_finite(p.phase_drift, "phase_drift");
                              if (p.analysis_phases) {
                                  require_finite((*p.analysis_phases)[0], "analysis_phases[0]");
                                  require_finite((*p.analysis_phases)[1], "analysis_phases[1]");
                              }
                          }},
               params);
}

SpecialBsParams ideal_special_bs() {
    SpecialBsParams p;
    p.R0 = (3.0 + std::sqrt(3.0)) / 6.0;
    return p;
}

MachZehnderParams ideal_mach_zehnder() {
    const double R0 = ideal_special_bs().R0;
    MachZehnderParams p;
    p.theta_V = std::asin(std::sqrt(R0));
    // second quadrant: sin = sqrt(1 - R0), cos = -sqrt(R0)
    p.theta_H = kPi - std::asin(std::sqrt(1.0 - R0));
    return p;
}

HybridParams ideal_hybrid() {
    HybridParams p;
    p.r = p.t = kInvSqrt2;
    p.r0 = p.t0 = p.r1 = p.t1 = kInvSqrt2;
    p.eta0 = kInvSqrt2;
    p.eta1 = 1.0;
    p.nu0 = p.nu1 = 1.0;
    return p;
}

HybridParams universal_hybrid() {
    HybridParams p = ideal_hybrid();
    p.eta0 = p.eta1 = 1.0;
    return p;
}

FiberParams ideal_fiber() {
    FiberParams p;
    p.R_vrc0 = ideal_special_bs().R0;
    p.R_vrc1 = 1.0 - p.R_vrc0;
    return p;
}

CloneReport make_report(const Qubit& input, const PostSelection& selection) {
    if (selection.empty()) {
        return empty_report(input);
    }
    CloneReport rep;
    rep.input = input;
    rep.P_succ = selection.probability;
    rep.joint = selection.state;
    const Eigen::Matrix4cd rho = selection.state.density();
    rep.rho1 = reduced_qubit(rho, Port::out1);
    rep.rho2 = reduced_qubit(rho, Port::out2);
    rep.F1 = fidelity(rep.rho1, input);
    rep.F2 = fidelity(rep.rho2, input);
    return rep;
}

CloneReport make_report(const Qubit& input, const Eigen::Vector4cd& conditional) {
    const double p = conditional.squaredNorm();
    if (!(p > 0.0)) {
        return empty_report(input);
    }
    PostSelection sel;
    sel.probability = p;
    sel.state = TwoQubitState::pure(conditional);
    return make_report(input, sel);
}

Eigen::Vector4cd ideal_pc_map(const Qubit& input, Hemisphere hemisphere) {
    const Eigen::Vector2cd in = input.ket();
    Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
    if (hemisphere == Hemisphere::north) {
        v(0) = in(0);
        v(1) = in(1) * kInvSqrt2;
        v(2) = in(1) * kInvSqrt2;
    } else {
        v(3) = in(1);
        v(1) = in(0) * kInvSqrt2;
        v(2) = in(0) * kInvSqrt2;
    }
    return v;
}

CloneReport run_ideal(const Qubit& input, Hemisphere hemisphere) {
    return make_report(input, ideal_pc_map(input, hemisphere));
}

std::pair<double, double> mz_splitting(double theta_V, double theta_H) {
    const double sv = std::sin(theta_V);
    const double sh = std::sin(theta_H);
    return {sv * sv, sh * sh};
}

TheoreticalLimits theoretical_limits() { return {0.5 * (1.0 + 1.0 / std::sqrt(2.0)), 5.0 / 6.0, 0.75}; }

Eigen::Vector4cd closed_form_amplitudes(const ClonerParams& params, const Qubit& input) {
    validate(params);
    return std::visit(
        Overloaded{[&](const SpecialBsParams& p) {
                       return splitter_map(splitter_of(p), input, p.plate[0], p.plate[0], p.plate[1]);
                   },
                   [&](const MachZehnderParams& p) {
                       const Complex e0 = std::polar(1.0, p.residual_phase_offsets[0]);
                       const Complex e1 = std::polar(1.0, p.residual_phase_offsets[1]);
                       return splitter_map(splitter_of(p), input, e0, e1, e0);
                   },
                   [&](const HybridParams& p) {
                       const Eigen::Vector2cd in = input.ket();
                       Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
                       v(0) = in(0) * 2.0 * p.r * p.t * p.eta0 * p.eta0 * p.t0 * p.nu0 * p.r0;
                       v(2) = in(1) * p.r * p.t * p.eta0 * p.eta1 * p.t1 * p.nu1 * p.r0;
                       v(1) = in(1) * p.r * p.t * p.eta0 * p.eta1 * p.t0 * p.nu0 * p.r1;
                       return v;
                   },
                   [&](const FiberParams& p) {
                       const Complex drift = std::polar(1.0, p.phase_drift);
                       return splitter_map(splitter_of(p), input, 1.0, drift, drift);
                   }},
        params);
}

StateVector circuit_output(const ClonerParams& params, const Qubit& input, double overlap_M) {
    validate(params);
    StateVector s = prepare_input(input, overlap_M);
    return std::visit(
        Overloaded{[&](const SpecialBsParams& p) {
                       s = interfere(s, splitter_of(p));
                       return attenuate_port(s, Port::out1, p.plate[0], p.plate[1]);
                   },
                   [&](const MachZehnderParams& p) {
                       s = interfere(s, splitter_of(p));
                       for (int tau = 0; tau < 2; ++tau) {
                           s = apply_phase_shift(s, mode(Port::out2, 0, tau), p.residual_phase_offsets[0]);
                           s = apply_phase_shift(s, mode(Port::out2, 1, tau), p.residual_phase_offsets[1]);
                       }
                       return s;
                   },
                   [&](const HybridParams& p) {
                       // BS1 on every rail, keep the bunched half leaving through out2
                       s = interfere(s, {p.r, p.t, p.r, p.t});
                       s = keep_bunched(s, Port::out2);
                       s = attenuate_port(s, Port::out2, p.eta0, p.eta1);
                       // BS2 splits out2; the transmitted arm becomes out1
                       for (int tau = 0; tau < 2; ++tau) {
                           s = apply_two_mode_coupler(s, mode(Port::out2, 0, tau), mode(Port::out1, 0, tau), p.r0, p.t0);
                           s = apply_two_mode_coupler(s, mode(Port::out2, 1, tau), mode(Port::out1, 1, tau), p.r1, p.t1);
                       }
                       return attenuate_port(s, Port::out1, p.nu0, p.nu1);
                   },
                   [&](const FiberParams& p) {
                       s = interfere(s, splitter_of(p));
                       for (int tau = 0; tau < 2; ++tau) {
                           s = apply_phase_shift(s, mode(Port::out1, 1, tau), p.phase_drift);
                           s = apply_phase_shift(s, mode(Port::out2, 1, tau), p.phase_drift);
                       }
                       return s;
                   }},
        params);
}

CloneReport run_special_bs(const SpecialBsParams& params, const Qubit& input) { return run_model(params, input); }

CloneReport run_mach_zehnder(const MachZehnderParams& params, const Qubit& input) {
    return run_model(params, input);
}

CloneReport run_hybrid(const HybridParams& params, const Qubit& input) { return run_model(params, input); }

CloneReport run_fiber(const FiberParams& params, const Qubit& input) { return run_model(params, input); }

CloneReport run_model(const ClonerParams& params, const Qubit& input) {
    return make_report(input, closed_form_amplitudes(params, input));
}

CloneReport run_circuit(const ClonerParams& params, const Qubit& input, double overlap_M) {
    return make_report(input, postselect_coincidence(circuit_output(params, input, overlap_M)));
}

std::array<double, 4> fiber_detection_distribution(const FiberParams& params, const Qubit& input,
                                                   double overlap_M) {
    StateVector s = circuit_output(params, input, overlap_M);
    for (int which = 0; which < 2; ++which) {
        const Port port = which == 0 ? Port::out1 : Port::out2;
        const double R = params.detector_R[static_cast<std::size_t>(which)];
        const double phase = fiber_analysis_phase(params, input, which);
        for (int tau = 0; tau < 2; ++tau) {
            s = apply_phase_shift(s, mode(port, 1, tau), -phase);
            s = apply_two_mode_coupler(s, mode(port, 0, tau), mode(port, 1, tau), std::sqrt(R), std::sqrt(1.0 - R));
        }
    }
    const auto sector = coincidence_sector(s);
    // rail index 1 is the D+ output; joint index = 2 * rail_out1 + rail_out2
    std::array<double, 4> by_rail{};
    double total = 0.0;
    for (const auto& v : sector) {
        for (int k = 0; k < 4; ++k) {
            by_rail[static_cast<std::size_t>(k)] += std::norm(v(k));
        }
        total += v.squaredNorm();
    }
    if (!(total > 0.0)) {
        return {0.0, 0.0, 0.0, 0.0};
    }
    return {by_rail[3] / total, by_rail[2] / total, by_rail[1] / total, by_rail[0] / total};
}

}  // namespace clonesim
