#pragma once

// Phase-covariant 1 -> 2 cloner architectures.  Every architecture maps a
// signal qubit plus a |0> ancilla to a conditional two-clone state; clone 1
// leaves through port out1 and clone 2 through port out2.

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

#include <Eigen/Dense>

#include "clonesim/fock.hpp"
#include "clonesim/qubit.hpp"

namespace clonesim {

/// Validation failure that names the offending parameter.
class ParameterError : public std::invalid_argument {
public:
    ParameterError(std::string field, const std::string& what)
        : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

/// Rail-dependent unbalanced beam splitter (signal and ancilla interfere once).
/// A compensation plate with per-rail amplitude transmittance sits in output out1.
struct SpecialBsParams {
    double R0 = 0.0;
    std::optional<double> R1;  // rail-r1 reflectance, 1 - R0 when unset
    int sign = -1;             // sign of the rail-r1 transmittance amplitude
    std::array<double, 2> plate{1.0, 1.0};

    double reflectance_r1() const { return R1.value_or(1.0 - R0); }
};

/// Mach-Zehnder interferometer emulating the special splitter: R_j = sin^2(theta_j).
/// residual_phase_offsets are per-rail phases picked up in output out2.
struct MachZehnderParams {
    double theta_V = 0.0;
    double theta_H = 0.0;
    std::array<double, 2> residual_phase_offsets{0.0, 0.0};
};

/// Bunching on BS1 (r, t), state filter GP_eta, separation on BS2 with
/// rail-dependent (r_k, t_k), and compensation filter GP_nu on the transmitted arm.
struct HybridParams {
    double r = 0.0;
    double t = 0.0;
    double r0 = 0.0;
    double t0 = 0.0;
    double r1 = 0.0;
    double t1 = 0.0;
    double eta0 = 1.0;
    double eta1 = 1.0;
    double nu0 = 1.0;
    double nu1 = 1.0;
};

/// Dual-rail fiber cloner: VRC_|0> and VRC_|1> couple the signal and ancilla
/// rails.  Each clone is analysed by a phase modulator and a fiber coupler of
/// intensity ratio detector_R[j].  analysis_phases, when unset, track the input
/// phase (matched analyzer).  phase_drift is the rail-r1 arm phase error of both
/// interferometers.
struct FiberParams {
    double R_vrc0 = 0.0;
    double R_vrc1 = 0.0;
    int sign = -1;
    std::optional<std::array<double, 2>> analysis_phases;
    std::array<double, 2> detector_R{0.5, 0.5};
    double phase_drift = 0.0;
};

using ClonerParams = std::variant<SpecialBsParams, MachZehnderParams, HybridParams, FiberParams>;

std::string_view variant_name(const ClonerParams& params);

/// Throws ParameterError naming the first field outside its allowed range.
void validate(const ClonerParams& params);

// Ideal parameter sets.
SpecialBsParams ideal_special_bs();
MachZehnderParams ideal_mach_zehnder();
HybridParams ideal_hybrid();
/// Hybrid without the GP_eta state filter: the universal cloner.
HybridParams universal_hybrid();
FiberParams ideal_fiber();

struct CloneReport {
    Qubit input;
    double F1 = 0.0;
    double F2 = 0.0;
    double P_succ = 0.0;
    DensityMatrix rho1;
    DensityMatrix rho2;
    TwoQubitState joint;
    bool empty = false;  // post-selection never succeeds; fidelities are NaN

    double mean_fidelity() const { return 0.5 * (F1 + F2); }
};

/// Builds a report from a post-selected state.
CloneReport make_report(const Qubit& input, const PostSelection& selection);
/// Builds a report from unnormalized conditional amplitudes.
CloneReport make_report(const Qubit& input, const Eigen::Vector4cd& conditional);

enum class Hemisphere { north, south };

/// Optimal symmetric phase-covariant map, normalized output ket.
Eigen::Vector4cd ideal_pc_map(const Qubit& input, Hemisphere hemisphere);
CloneReport run_ideal(const Qubit& input, Hemisphere hemisphere);

/// (R_V, R_H) = (sin^2 theta_V, sin^2 theta_H).
std::pair<double, double> mz_splitting(double theta_V, double theta_H);

struct TheoreticalLimits {
    double F_pc;
    double F_univ;
    double F_sc;
};
TheoreticalLimits theoretical_limits();

/// Closed-form conditional amplitudes over |c1 c2> (index 2*c1 + c2), not normalized.
/// Squared norm is the success probability.
Eigen::Vector4cd closed_form_amplitudes(const ClonerParams& params, const Qubit& input);

/// Fock-space circuit output before coincidence post-selection.  The ancilla
/// occupies M * principal + sqrt(1 - M^2) * orthogonal temporal modes.
StateVector circuit_output(const ClonerParams& params, const Qubit& input, double overlap_M = 1.0);

CloneReport run_special_bs(const SpecialBsParams& params, const Qubit& input);
CloneReport run_mach_zehnder(const MachZehnderParams& params, const Qubit& input);
CloneReport run_hybrid(const HybridParams& params, const Qubit& input);
CloneReport run_fiber(const FiberParams& params, const Qubit& input);

/// Closed-form evaluation, dispatched on the variant.
CloneReport run_model(const ClonerParams& params, const Qubit& input);
/// Full Fock-circuit evaluation.
CloneReport run_circuit(const ClonerParams& params, const Qubit& input, double overlap_M = 1.0);

/// Detector-pattern probabilities (pp, pm, mp, mm) of the fiber detection
/// blocks, conditioned on a coincidence.  D+ sits on the rail-r1 output of each
/// block's coupler.  Returns zeros when post-selection never succeeds.
std::array<double, 4> fiber_detection_distribution(const FiberParams& params, const Qubit& input,
                                                   double overlap_M = 1.0);

}  // namespace clonesim
