#pragma once

// Design conditions of the cloners: the optimal splitter reflectance, the
// glass-plate ratios that symmetrize the hybrid setup, and a derivative-free
// numeric symmetrizer for imperfect parameter sets.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "clonesim/cloners.hpp"
#include "clonesim/imperfections.hpp"

namespace clonesim {

/// Root of 6R^2 - 6R + 1 = 0 in (1/2, 1].
double solve_ideal_reflectance();
/// The other root, 1 - R0.
double complementary_reflectance();

/// Rail-dependent amplitudes of the separating splitter BS2.
struct Bs2Amplitudes {
    double r0 = 0.0;
    double t0 = 0.0;
    double r1 = 0.0;
    double t1 = 0.0;

    /// Lossless amplitudes from intensity reflectances.
    static Bs2Amplitudes from_reflectances(double R0, double R1);
};

struct CompensationSolution {
    double nu_ratio = 0.0;   // nu0 / nu1
    double eta_ratio = 0.0;  // eta1 / eta0
    double eta0 = 1.0;
    double eta1 = 1.0;
    double nu0 = 1.0;
    double nu1 = 1.0;
    HybridParams params;
    CloneReport predicted;  // equatorial input, phi = 0
};

/// Plate transmittances that make the hybrid cloner symmetric and optimal.
/// The larger transmittance of each pair is set to 1.
CompensationSolution solve_hybrid_compensation(const Bs2Amplitudes& bs2, double bs1_r = 0.70710678118654752440);

enum class Objective { min_fidelity_gap, max_avg_fidelity };

std::string_view objective_name(Objective o);
Objective parse_objective(std::string_view name);

/// Names accepted by get_parameter / set_parameter for the model's variant.
std::vector<std::string> parameter_names(const ClonerParams& model);
double get_parameter(const ClonerParams& model, std::string_view name);
ClonerParams set_parameter(const ClonerParams& model, std::string_view name, double value);

struct FreeParameter {
    std::string name;
    double lo = 0.0;
    double hi = 0.0;
};

struct OptimizerOptions {
    std::size_t grid_budget = 4096;  // total grid evaluations
    std::size_t phase_samples = 8;   // equatorial inputs averaged per evaluation
    double step_tolerance = 1e-12;   // relative to each interval width
    std::size_t max_evaluations = 50000;
};

struct OptimizationResult {
    ClonerParams params;
    Objective objective = Objective::min_fidelity_gap;
    double objective_value = 0.0;  // |F1 - F2| or (F1 + F2) / 2
    double best_grid_value = 0.0;  // same units
    double F1 = 0.0;
    double F2 = 0.0;
    double P_succ = 0.0;
    std::size_t evaluations = 0;
};

/// Coarse grid over the free parameters followed by compass-search refinement.
/// Fidelities are averaged over equatorial inputs.  The returned point is never
/// worse than the best grid point.
OptimizationResult optimize_symmetry(const ClonerParams& model, const std::vector<FreeParameter>& free_parameters,
                                     Objective objective, const NoiseConfig& noise = {},
                                     const OptimizerOptions& options = {});

}  // namespace clonesim
