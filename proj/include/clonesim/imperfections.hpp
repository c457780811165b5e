#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "clonesim/cloners.hpp"

namespace clonesim {

struct NoiseConfig {
    /// Temporal-mode amplitude overlap between signal and ancilla photons.
    double overlap_M = 1.0;
    /// Standard deviation of the per-trial phase increment, radians.
    double phase_jitter_sigma = 0.0;
    /// The accumulated phase resets to zero every this many trials.
    std::size_t jitter_reset_period = 1;
    /// Jitter samples used when an averaged (analytic) report is requested.
    std::size_t average_samples = 10000;

    void validate() const;
    bool has_jitter() const { return phase_jitter_sigma > 0.0; }
};

/// Evaluates the model through the Fock circuit with partially
/// distinguishable photons.  Detectors sum incoherently over temporal bins.
CloneReport with_distinguishability(const ClonerParams& model, double overlap_M, const Qubit& input);

/// Coincidence probability of two photons with overlap M on a balanced coupler.
double hom_coincidence_probability(double overlap_M);

/// HOM visibility 1 - P_coinc(M) / P_coinc(0).  Equals M^2.
double hom_visibility(double overlap_M);

/// Gaussian random walk of phase errors, reset to zero at the start of every
/// jitter_reset_period block.  Deterministic for a fixed seed.
std::vector<double> sample_phase_jitter(const NoiseConfig& config, std::uint64_t rng_seed, std::size_t n_trials);

/// Applies one phase error to the interferometric parts of a model: both MZ
/// arm phase differences, or the fiber arm phase.  The special splitter and
/// the hybrid setup have no interferometer and are returned unchanged.
ClonerParams with_phase_error(const ClonerParams& model, double phase_error);

/// Post-selection-weighted average over `config.average_samples` jitter draws.
/// rho_j is the success-weighted mixture, P_succ the plain mean.
CloneReport jitter_averaged_report(const ClonerParams& model, const NoiseConfig& config, const Qubit& input,
                                   std::uint64_t rng_seed);

/// Noisy evaluation: distinguishability always, jitter averaging when sigma > 0.
CloneReport evaluate(const ClonerParams& model, const NoiseConfig& noise, const Qubit& input,
                     std::uint64_t rng_seed = 0);

}  // namespace clonesim
