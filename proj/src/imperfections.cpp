#include "clonesim/imperfections.hpp"

#include <cmath>
#include <random>
#include <string>

namespace clonesim {

void NoiseConfig::validate() const {
    if (!(overlap_M >= 0.0 && overlap_M <= 1.0)) {
        throw ParameterError("overlap_M", "must lie in [0, 1], got " + std::to_string(overlap_M));
    }
    if (!(phase_jitter_sigma >= 0.0) || !std::isfinite(phase_jitter_sigma)) {
        throw ParameterError("phase_jitter_sigma", "must be a finite value >= 0");
    }
    if (jitter_reset_period < 1) {
        throw ParameterError("jitter_reset_period", "must be >= 1");
    }
    if (average_samples < 1) {
        throw ParameterError("average_samples", "must be >= 1");
    }
}

CloneReport with_distinguishability(const ClonerParams& model, double overlap_M, const Qubit& input) {
    return run_circuit(model, input, overlap_M);
}

double hom_coincidence_probability(double overlap_M) {
    if (!(overlap_M >= 0.0 && overlap_M <= 1.0)) {
        throw ParameterError("overlap_M", "must lie in [0, 1], got " + std::to_string(overlap_M));
    }
    const Mode a{Port::out1, Rail::r0, Temporal::principal};
    const Mode b{Port::out2, Rail::r0, Temporal::principal};
    const Mode b_orth{Port::out2, Rail::r0, Temporal::orthogonal};
    const ModeFunction ancilla =
        overlap_M * unit_mode(b) + std::sqrt(1.0 - overlap_M * overlap_M) * unit_mode(b_orth);
    StateVector s = StateVector::two_photon(unit_mode(a), ancilla);
    const double h = 1.0 / std::sqrt(2.0);
    s = apply_two_mode_coupler(s, a, b, h, h);
    s = apply_two_mode_coupler(s, Mode{Port::out1, Rail::r0, Temporal::orthogonal}, b_orth, h, h);
    return postselect_coincidence(s).probability;
}

double hom_visibility(double overlap_M) {
    return 1.0 - hom_coincidence_probability(overlap_M) / hom_coincidence_probability(0.0);
}

std::vector<double> sample_phase_jitter(const NoiseConfig& config, std::uint64_t rng_seed, std::size_t n_trials) {
    config.validate();
    std::vector<double> out(n_trials, 0.0);
    if (!config.has_jitter()) {
        return out;
    }
    std::mt19937_64 rng(rng_seed);
    std::normal_distribution<double> step(0.0, config.phase_jitter_sigma);
    double walk = 0.0;
    for (std::size_t k = 0; k < n_trials; ++k) {
        if (k % config.jitter_reset_period == 0) {
            walk = 0.0;
        }
        walk += step(rng);
        out[k] = walk;
    }
    return out;
}

ClonerParams with_phase_error(const ClonerParams& model, double phase_error) {
    ClonerParams out = model;
    if (auto* mz = std::get_if<MachZehnderParams>(&out)) {
        mz->theta_V += phase_error;
        mz->theta_H += phase_error;
    } else if (auto* fiber = std::get_if<FiberParams>(&out)) {
        fiber->phase_drift += phase_error;
    }
    return out;
}

CloneReport jitter_averaged_report(const ClonerParams& model, const NoiseConfig& config, const Qubit& input,
                                   std::uint64_t rng_seed) {
    const auto jitter = sample_phase_jitter(config, rng_seed, config.average_samples);
    Eigen::Matrix4cd weighted = Eigen::Matrix4cd::Zero();
    double p_total = 0.0;
    for (double delta : jitter) {
        const ClonerParams shifted = with_phase_error(model, delta);
        const CloneReport r = config.overlap_M == 1.0 ? run_model(shifted, input)
                                                      : with_distinguishability(shifted, config.overlap_M, input);
        if (r.empty) continue;
        weighted += r.P_succ * r.joint.density();
        p_total += r.P_succ;
    }
    PostSelection sel;
    sel.probability = p_total / static_cast<double>(jitter.size());
    if (p_total > 0.0) {
        sel.state = TwoQubitState::from_density(weighted / p_total);
    }
    return make_report(input, sel);
}

CloneReport evaluate(const ClonerParams& model, const NoiseConfig& noise, const Qubit& input, std::uint64_t rng_seed) {
    noise.validate();
    if (noise.has_jitter()) {
        return jitter_averaged_report(model, noise, input, rng_seed);
    }
    return with_distinguishability(model, noise.overlap_M, input);
}

}  // namespace clonesim
