#pragma once

// Monte Carlo coincidence counting over the cloner models, the clone-fidelity
// estimator and the three ways of removing detector-efficiency bias.

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

#include <Eigen/Dense>

#include "clonesim/cloners.hpp"
#include "clonesim/imperfections.hpp"

namespace clonesim {

/// Detector patterns (D1, D2) in the order ++, +-, -+, --.
enum class Pattern { pp = 0, pm = 1, mp = 2, mm = 3 };

using PatternProbabilities = std::array<double, 4>;

struct DetectorBank {
    double eta_1p = 1.0;
    double eta_1m = 1.0;
    double eta_2p = 1.0;
    double eta_2m = 1.0;

    void validate() const;
    double min() const;
    /// Product of the two efficiencies involved in `p`.
    double pair_efficiency(Pattern p) const;
    static DetectorBank uniform(double eta) { return {eta, eta, eta, eta}; }
};

struct CoincidenceRecord {
    std::uint64_t c_pp = 0;
    std::uint64_t c_pm = 0;
    std::uint64_t c_mp = 0;
    std::uint64_t c_mm = 0;
    std::uint64_t n_pairs = 0;
    std::uint64_t seed = 0;

    std::uint64_t c_sum() const { return c_pp + c_pm + c_mp + c_mm; }
    std::uint64_t& count(Pattern p);
    std::uint64_t count(Pattern p) const;

    /// Field-wise addition of counts and trials; keeps this record's seed.
    CoincidenceRecord& operator+=(const CoincidenceRecord& other);
    friend bool operator==(const CoincidenceRecord&, const CoincidenceRecord&) = default;
};

/// Conditional pattern probabilities for measuring both clones in the basis
/// {analysis, analysis_perp}; D+ registers `analysis`.
PatternProbabilities outcome_distribution(const Eigen::Matrix4cd& joint, const Qubit& analysis);
PatternProbabilities outcome_distribution(const CloneReport& report, const Qubit& analysis);

/// Pattern probabilities produced by the architecture's own analyzer: the
/// fiber detection blocks for Fiber models, ideal projection onto the input
/// state otherwise.
PatternProbabilities model_outcome_distribution(const ClonerParams& model, double overlap_M, const Qubit& input);

/// Per-trial Bernoulli coincidence simulation.  Deterministic for a fixed seed
/// and independent of `workers`.
CoincidenceRecord simulate_counts(const ClonerParams& model, const NoiseConfig& noise, const Qubit& input,
                                  std::uint64_t n_pairs, const DetectorBank& detectors, std::uint64_t seed,
                                  unsigned workers = 1);

struct FidelityEstimate {
    double F1 = 0.0;
    double F2 = 0.0;
    /// Raw registered coincidences behind the estimate.
    std::uint64_t c_sum = 0;
};

/// Clone fidelities from the four coincidence counts; nullopt when C_sum = 0.
std::optional<FidelityEstimate> fidelity_from_counts(const CoincidenceRecord& record);

/// C_sum / n_pairs.
double success_probability_estimate(const CoincidenceRecord& record);

enum class BalanceMethod { rescale, add_loss, basis_swap };

std::string_view balance_method_name(BalanceMethod m);
BalanceMethod parse_balance_method(std::string_view name);

/// Divides each count by its detector-pair efficiency before estimating.
std::optional<FidelityEstimate> balance_rescale(const CoincidenceRecord& record, const DetectorBank& detectors);

/// What the add_loss and basis_swap methods need to repeat a measurement.
struct MeasurementSetup {
    ClonerParams model;
    NoiseConfig noise;
    Qubit input;
    std::uint64_t n_pairs = 0;
    std::uint64_t seed = 0;
    unsigned workers = 1;
};

/// Attenuates every detector to the weakest efficiency and re-simulates.
std::optional<FidelityEstimate> balance_add_loss(const MeasurementSetup& setup, const DetectorBank& detectors);

/// Uses only D1+ and D2+; four equal sub-runs rotate the analyzers so that each
/// pattern in turn is routed onto that detector pair.
CoincidenceRecord simulate_basis_swap(const MeasurementSetup& setup, const DetectorBank& detectors);
std::optional<FidelityEstimate> balance_basis_swap(const MeasurementSetup& setup, const DetectorBank& detectors);

/// Dispatches on `method`; rescale uses `record` when given and otherwise simulates one.
std::optional<FidelityEstimate> balance_detectors(BalanceMethod method, const MeasurementSetup& setup,
                                                  const DetectorBank& detectors,
                                                  const std::optional<CoincidenceRecord>& record = std::nullopt);

/// Independent stream seed (splitmix64 finalizer of seed and stream index).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Binomial standard error sqrt(F (1 - F) / C_sum).
double binomial_sigma(double fidelity, std::uint64_t c_sum);

}  // namespace clonesim
