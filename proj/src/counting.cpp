#include "clonesim/counting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <thread>
#include <vector>

namespace clonesim {

namespace {

constexpr std::uint64_t kChunkTrials = std::uint64_t{1} << 16;

constexpr std::uint64_t kJitterStream = 0x4A4954544552ULL;
constexpr std::uint64_t kBasisSwapStream = 0x53574150ULL;

struct TrialModel {
    double p_succ = 0.0;
    PatternProbabilities dist{};
};

TrialModel trial_model(const ClonerParams& model, double overlap_M, const Qubit& input) {
    const CloneReport rep = overlap_M == 1.0 ? run_model(model, input) : run_circuit(model, input, overlap_M);
    if (rep.empty) {
        return {};
    }
    TrialModel t;
    t.p_succ = rep.P_succ;
    if (std::holds_alternative<FiberParams>(model)) {
        t.dist = fiber_detection_distribution(std::get<FiberParams>(model), input, overlap_M);
    } else {
        t.dist = outcome_distribution(rep, input);
    }
    return t;
}

Pattern sample_pattern(const PatternProbabilities& dist, double u) {
    double acc = 0.0;
    for (int k = 0; k < 3; ++k) {
        acc += dist[static_cast<std::size_t>(k)];
        if (u < acc) return static_cast<Pattern>(k);
    }
    return Pattern::mm;
}

// Core loop.  register_prob[p] is the probability that an occurring pattern p
// produces a recorded coincidence.
CoincidenceRecord run_trials(const ClonerParams& model, const NoiseConfig& noise, const Qubit& input,
                             std::uint64_t n_pairs, const std::array<double, 4>& register_prob, std::uint64_t seed,
                             unsigned workers) {
    if (n_pairs < 1) {
        throw ParameterError("n_pairs", "must be >= 1");
    }
    validate(model);
    noise.validate();

    std::vector<double> jitter;
    TrialModel fixed;
    if (noise.has_jitter()) {
        jitter = sample_phase_jitter(noise, derive_seed(seed, kJitterStream), n_pairs);
    } else {
        fixed = trial_model(model, noise.overlap_M, input);
    }

    const std::uint64_t n_chunks = (n_pairs + kChunkTrials - 1) / kChunkTrials;
    std::vector<CoincidenceRecord> partial(n_chunks);

    auto run_chunk = [&](std::uint64_t c) {
        std::mt19937_64 rng(derive_seed(seed, c));
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        const std::uint64_t first = c * kChunkTrials;
        const std::uint64_t last = std::min(n_pairs, first + kChunkTrials);
        CoincidenceRecord rec;
        for (std::uint64_t k = first; k < last; ++k) {
            const TrialModel t =
                jitter.empty() ? fixed : trial_model(with_phase_error(model, jitter[k]), noise.overlap_M, input);
            if (!(unit(rng) < t.p_succ)) continue;
            const Pattern p = sample_pattern(t.dist, unit(rng));
            if (unit(rng) < register_prob[static_cast<std::size_t>(p)]) {
                ++rec.count(p);
            }
        }
        rec.n_pairs = last - first;
        partial[c] = rec;
    };

    const unsigned n_workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n_chunks)));
    if (n_workers == 1) {
        for (std::uint64_t c = 0; c < n_chunks; ++c) run_chunk(c);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (unsigned w = 0; w < n_workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::uint64_t c = w; c < n_chunks; c += n_workers) run_chunk(c);
            });
        }
        for (auto& th : pool) th.join();
    }

    CoincidenceRecord total;
    for (const auto& rec : partial) total += rec;
    total.seed = seed;
    return total;
}

std::optional<FidelityEstimate> estimate(const std::array<double, 4>& c, std::uint64_t raw_sum) {
    const double sum = c[0] + c[1] + c[2] + c[3];
    if (!(sum > 0.0)) {
        return std::nullopt;
    }
    return FidelityEstimate{(c[0] + c[1]) / sum, (c[0] + c[2]) / sum, raw_sum};
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

void DetectorBank::validate() const {
    const std::array<std::pair<double, const char*>, 4> fields{
        {{eta_1p, "eta_1p"}, {eta_1m, "eta_1m"}, {eta_2p, "eta_2p"}, {eta_2m, "eta_2m"}}};
    for (const auto& [v, name] : fields) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw ParameterError(name, "detector efficiency must lie in [0, 1], got " + std::to_string(v));
        }
    }
}

double DetectorBank::min() const { return std::min({eta_1p, eta_1m, eta_2p, eta_2m}); }

double DetectorBank::pair_efficiency(Pattern p) const {
    switch (p) {
        case Pattern::pp: return eta_1p * eta_2p;
        case Pattern::pm: return eta_1p * eta_2m;
        case Pattern::mp: return eta_1m * eta_2p;
        case Pattern::mm: return eta_1m * eta_2m;
    }
    return 0.0;
}

std::uint64_t& CoincidenceRecord::count(Pattern p) {
    switch (p) {
        case Pattern::pp: return c_pp;
        case Pattern::pm: return c_pm;
        case Pattern::mp: return c_mp;
        case Pattern::mm: break;
    }
    return c_mm;
}

std::uint64_t CoincidenceRecord::count(Pattern p) const { return const_cast<CoincidenceRecord*>(this)->count(p); }

CoincidenceRecord& CoincidenceRecord::operator+=(const CoincidenceRecord& other) {
    c_pp += other.c_pp;
    c_pm += other.c_pm;
    c_mp += other.c_mp;
    c_mm += other.c_mm;
    n_pairs += other.n_pairs;
    return *this;
}

PatternProbabilities outcome_distribution(const Eigen::Matrix4cd& joint, const Qubit& analysis) {
    const std::array<Eigen::Vector2cd, 2> basis{analysis.ket(), analysis.orthogonal().ket()};
    const double tr = joint.trace().real();
    PatternProbabilities out{};
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            Eigen::Vector4cd v;
            for (int i = 0; i < 2; ++i) {
                for (int j = 0; j < 2; ++j) {
                    v(2 * i + j) = basis[static_cast<std::size_t>(a)](i) * basis[static_cast<std::size_t>(b)](j);
                }
            }
            out[static_cast<std::size_t>(2 * a + b)] = std::max(0.0, (v.adjoint() * joint * v)(0, 0).real() / tr);
        }
    }
    return out;
}

PatternProbabilities outcome_distribution(const CloneReport& report, const Qubit& analysis) {
    if (report.empty) {
        return {0.0, 0.0, 0.0, 0.0};
    }
    return outcome_distribution(report.joint.density(), analysis);
}

PatternProbabilities model_outcome_distribution(const ClonerParams& model, double overlap_M, const Qubit& input) {
    return trial_model(model, overlap_M, input).dist;
}

CoincidenceRecord simulate_counts(const ClonerParams& model, const NoiseConfig& noise, const Qubit& input,
                                  std::uint64_t n_pairs, const DetectorBank& detectors, std::uint64_t seed,
                                  unsigned workers) {
    detectors.validate();
    const std::array<double, 4> reg{detectors.pair_efficiency(Pattern::pp), detectors.pair_efficiency(Pattern::pm),
                                    detectors.pair_efficiency(Pattern::mp), detectors.pair_efficiency(Pattern::mm)};
    return run_trials(model, noise, input, n_pairs, reg, seed, workers);
}

std::optional<FidelityEstimate> fidelity_from_counts(const CoincidenceRecord& record) {
    return estimate({static_cast<double>(record.c_pp), static_cast<double>(record.c_pm),
                     static_cast<double>(record.c_mp), static_cast<double>(record.c_mm)},
                    record.c_sum());
}

double success_probability_estimate(const CoincidenceRecord& record) {
    if (record.n_pairs == 0) {
        throw ParameterError("n_pairs", "must be > 0");
    }
    return static_cast<double>(record.c_sum()) / static_cast<double>(record.n_pairs);
}

std::string_view balance_method_name(BalanceMethod m) {
    switch (m) {
        case BalanceMethod::rescale: return "rescale";
        case BalanceMethod::add_loss: return "add_loss";
        case BalanceMethod::basis_swap: return "basis_swap";
    }
    return "rescale";
}

BalanceMethod parse_balance_method(std::string_view name) {
    if (name == "rescale") return BalanceMethod::rescale;
    if (name == "add_loss") return BalanceMethod::add_loss;
    if (name == "basis_swap") return BalanceMethod::basis_swap;
    throw ParameterError("balance", "unknown method '" + std::string(name) + "'");
}

std::optional<FidelityEstimate> balance_rescale(const CoincidenceRecord& record, const DetectorBank& detectors) {
    detectors.validate();
    std::array<double, 4> corrected{};
    for (int k = 0; k < 4; ++k) {
        const auto p = static_cast<Pattern>(k);
        const double eff = detectors.pair_efficiency(p);
        if (!(eff > 0.0)) {
            throw ParameterError("detectors", "rescale needs non-zero efficiencies");
        }
        corrected[static_cast<std::size_t>(k)] = static_cast<double>(record.count(p)) / eff;
    }
    return estimate(corrected, record.c_sum());
}

std::optional<FidelityEstimate> balance_add_loss(const MeasurementSetup& setup, const DetectorBank& detectors) {
    detectors.validate();
    if (!(detectors.min() > 0.0)) {
        throw ParameterError("detectors", "add_loss needs non-zero efficiencies");
    }
    const DetectorBank balanced = DetectorBank::uniform(detectors.min());
    return fidelity_from_counts(simulate_counts(setup.model, setup.noise, setup.input, setup.n_pairs, balanced,
                                                setup.seed, setup.workers));
}

CoincidenceRecord simulate_basis_swap(const MeasurementSetup& setup, const DetectorBank& detectors) {
    detectors.validate();
    if (setup.n_pairs < 4) {
        throw ParameterError("n_pairs", "basis_swap needs at least 4 pairs");
    }
    const double eff = detectors.eta_1p * detectors.eta_2p;
    CoincidenceRecord total;
    for (int k = 0; k < 4; ++k) {
        const std::uint64_t n = setup.n_pairs / 4 + (static_cast<std::uint64_t>(k) < setup.n_pairs % 4 ? 1 : 0);
        std::array<double, 4> reg{};
        reg[static_cast<std::size_t>(k)] = eff;
        total += run_trials(setup.model, setup.noise, setup.input, n, reg,
                            derive_seed(setup.seed, kBasisSwapStream + static_cast<std::uint64_t>(k)), setup.workers);
    }
    total.seed = setup.seed;
    return total;
}

std::optional<FidelityEstimate> balance_basis_swap(const MeasurementSetup& setup, const DetectorBank& detectors) {
    return fidelity_from_counts(simulate_basis_swap(setup, detectors));
}

std::optional<FidelityEstimate> balance_detectors(BalanceMethod method, const MeasurementSetup& setup,
                                                  const DetectorBank& detectors,
                                                  const std::optional<CoincidenceRecord>& record) {
    switch (method) {
        case BalanceMethod::rescale: {
            const CoincidenceRecord rec =
                record ? *record
                       : simulate_counts(setup.model, setup.noise, setup.input, setup.n_pairs, detectors, setup.seed,
                                         setup.workers);
            return balance_rescale(rec, detectors);
        }
        case BalanceMethod::add_loss: return balance_add_loss(setup, detectors);
        case BalanceMethod::basis_swap: return balance_basis_swap(setup, detectors);
    }
    return std::nullopt;
}

double binomial_sigma(double fidelity, std::uint64_t c_sum) {
    if (c_sum == 0) return std::numeric_limits<double>::infinity();
    return std::sqrt(fidelity * (1.0 - fidelity) / static_cast<double>(c_sum));
}

}  // namespace clonesim
