#include "clonesim/compensation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

namespace clonesim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Accessor table: one entry per tunable scalar of a variant.
template <class P>
struct Field {
    const char* name;
    std::function<double(const P&)> get;
    std::function<void(P&, double)> set;
};

double lossless_partner(double r) { return std::sqrt(std::max(0.0, 1.0 - r * r)); }

const std::vector<Field<SpecialBsParams>>& special_fields() {
    static const std::vector<Field<SpecialBsParams>> f{
        {"R0", [](const SpecialBsParams& p) { return p.R0; }, [](SpecialBsParams& p, double v) { p.R0 = v; }},
        {"R1", [](const SpecialBsParams& p) { return p.reflectance_r1(); },
         [](SpecialBsParams& p, double v) { p.R1 = v; }},
        {"plate0", [](const SpecialBsParams& p) { return p.plate[0]; },
         [](SpecialBsParams& p, double v) { p.plate[0] = v; }},
        {"plate1", [](const SpecialBsParams& p) { return p.plate[1]; },
         [](SpecialBsParams& p, double v) { p.plate[1] = v; }},
    };
    return f;
}

const std::vector<Field<MachZehnderParams>>& mz_fields() {
    static const std::vector<Field<MachZehnderParams>> f{
        {"theta_V", [](const MachZehnderParams& p) { return p.theta_V; },
         [](MachZehnderParams& p, double v) { p.theta_V = v; }},
        {"theta_H", [](const MachZehnderParams& p) { return p.theta_H; },
         [](MachZehnderParams& p, double v) { p.theta_H = v; }},
        {"offset0", [](const MachZehnderParams& p) { return p.residual_phase_offsets[0]; },
         [](MachZehnderParams& p, double v) { p.residual_phase_offsets[0] = v; }},
        {"offset1", [](const MachZehnderParams& p) { return p.residual_phase_offsets[1]; },
         [](MachZehnderParams& p, double v) { p.residual_phase_offsets[1] = v; }},
    };
    return f;
}

// Setting a reflection amplitude re-derives its lossless transmission partner.
const std::vector<Field<HybridParams>>& hybrid_fields() {
    static const std::vector<Field<HybridParams>> f{
        {"r", [](const HybridParams& p) { return p.r; },
         [](HybridParams& p, double v) {
             p.r = v;
             p.t = lossless_partner(v);
         }},
        {"r0", [](const HybridParams& p) { return p.r0; },
         [](HybridParams& p, double v) {
             p.r0 = v;
             p.t0 = lossless_partner(v);
         }},
        {"r1", [](const HybridParams& p) { return p.r1; },
         [](HybridParams& p, double v) {
             p.r1 = v;
             p.t1 = lossless_partner(v);
         }},
        {"eta0", [](const HybridParams& p) { return p.eta0; }, [](HybridParams& p, double v) { p.eta0 = v; }},
        {"eta1", [](const HybridParams& p) { return p.eta1; }, [](HybridParams& p, double v) { p.eta1 = v; }},
        {"nu0", [](const HybridParams& p) { return p.nu0; }, [](HybridParams& p, double v) { p.nu0 = v; }},
        {"nu1", [](const HybridParams& p) { return p.nu1; }, [](HybridParams& p, double v) { p.nu1 = v; }},
    };
    return f;
}

const std::vector<Field<FiberParams>>& fiber_fields() {
    static const std::vector<Field<FiberParams>> f{
        {"R_vrc0", [](const FiberParams& p) { return p.R_vrc0; }, [](FiberParams& p, double v) { p.R_vrc0 = v; }},
        {"R_vrc1", [](const FiberParams& p) { return p.R_vrc1; }, [](FiberParams& p, double v) { p.R_vrc1 = v; }},
        {"detector_R0", [](const FiberParams& p) { return p.detector_R[0]; },
         [](FiberParams& p, double v) { p.detector_R[0] = v; }},
        {"detector_R1", [](const FiberParams& p) { return p.detector_R[1]; },
         [](FiberParams& p, double v) { p.detector_R[1] = v; }},
        {"phase_drift", [](const FiberParams& p) { return p.phase_drift; },
         [](FiberParams& p, double v) { p.phase_drift = v; }},
    };
    return f;
}

template <class P>
const std::vector<Field<P>>& fields_of();
template <>
const std::vector<Field<SpecialBsParams>>& fields_of() { return special_fields(); }
template <>
const std::vector<Field<MachZehnderParams>>& fields_of() { return mz_fields(); }
template <>
const std::vector<Field<HybridParams>>& fields_of() { return hybrid_fields(); }
template <>
const std::vector<Field<FiberParams>>& fields_of() { return fiber_fields(); }

template <class P>
const Field<P>& find_field(std::string_view name, std::string_view variant) {
    for (const auto& f : fields_of<P>()) {
        if (name == f.name) return f;
    }
    throw ParameterError(std::string(name), "not a tunable parameter of " + std::string(variant));
}

struct Evaluation {
    double F1 = 0.0;
    double F2 = 0.0;
    double P_succ = 0.0;
    bool ok = false;
};

Evaluation evaluate_equatorial(const ClonerParams& model, const NoiseConfig& noise, std::size_t phase_samples) {
    Evaluation e;
    try {
        validate(model);
        for (std::size_t k = 0; k < phase_samples; ++k) {
            const Qubit in = Qubit::equatorial(2.0 * Qubit::kPi * static_cast<double>(k) /
                                               static_cast<double>(phase_samples));
            const CloneReport r = (noise.overlap_M == 1.0 && !noise.has_jitter()) ? run_model(model, in)
                                                                                   : evaluate(model, noise, in);
            if (r.empty) return {};
            e.F1 += r.F1;
            e.F2 += r.F2;
            e.P_succ += r.P_succ;
        }
    } catch (const std::invalid_argument&) {
        return {};
    }
    const auto n = static_cast<double>(phase_samples);
    e.F1 /= n;
    e.F2 /= n;
    e.P_succ /= n;
    e.ok = true;
    return e;
}

// Minimized internally.
double score(const Evaluation& e, Objective o) {
    if (!e.ok) return kInf;
    return o == Objective::min_fidelity_gap ? std::abs(e.F1 - e.F2) : -0.5 * (e.F1 + e.F2);
}

double reported(double s, Objective o) { return o == Objective::min_fidelity_gap ? s : -s; }

}  // namespace

double solve_ideal_reflectance() {
    // 6R^2 - 6R + 1 = 0
    const double a = 6.0;
    const double b = -6.0;
    const double c = 1.0;
    const double q = -0.5 * (b - std::sqrt(b * b - 4.0 * a * c));
    return q / a;
}

double complementary_reflectance() {
    const double q = -0.5 * (-6.0 - std::sqrt(36.0 - 24.0));
    return 1.0 / q;
}

Bs2Amplitudes Bs2Amplitudes::from_reflectances(double R0, double R1) {
    return {std::sqrt(R0), std::sqrt(1.0 - R0), std::sqrt(R1), std::sqrt(1.0 - R1)};
}

CompensationSolution solve_hybrid_compensation(const Bs2Amplitudes& bs2, double bs1_r) {
    const std::array<std::pair<double, const char*>, 4> amps{
        {{bs2.r0, "r0"}, {bs2.t0, "t0"}, {bs2.r1, "r1"}, {bs2.t1, "t1"}}};
    for (const auto& [v, name] : amps) {
        if (!(v > 0.0 && v <= 1.0)) {
            throw ParameterError(name, "amplitude must lie in (0, 1], got " + std::to_string(v));
        }
    }
    CompensationSolution s;
    s.nu_ratio = bs2.t1 * bs2.r0 / (bs2.t0 * bs2.r1);
    s.eta_ratio = std::sqrt(2.0) * bs2.r0 / bs2.r1;
    if (s.nu_ratio >= 1.0) {
        s.nu0 = 1.0;
        s.nu1 = 1.0 / s.nu_ratio;
    } else {
        s.nu0 = s.nu_ratio;
        s.nu1 = 1.0;
    }
    if (s.eta_ratio >= 1.0) {
        s.eta1 = 1.0;
        s.eta0 = 1.0 / s.eta_ratio;
    } else {
        s.eta1 = s.eta_ratio;
        s.eta0 = 1.0;
    }
    HybridParams& p = s.params;
    p.r = bs1_r;
    p.t = lossless_partner(bs1_r);
    p.r0 = bs2.r0;
    p.t0 = bs2.t0;
    p.r1 = bs2.r1;
    p.t1 = bs2.t1;
    p.eta0 = s.eta0;
    p.eta1 = s.eta1;
    p.nu0 = s.nu0;
    p.nu1 = s.nu1;
    s.predicted = run_hybrid(p, Qubit::equatorial(0.0));
    return s;
}

std::string_view objective_name(Objective o) {
    return o == Objective::min_fidelity_gap ? "min_fidelity_gap" : "max_avg_fidelity";
}

Objective parse_objective(std::string_view name) {
    if (name == "min_fidelity_gap") return Objective::min_fidelity_gap;
    if (name == "max_avg_fidelity") return Objective::max_avg_fidelity;
    throw ParameterError("objective", "unknown objective '" + std::string(name) + "'");
}

std::vector<std::string> parameter_names(const ClonerParams& model) {
    return std::visit(
        [](const auto& p) {
            using P = std::decay_t<decltype(p)>;
            std::vector<std::string> names;
            for (const auto& f : fields_of<P>()) names.emplace_back(f.name);
            return names;
        },
        model);
}

double get_parameter(const ClonerParams& model, std::string_view name) {
    return std::visit(
        [&](const auto& p) {
            using P = std::decay_t<decltype(p)>;
            return find_field<P>(name, variant_name(model)).get(p);
        },
        model);
}

ClonerParams set_parameter(const ClonerParams& model, std::string_view name, double value) {
    return std::visit(
        [&](const auto& p) -> ClonerParams {
            using P = std::decay_t<decltype(p)>;
            P copy = p;
            find_field<P>(name, variant_name(model)).set(copy, value);
            return copy;
        },
        model);
}

OptimizationResult optimize_symmetry(const ClonerParams& model, const std::vector<FreeParameter>& free_parameters,
                                     Objective objective, const NoiseConfig& noise, const OptimizerOptions& options) {
    if (free_parameters.empty()) {
        throw ParameterError("free", "at least one free parameter is required");
    }
    for (const auto& fp : free_parameters) {
        if (!std::isfinite(fp.lo) || !std::isfinite(fp.hi) || fp.lo >= fp.hi) {
            throw ParameterError(fp.name, "empty search interval [" + std::to_string(fp.lo) + ", " +
                                              std::to_string(fp.hi) + "]");
        }
        get_parameter(model, fp.name);  // rejects unknown names
    }
    noise.validate();

    const std::size_t dims = free_parameters.size();
    OptimizationResult result;
    result.objective = objective;

    auto apply = [&](const std::vector<double>& x) {
        ClonerParams p = model;
        for (std::size_t i = 0; i < dims; ++i) p = set_parameter(p, free_parameters[i].name, x[i]);
        return p;
    };
    auto f = [&](const std::vector<double>& x) {
        ++result.evaluations;
        return score(evaluate_equatorial(apply(x), noise, options.phase_samples), objective);
    };

    std::vector<double> best_x(dims);
    for (std::size_t i = 0; i < dims; ++i) {
        best_x[i] = std::clamp(get_parameter(model, free_parameters[i].name), free_parameters[i].lo,
                               free_parameters[i].hi);
    }
    double best = f(best_x);

    auto finish = [&](const std::vector<double>& x, double grid_best) {
        result.params = apply(x);
        const Evaluation e = evaluate_equatorial(result.params, noise, options.phase_samples);
        result.F1 = e.F1;
        result.F2 = e.F2;
        result.P_succ = e.P_succ;
        result.objective_value = reported(score(e, objective), objective);
        result.best_grid_value = reported(grid_best, objective);
        return result;
    };

    // symmetric to working precision already
    if (objective == Objective::min_fidelity_gap && best <= kConstructionTol) {
        return finish(best_x, best);
    }

    const auto per_dim = static_cast<std::size_t>(
        std::clamp(std::floor(std::pow(static_cast<double>(options.grid_budget), 1.0 / static_cast<double>(dims))),
                   2.0, 101.0));
    std::vector<double> step(dims);
    for (std::size_t i = 0; i < dims; ++i) {
        step[i] = (free_parameters[i].hi - free_parameters[i].lo) / static_cast<double>(per_dim - 1);
    }

    double grid_best = kInf;
    std::vector<std::size_t> idx(dims, 0);
    std::vector<double> x(dims);
    for (bool more = true; more;) {
        for (std::size_t i = 0; i < dims; ++i) {
            x[i] = free_parameters[i].lo + step[i] * static_cast<double>(idx[i]);
        }
        const double v = f(x);
        grid_best = std::min(grid_best, v);
        if (v < best) {
            best = v;
            best_x = x;
        }
        more = false;
        for (std::size_t i = 0; i < dims; ++i) {
            if (++idx[i] < per_dim) {
                more = true;
                break;
            }
            idx[i] = 0;
        }
    }

    // compass search with step halving
    auto converged = [&] {
        for (std::size_t i = 0; i < dims; ++i) {
            const double width = free_parameters[i].hi - free_parameters[i].lo;
            if (step[i] > options.step_tolerance * std::max(width, 1e-300)) return false;
        }
        return true;
    };
    while (!converged() && result.evaluations < options.max_evaluations) {
        bool improved = false;
        for (std::size_t i = 0; i < dims; ++i) {
            for (double dir : {-1.0, 1.0}) {
                std::vector<double> cand = best_x;
                cand[i] = std::clamp(cand[i] + dir * step[i], free_parameters[i].lo, free_parameters[i].hi);
                if (cand[i] == best_x[i]) continue;
                const double v = f(cand);
                if (v < best) {
                    best = v;
                    best_x = cand;
                    improved = true;
                }
            }
        }
        if (!improved) {
            for (auto& s : step) s *= 0.5;
        }
    }
    return finish(best_x, grid_best);
}

}  // namespace clonesim
