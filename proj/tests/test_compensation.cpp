#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "clonesim/compensation.hpp"

using namespace clonesim;

TEST(Reflectance, Root) {
    double R0 = solve_ideal_reflectance();
    EXPECT_NEAR(R0, 0.7886751346, 1e-10);
    EXPECT_NEAR(R0, 0.5 * (1 + 1 / std::sqrt(3.0)), 1e-15);
    EXPECT_NEAR(6 * R0 * R0 - 6 * R0 + 1, 0.0, 1e-14);
    EXPECT_NEAR(complementary_reflectance(), 0.2113248654, 1e-10);
    EXPECT_NEAR((2 * R0 - 1) * (2 * R0 - 1), 1.0 / 3.0, 1e-12);
}

TEST(Reflectance, Constraints) {
    double R0 = solve_ideal_reflectance(), R1 = complementary_reflectance();
    auto a = Bs2Amplitudes::from_reflectances(R0, R1);
    double t1 = -std::sqrt(1 - R1);
    EXPECT_NEAR(a.r0 * a.r1, -a.t0 * t1, 1e-12);
    EXPECT_NEAR(a.r0 * a.r0 - a.t0 * a.t0, std::sqrt(2.0) * a.r0 * a.r1, 1e-12);
}

TEST(HybridCompensation, Balanced) {
    auto s = solve_hybrid_compensation({M_SQRT1_2, M_SQRT1_2, M_SQRT1_2, M_SQRT1_2});
    EXPECT_NEAR(s.nu_ratio, 1.0, 1e-12);
    EXPECT_NEAR(s.eta_ratio, std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(s.eta1, 1.0, 1e-15);
    EXPECT_NEAR(s.eta0, M_SQRT1_2, 1e-12);
    EXPECT_NEAR(s.predicted.P_succ, 1.0 / 16.0, 1e-12);
    EXPECT_NEAR(s.predicted.F1, 0.8535533906, 1e-10);
}

TEST(HybridCompensation, Unbalanced5248) {
    auto bs2 = Bs2Amplitudes::from_reflectances(0.52, 0.48);
    EXPECT_NEAR(bs2.t0 * bs2.t0, 0.48, 1e-12);
    EXPECT_NEAR(bs2.t1 * bs2.t1, 0.52, 1e-12);
    auto s = solve_hybrid_compensation(bs2);
    EXPECT_NEAR(s.nu_ratio, 0.52 / 0.48, 1e-12);
    EXPECT_NEAR(s.nu_ratio, 1.08333, 1e-5);
    EXPECT_NEAR(s.eta_ratio, std::sqrt(2.0) * std::sqrt(0.52 / 0.48), 1e-12);
    EXPECT_NEAR(s.eta_ratio, 1.47196, 1e-5);
    EXPECT_NEAR(std::max(s.nu0, s.nu1), 1.0, 1e-15);
    EXPECT_NEAR(std::max(s.eta0, s.eta1), 1.0, 1e-15);
    EXPECT_NEAR(s.nu0 / s.nu1, s.nu_ratio, 1e-12);
    EXPECT_NEAR(s.eta1 / s.eta0, s.eta_ratio, 1e-12);
    EXPECT_LT(std::abs(s.predicted.F1 - s.predicted.F2), 1e-10);
}

TEST(HybridCompensation, RandomSymmetric) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.6, 0.8);
    for (int i = 0; i < 20; ++i) {
        double r0 = u(rng), r1 = u(rng);
        Bs2Amplitudes a{r0, std::sqrt(1 - r0 * r0), r1, std::sqrt(1 - r1 * r1)};
        auto s = solve_hybrid_compensation(a);
        for (double phi : {0.0, 1.0, 2.0, 3.0}) {
            auto rep = run_hybrid(s.params, Qubit::equatorial(phi));
            EXPECT_LT(std::abs(rep.F1 - rep.F2), 1e-10);
        }
        for (double v : {s.eta0, s.eta1, s.nu0, s.nu1}) {
            EXPECT_GE(v, 0.0);
            EXPECT_LE(v, 1.0);
        }
    }
}

TEST(HybridCompensation, RejectsZero) {
    EXPECT_THROW(solve_hybrid_compensation({0.0, 1.0, 0.7, 0.7}), ParameterError);
    EXPECT_THROW(solve_hybrid_compensation({0.7, 0.7, 1.2, 0.7}), ParameterError);
}

TEST(Registry, RoundTrip) {
    ClonerParams m = ideal_hybrid();
    for (const auto& n : parameter_names(m)) {
        auto m2 = set_parameter(m, n, 0.5);
        EXPECT_DOUBLE_EQ(get_parameter(m2, n), 0.5);
    }
    EXPECT_THROW(get_parameter(m, "R0"), ParameterError);
}

TEST(Optimizer, RemovesAsymmetryWithPlate) {
    SpecialBsParams p;
    p.R0 = 0.80;
    p.R1 = 0.25;
    auto before = run_special_bs(p, Qubit::equatorial(0.0));
    ASSERT_GT(std::abs(before.F1 - before.F2), 1e-3);
    auto res = optimize_symmetry(p, {{"plate1", 0.0, 1.0}}, Objective::min_fidelity_gap);
    EXPECT_LT(res.objective_value, 1e-6);
    EXPECT_LT(std::abs(res.F1 - res.F2), 1e-6);
    EXPECT_LT(res.P_succ, before.P_succ);
    EXPECT_LE(res.objective_value, res.best_grid_value);
    // |10> carries the plate; symmetry needs plate1 * r0 r1 = |t0 t1|
    double expected = std::sqrt(0.2 * 0.75) / std::sqrt(0.8 * 0.25);
    EXPECT_NEAR(get_parameter(res.params, "plate1"), expected, 1e-6);
}

TEST(Optimizer, AlreadySymmetricUnchanged) {
    ClonerParams m = ideal_special_bs();
    auto res = optimize_symmetry(m, {{"R0", 0.6, 0.95}}, Objective::min_fidelity_gap);
    EXPECT_NEAR(get_parameter(res.params, "R0"), get_parameter(m, "R0"), 1e-6);
    EXPECT_LT(res.objective_value, 1e-6);
}

TEST(Optimizer, MaxAverageFindsOptimalReflectance) {
    ClonerParams m = ideal_special_bs();
    auto res = optimize_symmetry(m, {{"R0", 0.5, 1.0}}, Objective::max_avg_fidelity);
    EXPECT_NEAR(get_parameter(res.params, "R0"), 0.788675, 1e-4);
    EXPECT_NEAR(res.objective_value, 0.8535533906, 1e-6);
    // brute 1e-6 scan of the closed form
    double best = 0.0, arg = 0.0;
    for (int i = 0; i <= 100000; ++i) {
        double R = 0.75 + i * 1e-6;
        double a = 2 * R - 1, b = std::sqrt(R * (1 - R));
        double F = 0.5 + a * b / (a * a + 2 * b * b);
        if (F > best) best = F, arg = R;
    }
    EXPECT_NEAR(get_parameter(res.params, "R0"), arg, 1e-4);
    EXPECT_GE(res.objective_value, res.best_grid_value);
}

TEST(Optimizer, HybridPlates) {
    HybridParams h = ideal_hybrid();
    h.r0 = std::sqrt(0.52), h.t0 = std::sqrt(0.48);
    h.r1 = std::sqrt(0.48), h.t1 = std::sqrt(0.52);
    auto res = optimize_symmetry(h, {{"nu1", 0.5, 1.0}}, Objective::min_fidelity_gap);
    EXPECT_LT(res.objective_value, 1e-6);
    EXPECT_NEAR(get_parameter(res.params, "nu1"), 0.48 / 0.52, 1e-5);
}

TEST(Optimizer, Deterministic) {
    SpecialBsParams p;
    p.R0 = 0.8;
    p.R1 = 0.25;
    auto a = optimize_symmetry(p, {{"plate1", 0.0, 1.0}, {"plate0", 0.5, 1.0}}, Objective::min_fidelity_gap);
    auto b = optimize_symmetry(p, {{"plate1", 0.0, 1.0}, {"plate0", 0.5, 1.0}}, Objective::min_fidelity_gap);
    EXPECT_EQ(a.objective_value, b.objective_value);
    EXPECT_EQ(get_parameter(a.params, "plate1"), get_parameter(b.params, "plate1"));
}

TEST(Optimizer, Rejections) {
    ClonerParams m = ideal_special_bs();
    EXPECT_THROW(optimize_symmetry(m, {{"R0", 0.7, 0.7}}, Objective::min_fidelity_gap), ParameterError);
    EXPECT_THROW(optimize_symmetry(m, {{"R0", 0.9, 0.7}}, Objective::min_fidelity_gap), ParameterError);
    EXPECT_THROW(optimize_symmetry(m, {}, Objective::min_fidelity_gap), ParameterError);
    EXPECT_THROW(optimize_symmetry(m, {{"eta0", 0.1, 0.7}}, Objective::min_fidelity_gap), ParameterError);
    EXPECT_EQ(parse_objective(objective_name(Objective::max_avg_fidelity)), Objective::max_avg_fidelity);
}
