#include <cmath>

#include <gtest/gtest.h>

#include "clonesim/counting.hpp"

using namespace clonesim;

namespace {

const double kFpc = 0.5 * (1.0 + 1.0 / std::sqrt(2.0));

// Projection of 0.7071|00> + 0.5(|10> + |01>) onto {psi, psi_perp}^2 at phi = 0.
PatternProbabilities hand_distribution() {
    const double s = M_SQRT1_2;
    Eigen::Vector4d k(s, 0.5, 0.5, 0.0);
    Eigen::Vector2d p(s, s), q(s, -s);
    auto amp = [&](const Eigen::Vector2d& x, const Eigen::Vector2d& y) {
        Eigen::Vector4d xy(x(0) * y(0), x(0) * y(1), x(1) * y(0), x(1) * y(1));
        double a = xy.dot(k);
        return a * a;
    };
    return {amp(p, p), amp(p, q), amp(q, p), amp(q, q)};
}

CoincidenceRecord rec(std::uint64_t pp, std::uint64_t pm, std::uint64_t mp, std::uint64_t mm, std::uint64_t n = 0) {
    CoincidenceRecord r;
    r.c_pp = pp, r.c_pm = pm, r.c_mp = mp, r.c_mm = mm;
    r.n_pairs = n ? n : pp + pm + mp + mm;
    return r;
}

MeasurementSetup ideal_setup(std::uint64_t n, std::uint64_t seed) {
    return {ideal_special_bs(), NoiseConfig{}, Qubit::equatorial(0.0), n, seed, 4};
}

}  // namespace

TEST(Outcome, IdealMatchedAnalysis) {
    auto d = outcome_distribution(run_special_bs(ideal_special_bs(), Qubit::equatorial(0.0)), Qubit::equatorial(0.0));
    auto h = hand_distribution();
    for (int k = 0; k < 4; ++k) EXPECT_NEAR(d[k], h[k], 1e-12);
    EXPECT_NEAR(d[0], 0.728553, 1e-6);
    EXPECT_NEAR(d[1], 0.125, 1e-12);
    EXPECT_NEAR(d[2], 0.125, 1e-12);
    EXPECT_NEAR(d[3], 0.021447, 1e-6);
}

TEST(Outcome, ProductAndMixed) {
    Qubit psi(1.0, 2.0);
    auto k = psi.ket();
    Eigen::Vector4cd prod(k(0) * k(0), k(0) * k(1), k(1) * k(0), k(1) * k(1));
    auto d = outcome_distribution(Eigen::Matrix4cd(prod * prod.adjoint()), psi);
    EXPECT_NEAR(d[0], 1.0, 1e-12);
    EXPECT_NEAR(d[1] + d[2] + d[3], 0.0, 1e-12);
    auto u = outcome_distribution(Eigen::Matrix4cd(Eigen::Matrix4cd::Identity() / 4.0), psi);
    for (double p : u) EXPECT_NEAR(p, 0.25, 1e-12);
}

TEST(Outcome, SumsToOne) {
    for (const ClonerParams& m : std::vector<ClonerParams>{ideal_special_bs(), ideal_hybrid(), ideal_fiber()}) {
        for (double th : {0.3, 1.2, 2.9}) {
            auto d = model_outcome_distribution(m, 0.9, Qubit(th, 0.4));
            EXPECT_NEAR(d[0] + d[1] + d[2] + d[3], 1.0, 1e-10);
            for (double p : d) EXPECT_GE(p, -1e-12);
        }
    }
}

TEST(Estimator, Examples) {
    auto a = fidelity_from_counts(rec(100, 0, 0, 0));
    ASSERT_TRUE(a);
    EXPECT_EQ(a->F1, 1.0);
    EXPECT_EQ(a->F2, 1.0);
    auto b = fidelity_from_counts(rec(0, 0, 0, 100));
    EXPECT_EQ(b->F1, 0.0);
    EXPECT_EQ(b->F2, 0.0);
    auto c = fidelity_from_counts(rec(728, 125, 125, 22));
    EXPECT_NEAR(c->F1, 0.853, 1e-12);
    EXPECT_NEAR(c->F2, 0.853, 1e-12);
    EXPECT_FALSE(fidelity_from_counts(rec(0, 0, 0, 0, 10)));
}

TEST(Estimator, UnbiasedInExpectation) {
    auto h = hand_distribution();
    EXPECT_NEAR(h[0] + h[1], kFpc, 1e-12);
    EXPECT_NEAR(h[0] + h[2], kFpc, 1e-12);
}

TEST(SuccessEstimate, Examples) {
    EXPECT_NEAR(success_probability_estimate(rec(333333, 0, 0, 0, 1000000)), 0.3333, 1e-4);
    EXPECT_EQ(success_probability_estimate(rec(0, 0, 0, 0, 10)), 0.0);
    auto r = simulate_counts(ideal_hybrid(), {}, Qubit::equatorial(0.0), 1000000, {}, 5, 4);
    const double P = 1.0 / 16.0;
    EXPECT_NEAR(success_probability_estimate(r), P, 3 * std::sqrt(P * (1 - P) / 1e6));
}

TEST(Simulate, SingleTrialAndZero) {
    for (std::uint64_t s = 0; s < 20; ++s) {
        auto r = simulate_counts(ideal_special_bs(), {}, Qubit::equatorial(0.0), 1, {}, s);
        EXPECT_LE(r.c_sum(), 1u);
        EXPECT_EQ(r.n_pairs, 1u);
    }
    EXPECT_THROW(simulate_counts(ideal_special_bs(), {}, Qubit::equatorial(0.0), 0, {}, 1), ParameterError);
}

TEST(Simulate, DeterministicAcrossWorkers) {
    auto a = simulate_counts(ideal_special_bs(), {}, Qubit::equatorial(0.5), 300000, {}, 77, 1);
    auto b = simulate_counts(ideal_special_bs(), {}, Qubit::equatorial(0.5), 300000, {}, 77, 7);
    auto c = simulate_counts(ideal_special_bs(), {}, Qubit::equatorial(0.5), 300000, {}, 77, 3);
    EXPECT_EQ(a, b);
    EXPECT_EQ(a, c);
    auto d = simulate_counts(ideal_special_bs(), {}, Qubit::equatorial(0.5), 300000, {}, 78, 1);
    EXPECT_NE(a, d);
}

TEST(Simulate, SuccessRateMatches) {
    auto r = simulate_counts(ideal_special_bs(), {}, Qubit::equatorial(0.0), 1000000, {}, 11, 4);
    const double P = 1.0 / 3.0;
    EXPECT_NEAR(success_probability_estimate(r), P, 3 * std::sqrt(P * (1 - P) / 1e6));
    EXPECT_LE(r.c_sum(), r.n_pairs);
}

TEST(Simulate, EstimatorWithinThreeSigma) {
    auto r = simulate_counts(ideal_special_bs(), {}, Qubit::equatorial(0.0), 1000000, {}, 2024, 4);
    auto e = fidelity_from_counts(r);
    ASSERT_TRUE(e);
    double sigma = binomial_sigma(kFpc, r.c_sum());
    EXPECT_NEAR(sigma, 6.1e-4, 0.1e-4);
    EXPECT_LT(std::abs(e->F1 - kFpc), 3 * sigma);
    EXPECT_LT(std::abs(e->F2 - kFpc), 3 * sigma);
}

TEST(Simulate, JitterIsDeterministic) {
    NoiseConfig n;
    n.phase_jitter_sigma = 0.05;
    n.jitter_reset_period = 1000;
    auto a = simulate_counts(ideal_mach_zehnder(), n, Qubit::equatorial(0.0), 100000, {}, 3, 1);
    auto b = simulate_counts(ideal_mach_zehnder(), n, Qubit::equatorial(0.0), 100000, {}, 3, 4);
    EXPECT_EQ(a, b);
}

TEST(Record, MergeIsAssociativeAndCommutative) {
    auto a = rec(1, 2, 3, 4, 20), b = rec(5, 6, 7, 8, 40), c = rec(9, 10, 11, 12, 60);
    auto ab_c = a;
    ab_c += b;
    ab_c += c;
    auto bc = b;
    bc += c;
    auto a_bc = a;
    a_bc += bc;
    EXPECT_EQ(ab_c, a_bc);
    auto ba = b;
    ba += a;
    auto ab = a;
    ab += b;
    ab.seed = ba.seed;
    EXPECT_EQ(ab, ba);
    EXPECT_EQ(ab_c.n_pairs, 120u);
}

TEST(Detectors, Validation) {
    DetectorBank d{1.0, 1.2, 1.0, 1.0};
    EXPECT_THROW(d.validate(), ParameterError);
    DetectorBank z{1.0, 0.0, 1.0, 1.0};
    EXPECT_THROW(balance_rescale(rec(1, 1, 1, 1), z), ParameterError);
}

TEST(Balance, UncompensatedBias) {
    DetectorBank det{1.0, 1.0, 0.8, 1.0};
    auto h = hand_distribution();
    std::array<double, 4> w{h[0] * 0.8, h[1] * 1.0, h[2] * 0.8, h[3] * 1.0};
    double F2_biased = (w[0] + w[2]) / (w[0] + w[1] + w[2] + w[3]);
    EXPECT_NEAR(w[0], 0.5829, 1e-4);
    EXPECT_NEAR(F2_biased, 0.823, 1e-3);

    auto r = simulate_counts(ideal_special_bs(), {}, Qubit::equatorial(0.0), 1000000, det, 31, 4);
    auto e = fidelity_from_counts(r);
    EXPECT_LT(std::abs(e->F2 - F2_biased), 4 * binomial_sigma(F2_biased, r.c_sum()));
    EXPECT_GT(std::abs(e->F2 - kFpc), 10 * binomial_sigma(kFpc, r.c_sum()));
}

TEST(Balance, AllMethodsRestore) {
    DetectorBank det{1.0, 1.0, 0.8, 1.0};
    auto setup = ideal_setup(1000000, 31);
    for (BalanceMethod m : {BalanceMethod::rescale, BalanceMethod::add_loss, BalanceMethod::basis_swap}) {
        auto e = balance_detectors(m, setup, det);
        ASSERT_TRUE(e) << balance_method_name(m);
        double sigma = binomial_sigma(kFpc, e->c_sum);
        EXPECT_LT(std::abs(e->F1 - kFpc), 4 * sigma) << balance_method_name(m);
        EXPECT_LT(std::abs(e->F2 - kFpc), 4 * sigma) << balance_method_name(m);
    }
}

TEST(Balance, EqualEfficienciesAreNoOp) {
    DetectorBank det = DetectorBank::uniform(0.7);
    auto setup = ideal_setup(400000, 8);
    auto raw = simulate_counts(setup.model, setup.noise, setup.input, setup.n_pairs, det, setup.seed, setup.workers);
    auto plain = fidelity_from_counts(raw);
    auto rs = balance_rescale(raw, det);
    EXPECT_NEAR(rs->F1, plain->F1, 1e-15);
    EXPECT_NEAR(rs->F2, plain->F2, 1e-15);
    auto al = balance_add_loss(setup, det);
    EXPECT_EQ(al->F1, plain->F1);
    EXPECT_EQ(al->F2, plain->F2);
    auto bs = balance_basis_swap(setup, det);
    double sigma = binomial_sigma(kFpc, bs->c_sum);
    EXPECT_LT(std::abs(bs->F1 - plain->F1), 4 * sigma);
}

TEST(Balance, MethodsAgreePairwise) {
    const std::vector<DetectorBank> banks{{0.5, 0.9, 0.7, 1.0}, {1.0, 0.6, 0.55, 0.8}, {0.9, 0.9, 0.5, 0.5}};
    for (std::size_t i = 0; i < banks.size(); ++i) {
        auto setup = ideal_setup(1000000, 100 + i);
        std::vector<FidelityEstimate> est;
        for (BalanceMethod m : {BalanceMethod::rescale, BalanceMethod::add_loss, BalanceMethod::basis_swap}) {
            est.push_back(*balance_detectors(m, setup, banks[i]));
        }
        for (std::size_t a = 0; a < 3; ++a) {
            for (std::size_t b = a + 1; b < 3; ++b) {
                double s = std::hypot(binomial_sigma(kFpc, est[a].c_sum), binomial_sigma(kFpc, est[b].c_sum));
                EXPECT_LT(std::abs(est[a].F1 - est[b].F1), 4 * s);
                EXPECT_LT(std::abs(est[a].F2 - est[b].F2), 4 * s);
            }
        }
    }
}

TEST(Balance, MethodNames) {
    for (BalanceMethod m : {BalanceMethod::rescale, BalanceMethod::add_loss, BalanceMethod::basis_swap}) {
        EXPECT_EQ(parse_balance_method(balance_method_name(m)), m);
    }
    EXPECT_THROW(parse_balance_method("magic"), ParameterError);
}
