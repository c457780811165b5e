#include <cmath>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "clonesim/fock.hpp"
#include "clonesim/qubit.hpp"

using namespace clonesim;

namespace {

Mode m(Port p, Rail r, Temporal t = Temporal::principal) { return Mode{p, r, t}; }

const Mode a0 = m(Port::out1, Rail::r0);
const Mode b0 = m(Port::out2, Rail::r0);

double coincidence_probability(const StateVector& s) {
    double p = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 4; j < 8; ++j) p += std::norm(s.amplitude(Mode::from_index(i), Mode::from_index(j)));
    }
    return p;
}

double port_probability(const StateVector& s, Port port) {
    double p = 0.0;
    const std::size_t lo = port == Port::out1 ? 0 : 4;
    for (std::size_t i = lo; i < lo + 4; ++i) {
        for (std::size_t j = i; j < lo + 4; ++j) p += std::norm(s.amplitude(Mode::from_index(i), Mode::from_index(j)));
    }
    return p;
}

ModeFunction random_mode(std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    ModeFunction f;
    for (int i = 0; i < 8; ++i) f(i) = Complex(g(rng), g(rng));
    return f / f.norm();
}

}  // namespace

TEST(Basis, Sizes) {
    EXPECT_EQ(enumerate_basis(2, 4).size(), 10u);
    EXPECT_EQ(enumerate_basis(2, 8).size(), 36u);
}

TEST(Basis, TwoModes) {
    auto b = enumerate_basis(2, 2);
    ASSERT_EQ(b.size(), 3u);
    EXPECT_EQ(b[0].occupations, (std::vector<int>{2, 0}));
    EXPECT_EQ(b[1].occupations, (std::vector<int>{1, 1}));
    EXPECT_EQ(b[2].occupations, (std::vector<int>{0, 2}));
}

TEST(Basis, CanonicalAndDuplicateFree) {
    auto b = enumerate_basis(2, 8);
    std::set<std::vector<int>> seen;
    for (const auto& s : b) {
        EXPECT_EQ(s.total(), 2);
        EXPECT_TRUE(seen.insert(s.occupations).second);
    }
    EXPECT_EQ(b, enumerate_basis(2, 8));
    for (std::size_t k = 0; k < StateVector::dimension; ++k) {
        auto [i, j] = StateVector::basis_modes(k);
        EXPECT_EQ(StateVector::basis_index(i, j), k);
        if (i == j) {
            EXPECT_EQ(b[k].occupations[i], 2);
        } else {
            EXPECT_EQ(b[k].occupations[i], 1);
            EXPECT_EQ(b[k].occupations[j], 1);
        }
    }
}

TEST(Basis, RejectsOtherPhotonNumbers) {
    EXPECT_THROW(enumerate_basis(3, 8), std::invalid_argument);
    EXPECT_THROW(enumerate_basis(1, 4), std::invalid_argument);
}

TEST(Mode, IndexRoundTrip) {
    for (std::size_t i = 0; i < Mode::count; ++i) EXPECT_EQ(Mode::from_index(i).index(), i);
    EXPECT_EQ(m(Port::out2, Rail::r1, Temporal::orthogonal).index(), 7u);
}

TEST(Coupler, SinglePhotonReflectance) {
    // one photon in a, the other parked on an untouched mode
    const Mode spare = m(Port::out2, Rail::r1);
    auto s = StateVector::two_photon(unit_mode(a0), unit_mode(spare));
    const double r = std::sqrt(0.789);
    auto out = apply_two_mode_coupler(s, a0, b0, r, std::sqrt(1 - 0.789));
    EXPECT_NEAR(std::norm(out.amplitude(a0, spare)), 0.789, 1e-12);
    EXPECT_NEAR(std::norm(out.amplitude(b0, spare)), 0.211, 1e-12);
}

TEST(Coupler, HongOuMandelBunching) {
    auto s = StateVector::two_photon(unit_mode(a0), unit_mode(b0));
    auto out = apply_two_mode_coupler(s, a0, b0, M_SQRT1_2, M_SQRT1_2);
    EXPECT_LT(std::abs(out.amplitude(a0, b0)), 1e-15);
    EXPECT_NEAR(std::norm(out.amplitude(a0, a0)), 0.5, 1e-12);
    EXPECT_NEAR(std::norm(out.amplitude(b0, b0)), 0.5, 1e-12);
}

TEST(Coupler, DistinguishablePhotonsHalfCoincidence) {
    const Mode b0o = m(Port::out2, Rail::r0, Temporal::orthogonal);
    const Mode a0o = m(Port::out1, Rail::r0, Temporal::orthogonal);
    auto s = StateVector::two_photon(unit_mode(a0), unit_mode(b0o));
    s = apply_two_mode_coupler(s, a0, b0, M_SQRT1_2, M_SQRT1_2);
    s = apply_two_mode_coupler(s, a0o, b0o, M_SQRT1_2, M_SQRT1_2);
    EXPECT_NEAR(coincidence_probability(s), 0.5, 1e-12);
}

TEST(Coupler, SignConvention) {
    auto s = StateVector::two_photon(unit_mode(b0), unit_mode(m(Port::out1, Rail::r1)));
    auto out = apply_two_mode_coupler(s, a0, b0, 0.6, 0.8);
    const Mode other = m(Port::out1, Rail::r1);
    EXPECT_NEAR(out.amplitude(b0, other).real(), 0.6, 1e-14);
    EXPECT_NEAR(out.amplitude(a0, other).real(), -0.8, 1e-14);
}

TEST(Coupler, RejectsNonUnitaryAndSameMode) {
    auto s = StateVector::two_photon(unit_mode(a0), unit_mode(b0));
    EXPECT_THROW(apply_two_mode_coupler(s, a0, b0, 0.7, 0.7), std::invalid_argument);
    EXPECT_THROW(apply_two_mode_coupler(s, a0, a0, 1.0, 0.0), std::invalid_argument);
}

TEST(Coupler, UnitarityAndInverse) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> angle(0.0, 2 * M_PI);
    std::uniform_int_distribution<int> pick(0, 7);
    for (int trial = 0; trial < 20; ++trial) {
        auto s = StateVector::two_photon(random_mode(rng), random_mode(rng));
        auto start = s;
        std::vector<std::tuple<Mode, Mode, double>> ops;
        for (int k = 0; k < 12; ++k) {
            Mode x = Mode::from_index(pick(rng)), y = Mode::from_index(pick(rng));
            if (x == y) continue;
            double th = angle(rng);
            s = apply_two_mode_coupler(s, x, y, std::cos(th), std::sin(th));
            ops.emplace_back(x, y, th);
            EXPECT_NEAR(s.norm_squared(), 1.0, 1e-10);
        }
        for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
            auto [x, y, th] = *it;
            s = apply_two_mode_coupler(s, x, y, std::cos(th), -std::sin(th));
        }
        for (std::size_t k = 0; k < StateVector::dimension; ++k) {
            EXPECT_NEAR(std::abs(s.amplitudes()[k] - start.amplitudes()[k]), 0.0, 1e-10);
        }
    }
}

TEST(Coupler, ProbabilityCompleteness) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        auto s = StateVector::two_photon(random_mode(rng), random_mode(rng));
        double total = coincidence_probability(s) + port_probability(s, Port::out1) + port_probability(s, Port::out2);
        EXPECT_NEAR(total, 1.0, 1e-10);
    }
}

TEST(Attenuator, Examples) {
    auto s = StateVector::two_photon(unit_mode(a0), unit_mode(b0));
    auto same = apply_attenuator(s, a0, 1.0);
    EXPECT_EQ(same.amplitudes(), s.amplitudes());
    EXPECT_EQ(apply_attenuator(s, a0, 0.0).norm_squared(), 0.0);

    auto bunched = StateVector::two_photon(unit_mode(a0), unit_mode(a0));
    auto half = apply_attenuator(bunched, a0, M_SQRT1_2);
    EXPECT_NEAR(std::abs(half.amplitude(a0, a0)), 0.5, 1e-15);
    EXPECT_THROW(apply_attenuator(s, a0, 1.1), std::invalid_argument);
    EXPECT_THROW(apply_attenuator(s, a0, -0.1), std::invalid_argument);
}

TEST(Attenuator, NeverGainsNorm) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        auto s = StateVector::two_photon(random_mode(rng), random_mode(rng));
        for (int k = 0; k < 8; ++k) {
            double before = s.norm_squared();
            s = apply_attenuator(s, Mode::from_index(k), u(rng));
            EXPECT_LE(s.norm_squared(), before + 1e-12);
        }
    }
}

TEST(Postselect, BunchedGivesEmpty) {
    auto s = StateVector::two_photon(unit_mode(a0), unit_mode(b0));
    s = apply_two_mode_coupler(s, a0, b0, M_SQRT1_2, M_SQRT1_2);
    auto sel = postselect_coincidence(s);
    EXPECT_TRUE(sel.empty());
    EXPECT_EQ(sel.probability, 0.0);
}

TEST(Postselect, ProductStateIsKept) {
    auto s = StateVector::two_photon(unit_mode(m(Port::out1, Rail::r1)), unit_mode(b0));
    auto sel = postselect_coincidence(s);
    ASSERT_FALSE(sel.empty());
    EXPECT_NEAR(sel.probability, 1.0, 1e-14);
    auto rho = sel.state.density();
    EXPECT_NEAR(rho(2, 2).real(), 1.0, 1e-14);  // |1 0>
}

TEST(Postselect, TemporalBinsAddIncoherently) {
    const Mode a1 = m(Port::out1, Rail::r1);
    const Mode b0o = m(Port::out2, Rail::r0, Temporal::orthogonal);
    ModeFunction signal = (unit_mode(a0) + unit_mode(a1)) / std::sqrt(2.0);
    ModeFunction ancilla = (unit_mode(b0) + unit_mode(b0o)) / std::sqrt(2.0);
    auto sel = postselect_coincidence(StateVector::two_photon(signal, ancilla));
    EXPECT_NEAR(sel.probability, 1.0, 1e-12);
    EXPECT_NEAR(sel.state.total_weight(), 1.0, 1e-12);
    auto rho = sel.state.density();
    EXPECT_NEAR(rho.trace().real(), 1.0, 1e-12);
}

TEST(Reduce, ProductState) {
    Qubit psi(1.1, 0.4), chi(2.0, 5.0);
    Eigen::Vector4cd ket;
    auto p = psi.ket(), c = chi.ket();
    ket << p(0) * c(0), p(0) * c(1), p(1) * c(0), p(1) * c(1);
    auto rho1 = reduced_qubit(TwoQubitState::pure(ket), Port::out1);
    EXPECT_NEAR(fidelity(rho1, psi), 1.0, 1e-12);
    auto rho2 = reduced_qubit(TwoQubitState::pure(ket), Port::out2);
    EXPECT_NEAR(fidelity(rho2, chi), 1.0, 1e-12);
}

TEST(Reduce, SingletIsMaximallyMixed) {
    Eigen::Vector4cd ket(0, M_SQRT1_2, -M_SQRT1_2, 0);
    auto rho = reduced_qubit(TwoQubitState::pure(ket), Port::out1);
    EXPECT_NEAR((rho.entries() - Eigen::Matrix2cd::Identity() / 2.0).norm(), 0.0, 1e-14);
}

TEST(Reduce, IdealCloneState) {
    Eigen::Vector4cd ket(M_SQRT1_2, 0.5, 0.5, 0);
    // equatorial input applied through the map |0>->|00>, |1>->(|01>+|10>)/sqrt2
    const double phi = 0.7;
    Eigen::Vector4cd out(M_SQRT1_2, 0.5 * std::polar(1.0, phi), 0.5 * std::polar(1.0, phi), 0);
    out /= out.norm();
    auto rho = reduced_qubit(TwoQubitState::pure(out), Port::out1);
    EXPECT_NEAR(fidelity(rho, Qubit::equatorial(phi)), 0.853553, 1e-6);
    Eigen::Matrix4cd unnormalized = 4.0 * ket * ket.adjoint();
    EXPECT_THROW(reduced_qubit(unnormalized, Port::out1), std::invalid_argument);
}

TEST(Reduce, AlwaysValidDensity) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        auto s = StateVector::two_photon(random_mode(rng), random_mode(rng));
        auto sel = postselect_coincidence(s);
        ASSERT_FALSE(sel.empty());
        for (Port p : {Port::out1, Port::out2}) {
            auto rho = reduced_qubit(sel.state, p);
            EXPECT_TRUE(DensityMatrix::is_valid(rho.entries()));
        }
    }
}

TEST(Fidelity, Examples) {
    Qubit psi(0.9, 2.2);
    EXPECT_NEAR(fidelity(DensityMatrix::pure(psi.ket()), psi), 1.0, 1e-14);
    EXPECT_NEAR(fidelity(DensityMatrix::maximally_mixed(), psi), 0.5, 1e-14);
    EXPECT_NEAR(fidelity(DensityMatrix::pure(psi.orthogonal().ket()), psi), 0.0, 1e-14);
}

TEST(Phase, ShiftOnlyChangesPhase) {
    const Mode a1 = m(Port::out1, Rail::r1);
    auto s = StateVector::two_photon(unit_mode(a1), unit_mode(b0));
    auto out = apply_phase_shift(s, a1, 0.3);
    EXPECT_NEAR(std::arg(out.amplitude(a1, b0)) - std::arg(s.amplitude(a1, b0)), 0.3, 1e-14);
    EXPECT_NEAR(out.norm_squared(), 1.0, 1e-14);
}
