#include "clonesim/qubit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace clonesim {

Qubit::Qubit(double theta, double phi) {
    if (!std::isfinite(theta) || !std::isfinite(phi)) {
        throw std::invalid_argument("Qubit: angles must be finite");
    }
    if (theta < -kConstructionTol || theta > kPi + kConstructionTol) {
        throw std::invalid_argument("Qubit: theta must lie in [0, pi], got " + std::to_string(theta));
    }
    theta_ = std::clamp(theta, 0.0, kPi);
    phi_ = std::fmod(phi, 2.0 * kPi);
    if (phi_ < 0.0) phi_ += 2.0 * kPi;
    if (phi_ >= 2.0 * kPi) phi_ = 0.0;
}

Eigen::Vector2cd Qubit::ket() const {
    return {Complex{std::cos(theta_ / 2.0), 0.0}, std::polar(std::sin(theta_ / 2.0), phi_)};
}

Qubit Qubit::orthogonal() const { return Qubit(kPi - theta_, phi_ + kPi); }

DensityMatrix::DensityMatrix() : m_(0.5 * Eigen::Matrix2cd::Identity()) {}

bool DensityMatrix::is_valid(const Eigen::Matrix2cd& m, double tol) {
    if (!m.allFinite()) return false;
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
    if (std::abs(m.trace() - 1.0) > tol) return false;
    // eigenvalues of a Hermitian 2x2: (tr +- sqrt((a-d)^2 + 4|b|^2)) / 2
    const double a = m(0, 0).real();
    const double d = m(1, 1).real();
    const double disc = std::sqrt((a - d) * (a - d) + 4.0 * std::norm(m(0, 1)));
    return 0.5 * (a + d - disc) >= -tol;
}

DensityMatrix::DensityMatrix(const Eigen::Matrix2cd& entries) : m_(entries) {
    if (!is_valid(entries)) {
        throw std::invalid_argument("DensityMatrix: entries are not Hermitian, unit-trace and positive semidefinite");
    }
    m_ = 0.5 * (entries + entries.adjoint());
}

DensityMatrix DensityMatrix::pure(const Eigen::Vector2cd& ket) {
    const double n = ket.squaredNorm();
    if (std::abs(n - 1.0) > kCheckTol) {
        throw std::invalid_argument("DensityMatrix::pure: ket is not normalized");
    }
    return DensityMatrix(ket * ket.adjoint());
}

DensityMatrix reduced_qubit(const Eigen::Matrix4cd& joint, Port which_port) {
    if (std::abs(joint.trace() - 1.0) > kCheckTol) {
        throw std::invalid_argument("reduced_qubit: joint state is not normalized (trace " +
                                    std::to_string(joint.trace().real()) + ")");
    }
    // joint index = 2 * rail_out1 + rail_out2
    Eigen::Matrix2cd rho = Eigen::Matrix2cd::Zero();
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            for (int k = 0; k < 2; ++k) {
                if (which_port == Port::out1) {
                    rho(i, j) += joint(2 * i + k, 2 * j + k);
                } else {
                    rho(i, j) += joint(2 * k + i, 2 * k + j);
                }
            }
        }
    }
    return DensityMatrix(rho);
}

DensityMatrix reduced_qubit(const TwoQubitState& state, Port which_port) {
    if (state.empty()) {
        throw std::invalid_argument("reduced_qubit: empty post-selected state");
    }
    return reduced_qubit(state.density(), which_port);
}

double fidelity(const DensityMatrix& rho, const Qubit& target) {
    const Eigen::Vector2cd psi = target.ket();
    const double f = (psi.adjoint() * rho.entries() * psi)(0, 0).real();
    return std::clamp(f, 0.0, 1.0);
}

}  // namespace clonesim
