#pragma once

#include <complex>

#include <Eigen/Dense>

#include "clonesim/fock.hpp"

namespace clonesim {

/// Pure qubit cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>.  theta in [0, pi];
/// phi is wrapped into [0, 2 pi).
class Qubit {
public:
    Qubit() = default;
    Qubit(double theta, double phi);

    static Qubit equatorial(double phi) { return Qubit(kHalfPi, phi); }
    static Qubit zero() { return Qubit(0.0, 0.0); }
    static Qubit one() { return Qubit(kPi, 0.0); }

    double theta() const { return theta_; }
    double phi() const { return phi_; }

    Eigen::Vector2cd ket() const;
    /// The state orthogonal to this one on the Bloch sphere.
    Qubit orthogonal() const;

    static constexpr double kPi = 3.14159265358979323846;
    static constexpr double kHalfPi = kPi / 2.0;

private:
    double theta_ = 0.0;
    double phi_ = 0.0;
};

/// 2x2 density matrix over {|0>, |1>}.  Construction validates hermiticity,
/// unit trace and positivity at 1e-10.
class DensityMatrix {
public:
    DensityMatrix();  // maximally mixed
    explicit DensityMatrix(const Eigen::Matrix2cd& entries);

    static DensityMatrix pure(const Eigen::Vector2cd& ket);
    static DensityMatrix maximally_mixed() { return DensityMatrix(); }

    const Eigen::Matrix2cd& entries() const { return m_; }
    Complex operator()(int i, int j) const { return m_(i, j); }

    static bool is_valid(const Eigen::Matrix2cd& m, double tol = kCheckTol);

private:
    Eigen::Matrix2cd m_;
};

/// Partial trace of a normalized post-selected state onto one clone.
DensityMatrix reduced_qubit(const TwoQubitState& state, Port which_port);
DensityMatrix reduced_qubit(const Eigen::Matrix4cd& joint, Port which_port);

/// <psi| rho |psi>.
double fidelity(const DensityMatrix& rho, const Qubit& target);

}  // namespace clonesim
