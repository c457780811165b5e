#pragma once

// Two-photon bosonic states over eight optical modes and the linear-optical
// elements acting on them.

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace clonesim {

using Complex = std::complex<double>;

inline constexpr double kConstructionTol = 1e-12;
inline constexpr double kCheckTol = 1e-10;

enum class Port { out1 = 0, out2 = 1 };
enum class Rail { r0 = 0, r1 = 1 };
enum class Temporal { principal = 0, orthogonal = 1 };

/// A mode is the triple (port, rail, temporal bin).  Modes are enumerated
/// lexicographically over (port, rail, temporal), so index = 4*port + 2*rail + temporal.
struct Mode {
    Port port = Port::out1;
    Rail rail = Rail::r0;
    Temporal temporal = Temporal::principal;

    static constexpr std::size_t count = 8;

    constexpr std::size_t index() const {
        return 4 * static_cast<std::size_t>(port) + 2 * static_cast<std::size_t>(rail) +
               static_cast<std::size_t>(temporal);
    }
    static constexpr Mode from_index(std::size_t i) {
        return Mode{static_cast<Port>(i / 4), static_cast<Rail>((i / 2) % 2),
                    static_cast<Temporal>(i % 2)};
    }
    friend constexpr bool operator==(const Mode&, const Mode&) = default;
};

/// Occupation numbers indexed by mode.
struct BasisState {
    std::vector<int> occupations;

    int total() const;
    friend bool operator==(const BasisState&, const BasisState&) = default;
};

/// All placements of `photon_count` photons into `mode_count` modes.  Only
/// photon_count == 2 is supported.  Order: pairs (i, j), i <= j, lexicographic.
std::vector<BasisState> enumerate_basis(int photon_count, int mode_count);

/// Single-photon mode function: amplitude per mode.
using ModeFunction = Eigen::Matrix<Complex, 8, 1>;
/// Linear map on creation operators, a_k^dag -> sum_l M(l, k) a_l^dag.
using ModeMap = Eigen::Matrix<Complex, 8, 8>;

ModeFunction unit_mode(Mode m);

/// Amplitudes of a two-photon state over the 36 canonical basis states of the
/// eight-mode space.  Elements may leave the vector sub-normalized (loss).
class StateVector {
public:
    static constexpr std::size_t dimension = 36;

    StateVector();  // zero vector

    /// Normalized state a^dag(first) a^dag(second) |vac>.
    static StateVector two_photon(const ModeFunction& first, const ModeFunction& second);

    /// Builds a state from the symmetric pair-amplitude matrix S with
    /// |psi> = sum_kl S(k,l) a_k^dag a_l^dag |vac>.
    static StateVector from_pair_matrix(const ModeMap& pairs);
    ModeMap pair_matrix() const;

    const std::array<Complex, dimension>& amplitudes() const { return amps_; }
    Complex amplitude(Mode a, Mode b) const;
    double norm_squared() const;
    bool is_zero() const { return norm_squared() == 0.0; }

    /// Index of the basis state with photons in modes i and j.
    static std::size_t basis_index(std::size_t i, std::size_t j);
    /// Modes (i, j), i <= j, occupied by basis state `idx`.
    static std::pair<std::size_t, std::size_t> basis_modes(std::size_t idx);

    /// Mutable access for elements that filter basis sectors.
    std::array<Complex, dimension>& mutable_amplitudes() { return amps_; }

private:
    std::array<Complex, dimension> amps_{};
};

/// Applies an arbitrary linear mode map (unitary or lossy).
StateVector apply_mode_map(const StateVector& state, const ModeMap& map);

/// Lossless real coupler: a^dag -> r a^dag + t b^dag, b^dag -> r b^dag - t a^dag.
StateVector apply_two_mode_coupler(const StateVector& state, Mode a, Mode b, double reflectance_amplitude,
                                   double transmittance_amplitude);

/// Scales each basis amplitude by transmittance^(occupation of mode).  Lost
/// photon sectors are dropped.
StateVector apply_attenuator(const StateVector& state, Mode mode, double amplitude_transmittance);

StateVector apply_phase_shift(const StateVector& state, Mode mode, double phase);

/// Keeps only the sector with both photons in `port` (no renormalization).
StateVector keep_bunched(const StateVector& state, Port port);

/// Post-selected two-qubit state over rail(out1) x rail(out2).  Kets are
/// indexed rail_out1 * 2 + rail_out2.  Temporal bins that detectors cannot
/// resolve become separate, incoherently weighted components.
struct TwoQubitState {
    struct Component {
        double weight = 0.0;
        Eigen::Vector4cd ket = Eigen::Vector4cd::Zero();
    };
    std::vector<Component> components;

    bool empty() const { return components.empty(); }
    Eigen::Matrix4cd density() const;
    double total_weight() const;

    static TwoQubitState pure(const Eigen::Vector4cd& ket);
    static TwoQubitState from_density(const Eigen::Matrix4cd& rho);
};

struct PostSelection {
    TwoQubitState state;  // normalized; empty when probability is zero
    double probability = 0.0;
    bool empty() const { return state.empty(); }
};

/// Keeps terms with exactly one photon in each port.
PostSelection postselect_coincidence(const StateVector& state);

/// Unnormalized coincidence sector split by temporal bins (tau_out1, tau_out2).
std::array<Eigen::Vector4cd, 4> coincidence_sector(const StateVector& state);

}  // namespace clonesim
