#include "clonesim/fock.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace clonesim {

namespace {

constexpr std::size_t kModes = Mode::count;

// basis index of (i, j), i <= j, in the canonical pair order
constexpr std::array<std::array<std::size_t, kModes>, kModes> make_index_table() {
    std::array<std::array<std::size_t, kModes>, kModes> t{};
    std::size_t k = 0;
    for (std::size_t i = 0; i < kModes; ++i) {
        for (std::size_t j = i; j < kModes; ++j) {
            t[i][j] = k;
            t[j][i] = k;
            ++k;
        }
    }
    return t;
}

constexpr std::array<std::pair<std::size_t, std::size_t>, StateVector::dimension> make_mode_table() {
    std::array<std::pair<std::size_t, std::size_t>, StateVector::dimension> t{};
    std::size_t k = 0;
    for (std::size_t i = 0; i < kModes; ++i) {
        for (std::size_t j = i; j < kModes; ++j) {
            t[k++] = {i, j};
        }
    }
    return t;
}

constexpr auto kIndex = make_index_table();
constexpr auto kModesOf = make_mode_table();

const double kSqrt2 = std::sqrt(2.0);

}  // namespace

int BasisState::total() const {
    int n = 0;
    for (int o : occupations) n += o;
    return n;
}

std::vector<BasisState> enumerate_basis(int photon_count, int mode_count) {
    if (photon_count != 2) {
        throw std::invalid_argument("enumerate_basis: only photon_count = 2 is supported, got " +
                                    std::to_string(photon_count));
    }
    if (mode_count < 1 || mode_count > static_cast<int>(kModes)) {
        throw std::invalid_argument("enumerate_basis: mode_count must be in [1, 8], got " +
                                    std::to_string(mode_count));
    }
    std::vector<BasisState> out;
    out.reserve(static_cast<std::size_t>(mode_count * (mode_count + 1) / 2));
    for (int i = 0; i < mode_count; ++i) {
        for (int j = i; j < mode_count; ++j) {
            BasisState s{std::vector<int>(static_cast<std::size_t>(mode_count), 0)};
            s.occupations[static_cast<std::size_t>(i)] += 1;
            s.occupations[static_cast<std::size_t>(j)] += 1;
            out.push_back(std::move(s));
        }
    }
    return out;
}

ModeFunction unit_mode(Mode m) {
    ModeFunction f = ModeFunction::Zero();
    f(static_cast<Eigen::Index>(m.index())) = 1.0;
    return f;
}

StateVector::StateVector() { amps_.fill(Complex{0.0, 0.0}); }

std::size_t StateVector::basis_index(std::size_t i, std::size_t j) { return kIndex.at(i).at(j); }

std::pair<std::size_t, std::size_t> StateVector::basis_modes(std::size_t idx) { return kModesOf.at(idx); }

// For i < j the Fock amplitude of |1_i 1_j> is 2 S_ij; for |2_i> it is sqrt(2) S_ii.
StateVector StateVector::from_pair_matrix(const ModeMap& pairs) {
    StateVector s;
    for (std::size_t k = 0; k < dimension; ++k) {
        const auto [i, j] = kModesOf[k];
        const auto ii = static_cast<Eigen::Index>(i);
        const auto jj = static_cast<Eigen::Index>(j);
        if (i == j) {
            s.amps_[k] = kSqrt2 * pairs(ii, ii);
        } else {
            s.amps_[k] = pairs(ii, jj) + pairs(jj, ii);
        }
    }
    return s;
}

ModeMap StateVector::pair_matrix() const {
    ModeMap m = ModeMap::Zero();
    for (std::size_t k = 0; k < dimension; ++k) {
        const auto [i, j] = kModesOf[k];
        const auto ii = static_cast<Eigen::Index>(i);
        const auto jj = static_cast<Eigen::Index>(j);
        if (i == j) {
            m(ii, ii) = amps_[k] / kSqrt2;
        } else {
            m(ii, jj) = amps_[k] / 2.0;
            m(jj, ii) = amps_[k] / 2.0;
        }
    }
    return m;
}

StateVector StateVector::two_photon(const ModeFunction& first, const ModeFunction& second) {
    const ModeMap sym = 0.5 * (first * second.transpose() + second * first.transpose());
    StateVector s = from_pair_matrix(sym);
    const double n2 = s.norm_squared();
    if (!(n2 > 0.0) || !std::isfinite(n2)) {
        throw std::invalid_argument("two_photon: mode functions produce a zero or non-finite state");
    }
    const double inv = 1.0 / std::sqrt(n2);
    for (auto& a : s.amps_) a *= inv;
    return s;
}

Complex StateVector::amplitude(Mode a, Mode b) const { return amps_[basis_index(a.index(), b.index())]; }

double StateVector::norm_squared() const {
    double n = 0.0;
    for (const auto& a : amps_) n += std::norm(a);
    return n;
}

StateVector apply_mode_map(const StateVector& state, const ModeMap& map) {
    const ModeMap s = state.pair_matrix();
    return StateVector::from_pair_matrix(map * s * map.transpose());
}

StateVector apply_two_mode_coupler(const StateVector& state, Mode a, Mode b, double reflectance_amplitude,
                                   double transmittance_amplitude) {
    if (a == b) {
        throw std::invalid_argument("apply_two_mode_coupler: modes must differ");
    }
    const double r = reflectance_amplitude;
    const double t = transmittance_amplitude;
    if (!std::isfinite(r) || !std::isfinite(t) || std::abs(r * r + t * t - 1.0) > kConstructionTol) {
        throw std::invalid_argument("apply_two_mode_coupler: r^2 + t^2 must equal 1 (got r=" + std::to_string(r) +
                                    ", t=" + std::to_string(t) + ")");
    }
    const auto ia = static_cast<Eigen::Index>(a.index());
    const auto ib = static_cast<Eigen::Index>(b.index());
    ModeMap m = ModeMap::Identity();
    m(ia, ia) = r;
    m(ib, ia) = t;
    m(ib, ib) = r;
    m(ia, ib) = -t;
    return apply_mode_map(state, m);
}

StateVector apply_attenuator(const StateVector& state, Mode mode, double amplitude_transmittance) {
    const double eta = amplitude_transmittance;
    if (!(eta >= 0.0 && eta <= 1.0)) {
        throw std::invalid_argument("apply_attenuator: transmittance must lie in [0, 1], got " + std::to_string(eta));
    }
    StateVector out = state;
    auto& amps = out.mutable_amplitudes();
    const std::size_t m = mode.index();
    for (std::size_t k = 0; k < StateVector::dimension; ++k) {
        const auto [i, j] = StateVector::basis_modes(k);
        const int occ = (i == m ? 1 : 0) + (j == m ? 1 : 0);
        if (occ == 1) {
            amps[k] *= eta;
        } else if (occ == 2) {
            amps[k] *= eta * eta;
        }
    }
    return out;
}

StateVector apply_phase_shift(const StateVector& state, Mode mode, double phase) {
    StateVector out = state;
    auto& amps = out.mutable_amplitudes();
    const Complex w = std::polar(1.0, phase);
    const std::size_t m = mode.index();
    for (std::size_t k = 0; k < StateVector::dimension; ++k) {
        const auto [i, j] = StateVector::basis_modes(k);
        if (i == m) amps[k] *= w;
        if (j == m) amps[k] *= w;
    }
    return out;
}

StateVector keep_bunched(const StateVector& state, Port port) {
    StateVector out = state;
    auto& amps = out.mutable_amplitudes();
    for (std::size_t k = 0; k < StateVector::dimension; ++k) {
        const auto [i, j] = StateVector::basis_modes(k);
        if (Mode::from_index(i).port != port || Mode::from_index(j).port != port) {
            amps[k] = 0.0;
        }
    }
    return out;
}

Eigen::Matrix4cd TwoQubitState::density() const {
    Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
    for (const auto& c : components) {
        rho += c.weight * c.ket * c.ket.adjoint();
    }
    return rho;
}

double TwoQubitState::total_weight() const {
    double w = 0.0;
    for (const auto& c : components) w += c.weight;
    return w;
}

TwoQubitState TwoQubitState::pure(const Eigen::Vector4cd& ket) {
    const double n = ket.norm();
    if (!(n > 0.0)) {
        return {};
    }
    return TwoQubitState{{Component{1.0, ket / n}}};
}

TwoQubitState TwoQubitState::from_density(const Eigen::Matrix4cd& rho) {
    const Eigen::Matrix4cd herm = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(herm);
    TwoQubitState out;
    for (Eigen::Index k = 0; k < 4; ++k) {
        const double w = es.eigenvalues()(k);
        if (w > kConstructionTol) {
            out.components.push_back(Component{w, es.eigenvectors().col(k)});
        }
    }
    const double total = out.total_weight();
    for (auto& c : out.components) c.weight /= total;
    return out;
}

std::array<Eigen::Vector4cd, 4> coincidence_sector(const StateVector& state) {
    std::array<Eigen::Vector4cd, 4> sector;
    for (auto& v : sector) v.setZero();
    for (std::size_t k = 0; k < StateVector::dimension; ++k) {
        const auto [i, j] = StateVector::basis_modes(k);
        Mode a = Mode::from_index(i);
        Mode b = Mode::from_index(j);
        if (a.port == b.port) continue;
        if (a.port == Port::out2) std::swap(a, b);
        const auto tau = 2 * static_cast<std::size_t>(a.temporal) + static_cast<std::size_t>(b.temporal);
        const auto idx = 2 * static_cast<Eigen::Index>(a.rail) + static_cast<Eigen::Index>(b.rail);
        sector[tau](idx) = state.amplitudes()[k];
    }
    return sector;
}

PostSelection postselect_coincidence(const StateVector& state) {
    const auto sector = coincidence_sector(state);
    double prob = 0.0;
    for (const auto& v : sector) prob += v.squaredNorm();
    PostSelection out;
    out.probability = prob;
    if (!(prob > 0.0)) {
        out.probability = 0.0;
        return out;
    }
    for (const auto& v : sector) {
        const double w = v.squaredNorm();
        if (w > 0.0) {
            out.state.components.push_back({w / prob, v / std::sqrt(w)});
        }
    }
    return out;
}

}  // namespace clonesim
