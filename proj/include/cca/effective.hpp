// effective.hpp: Bound-pair Jaynes-Cummings dynamics in the strong-hopping regime
//
// In the one-excitation sector the full Hamiltonian splits into N decoupled
// 2x2 blocks, one per photonic normal mode and its atomic analogue. When
// J/kappa << |eta| only the bound-mode block stays resonant; the band blocks
// are dropped to free evolution (photon modes at omega_{k,mu}, atom modes at
// omega_a).
//
// Phase frame: everything in this header is expressed in the frame rotating
// at omega_a, i.e. with the global factor e^{-i omega_a t} removed. Use
// to_lab_frame() before comparing amplitudes with the exact propagator.
//
// Detuning sign: Delta = omega_f - omega_a throughout. With this convention the
// dressed vector of energy (omega_a+omega_f)/2 + Omega/2 is proportional to
// (2J, Omega - Delta) in the (photon, atom) basis and the resonant-pair atom
// amplitude evolves as (cos(Omega t/2) + i Delta/Omega sin(Omega t/2)) e^{-i Delta t/2}.

#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cca/oracle.hpp"
#include "cca/params.hpp"
#include "cca/spectral.hpp"

namespace cca {

inline double rabi(double j, double delta) {
    if (j < 0.0) throw std::invalid_argument("rabi: j must be >= 0");
    return std::hypot(delta, 2.0 * j);
}

struct DressedPair {
    double rabi_omega{0.0};
    double a_plus{0.0}, a_minus{0.0};  // photon components
    double b_plus{0.0}, b_minus{0.0};  // atom components
    double energy_plus{0.0}, energy_minus{0.0};
};

inline DressedPair dressed_coefficients(double j, double delta, double omega_f = 0.0) {
    if (j == 0.0 && delta == 0.0)
        throw std::invalid_argument("dressed_coefficients: degenerate pair (J = Delta = 0)");
    const double omega = rabi(j, delta);

    // Two proportional forms of each eigenvector; the larger one is used so
    // that J = 0 does not produce 0/0.
    auto pick = [](double a1, double b1, double a2, double b2) {
        const double n1 = std::hypot(a1, b1);
        const double n2 = std::hypot(a2, b2);
        return (n1 >= n2) ? std::pair{a1 / n1, b1 / n1} : std::pair{a2 / n2, b2 / n2};
    };
    const auto [ap, bp] = pick(2.0 * j, omega - delta, delta + omega, 2.0 * j);
    const auto [am, bm] = pick(2.0 * j, -omega - delta, omega - delta, -2.0 * j);

    const double center = omega_f - 0.5 * delta;  // (omega_f + omega_a)/2
    return {omega, ap, am, bp, bm, center + 0.5 * omega, center - 0.5 * omega};
}

struct RegimeCheck {
    double ratio{0.0};  // J/(kappa |eta|)
    bool ok{false};
};

// Advisory only: J/(kappa|eta|) <= 0.1 and |Delta| <= 10 max(J, 1e-12).
inline RegimeCheck regime_validity(const ArrayParams& p) {
    if (p.eta() == 0.0) return {std::numeric_limits<double>::infinity(), false};
    const double ratio = p.j() / (p.kappa() * std::abs(p.eta()));
    const bool ok = ratio <= 0.1 && std::abs(p.delta()) <= 10.0 * std::max(p.j(), 1e-12);
    return {ratio, ok};
}

class EffectiveModel {
public:
    explicit EffectiveModel(const ArrayParams& p)
        : params_(p), modes_(full_spectrum(p)), dressed_(make_dressed(p)) {
        const double a1 = modes_.bound().amplitudes[0];
        n_script_ = a1 * a1;
        if (p.eta() == 0.0) {
            log_n_script_ = std::log(2.0 / (p.n() + 1));
        } else {
            log_n_script_ = std::log(4.0 * std::abs(p.eta())) - 2.0 * std::log(1.0 - p.eta())
                            - detail::log_abs_tau_power_minus_one(std::abs(tau(p.eta())), p.n());
        }
    }

    const ArrayParams& params() const noexcept { return params_; }
    const ModeTable& modes() const noexcept { return modes_; }
    const DressedPair& dressed() const noexcept { return dressed_; }
    // Square of the bound-mode prefactor, taken from the site-1 amplitude.
    double n_script() const noexcept { return n_script_; }
    // Analytic ln(A^2); finite even when n_script() underflows.
    double log_n_script() const noexcept { return log_n_script_; }

    // N tau^{(x0+x-2)/2} for odd x0, x, evaluated without overflow.
    double bound_weight(int x0, int x) const {
        const int power = (x0 + x - 2) / 2;
        if (params_.eta() == 0.0) return (power % 2 == 0 ? 1.0 : -1.0) * std::exp(log_n_script_);
        const double t = tau(params_.eta());
        const double mag = std::exp(log_n_script_ + power * std::log(std::abs(t)));
        return (power % 2 == 0) ? mag : -mag;
    }

private:
    static DressedPair make_dressed(const ArrayParams& p) {
        if (p.j() == 0.0 && p.delta() == 0.0) {
            // Degenerate block; any orthonormal basis diagonalizes it.
            return {0.0, 1.0, 0.0, 0.0, 1.0, p.omega_f(), p.omega_f()};
        }
        return dressed_coefficients(p.j(), p.delta(), p.omega_f());
    }

    ArrayParams params_;
    ModeTable modes_;
    DressedPair dressed_;
    double n_script_{0.0};
    double log_n_script_{0.0};
};

inline void require_odd_site(const ArrayParams& p, int x, const char* what) {
    if (x < 1 || x > p.n()) throw std::out_of_range(std::string(what) + ": site outside 1..N");
    if (x % 2 == 0)
        throw std::invalid_argument(std::string(what) + ": closed form applies to odd sites only");
}

struct SiteAmplitudes {
    std::complex<double> photon;
    std::complex<double> atom;
};

// Closed-form site amplitudes for an atom initially excited at odd x0,
// evaluated at odd x (rotating frame).
inline SiteAmplitudes amplitudes_closed_form(const EffectiveModel& model, int x0, int x, double t) {
    const auto& p = model.params();
    require_odd_site(p, x0, "amplitudes_closed_form");
    require_odd_site(p, x, "amplitudes_closed_form");
    using namespace std::complex_literals;
    const double omega = rabi(p.j(), p.delta());
    const double w = model.bound_weight(x0, x);
    const double s = std::sin(0.5 * omega * t);
    const double c = std::cos(0.5 * omega * t);
    const double j_over = omega > 0.0 ? p.j() / omega : 0.0;
    const double d_over = omega > 0.0 ? p.delta() / omega : 0.0;
    const std::complex<double> phase = std::polar(1.0, -0.5 * p.delta() * t);
    const double kronecker = (x == x0) ? 1.0 : 0.0;
    return {-2.0i * w * j_over * s * phase, kronecker + w * ((c + 1.0i * d_over * s) * phase - 1.0)};
}

struct SiteProbabilities {
    double field{0.0};
    double atom{0.0};
};

// Resonant (Delta = 0) closed-form probabilities.
inline SiteProbabilities probabilities_resonant(const EffectiveModel& model, int x0, int x, double t) {
    const auto& p = model.params();
    if (p.delta() != 0.0)
        throw std::invalid_argument("probabilities_resonant: requires Delta = 0; use amplitudes_closed_form");
    require_odd_site(p, x0, "probabilities_resonant");
    require_odd_site(p, x, "probabilities_resonant");
    const double omega = 2.0 * p.j();
    const double w = model.bound_weight(x0, x);
    const double s = std::sin(0.5 * omega * t);
    const double c = std::cos(0.5 * omega * t);
    const double kronecker = (x == x0) ? 1.0 : 0.0;
    const double field = omega > 0.0 ? (2.0 * p.j() / omega) * (2.0 * p.j() / omega) * w * w * s * s : 0.0;
    const double atom_amp = kronecker + w * (c - 1.0);
    return {field, atom_amp * atom_amp};
}

// Propagates single-excitation states under the effective Hamiltonian.
// The frozen band-atom part is kept as (psi_atom(0) - bound projection), so
// components that do not overlap the bound mode are returned bit-for-bit.
class EffectivePropagator {
public:
    EffectivePropagator(const EffectiveModel& model, const SingleExcitationState& initial)
        : model_(&model), initial_(initial) {
        const int n = model.params().n();
        if (initial.n() != n) throw std::invalid_argument("evolve_effective: state dimension mismatch");
        initial.require_normalized("evolve_effective");
        u_ = model.modes().amplitude_matrix();
        photon_coeffs_ = u_.transpose() * initial.photon_block();
        bound_atom0_ = u_.col(0).dot(initial.atom_block());
        bound_ = u_.col(0);
    }

    SingleExcitationState at(double t) const {
        if (!std::isfinite(t)) throw std::invalid_argument("evolve_effective: non-finite time");
        if (t == 0.0) return initial_;
        const auto& p = model_->params();
        const auto& d = model_->dressed();
        const int n = p.n();
        const double wa = p.omega_a();

        // Bound pair: sum over dressed states of e^{-i(E - omega_a) t} |v><v|.
        const std::complex<double> f0 = photon_coeffs_[0];
        const std::complex<double> a0 = bound_atom0_;
        const std::complex<double> ep = std::polar(1.0, -(d.energy_plus - wa) * t);
        const std::complex<double> em = std::polar(1.0, -(d.energy_minus - wa) * t);
        const std::complex<double> cp = d.a_plus * f0 + d.b_plus * a0;
        const std::complex<double> cm = d.a_minus * f0 + d.b_minus * a0;
        const std::complex<double> f_t = ep * cp * d.a_plus + em * cm * d.a_minus;
        const std::complex<double> a_t = ep * cp * d.b_plus + em * cm * d.b_minus;

        Eigen::VectorXcd photon_t(n);
        Eigen::VectorXcd coeffs = photon_coeffs_;
        coeffs[0] = f_t;
        const auto& modes = model_->modes().modes();
        for (int i = 1; i < n; ++i) {
            if (coeffs[i] != 0.0) coeffs[i] *= std::polar(1.0, -(modes[i].frequency - wa) * t);
        }
        photon_t = u_ * coeffs;

        Eigen::VectorXcd out(2 * n);
        out.head(n) = photon_t;
        out.tail(n) = initial_.atom_block();
        const std::complex<double> change = a_t - a0;
        if (change != 0.0) out.tail(n) += bound_.cast<std::complex<double>>() * change;
        return SingleExcitationState(std::move(out));
    }

private:
    const EffectiveModel* model_;
    SingleExcitationState initial_;
    Eigen::MatrixXd u_;
    Eigen::VectorXd bound_;
    Eigen::VectorXcd photon_coeffs_;
    std::complex<double> bound_atom0_;
};

inline SingleExcitationState to_lab_frame(const SingleExcitationState& s, double omega_a, double t) {
    return SingleExcitationState(s.amplitudes() * std::polar(1.0, -omega_a * t));
}

struct EvolutionTrace {
    std::vector<double> times;
    Eigen::MatrixXd p_field;  // times x N
    Eigen::MatrixXd p_atom;   // times x N
    Eigen::VectorXd total_field;
    Eigen::VectorXd total_atom;
};

inline EvolutionTrace trace_from_states(std::span<const double> times,
                                        std::span<const SingleExcitationState> states) {
    if (times.size() != states.size()) throw std::invalid_argument("trace: size mismatch");
    EvolutionTrace tr;
    tr.times.assign(times.begin(), times.end());
    const auto rows = static_cast<Eigen::Index>(times.size());
    const int n = states.empty() ? 0 : states.front().n();
    tr.p_field.resize(rows, n);
    tr.p_atom.resize(rows, n);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const auto& a = states[static_cast<std::size_t>(r)].amplitudes();
        for (int x = 0; x < n; ++x) {
            tr.p_field(r, x) = std::norm(a[x]);
            tr.p_atom(r, x) = std::norm(a[n + x]);
        }
    }
    tr.total_field = tr.p_field.rowwise().sum();
    tr.total_atom = tr.p_atom.rowwise().sum();
    return tr;
}

inline std::vector<SingleExcitationState> propagate_effective(const EffectiveModel& model,
                                                              const SingleExcitationState& initial,
                                                              std::span<const double> times) {
    const EffectivePropagator prop(model, initial);
    std::vector<SingleExcitationState> out;
    out.reserve(times.size());
    for (double t : times) out.push_back(prop.at(t));
    return out;
}

inline EvolutionTrace evolve_effective(const EffectiveModel& model, const SingleExcitationState& initial,
                                       std::span<const double> times) {
    const auto states = propagate_effective(model, initial, times);
    return trace_from_states(times, states);
}

inline EvolutionTrace evolve_exact_trace(const ArrayParams& p, const SingleExcitationState& initial,
                                         std::span<const double> times) {
    const auto states = evolve_exact(build_full_matrix(p), initial, times);
    return trace_from_states(times, states);
}

inline std::pair<Eigen::VectorXd, Eigen::VectorXd> total_probabilities(const EvolutionTrace& trace) {
    return {trace.p_atom.rowwise().sum(), trace.p_field.rowwise().sum()};
}

// Largest change of any per-site probability relative to the first sample.
inline double max_trace_deviation(const EvolutionTrace& trace) {
    if (trace.times.empty()) return 0.0;
    double dev = 0.0;
    for (Eigen::Index r = 0; r < trace.p_field.rows(); ++r) {
        dev = std::max(dev, (trace.p_field.row(r) - trace.p_field.row(0)).cwiseAbs().maxCoeff());
        dev = std::max(dev, (trace.p_atom.row(r) - trace.p_atom.row(0)).cwiseAbs().maxCoeff());
    }
    return dev;
}

// Atom initially excited at an even site: maximum deviation of the effective
// trace from its initial value (0 for every admissible input).
inline double freezing_check(const EffectiveModel& model, int x0, std::span<const double> times) {
    const auto& p = model.params();
    if (x0 < 1 || x0 > p.n()) throw std::out_of_range("freezing_check: site outside 1..N");
    if (x0 % 2 != 0) throw std::invalid_argument("freezing_check: x0 must be even");
    std::vector<double> ts(times.begin(), times.end());
    if (ts.empty() || ts.front() != 0.0) ts.insert(ts.begin(), 0.0);
    return max_trace_deviation(evolve_effective(model, SingleExcitationState::atom_at(p.n(), x0), ts));
}

// Evenly spaced grid t_i = i t_max/(steps-1).
inline std::vector<double> time_grid(double t_max, int steps) {
    if (steps < 2) throw std::invalid_argument("time_grid: steps must be >= 2");
    if (!(t_max > 0.0) || !std::isfinite(t_max)) throw std::invalid_argument("time_grid: t_max must be > 0");
    std::vector<double> ts(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i) ts[static_cast<std::size_t>(i)] = t_max * i / (steps - 1);
    return ts;
}

} // namespace cca
