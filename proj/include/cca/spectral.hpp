// spectral.hpp: Closed-form photonic normal modes of the staggered array
//
// For odd N the free-field hopping Hamiltonian has N normal modes:
//
//   * one bound mode at frequency omega_f, living on odd sites only,
//       phi_{2x-1} ∝ tau^{x-1},  phi_{2x} = 0,   tau = (eta+1)/(eta-1);
//   * (N-1)/2 band wavevectors k = 2 pi m/(N+1), m = 1..(N-1)/2, each with two
//     branches mu = ±1:
//       phi_{2x}   = B sin(k x),
//       phi_{2x-1} = mu B sin(k x + theta_k),     B = sqrt(2/(N+1)),
//       omega_{k,mu} = omega_f - mu eps_k,
//       eps_k = 2 kappa sqrt(cos^2(k/2) + eta^2 sin^2(k/2)),
//       e^{i theta_k} = kappa (1-eta)/eps_k (e^{-ik} - tau).
//
// Note the inverted branch sign: mu = +1 is the LOWER band (omega_f - eps_k).
//
// Sign convention: every mode is returned with its first nonzero amplitude
// positive. This flips the literal closed-form sign of the bound mode (whose
// prefactor is negative for every |eta| < 1) and of the mu = -1 band modes.
// For the bound mode the sign is fixed by the site-1 entry even when that
// entry underflows (|tau| > 1 and very large N).

#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "cca/params.hpp"

namespace cca {

inline constexpr double kModulusTolerance = 1e-12;

inline double tau(double eta) {
    require_analytic(eta, "tau");
    return (eta + 1.0) / (eta - 1.0);
}

inline double epsilon_k(double kappa, double eta, double k) {
    if (!(kappa > 0.0)) throw std::invalid_argument("epsilon_k: kappa must be > 0");
    const double c = std::cos(0.5 * k);
    const double s = std::sin(0.5 * k);
    return 2.0 * kappa * std::sqrt(c * c + eta * eta * s * s);
}

// e^{i theta_k} evaluated from its defining expression. The result is checked
// to lie on the unit circle; a violation indicates inconsistent inputs.
inline std::complex<double> theta_phase(double kappa, double eta, double k) {
    const double t = tau(eta);
    const double eps = epsilon_k(kappa, eta, k);
    if (!(eps > 0.0)) throw std::domain_error("theta_k: eps_k vanishes (eta = 0, k = pi)");
    const std::complex<double> z =
        (kappa * (1.0 - eta) / eps) * (std::polar(1.0, -k) - std::complex<double>(t, 0.0));
    if (std::abs(std::abs(z) - 1.0) > kModulusTolerance)
        throw std::logic_error("theta_k: |e^{i theta}| deviates from 1 by "
                               + std::to_string(std::abs(std::abs(z) - 1.0)));
    return z;
}

// Principal value in (-pi, pi].
inline double theta_k(double kappa, double eta, double k) {
    const auto z = theta_phase(kappa, eta, k);
    double th = std::atan2(z.imag(), z.real());
    if (th <= -std::numbers::pi) th += 2.0 * std::numbers::pi;
    return th;
}

inline std::vector<double> mode_wavevectors(int n_cavities) {
    if (n_cavities < 1 || n_cavities % 2 == 0)
        throw std::invalid_argument("mode_wavevectors: N must be odd and >= 1");
    std::vector<double> ks;
    ks.reserve((n_cavities - 1) / 2);
    for (int m = 1; m <= (n_cavities - 1) / 2; ++m)
        ks.push_back(2.0 * std::numbers::pi * m / (n_cavities + 1));
    return ks;
}

// Localization length of the bound mode, |1/ln((1+eta)/(1-eta))|.
// Infinite at eta = 0.
inline double localization_length(double eta) {
    require_analytic(eta, "localization_length");
    if (eta == 0.0) return std::numeric_limits<double>::infinity();
    return std::abs(1.0 / std::log((1.0 + eta) / (1.0 - eta)));
}

enum class Branch : int { Plus = 1, Minus = -1 };

inline int sign_of(Branch b) noexcept { return static_cast<int>(b); }

struct BoundLabel {
    bool operator==(const BoundLabel&) const = default;
};

struct BandLabel {
    int m{1};
    Branch branch{Branch::Plus};
    bool operator==(const BandLabel&) const = default;
};

using ModeLabel = std::variant<BoundLabel, BandLabel>;

struct NormalMode {
    ModeLabel label;
    std::optional<double> wavevector;  // band only
    std::optional<double> epsilon;     // band only
    std::optional<double> theta;       // band only
    double frequency{0.0};
    Eigen::VectorXd amplitudes;        // site x = 1..N stored at index x-1
    // Bound: |A|, the analytic prefactor of tau^{x-1} in the canonical sign,
    // present only when representable as a normal double. Band: sqrt(2/(N+1)).
    std::optional<double> norm_prefactor;

    bool is_bound() const noexcept { return std::holds_alternative<BoundLabel>(label); }
    const BandLabel& band() const { return std::get<BandLabel>(label); }

    std::string name() const {
        if (is_bound()) return "bound";
        const auto& b = band();
        return "band:" + std::to_string(b.m) + ":" + (b.branch == Branch::Plus ? "+1" : "-1");
    }
};

namespace detail {

inline void canonicalize_sign(Eigen::VectorXd& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (v[i] != 0.0) {
            if (v[i] < 0.0) v = -v;
            return;
        }
    }
}

// log|tau^{N+1} - 1| without forming tau^{N+1}; N+1 is even so tau^{N+1} = |tau|^{N+1}.
inline double log_abs_tau_power_minus_one(double abs_tau, int n) {
    const double lt = std::log(abs_tau);
    if (abs_tau > 1.0) return (n + 1) * lt + std::log1p(-std::exp(-(n + 1) * lt));
    return std::log(-std::expm1((n + 1) * lt));
}

} // namespace detail

// Analytic |A| with A = 2/(eta-1) sqrt(eta/(tau^{N+1}-1)); nullopt when it is
// not representable (underflow). At eta = 0 the 0/0 limit sqrt(2/(N+1)) is used.
inline std::optional<double> bound_prefactor(const ArrayParams& p) {
    require_analytic(p, "bound_prefactor");
    if (p.eta() == 0.0) return std::sqrt(2.0 / (p.n() + 1));
    const double eta = p.eta();
    const double log_a2 = std::log(4.0 * std::abs(eta)) - 2.0 * std::log(1.0 - eta)
                          - detail::log_abs_tau_power_minus_one(std::abs(tau(eta)), p.n());
    const double a = std::exp(0.5 * log_a2);
    if (!std::isnormal(a)) return std::nullopt;
    return a;
}

inline NormalMode bound_mode(const ArrayParams& p) {
    require_analytic(p, "bound_mode");
    const int n = p.n();
    const int m_odd = p.n_odd();
    Eigen::VectorXd phi = Eigen::VectorXd::Zero(n);

    if (p.eta() == 0.0) {
        // eta -> 0 limit: uniform-chain mode m = (N+1)/2.
        const double b = std::sqrt(2.0 / (n + 1));
        for (int x = 0; x < m_odd; ++x) phi[2 * x] = (x % 2 == 0) ? b : -b;
    } else {
        // Powers of tau are generated from the largest-magnitude end so that
        // every intermediate lies in [0, 1]. tau < 0 throughout.
        const double t = tau(p.eta());
        std::vector<double> w(m_odd);
        if (std::abs(t) <= 1.0) {
            w[0] = 1.0;
            for (int x = 1; x < m_odd; ++x) w[x] = w[x - 1] * t;
        } else {
            w[m_odd - 1] = ((m_odd - 1) % 2 == 0) ? 1.0 : -1.0;
            for (int x = m_odd - 2; x >= 0; --x) w[x] = w[x + 1] / t;
        }
        for (int x = 0; x < m_odd; ++x) phi[2 * x] = w[x];
        phi /= phi.norm();
    }

    NormalMode mode;
    mode.label = BoundLabel{};
    mode.frequency = p.omega_f();
    mode.amplitudes = std::move(phi);
    mode.norm_prefactor = bound_prefactor(p);
    return mode;
}

inline NormalMode band_mode(const ArrayParams& p, int m, Branch branch) {
    require_analytic(p, "band_mode");
    const int n = p.n();
    if (m < 1 || m > p.n_wavevectors())
        throw std::out_of_range("band_mode: m = " + std::to_string(m) + " outside 1.."
                                + std::to_string(p.n_wavevectors()));
    const double k = 2.0 * std::numbers::pi * m / (n + 1);
    const double eps = epsilon_k(p.kappa(), p.eta(), k);
    const double th = theta_k(p.kappa(), p.eta(), k);
    const double b = std::sqrt(2.0 / (n + 1));
    const double mu = sign_of(branch);

    Eigen::VectorXd phi(n);
    for (int x = 1; x <= p.n_odd(); ++x) phi[2 * x - 2] = mu * b * std::sin(k * x + th);
    for (int x = 1; x <= p.n_wavevectors(); ++x) phi[2 * x - 1] = b * std::sin(k * x);
    detail::canonicalize_sign(phi);

    NormalMode mode;
    mode.label = BandLabel{m, branch};
    mode.wavevector = k;
    mode.epsilon = eps;
    mode.theta = th;
    mode.frequency = p.omega_f() - mu * eps;
    mode.amplitudes = std::move(phi);
    mode.norm_prefactor = b;
    return mode;
}

// Complete set of N orthonormal modes: bound first, then band modes ordered by
// (m, branch) with branch +1 before -1. Immutable once built.
class ModeTable {
public:
    ModeTable(ArrayParams params, std::vector<NormalMode> modes)
        : params_(std::move(params)), modes_(std::move(modes)) {
        if (static_cast<int>(modes_.size()) != params_.n())
            throw std::invalid_argument("ModeTable: expected N modes");
    }

    const ArrayParams& params() const noexcept { return params_; }
    const std::vector<NormalMode>& modes() const noexcept { return modes_; }
    std::size_t size() const noexcept { return modes_.size(); }
    const NormalMode& operator[](std::size_t i) const { return modes_.at(i); }
    const NormalMode& bound() const { return modes_.front(); }

    const NormalMode& band(int m, Branch branch) const {
        return modes_.at(1 + 2 * static_cast<std::size_t>(m - 1) + (branch == Branch::Plus ? 0 : 1));
    }

    // Column i holds the amplitudes of mode i.
    Eigen::MatrixXd amplitude_matrix() const {
        const int n = params_.n();
        Eigen::MatrixXd u(n, n);
        for (int i = 0; i < n; ++i) u.col(i) = modes_[i].amplitudes;
        return u;
    }

    Eigen::VectorXd frequencies() const {
        Eigen::VectorXd w(modes_.size());
        for (std::size_t i = 0; i < modes_.size(); ++i) w[static_cast<Eigen::Index>(i)] = modes_[i].frequency;
        return w;
    }

private:
    ArrayParams params_;
    std::vector<NormalMode> modes_;
};

inline ModeTable full_spectrum(const ArrayParams& p) {
    require_analytic(p, "full_spectrum");
    std::vector<NormalMode> modes;
    modes.reserve(p.n());
    modes.push_back(bound_mode(p));
    for (int m = 1; m <= p.n_wavevectors(); ++m) {
        modes.push_back(band_mode(p, m, Branch::Plus));
        modes.push_back(band_mode(p, m, Branch::Minus));
    }
    return ModeTable(p, std::move(modes));
}

struct GapInfo {
    double gap_width{0.0};     // min(upper band) - max(lower band), bound level excluded
    double thermo_bound{0.0};  // 4 kappa |eta|, the N -> infinity limit
};

inline GapInfo gap(const ArrayParams& p) {
    if (p.n() < 3) throw std::invalid_argument("gap: N = 1 has no bands");
    const ModeTable table = full_spectrum(p);
    double lower_max = -std::numeric_limits<double>::infinity();
    double upper_min = std::numeric_limits<double>::infinity();
    for (const auto& mode : table.modes()) {
        if (mode.is_bound()) continue;
        if (mode.band().branch == Branch::Plus)
            lower_max = std::max(lower_max, mode.frequency);
        else
            upper_min = std::min(upper_min, mode.frequency);
    }
    return {upper_min - lower_max, 4.0 * p.kappa() * std::abs(p.eta())};
}

// Uniform-hopping (eta = 0) reference modes, m = 1..N:
//   k = 2 pi m/(N+1), phi_x = sqrt(2/(N+1)) sin(k x/2).
// With hopping -kappa the eigenvalue of mode m is omega_f - 2 kappa cos(k/2);
// as a set this equals {omega_f + 2 kappa cos(k/2)} since m -> N+1-m flips
// the cosine.
struct UniformMode {
    int m{1};
    double wavevector{0.0};
    double frequency{0.0};
    Eigen::VectorXd amplitudes;
};

inline std::vector<UniformMode> uniform_modes(int n_cavities, double kappa, double omega_f) {
    if (n_cavities < 1) throw std::invalid_argument("uniform_modes: N must be >= 1");
    std::vector<UniformMode> out;
    out.reserve(n_cavities);
    const double b = std::sqrt(2.0 / (n_cavities + 1));
    for (int m = 1; m <= n_cavities; ++m) {
        UniformMode u;
        u.m = m;
        u.wavevector = 2.0 * std::numbers::pi * m / (n_cavities + 1);
        u.frequency = omega_f - 2.0 * kappa * std::cos(0.5 * u.wavevector);
        u.amplitudes.resize(n_cavities);
        for (int x = 1; x <= n_cavities; ++x) u.amplitudes[x - 1] = b * std::sin(0.5 * u.wavevector * x);
        out.push_back(std::move(u));
    }
    return out;
}

} // namespace cca
