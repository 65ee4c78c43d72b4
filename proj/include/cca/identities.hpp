// identities.hpp: Numerical residuals of the normal-mode identities
//
// Every residual is a max-norm. Tolerance tiers:
//   kTrigTolerance      pure trigonometric sums and unit-norm checks
//   kDivisionTolerance  identities that divide by eps_k (>= 2 kappa |eta|)
//   kMatrixTolerance    full matrix reconstructions and eigen-residuals

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cca/oracle.hpp"
#include "cca/params.hpp"
#include "cca/spectral.hpp"

namespace cca {

inline constexpr double kTrigTolerance = 1e-12;
inline constexpr double kDivisionTolerance = 1e-11;
inline constexpr double kMatrixTolerance = 1e-10;

// sin(kx + theta_k) against kappa(1-eta)/eps_k [sin(k(x-1)) - tau sin(kx)],
// x = 1..(N+1)/2.
inline double residual_trig_shift(double kappa, double eta, double k, int n_cavities) {
    const double th = theta_k(kappa, eta, k);
    const double pref = kappa * (1.0 - eta) / epsilon_k(kappa, eta, k);
    const double t = tau(eta);
    double r = 0.0;
    for (int x = 1; x <= (n_cavities + 1) / 2; ++x) {
        const double lhs = std::sin(k * x + th);
        const double rhs = pref * (std::sin(k * (x - 1)) - t * std::sin(k * x));
        r = std::max(r, std::abs(lhs - rhs));
    }
    return r;
}

// first:  sum_{x=1}^{(N±1)/2} sin(kx) sin(k'x) = (N+1)/4 delta_{kk'}   (both limits)
// second: sum_{x=1}^{(N+1)/2} [sin(k(x-1)) sin(k'x) + sin(k'(x-1)) sin(kx)]
//           = (N+1)/2 cos k delta_{kk'}
inline std::pair<double, double> residual_sine_sums(int n_cavities, double k, double k_prime) {
    const bool same = std::abs(k - k_prime) < 1e-12;
    const double diag = same ? (n_cavities + 1) / 4.0 : 0.0;
    double first = 0.0;
    for (int upper : {(n_cavities + 1) / 2, (n_cavities - 1) / 2}) {
        double s = 0.0;
        for (int x = 1; x <= upper; ++x) s += std::sin(k * x) * std::sin(k_prime * x);
        first = std::max(first, std::abs(s - diag));
    }
    double s = 0.0;
    for (int x = 1; x <= (n_cavities + 1) / 2; ++x)
        s += std::sin(k * (x - 1)) * std::sin(k_prime * x) + std::sin(k_prime * (x - 1)) * std::sin(k * x);
    const double cross = same ? (n_cavities + 1) / 2.0 * std::cos(k) : 0.0;
    return {first, std::abs(s - cross)};
}

inline double residual_orthonormality(const ModeTable& modes) {
    const Eigen::MatrixXd u = modes.amplitude_matrix();
    const Eigen::MatrixXd gram = u.transpose() * u;
    return (gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

struct DiagonalizationResidual {
    double g_residual{0.0};  // max_{k,mu} |sum_x rho_x g_{k mu,x}|
    double f_residual{0.0};  // max |sum_x rho_x f^{k'mu'}_{k mu,x} + mu eps_k delta delta|
};

inline DiagonalizationResidual residual_diagonalization(const ArrayParams& p, const ModeTable& modes) {
    const int n = p.n();
    const StaggeredCouplings rho(p);
    const auto& ms = modes.modes();
    const Eigen::VectorXd& bound = ms.front().amplitudes;

    DiagonalizationResidual out;
    for (std::size_t a = 1; a < ms.size(); ++a) {
        const Eigen::VectorXd& pa = ms[a].amplitudes;
        double g = 0.0;
        for (int x = 1; x < n; ++x) g += rho(x) * (bound[x] * pa[x - 1] + bound[x - 1] * pa[x]);
        out.g_residual = std::max(out.g_residual, std::abs(g));

        for (std::size_t b = 1; b < ms.size(); ++b) {
            const Eigen::VectorXd& pb = ms[b].amplitudes;
            double f = 0.0;
            for (int x = 1; x < n; ++x) f += rho(x) * (pa[x] * pb[x - 1] + pa[x - 1] * pb[x]);
            if (a == b) f += sign_of(ms[a].band().branch) * ms[a].epsilon.value();
            out.f_residual = std::max(out.f_residual, std::abs(f));
        }
    }
    return out;
}

// max | |kappa(1-eta)/eps_k (e^{-ik} - tau)| - 1 | over the grid.
inline double residual_theta_modulus(const ArrayParams& p) {
    double r = 0.0;
    const double t = tau(p.eta());
    for (double k : mode_wavevectors(p.n())) {
        const auto z = (p.kappa() * (1.0 - p.eta()) / epsilon_k(p.kappa(), p.eta(), k))
                       * (std::polar(1.0, -k) - std::complex<double>(t, 0.0));
        r = std::max(r, std::abs(std::abs(z) - 1.0));
    }
    return r;
}

// max_i || H_f phi_i - omega_i phi_i ||_inf
inline double residual_eigen_consistency(const ArrayParams& p, const ModeTable& modes) {
    const Eigen::MatrixXd h = build_hopping_matrix(p).entries;
    double r = 0.0;
    for (const auto& m : modes.modes())
        r = std::max(r, (h * m.amplitudes - m.frequency * m.amplitudes).cwiseAbs().maxCoeff());
    return r;
}

struct ReconstructionResidual {
    double full{0.0};
    double photon_block{0.0};
};

inline ReconstructionResidual residual_reconstruction(const ArrayParams& p, const ModeTable& modes) {
    const Eigen::MatrixXd rec = reconstruct_from_modes(modes, p).entries;
    const Eigen::MatrixXd full = build_full_matrix(p).entries;
    const Eigen::MatrixXd hop = build_hopping_matrix(p).entries;
    const int n = p.n();
    return {(rec - full).cwiseAbs().maxCoeff(), (rec.topLeftCorner(n, n) - hop).cwiseAbs().maxCoeff()};
}

// Bound-mode parity: max |phi_even| and max over consecutive odd sites of
// | |phi_{2x+1}/phi_{2x-1}| - |tau| | (denominators above 1e-300 only).
inline std::pair<double, double> residual_bound_parity(const ArrayParams& p, const ModeTable& modes) {
    const Eigen::VectorXd& phi = modes.bound().amplitudes;
    double even = 0.0;
    for (int x = 2; x <= p.n(); x += 2) even = std::max(even, std::abs(phi[x - 1]));
    double ratio = 0.0;
    const double abs_tau = std::abs(tau(p.eta()));
    for (int x = 1; x + 2 <= p.n(); x += 2) {
        if (std::abs(phi[x - 1]) > 1e-300)
            ratio = std::max(ratio, std::abs(std::abs(phi[x + 1] / phi[x - 1]) - abs_tau));
    }
    return {even, ratio};
}

struct UniformLimitResidual {
    double amplitudes{0.0};  // after per-mode sign alignment
    double frequencies{0.0};
};

// eta = 0 table against the uniform-hopping modes. Pairing:
//   bound       <-> m = (N+1)/2
//   band(m, +1) <-> m
//   band(m, -1) <-> N+1-m
// Frequencies are additionally compared as a sorted set against
// omega_f + 2 kappa cos(k/2) over k = 2 pi m/(N+1), m = 1..N.
inline UniformLimitResidual uniform_limit_residual(int n_cavities, double kappa = 1.0, double omega_f = 0.0) {
    const ArrayParams p(ArrayParams::Spec{.n_cavities = n_cavities, .eta = 0.0, .kappa = kappa, .omega_f = omega_f});
    const ModeTable table = full_spectrum(p);
    const auto ref = uniform_modes(n_cavities, kappa, omega_f);

    UniformLimitResidual out;
    auto compare = [&](const NormalMode& mode, const UniformMode& u) {
        const double plus = (mode.amplitudes - u.amplitudes).cwiseAbs().maxCoeff();
        const double minus = (mode.amplitudes + u.amplitudes).cwiseAbs().maxCoeff();
        out.amplitudes = std::max(out.amplitudes, std::min(plus, minus));
        out.frequencies = std::max(out.frequencies, std::abs(mode.frequency - u.frequency));
    };
    compare(table.bound(), ref[static_cast<std::size_t>((n_cavities + 1) / 2 - 1)]);
    for (int m = 1; m <= p.n_wavevectors(); ++m) {
        compare(table.band(m, Branch::Plus), ref[static_cast<std::size_t>(m - 1)]);
        compare(table.band(m, Branch::Minus), ref[static_cast<std::size_t>(n_cavities - m)]);
    }

    std::vector<double> got(table.size()), expected(table.size());
    for (std::size_t i = 0; i < table.size(); ++i) {
        got[i] = table[i].frequency;
        const double k = 2.0 * std::numbers::pi * static_cast<double>(i + 1) / (n_cavities + 1);
        expected[i] = omega_f + 2.0 * kappa * std::cos(0.5 * k);
    }
    std::sort(got.begin(), got.end());
    std::sort(expected.begin(), expected.end());
    for (std::size_t i = 0; i < got.size(); ++i)
        out.frequencies = std::max(out.frequencies, std::abs(got[i] - expected[i]));
    return out;
}

inline double uniform_limit_check(int n_cavities) { return uniform_limit_residual(n_cavities).amplitudes; }

struct ResidualEntry {
    std::string identity;
    ArrayParams::Spec params;
    double residual{0.0};
    double tolerance{0.0};
    bool pass{false};
};

struct ResidualReport {
    std::vector<ResidualEntry> entries;

    void add(std::string identity, const ArrayParams& p, double residual, double tolerance) {
        // NaN residuals fail.
        entries.push_back({std::move(identity), p.spec(), residual, tolerance, residual <= tolerance});
    }

    bool all_pass() const {
        return std::all_of(entries.begin(), entries.end(), [](const ResidualEntry& e) { return e.pass; });
    }

    std::size_t failures() const {
        return static_cast<std::size_t>(
            std::count_if(entries.begin(), entries.end(), [](const ResidualEntry& e) { return !e.pass; }));
    }
};

// Optional hook applied to each mode table before it is checked; used for
// negative controls.
using ModeTableTransform = std::function<ModeTable(const ModeTable&)>;

inline void append_identity_checks(ResidualReport& report, const ArrayParams& p,
                                   const ModeTableTransform& transform = {}) {
    require_analytic(p, "identity suite");
    const ModeTable table = transform ? transform(full_spectrum(p)) : full_spectrum(p);
    const auto ks = mode_wavevectors(p.n());

    double trig = 0.0, sums_diag = 0.0, sums_cross = 0.0;
    for (double k : ks) {
        trig = std::max(trig, residual_trig_shift(p.kappa(), p.eta(), k, p.n()));
        for (double kp : ks) {
            const auto [d, c] = residual_sine_sums(p.n(), k, kp);
            sums_diag = std::max(sums_diag, d);
            sums_cross = std::max(sums_cross, c);
        }
    }
    report.add("trig_shift", p, trig, kTrigTolerance);
    report.add("sine_sum", p, sums_diag, kTrigTolerance);
    report.add("sine_cross_sum", p, sums_cross, kTrigTolerance);
    report.add("theta_modulus", p, residual_theta_modulus(p), kTrigTolerance);
    report.add("orthonormality", p, residual_orthonormality(table), kTrigTolerance);

    const auto [even, ratio] = residual_bound_parity(p, table);
    report.add("bound_even_sites", p, even, 0.0);
    report.add("bound_tau_ratio", p, ratio, kTrigTolerance);

    const auto diag = residual_diagonalization(p, table);
    report.add("diagonalization_g", p, diag.g_residual, kDivisionTolerance);
    report.add("diagonalization_f", p, diag.f_residual, kDivisionTolerance);

    report.add("eigen_consistency", p, residual_eigen_consistency(p, table), kMatrixTolerance);
    const auto rec = residual_reconstruction(p, table);
    report.add("reconstruction_full", p, rec.full, kMatrixTolerance);
    report.add("reconstruction_photon", p, rec.photon_block, kMatrixTolerance);

    if (p.eta() == 0.0) {
        const auto u = uniform_limit_residual(p.n(), p.kappa(), p.omega_f());
        report.add("uniform_limit_modes", p, u.amplitudes, kMatrixTolerance);
        report.add("uniform_limit_frequencies", p, u.frequencies, kMatrixTolerance);
    }
}

inline const std::vector<int>& default_grid_sizes() {
    static const std::vector<int> sizes{1, 3, 5, 15, 51, 101};
    return sizes;
}

inline const std::vector<double>& default_grid_etas() {
    static const std::vector<double> etas{0.0, 0.05, -0.05, 0.25, -0.25, 0.5, -0.5, 0.9, -0.9};
    return etas;
}

inline ResidualReport run_identity_suite(const std::vector<ArrayParams>& points,
                                         const ModeTableTransform& transform = {}) {
    ResidualReport report;
    for (const auto& p : points) append_identity_checks(report, p, transform);
    return report;
}

// N in {1,3,5,15,51,101} x eta in {0, ±0.05, ±0.25, ±0.5, ±0.9}, kappa = J = 1.
inline std::vector<ArrayParams> default_identity_grid() {
    std::vector<ArrayParams> pts;
    for (int n : default_grid_sizes())
        for (double eta : default_grid_etas())
            pts.emplace_back(ArrayParams::Spec{.n_cavities = n, .eta = eta, .kappa = 1.0});
    return pts;
}

} // namespace cca
