// params.hpp: Physical configuration of a staggered coupled-cavity array

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace cca {

// Units: frequencies in units of J, times in units of 1/J (hbar = 1).
//
// Bond x (between sites x and x+1, x = 1..N-1) carries the hopping rate
//   kappa_x = kappa * (1 - (-1)^x eta),
// i.e. kappa_1 = (1+eta) kappa on odd bonds and kappa_2 = (1-eta) kappa on
// even bonds. Only odd N is supported.
class ArrayParams {
public:
    struct Spec {
        int n_cavities{1};
        double eta{0.0};
        double kappa{1.0};
        double omega_f{0.0};
        double delta{0.0};      // omega_f - omega_a
        double coupling_j{1.0};
    };

    ArrayParams() : ArrayParams(Spec{}) {}

    explicit ArrayParams(const Spec& s) : s_(s) {
        if (s.n_cavities < 1)
            throw std::invalid_argument("n_cavities must be >= 1, got " + std::to_string(s.n_cavities));
        if (s.n_cavities % 2 == 0)
            throw std::invalid_argument("n_cavities must be odd (even-N arrays are not supported), got "
                                        + std::to_string(s.n_cavities));
        if (!std::isfinite(s.eta) || std::abs(s.eta) > 1.0)
            throw std::invalid_argument("eta must satisfy |eta| <= 1");
        if (!std::isfinite(s.kappa) || !(s.kappa > 0.0))
            throw std::invalid_argument("kappa must be > 0");
        if (!std::isfinite(s.omega_f) || !std::isfinite(s.delta))
            throw std::invalid_argument("omega_f and delta must be finite");
        if (!std::isfinite(s.coupling_j) || s.coupling_j < 0.0)
            throw std::invalid_argument("coupling_j must be >= 0");
    }

    int n() const noexcept { return s_.n_cavities; }
    double eta() const noexcept { return s_.eta; }
    double kappa() const noexcept { return s_.kappa; }
    double omega_f() const noexcept { return s_.omega_f; }
    double delta() const noexcept { return s_.delta; }
    double omega_a() const noexcept { return s_.omega_f - s_.delta; }
    double j() const noexcept { return s_.coupling_j; }

    double kappa_odd() const noexcept { return (1.0 + s_.eta) * s_.kappa; }
    double kappa_even() const noexcept { return (1.0 - s_.eta) * s_.kappa; }

    // Number of odd sites, (N+1)/2, and of band wavevectors, (N-1)/2.
    int n_odd() const noexcept { return (s_.n_cavities + 1) / 2; }
    int n_wavevectors() const noexcept { return (s_.n_cavities - 1) / 2; }

    bool analytic() const noexcept { return std::abs(s_.eta) < 1.0; }

    const Spec& spec() const noexcept { return s_; }

    ArrayParams with_eta(double eta) const { Spec t = s_; t.eta = eta; return ArrayParams(t); }
    ArrayParams with_n(int n) const { Spec t = s_; t.n_cavities = n; return ArrayParams(t); }
    ArrayParams with_kappa(double kappa) const { Spec t = s_; t.kappa = kappa; return ArrayParams(t); }
    ArrayParams with_j(double j) const { Spec t = s_; t.coupling_j = j; return ArrayParams(t); }
    ArrayParams with_delta(double d) const { Spec t = s_; t.delta = d; return ArrayParams(t); }

private:
    Spec s_;
};

inline void require_analytic(double eta, const char* what) {
    if (!(std::abs(eta) < 1.0))
        throw std::domain_error(std::string(what) + ": requires |eta| < 1");
}

inline void require_analytic(const ArrayParams& p, const char* what) { require_analytic(p.eta(), what); }

} // namespace cca
