// oracle.hpp: Brute-force single-excitation Hamiltonian and propagation
//
// Basis ordering, shared by every module and file format:
//   index i in [0, N)   photon at site i+1
//   index i in [N, 2N)  exciton at site i-N+1

#pragma once

#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "cca/params.hpp"
#include "cca/spectral.hpp"

namespace cca {

inline constexpr double kNormTolerance = 1e-10;
inline constexpr double kNormDriftFailure = 1e-8;

// rho_x = -kappa [1 - (-1)^x eta], x = 1..N-1, stored at index x-1.
struct StaggeredCouplings {
    Eigen::VectorXd rho;

    explicit StaggeredCouplings(const ArrayParams& p) : rho(std::max(p.n() - 1, 0)) {
        for (int x = 1; x < p.n(); ++x)
            rho[x - 1] = (x % 2 == 1) ? -p.kappa_odd() : -p.kappa_even();
    }

    double operator()(int x) const { return rho[x - 1]; }
};

class SingleExcitationState {
public:
    explicit SingleExcitationState(Eigen::VectorXcd amplitudes) : amp_(std::move(amplitudes)) {
        if (amp_.size() == 0 || amp_.size() % 2 != 0)
            throw std::invalid_argument("SingleExcitationState: dimension must be 2N");
    }

    static SingleExcitationState atom_at(int n, int site) {
        check_site(n, site);
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(2 * n);
        v[n + site - 1] = 1.0;
        return SingleExcitationState(std::move(v));
    }

    static SingleExcitationState photon_at(int n, int site) {
        check_site(n, site);
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(2 * n);
        v[site - 1] = 1.0;
        return SingleExcitationState(std::move(v));
    }

    int n() const noexcept { return static_cast<int>(amp_.size() / 2); }
    const Eigen::VectorXcd& amplitudes() const noexcept { return amp_; }
    std::complex<double> photon(int site) const { return amp_[site - 1]; }
    std::complex<double> atom(int site) const { return amp_[n() + site - 1]; }
    auto photon_block() const { return amp_.head(n()); }
    auto atom_block() const { return amp_.tail(n()); }
    double norm() const { return amp_.norm(); }

    void require_normalized(const char* what) const {
        if (std::abs(norm() - 1.0) > kNormTolerance)
            throw std::invalid_argument(std::string(what) + ": initial state is not normalized");
    }

private:
    static void check_site(int n, int site) {
        if (site < 1 || site > n)
            throw std::out_of_range("site " + std::to_string(site) + " outside 1.." + std::to_string(n));
    }

    Eigen::VectorXcd amp_;
};

enum class MatrixKind { Photonic, Full };

struct HamiltonianMatrix {
    MatrixKind kind{MatrixKind::Full};
    Eigen::MatrixXd entries;

    Eigen::Index dim() const noexcept { return entries.rows(); }
};

inline HamiltonianMatrix build_hopping_matrix(const ArrayParams& p) {
    const int n = p.n();
    const StaggeredCouplings c(p);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    h.diagonal().setConstant(p.omega_f());
    for (int x = 1; x < n; ++x) {
        h(x - 1, x) = c(x);
        h(x, x - 1) = c(x);
    }
    return {MatrixKind::Photonic, std::move(h)};
}

// [[H_f, J I], [J I, omega_a I]]
inline HamiltonianMatrix build_full_matrix(const ArrayParams& p) {
    const int n = p.n();
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    h.topLeftCorner(n, n) = build_hopping_matrix(p).entries;
    h.bottomRightCorner(n, n).diagonal().setConstant(p.omega_a());
    h.topRightCorner(n, n).diagonal().setConstant(p.j());
    h.bottomLeftCorner(n, n).diagonal().setConstant(p.j());
    return {MatrixKind::Full, std::move(h)};
}

// exp(-i H t) via one symmetric eigendecomposition, reused for every t.
class ExactPropagator {
public:
    explicit ExactPropagator(const HamiltonianMatrix& h) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.entries);
        if (es.info() != Eigen::Success) throw std::runtime_error("ExactPropagator: eigensolve failed");
        energies_ = es.eigenvalues();
        vectors_ = es.eigenvectors();
    }

    const Eigen::VectorXd& energies() const noexcept { return energies_; }
    const Eigen::MatrixXd& vectors() const noexcept { return vectors_; }

    SingleExcitationState apply(const SingleExcitationState& initial, double t) const {
        if (!std::isfinite(t)) throw std::invalid_argument("evolve_exact: non-finite time");
        if (initial.amplitudes().size() != vectors_.rows())
            throw std::invalid_argument("evolve_exact: state/matrix dimension mismatch");
        if (t == 0.0) return initial;
        Eigen::VectorXcd c = vectors_.transpose() * initial.amplitudes();
        for (Eigen::Index i = 0; i < c.size(); ++i) c[i] *= std::polar(1.0, -energies_[i] * t);
        Eigen::VectorXcd out = vectors_ * c;
        const double drift = std::abs(out.norm() - initial.norm());
        if (drift > kNormDriftFailure)
            throw std::runtime_error("evolve_exact: norm drift " + std::to_string(drift)
                                     + " indicates a defective eigensolve");
        return SingleExcitationState(std::move(out));
    }

private:
    Eigen::VectorXd energies_;
    Eigen::MatrixXd vectors_;
};

inline std::vector<SingleExcitationState> evolve_exact(const HamiltonianMatrix& h,
                                                       const SingleExcitationState& initial,
                                                       std::span<const double> times) {
    if (h.kind != MatrixKind::Full) throw std::invalid_argument("evolve_exact: requires the full 2N matrix");
    initial.require_normalized("evolve_exact");
    for (double t : times)
        if (!std::isfinite(t)) throw std::invalid_argument("evolve_exact: non-finite time");
    const ExactPropagator prop(h);
    std::vector<SingleExcitationState> out;
    out.reserve(times.size());
    for (double t : times) out.push_back(prop.apply(initial, t));
    return out;
}

// Sum over normal modes of omega |phi><phi| (photon block), omega_a |phi><phi|
// (atom block) and J |phi><phi| (cross blocks), expressed in the site basis.
inline HamiltonianMatrix reconstruct_from_modes(const ModeTable& modes, const ArrayParams& p) {
    require_analytic(p, "reconstruct_from_modes");
    const int n = p.n();
    if (static_cast<int>(modes.size()) != n)
        throw std::invalid_argument("reconstruct_from_modes: mode table size mismatch");
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    for (const auto& mode : modes.modes()) {
        const Eigen::MatrixXd proj = mode.amplitudes * mode.amplitudes.transpose();
        h.topLeftCorner(n, n) += mode.frequency * proj;
        h.bottomRightCorner(n, n) += p.omega_a() * proj;
        h.topRightCorner(n, n) += p.j() * proj;
        h.bottomLeftCorner(n, n) += p.j() * proj;
    }
    return {MatrixKind::Full, std::move(h)};
}

inline double expectation(const HamiltonianMatrix& h, const SingleExcitationState& psi) {
    const Eigen::VectorXcd& a = psi.amplitudes();
    return (a.adjoint() * (h.entries.cast<std::complex<double>>() * a))(0, 0).real();
}

} // namespace cca
