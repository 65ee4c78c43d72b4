#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cca/identities.hpp"

using namespace cca;
using std::numbers::pi;

namespace {

ArrayParams make(int n, double eta) { return ArrayParams({.n_cavities = n, .eta = eta, .kappa = 1.0}); }

} // namespace

TEST(TrigShift, Examples) {
    for (double k : mode_wavevectors(15)) {
        EXPECT_LE(residual_trig_shift(1.0, 0.5, k, 15), kTrigTolerance);
        EXPECT_LE(residual_trig_shift(1.0, 0.0, k, 15), kTrigTolerance);
    }
}

TEST(TrigShift, RandomGridPoints) {
    std::mt19937_64 rng(51);
    std::uniform_real_distribution<double> eta_d(-0.95, 0.95);
    std::uniform_int_distribution<int> m_d(1, 25);
    for (int i = 0; i < 50; ++i) {
        const double k = 2 * pi * m_d(rng) / 52.0;
        EXPECT_LE(residual_trig_shift(1.0, eta_d(rng), k, 51), kTrigTolerance);
    }
}

TEST(SineSums, DiagonalAndCross) {
    const auto k = mode_wavevectors(15);
    for (std::size_t a = 0; a < k.size(); ++a)
        for (std::size_t b = 0; b < k.size(); ++b) {
            const auto [sum, cross] = residual_sine_sums(15, k[a], k[b]);
            EXPECT_LE(sum, kTrigTolerance);
            EXPECT_LE(cross, kTrigTolerance);
        }
    const auto [s3, c3] = residual_sine_sums(3, pi / 2, pi / 2);
    EXPECT_LE(s3, 1e-15);
    EXPECT_LE(c3, 1e-15);
}

TEST(SineSums, DetectsWrongNormalization) {
    // a k that is not on the grid breaks the orthogonality sums
    const auto [sum, cross] = residual_sine_sums(15, pi / 8 + 0.01, pi / 4);
    EXPECT_GT(std::max(sum, cross), 1e-6);
}

TEST(Orthonormality, Examples) {
    EXPECT_LE(residual_orthonormality(full_spectrum(make(51, 0.5))), kTrigTolerance);
    EXPECT_EQ(residual_orthonormality(full_spectrum(make(1, 0.3))), 0.0);
    EXPECT_LE(residual_orthonormality(full_spectrum(make(101, -0.9))), kTrigTolerance);
}

TEST(Diagonalization, Examples) {
    for (double eta : {0.5, 0.0}) {
        const auto p = make(15, eta);
        const auto r = residual_diagonalization(p, full_spectrum(p));
        EXPECT_LE(r.g_residual, kDivisionTolerance);
        EXPECT_LE(r.f_residual, kDivisionTolerance);
    }
    const auto p3 = make(3, 0.5);
    EXPECT_LE(residual_diagonalization(p3, full_spectrum(p3)).f_residual, kDivisionTolerance);
}

TEST(Diagonalization, DetectsWrongFrequency) {
    const auto p = make(15, 0.5);
    auto modes = full_spectrum(p).modes();
    modes[3].frequency += 1e-6;
    const ModeTable bad(p, modes);
    EXPECT_GT(residual_eigen_consistency(p, bad), kMatrixTolerance);
    EXPECT_GT(residual_reconstruction(p, bad).photon_block, kMatrixTolerance);
}

TEST(UniformLimit, Examples) {
    for (int n : {1, 3, 5, 51}) {
        const auto r = uniform_limit_residual(n);
        EXPECT_LE(r.amplitudes, kMatrixTolerance) << n;
        EXPECT_LE(r.frequencies, kMatrixTolerance) << n;
    }
    EXPECT_LE(uniform_limit_check(5), kMatrixTolerance);
}

TEST(BoundParity, Examples) {
    const auto p = make(101, -0.9);
    const auto [even, ratio] = residual_bound_parity(p, full_spectrum(p));
    EXPECT_EQ(even, 0.0);
    EXPECT_LE(ratio, kTrigTolerance);
}

TEST(Suite, DefaultGridPasses) {
    const auto points = default_identity_grid();
    EXPECT_EQ(points.size(), default_grid_sizes().size() * default_grid_etas().size());
    const ResidualReport report = run_identity_suite(points);
    for (const auto& e : report.entries) {
        EXPECT_TRUE(e.pass) << e.identity << " n=" << e.params.n_cavities << " eta=" << e.params.eta
                            << " residual=" << e.residual;
        EXPECT_EQ(e.pass, e.residual <= e.tolerance);
    }
    EXPECT_TRUE(report.all_pass());
    EXPECT_EQ(report.failures(), 0u);
}

TEST(Suite, CorruptedTableFails) {
    const ResidualReport report = run_identity_suite({make(15, 0.25)}, [](const ModeTable& t) {
        auto modes = t.modes();
        modes[2].amplitudes[4] *= 1.001;
        return ModeTable(t.params(), modes);
    });
    EXPECT_FALSE(report.all_pass());
    EXPECT_GT(report.failures(), 0u);
}

TEST(Suite, TolerancesByTier) {
    const ResidualReport report = run_identity_suite({make(5, 0.0)});
    for (const auto& e : report.entries) {
        if (e.identity == "trig_shift" || e.identity == "orthonormality") {
            EXPECT_EQ(e.tolerance, 1e-12);
        }
        if (e.identity.starts_with("diagonalization")) {
            EXPECT_EQ(e.tolerance, 1e-11);
        }
        if (e.identity.starts_with("reconstruction")) {
            EXPECT_EQ(e.tolerance, 1e-10);
        }
    }
}
