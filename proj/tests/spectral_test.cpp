#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cca/oracle.hpp"
#include "cca/spectral.hpp"

using namespace cca;
using std::numbers::pi;

namespace {

ArrayParams make(int n, double eta, double kappa = 1.0, double omega_f = 0.0) {
    return ArrayParams({.n_cavities = n, .eta = eta, .kappa = kappa, .omega_f = omega_f});
}

// Reference values from mpmath (30 digits) and a numpy dense eigensolve.
constexpr double kEps3x3 = 1.58113883008418966599944677222;
constexpr double kLambdaQuarter = 1.95761518897121768683566090468;

} // namespace

TEST(Params, RejectsInvalid) {
    EXPECT_THROW(make(4, 0.1), std::invalid_argument);
    EXPECT_THROW(make(0, 0.1), std::invalid_argument);
    EXPECT_THROW(make(3, 1.5), std::invalid_argument);
    EXPECT_THROW(make(3, 0.1, 0.0), std::invalid_argument);
    EXPECT_THROW(ArrayParams({.n_cavities = 3, .coupling_j = -1.0}), std::invalid_argument);
    EXPECT_NO_THROW(make(3, -1.0));
}

TEST(Tau, Examples) {
    EXPECT_DOUBLE_EQ(tau(0.0), -1.0);
    EXPECT_DOUBLE_EQ(tau(0.5), -3.0);
    EXPECT_DOUBLE_EQ(tau(-0.25), -0.6);
    EXPECT_THROW(tau(1.0), std::domain_error);
    EXPECT_THROW(tau(-1.0), std::domain_error);
}

TEST(Tau, NegativeAndInsideUnitDiskForNegativeEta) {
    for (double eta = -0.95; eta < 0.96; eta += 0.05) {
        EXPECT_LT(tau(eta), 0.0);
        if (std::abs(eta) > 1e-12) {
            EXPECT_EQ(std::abs(tau(eta)) < 1.0, eta < 0.0) << eta;
        }
    }
}

TEST(Epsilon, Examples) {
    EXPECT_NEAR(epsilon_k(1.3, 0.4, 0.0), 2.6, 1e-15);
    EXPECT_NEAR(epsilon_k(1.3, -0.4, pi), 2 * 1.3 * 0.4, 1e-15);
    EXPECT_NEAR(epsilon_k(1.0, 0.5, pi / 2), kEps3x3, 1e-14);
}

TEST(Epsilon, BoundedBelowByGap) {
    for (double eta : {-0.9, -0.3, 0.0, 0.2, 0.7})
        for (double k = 0.0; k <= pi; k += 0.01) EXPECT_GE(epsilon_k(2.0, eta, k), 4.0 * std::abs(eta) - 1e-14);
}

TEST(Theta, Examples) {
    EXPECT_NEAR(theta_k(1.0, 0.0, pi / 2), -pi / 4, 1e-14);
    EXPECT_NEAR(theta_k(1.0, 0.3, pi), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(theta_k(1.0, -0.3, pi)), pi, 1e-12);
}

TEST(Theta, UnitModulus) {
    for (double eta : {-0.9, -0.5, -0.05, 0.0, 0.05, 0.5, 0.9})
        for (double k : mode_wavevectors(51)) EXPECT_NEAR(std::abs(theta_phase(1.7, eta, k)), 1.0, 1e-12);
}

TEST(Wavevectors, Grid) {
    EXPECT_TRUE(mode_wavevectors(1).empty());
    ASSERT_EQ(mode_wavevectors(3).size(), 1u);
    EXPECT_DOUBLE_EQ(mode_wavevectors(3)[0], pi / 2);
    const auto k5 = mode_wavevectors(5);
    ASSERT_EQ(k5.size(), 2u);
    EXPECT_DOUBLE_EQ(k5[0], pi / 3);
    EXPECT_DOUBLE_EQ(k5[1], 2 * pi / 3);
    const auto k51 = mode_wavevectors(51);
    ASSERT_EQ(k51.size(), 25u);
    EXPECT_DOUBLE_EQ(k51.back(), 50 * pi / 52);
    EXPECT_TRUE(std::is_sorted(k51.begin(), k51.end()));
}

TEST(BoundMode, ThreeSiteKernel) {
    const auto p = make(3, 0.5);
    const NormalMode b = bound_mode(p);
    EXPECT_TRUE(b.is_bound());
    EXPECT_EQ(b.frequency, 0.0);
    EXPECT_NEAR(b.amplitudes[0], 1 / std::sqrt(10.0), 1e-15);
    EXPECT_EQ(b.amplitudes[1], 0.0);
    EXPECT_NEAR(b.amplitudes[2], -3 / std::sqrt(10.0), 1e-15);
    const Eigen::VectorXd r = build_hopping_matrix(p).entries * b.amplitudes;
    EXPECT_LT(r.cwiseAbs().maxCoeff(), 1e-15);
}

TEST(BoundMode, ParityAndRatio) {
    for (double eta : {-0.9, -0.25, 0.05, 0.5, 0.9}) {
        const auto p = make(101, eta);
        const NormalMode b = bound_mode(p);
        EXPECT_NEAR(b.amplitudes.norm(), 1.0, 1e-14);
        EXPECT_GT(b.amplitudes[0], 0.0);
        for (int x = 2; x <= p.n(); x += 2) EXPECT_EQ(b.amplitudes[x - 1], 0.0);
        for (int x = 3; x <= p.n(); x += 2)
            if (std::abs(b.amplitudes[x - 3]) > 1e-300) {
                EXPECT_NEAR(std::abs(b.amplitudes[x - 1] / b.amplitudes[x - 3]), std::abs(tau(eta)), 1e-12);
            }
    }
}

TEST(BoundMode, SurvivesExtremeLocalization) {
    // |tau|^{-500} overflows a naive power
    const NormalMode b = bound_mode(make(1001, 0.95));
    EXPECT_TRUE(b.amplitudes.allFinite());
    EXPECT_NEAR(b.amplitudes.norm(), 1.0, 1e-14);
    EXPECT_EQ(b.amplitudes[0], 0.0);  // underflows; sign still referred to site 1
    for (int x = 1; x <= 1001; x += 2) {
        const double a = b.amplitudes[x - 1];
        if (a != 0.0) {
            EXPECT_EQ(a > 0.0, (x / 2) % 2 == 0) << x;
        }
    }
    EXPECT_GT(std::abs(b.amplitudes[1000]), 0.9);
}

TEST(BoundMode, AnalyticPrefactor) {
    const auto p = make(101, -0.25);
    const NormalMode b = bound_mode(p);
    ASSERT_TRUE(bound_prefactor(p).has_value());
    EXPECT_NEAR(*bound_prefactor(p), 0.8, 1e-15);
    EXPECT_NEAR(b.amplitudes[0], 0.8, 1e-14);
}

TEST(BoundMode, UniformLimitAlternates) {
    const auto p = make(9, 0.0);
    const NormalMode b = bound_mode(p);
    const double a = std::sqrt(2.0 / 10.0);
    for (int x = 1; x <= 9; x += 2) EXPECT_NEAR(b.amplitudes[x - 1], ((x / 2) % 2 == 0 ? a : -a), 1e-15);
    // near eta = 0 the profile approaches the same vector
    const NormalMode near = bound_mode(make(9, 1e-9));
    EXPECT_LT((near.amplitudes - b.amplitudes).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(BandMode, ThreeSiteFrequency) {
    const auto p = make(3, 0.5);
    EXPECT_NEAR(band_mode(p, 1, Branch::Plus).frequency, -kEps3x3, 1e-14);
    EXPECT_NEAR(band_mode(p, 1, Branch::Minus).frequency, kEps3x3, 1e-14);
    EXPECT_THROW(band_mode(p, 0, Branch::Plus), std::out_of_range);
    EXPECT_THROW(band_mode(p, 2, Branch::Plus), std::out_of_range);
}

TEST(BandMode, EigenResidualAgainstOracle) {
    for (int n : {3, 5, 15, 51, 101})
        for (double eta : {-0.9, -0.25, 0.0, 0.05, 0.5}) {
            const auto p = make(n, eta, 1.3, 2.0);
            const Eigen::MatrixXd h = build_hopping_matrix(p).entries;
            const ModeTable table = full_spectrum(p);
            for (const auto& mode : table.modes())
                EXPECT_LE((h * mode.amplitudes - mode.frequency * mode.amplitudes).cwiseAbs().maxCoeff(), 1e-10)
                    << n << " " << eta << " " << mode.name();
        }
}

TEST(FullSpectrum, FigureOneStructure) {
    const auto table = full_spectrum(make(51, 0.5));
    ASSERT_EQ(table.size(), 51u);
    int zero = 0, lower = 0, upper = 0;
    for (double w : table.frequencies()) {
        if (std::abs(w) <= 1e-10) ++zero;
        else if (w >= -2.0 && w <= -1.0) ++lower;
        else if (w >= 1.0 && w <= 2.0) ++upper;
    }
    EXPECT_EQ(zero, 1);
    EXPECT_EQ(lower, 25);
    EXPECT_EQ(upper, 25);
}

TEST(FullSpectrum, SymmetricAboutOmegaF) {
    const auto p = make(31, -0.4, 1.0, 5.0);
    const auto table = full_spectrum(p);
    for (int m = 1; m <= p.n_wavevectors(); ++m)
        EXPECT_NEAR(table.band(m, Branch::Plus).frequency + table.band(m, Branch::Minus).frequency, 10.0, 1e-12);
}

TEST(FullSpectrum, Orthonormal) {
    for (double eta : {-0.9, 0.0, 0.25}) {
        const Eigen::MatrixXd a = full_spectrum(make(101, eta)).amplitude_matrix();
        EXPECT_LE((a.transpose() * a - Eigen::MatrixXd::Identity(101, 101)).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(FullSpectrum, SingleCavity) {
    const auto table = full_spectrum(make(1, 0.3, 1.0, 7.0));
    ASSERT_EQ(table.size(), 1u);
    EXPECT_TRUE(table[0].is_bound());
    EXPECT_EQ(table[0].amplitudes[0], 1.0);
    EXPECT_EQ(table[0].frequency, 7.0);
}

TEST(FullSpectrum, MatchesDenseEigensolve) {
    for (int n : {3, 15, 51})
        for (double eta : {-0.5, 0.0, 0.9}) {
            const auto p = make(n, eta);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(build_hopping_matrix(p).entries);
            Eigen::VectorXd ours = full_spectrum(p).frequencies();
            std::sort(ours.begin(), ours.end());
            EXPECT_LE((ours - es.eigenvalues()).cwiseAbs().maxCoeff(), 1e-10);
        }
}

TEST(Gap, BoundAndMonotoneApproach) {
    EXPECT_EQ(gap(make(11, 0.0)).thermo_bound, 0.0);
    EXPECT_THROW(gap(make(1, 0.5)), std::invalid_argument);
    for (double eta : {-0.5, 0.25, 0.5}) {
        double prev = std::numeric_limits<double>::infinity();
        for (int n : {3, 5, 15, 51, 101, 201, 1001}) {
            const GapInfo g = gap(make(n, eta));
            EXPECT_GE(g.gap_width, g.thermo_bound - 1e-12);
            EXPECT_LT(g.gap_width, prev);
            prev = g.gap_width;
        }
        EXPECT_NEAR(prev, 4 * std::abs(eta), 1e-3);
    }
}

TEST(LocalizationLength, Examples) {
    EXPECT_TRUE(std::isinf(localization_length(0.0)));
    EXPECT_NEAR(localization_length(-0.25), kLambdaQuarter, 1e-13);
    double prev = std::numeric_limits<double>::infinity();
    for (double eta : {0.1, 0.3, 0.6, 0.9, 0.99, 0.9999}) {
        const double l = localization_length(eta);
        EXPECT_LT(l, prev);
        prev = l;
    }
    EXPECT_THROW(localization_length(1.0), std::domain_error);
}

TEST(UniformModes, EigenvectorsOfUniformChain) {
    const auto p = make(7, 0.0, 1.5, 0.3);
    const Eigen::MatrixXd h = build_hopping_matrix(p).entries;
    for (const auto& u : uniform_modes(7, 1.5, 0.3))
        EXPECT_LE((h * u.amplitudes - u.frequency * u.amplitudes).cwiseAbs().maxCoeff(), 1e-13) << u.m;
}
