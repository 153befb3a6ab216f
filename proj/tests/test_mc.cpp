#include <gtest/gtest.h>

#include "qcorr/channel.hpp"
#include "qcorr/mc.hpp"
#include "qcorr/states.hpp"
#include "support/oracles.hpp"

using namespace qcorr;

TEST(Mc, ZeroTimeGivesZeroPhases)
{
    auto rng = trajectory_rng(1, 0);
    for (auto mode : {PhaseMode::ExactPhase, PhaseMode::OuPath}) {
        const auto phi = sample_phase(NoiseParams{}, 0.0, TrajectoryConfig{10, 0.0, 1, mode}, rng);
        EXPECT_EQ(phi, (PhaseTriple{0, 0, 0}));
    }
}

TEST(Mc, SingleTrajectoryAtZeroTimeIsExact)
{
    const Matrix8 rho = make_state(Family::W, 0.7);
    EXPECT_EQ(ensemble_density(rho, NoiseParams{}, 0.0, {1, 0.0, 3, PhaseMode::ExactPhase}), rho);
}

TEST(Mc, DiagonalStatesAreFixedPoints)
{
    std::mt19937_64 rng(1);
    std::array<double, 8> p{};
    double s = 0;
    for (double& x : p) s += (x = qtest::uniform(rng));
    for (double& x : p) x /= s;
    const Matrix8 rho = Matrix8::diagonal(p);
    for (std::size_t n : {1u, 7u, 5000u})
        EXPECT_EQ(ensemble_density(rho, NoiseParams::from_ratio(2.0), 1.3, {n, 0.0, 5, PhaseMode::ExactPhase}), rho);
}

TEST(Mc, DiagonalInvariantPerTrajectory)
{
    std::mt19937_64 rng(2);
    const Matrix8 rho = qtest::random_density<8>(rng);
    const Matrix8 out = propagate(rho, {0.3, -1.2, 2.5});
    for (std::size_t i = 0; i < 8; ++i) EXPECT_EQ(out(i, i), rho(i, i));
}

TEST(Mc, PropagateMatchesPureStateDecomposition)
{
    std::mt19937_64 rng(3);
    const Matrix8 rho = qtest::random_density<8>(rng);
    const auto es = hermitian_eigensystem(rho);
    const PhaseTriple phi{0.7, -0.4, 1.9};
    Matrix8 mixture;
    for (std::size_t k = 0; k < 8; ++k) {
        std::array<cplx, 8> psi{};
        for (std::size_t i = 0; i < 8; ++i) psi[i] = es.vectors(i, k);
        const auto out = propagate_pure(psi, phi);
        for (std::size_t i = 0; i < 8; ++i)
            for (std::size_t j = 0; j < 8; ++j) mixture(i, j) += es.spectrum.values[k] * out[i] * std::conj(out[j]);
    }
    EXPECT_LT(max_abs_diff(mixture, propagate(rho, phi)), 1e-12);
}

TEST(Mc, PropagatorIsTheZRotationProduct)
{
    const PhaseTriple phi{0.3, 1.1, -0.8};
    const Matrix8 u = kron(qtest::z_rotation(phi[0]), qtest::z_rotation(phi[1]), qtest::z_rotation(phi[2]));
    std::mt19937_64 rng(4);
    const Matrix8 rho = qtest::random_density<8>(rng);
    EXPECT_LT(max_abs_diff(propagate(rho, phi), Matrix8(u * rho * u.adjoint())), 1e-15);
}

TEST(Mc, ExactPhaseVariance)
{
    const NoiseParams noise{1.0, 10.0};
    const TrajectoryConfig cfg{100000, 0.0, 42, PhaseMode::ExactPhase};
    double sum2 = 0.0, sum4 = 0.0;
    const std::size_t n = 100000;
    for (std::size_t k = 0; k < n; ++k) {
        auto rng = trajectory_rng(cfg.seed, k);
        const double x = sample_phase(noise, 1.0, cfg, rng)[0];
        sum2 += x * x;
        sum4 += x * x * x * x;
    }
    const double var = sum2 / n;
    const double se = std::sqrt((sum4 / n - var * var) / n);
    const double target = 2.0 * decoherence_exponent(noise, 1.0);
    EXPECT_NEAR(target, 0.9, 1e-4);
    EXPECT_LT(std::abs(var - target), 3 * se);
}

TEST(Mc, OuPathVarianceMatchesExactLaw)
{
    const NoiseParams noise{1.0, 10.0};
    const TrajectoryConfig cfg{20000, 1e-3 / noise.bandwidth * 10, 7, PhaseMode::OuPath};
    double sum2 = 0.0;
    const std::size_t n = cfg.n_traj;
    for (std::size_t k = 0; k < n; ++k) {
        auto rng = trajectory_rng(cfg.seed, k);
        for (double x : sample_phase(noise, 1.0, cfg, rng)) sum2 += x * x;
    }
    const double var = sum2 / (3.0 * n);
    EXPECT_NEAR(var / (2.0 * decoherence_exponent(noise, 1.0)), 1.0, 0.03);
}

TEST(Mc, GhzCoherenceWithinStatisticalError)
{
    const NoiseParams noise{1.0, 10.0};
    const std::size_t n = 100000;
    const auto stats = ensemble_statistics(make_state(Family::GHZ, 1.0), noise, 1.0, {n, 0.0, 11, PhaseMode::ExactPhase});
    const double expected = 0.5 * std::exp(-1.35);
    EXPECT_NEAR(0.5 * std::exp(-3 * decoherence_exponent(noise, 1.0)), expected, 1e-5);
    EXPECT_LT(std::abs(std::abs(stats.mean(0, 7)) - 0.5 * std::exp(-3 * decoherence_exponent(noise, 1.0))),
              3 * 0.5 / std::sqrt(static_cast<double>(n)));
}

TEST(Mc, VerificationOverGrid)
{
    for (double ratio : {0.1, 1.0, 10.0})
        for (double t : {0.3, 1.0, 3.0})
            for (auto fam : {Family::GHZ, Family::W}) {
                const auto noise = NoiseParams::from_ratio(ratio);
                const Matrix8 rho0 = make_state(fam, 1.0);
                const auto stats = ensemble_statistics(rho0, noise, t, {20000, 0.0, 13, PhaseMode::ExactPhase});
                const auto v = verify_ensemble(stats, evolve_dephasing(rho0, noise, t));
                EXPECT_TRUE(v.passed) << ratio << " " << t << " max z " << v.max_z;
                EXPECT_TRUE(v.sufficient);
            }
}

TEST(Mc, InsufficientStatisticsIsFlagged)
{
    const Matrix8 rho0 = make_state(Family::GHZ, 1.0);
    const auto stats = ensemble_statistics(rho0, NoiseParams{}, 1.0, {10, 0.0, 1, PhaseMode::ExactPhase});
    const auto v = verify_ensemble(stats, evolve_dephasing(rho0, NoiseParams{}, 1.0));
    EXPECT_FALSE(v.sufficient);
}

TEST(Mc, DeterministicForFixedSeedAndThreadCount)
{
    const Matrix8 rho0 = make_state(Family::W, 0.9);
    TrajectoryConfig a{30000, 0.0, 77, PhaseMode::OuPath, 1};
    TrajectoryConfig b = a;
    b.threads = 4;
    const auto sa = ensemble_statistics(rho0, NoiseParams::from_ratio(5.0), 0.5, a);
    const auto sb = ensemble_statistics(rho0, NoiseParams::from_ratio(5.0), 0.5, b);
    EXPECT_EQ(sa.mean, sb.mean);
    EXPECT_EQ(sa.se_re, sb.se_re);
    TrajectoryConfig c = a;
    c.seed = 78;
    EXPECT_NE(ensemble_statistics(rho0, NoiseParams::from_ratio(5.0), 0.5, c).mean, sa.mean);
}

TEST(Mc, EnsembleIsADensityMatrix)
{
    const Matrix8 rho0 = make_state(Family::W, 1.0);
    const Matrix8 est = ensemble_density(rho0, NoiseParams{}, 0.8, {5000, 0.0, 3, PhaseMode::ExactPhase});
    EXPECT_TRUE(is_hermitian(est, 1e-14));
    EXPECT_NEAR(est.trace().real(), 1.0, 1e-14);
}

TEST(Mc, ConfigValidation)
{
    const NoiseParams noise{1.0, 10.0};
    EXPECT_THROW((TrajectoryConfig{0, 0.0, 1, PhaseMode::ExactPhase}.validate(noise)), ContractError);
    EXPECT_THROW((TrajectoryConfig{10, 0.02, 1, PhaseMode::OuPath}.validate(noise)), ContractError);
    EXPECT_NO_THROW((TrajectoryConfig{10, 0.01, 1, PhaseMode::OuPath}.validate(noise)));
    EXPECT_NEAR(TrajectoryConfig{}.step(noise), 0.001, 1e-18);
}
