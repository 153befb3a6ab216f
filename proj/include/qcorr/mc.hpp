#pragma once
/**
 * @file mc.hpp
 * @brief Trajectory estimate of the dephased state.
 *
 * Each trajectory draws one accumulated phase phi_S = integral of Omega_S per
 * qubit and applies U = exp(-(i/2) sum_S phi_S sigma_z^S). The ensemble mean of
 * U rho0 U^H estimates rho(t).
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string_view>
#include <vector>

#include "qcorr/errors.hpp"
#include "qcorr/matrix.hpp"
#include "qcorr/noise.hpp"
#include "qcorr/parallel.hpp"

namespace qcorr {

enum class PhaseMode { ExactPhase, OuPath };

inline std::string_view to_string(PhaseMode m) { return m == PhaseMode::ExactPhase ? "exact-phase" : "ou-path"; }

/// Time step used in ou-path mode when none is given, in units of 1/gamma.
inline constexpr double kDefaultOuStep = 0.01;
/// Largest allowed gamma * dt in ou-path mode.
inline constexpr double kMaxOuStep = 0.1;
/// Trajectories accumulated sequentially before the pairwise reduction.
inline constexpr std::size_t kTrajectoryChunk = 4096;
/// Below this many trajectories a verification is reported as insufficient.
inline constexpr std::size_t kMinVerificationTrajectories = 1000;

struct TrajectoryConfig {
    std::size_t n_traj = 100000;
    double dt = 0.0; ///< ou-path step; 0 selects kDefaultOuStep / gamma
    std::uint64_t seed = 1;
    PhaseMode mode = PhaseMode::ExactPhase;
    unsigned threads = 0; ///< 0 = hardware concurrency

    double step(const NoiseParams& noise) const { return dt > 0.0 ? dt : kDefaultOuStep / noise.bandwidth; }

    void validate(const NoiseParams& noise) const
    {
        noise.validate();
        detail::require(n_traj >= 1, "TrajectoryConfig: n_traj must be at least 1");
        detail::require(dt >= 0.0 && std::isfinite(dt), "TrajectoryConfig: dt must be positive");
        if (mode == PhaseMode::OuPath)
            detail::require(noise.bandwidth * step(noise) <= kMaxOuStep * (1.0 + 1e-12),
                            "TrajectoryConfig: gamma * dt must not exceed 0.1 in ou-path mode");
    }
};

using PhaseTriple = std::array<double, 3>;

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

} // namespace detail

/// Independent generator for trajectory `index`, so results do not depend on
/// how trajectories are scheduled.
inline std::mt19937_64 trajectory_rng(std::uint64_t seed, std::uint64_t index)
{
    return std::mt19937_64(detail::splitmix64(detail::splitmix64(seed) ^ detail::splitmix64(~index)));
}

/// One draw of (phi_A, phi_B, phi_C) at time t.
///
/// exact-phase: each phi is Gaussian with mean 0 and variance 2 f(t).
/// ou-path: Omega starts from its stationary law N(0, Gamma gamma / 2) and is
/// advanced with the exact AR(1) update
///   Omega' = Omega e^{-gamma h} + xi sqrt((Gamma gamma / 2)(1 - e^{-2 gamma h})),
/// with phi accumulated by the trapezoid rule on ceil(t/dt) equal steps.
template <class Rng>
PhaseTriple sample_phase(const NoiseParams& noise, double t, const TrajectoryConfig& cfg, Rng& rng)
{
    detail::require(t >= 0.0, "sample_phase: t must be non-negative");
    PhaseTriple phi{0.0, 0.0, 0.0};
    if (t == 0.0) return phi;
    std::normal_distribution<double> normal(0.0, 1.0);

    if (cfg.mode == PhaseMode::ExactPhase) {
        const double sd = std::sqrt(2.0 * decoherence_exponent(noise, t));
        for (double& p : phi) p = sd * normal(rng);
        return phi;
    }

    const auto steps = static_cast<std::size_t>(std::ceil(t / cfg.step(noise) - 1e-12));
    const double h = t / static_cast<double>(steps);
    const double stationary_var = 0.5 * noise.gamma_rate * noise.bandwidth;
    const double decay = std::exp(-noise.bandwidth * h);
    const double kick = std::sqrt(-stationary_var * std::expm1(-2.0 * noise.bandwidth * h));
    for (double& p : phi) {
        double omega = std::sqrt(stationary_var) * normal(rng);
        for (std::size_t k = 0; k < steps; ++k) {
            const double next = omega * decay + kick * normal(rng);
            p += 0.5 * h * (omega + next);
            omega = next;
        }
    }
    return phi;
}

/// Phase exp(-i theta_k) that U applies to basis index k, where
/// theta_k = (1/2) sum_S s_S phi_S and s_S = +1 when qubit S is in |1>.
inline std::array<cplx, 8> basis_phases(const PhaseTriple& phi)
{
    std::array<cplx, 8> u{};
    for (std::size_t k = 0; k < 8; ++k) {
        double theta = 0.0;
        for (std::size_t q = 0; q < 3; ++q) {
            const bool excited = (k & detail::qubit_bit(q, 3)) == 0;
            theta += (excited ? 0.5 : -0.5) * phi[q];
        }
        u[k] = std::polar(1.0, -theta);
    }
    return u;
}

/// U |psi>
inline std::array<cplx, 8> propagate_pure(const std::array<cplx, 8>& psi, const PhaseTriple& phi)
{
    const auto u = basis_phases(phi);
    std::array<cplx, 8> out{};
    for (std::size_t k = 0; k < 8; ++k) out[k] = u[k] * psi[k];
    return out;
}

/// U rho U^H. Because U is diagonal this equals sum_k p_k U|k><k|U^H over any
/// eigen-decomposition of rho, without forming one.
inline Matrix8 propagate(const Matrix8& rho, const PhaseTriple& phi)
{
    const auto u = basis_phases(phi);
    Matrix8 out;
    for (std::size_t i = 0; i < 8; ++i)
        for (std::size_t j = 0; j < 8; ++j) out(i, j) = i == j ? rho(i, j) : rho(i, j) * u[i] * std::conj(u[j]);
    return out;
}

/// Ensemble mean with per-element standard errors of the real and imaginary parts.
struct EnsembleStatistics {
    Matrix8 mean;
    std::array<double, 64> se_re{};
    std::array<double, 64> se_im{};
    std::size_t n_traj = 0;
};

namespace detail {

// Moments of x - rho0, so elements the phases cannot change give exactly
// zero mean shift and zero standard error.
struct MomentSums {
    std::array<cplx, 64> sum{};
    std::array<double, 64> sq_re{};
    std::array<double, 64> sq_im{};
    std::size_t count = 0;

    MomentSums& operator+=(const MomentSums& o)
    {
        for (std::size_t k = 0; k < 64; ++k) {
            sum[k] += o.sum[k];
            sq_re[k] += o.sq_re[k];
            sq_im[k] += o.sq_im[k];
        }
        count += o.count;
        return *this;
    }
};

// Sums over chunks [lo, hi) combined as a balanced binary tree.
inline MomentSums pairwise_reduce(const std::vector<MomentSums>& parts, std::size_t lo, std::size_t hi)
{
    if (hi - lo == 1) return parts[lo];
    const std::size_t mid = lo + (hi - lo) / 2;
    MomentSums left = pairwise_reduce(parts, lo, mid);
    left += pairwise_reduce(parts, mid, hi);
    return left;
}

} // namespace detail

inline EnsembleStatistics ensemble_statistics(const Matrix8& rho0, const NoiseParams& noise, double t,
                                              const TrajectoryConfig& cfg)
{
    cfg.validate(noise);
    detail::require(t >= 0.0, "ensemble_statistics: t must be non-negative");
    detail::require(is_density_matrix(rho0), "ensemble_statistics: rho0 is not a density matrix");

    const std::size_t chunks = (cfg.n_traj + kTrajectoryChunk - 1) / kTrajectoryChunk;
    std::vector<detail::MomentSums> parts(chunks);
    parallel_for(
        chunks,
        [&](std::size_t c) {
            detail::MomentSums& m = parts[c];
            const std::size_t first = c * kTrajectoryChunk;
            const std::size_t last = std::min(cfg.n_traj, first + kTrajectoryChunk);
            for (std::size_t n = first; n < last; ++n) {
                auto rng = trajectory_rng(cfg.seed, n);
                const Matrix8 x = propagate(rho0, sample_phase(noise, t, cfg, rng));
                for (std::size_t k = 0; k < 64; ++k) {
                    const cplx v = x.entries()[k] - rho0.entries()[k];
                    m.sum[k] += v;
                    m.sq_re[k] += v.real() * v.real();
                    m.sq_im[k] += v.imag() * v.imag();
                }
            }
            m.count = last - first;
        },
        cfg.threads);

    const detail::MomentSums total = detail::pairwise_reduce(parts, 0, chunks);
    const double n = static_cast<double>(total.count);
    EnsembleStatistics out;
    out.n_traj = total.count;
    for (std::size_t k = 0; k < 64; ++k) {
        const cplx mean = total.sum[k] / n;
        out.mean(k / 8, k % 8) = rho0.entries()[k] + mean;
        if (total.count > 1) {
            const double var_re = std::max(0.0, (total.sq_re[k] - n * mean.real() * mean.real()) / (n - 1.0));
            const double var_im = std::max(0.0, (total.sq_im[k] - n * mean.imag() * mean.imag()) / (n - 1.0));
            out.se_re[k] = std::sqrt(var_re / n);
            out.se_im[k] = std::sqrt(var_im / n);
        }
    }
    return out;
}

inline Matrix8 ensemble_density(const Matrix8& rho0, const NoiseParams& noise, double t, const TrajectoryConfig& cfg)
{
    return ensemble_statistics(rho0, noise, t, cfg).mean;
}

// ---------------------------------------------------------------------------
// Verification

/// Element checks fail beyond this many standard errors.
inline constexpr double kVerificationSigma = 4.0;
/// Differences at or below this count as agreement when the standard error is 0.
inline constexpr double kZeroErrorTolerance = 1e-12;

struct ElementCheck {
    std::size_t row = 0;
    std::size_t col = 0;
    cplx estimate = 0.0;
    cplx expected = 0.0;
    double z = 0.0; ///< max over re/im of |difference| / standard error
    bool pass = true;
};

struct McVerification {
    std::vector<ElementCheck> elements;
    double max_z = 0.0;
    double sigma = kVerificationSigma;
    std::size_t n_traj = 0;
    bool sufficient = true; ///< false below kMinVerificationTrajectories
    bool passed = true;     ///< every element within sigma, regardless of `sufficient`
};

namespace detail {

inline double z_score(double diff, double se, bool& pass, double sigma)
{
    if (se == 0.0) {
        const bool ok = std::abs(diff) <= kZeroErrorTolerance;
        pass = pass && ok;
        return ok ? 0.0 : std::numeric_limits<double>::infinity();
    }
    const double z = std::abs(diff) / se;
    pass = pass && z <= sigma;
    return z;
}

} // namespace detail

/// Element-wise comparison of an ensemble against a reference matrix.
inline McVerification verify_ensemble(const EnsembleStatistics& stats, const Matrix8& expected,
                                      double sigma = kVerificationSigma)
{
    McVerification out;
    out.sigma = sigma;
    out.n_traj = stats.n_traj;
    out.sufficient = stats.n_traj >= kMinVerificationTrajectories;
    for (std::size_t i = 0; i < 8; ++i)
        for (std::size_t j = 0; j < 8; ++j) {
            const std::size_t k = 8 * i + j;
            ElementCheck e{i, j, stats.mean(i, j), expected(i, j), 0.0, true};
            const cplx diff = e.estimate - e.expected;
            e.z = std::max(detail::z_score(diff.real(), stats.se_re[k], e.pass, sigma),
                           detail::z_score(diff.imag(), stats.se_im[k], e.pass, sigma));
            out.max_z = std::max(out.max_z, e.z);
            out.passed = out.passed && e.pass;
            out.elements.push_back(e);
        }
    return out;
}

/// Element-wise comparison of two independent ensembles using the combined
/// standard error sqrt(se_a^2 + se_b^2).
inline McVerification compare_ensembles(const EnsembleStatistics& a, const EnsembleStatistics& b,
                                        double sigma = kVerificationSigma)
{
    EnsembleStatistics combined = a;
    for (std::size_t k = 0; k < 64; ++k) {
        combined.se_re[k] = std::hypot(a.se_re[k], b.se_re[k]);
        combined.se_im[k] = std::hypot(a.se_im[k], b.se_im[k]);
    }
    combined.n_traj = std::min(a.n_traj, b.n_traj);
    return verify_ensemble(combined, b.mean, sigma);
}

} // namespace qcorr
