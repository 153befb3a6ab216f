#pragma once
/**
 * @file death.hpp
 * @brief Sudden-death times and the discord branch crossing.
 */

#include <cmath>
#include <optional>

#include "qcorr/closed_forms.hpp"
#include "qcorr/errors.hpp"
#include "qcorr/pipeline.hpp"

namespace qcorr {

enum class DeathRoute { ClosedForm, Numeric };

/// Bisection stops once the bracket is narrower than this, in units of 1/Gamma.
inline constexpr double kDeathTimeTolerance = 1e-9;
/// Initial bracket and the largest bracket tried, in units of 1/Gamma.
inline constexpr double kDeathInitialWindow = 50.0;
inline constexpr double kDeathMaxWindow = 400.0;
/// The numeric route counts N or C as dead once below this.
inline constexpr double kNumericDeathEpsilon = 1e-12;

namespace detail {

// `alive(t)` must be true on [0, t_d) and false after.
template <class Alive>
std::optional<double> first_failure(Alive alive, double gamma_rate)
{
    if (!alive(0.0)) return std::nullopt;
    double lo = 0.0;
    double hi = kDeathInitialWindow / gamma_rate;
    while (alive(hi)) {
        lo = hi;
        hi *= 2.0;
        if (hi > kDeathMaxWindow / gamma_rate * (1.0 + 1e-12)) return std::nullopt;
    }
    const double tol = kDeathTimeTolerance / gamma_rate;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        (alive(mid) ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace detail

/// Time at which `measure` first reaches its classical threshold (0 for N, C
/// and D; 1 for MABK; 4 for Svetlichny), with Bell angles fixed at their t = 0
/// optimum. Returns none if the value is already at or below threshold at
/// t = 0 or stays above it through t = 400/Gamma.
///
/// The closed-form route evaluates the analytic expressions. The numeric route
/// evolves the state and evaluates the general measures, with Bell angles found
/// by numeric maximization; it does not support D.
inline std::optional<double> death_time(Family family, Measure measure, const NoiseParams& noise, double r,
                                        DeathRoute route = DeathRoute::ClosedForm)
{
    noise.validate();
    detail::require_purity(r, "death_time");
    const double threshold = death_threshold(measure);

    if (route == DeathRoute::ClosedForm) {
        const BellTheta theta = optimal_theta(family);
        return detail::first_failure(
            [&](double t) {
                if (closed_form(family, noise, r, t, theta).value(measure) > threshold) return true;
                // The W discord goes like z^2 at late times and underflows long
                // before the pair coherence z itself reaches zero.
                return measure == Measure::D && family == Family::W
                       && std::abs(w_reduced_params(r, decoherence_exponent(noise, t)).z) > 0.0;
            },
            noise.gamma_rate);
    }

    detail::require(measure != Measure::D, "death_time: the numeric route does not support discord");
    const Matrix8 rho0 = make_state(family, r);
    const bool bell = measure == Measure::MABK || measure == Measure::Svetlichny;
    const double margin = bell ? threshold : kNumericDeathEpsilon;
    Matrix8 op;
    if (bell) {
        const BellKind kind = measure == Measure::MABK ? BellKind::MABK : BellKind::Svetlichny;
        op = bell_operator(kind, optimize_bell_angles(family, kind, rho0));
    }
    auto value = [&](double t) {
        const Matrix8 rho = evolve_dephasing(rho0, noise, t);
        switch (measure) {
        case Measure::N: return tripartite_negativity(rho);
        case Measure::C: return concurrence_general(partial_trace<4>(rho, {Subsystem::A, Subsystem::B}));
        default: return bell_expectation(rho, op);
        }
    };
    return detail::first_failure([&](double t) { return value(t) > margin; }, noise.gamma_rate);
}

/// Number of scan intervals used to locate the branch crossing.
inline constexpr int kKinkScanSteps = 4000;
/// Scan window for the branch crossing, in units of 1/Gamma.
inline constexpr double kKinkWindow = 20.0;

/// Smallest t > 0 where the W-family discord switches branch (D1 = D2).
inline std::optional<double> discord_kink_time(const NoiseParams& noise, double r)
{
    noise.validate();
    detail::require_purity(r, "discord_kink_time");
    auto gap = [&](double t) {
        const DiscordX d = w_discord(r, decoherence_exponent(noise, t));
        return d.d1 - d.d2;
    };
    const double t_max = kKinkWindow / noise.gamma_rate;
    const double step = t_max / kKinkScanSteps;
    double lo = 0.0, g_lo = gap(0.0);
    for (int i = 1; i <= kKinkScanSteps; ++i) {
        const double hi = i * step;
        const double g_hi = gap(hi);
        if ((g_lo < 0.0 && g_hi > 0.0) || (g_lo > 0.0 && g_hi < 0.0)) {
            double a = lo, b = hi;
            const double tol = kDeathTimeTolerance / noise.gamma_rate;
            while (b - a > tol) {
                const double mid = 0.5 * (a + b);
                const double g_mid = gap(mid);
                if ((g_mid < 0.0) == (g_lo < 0.0) && g_mid != 0.0)
                    a = mid;
                else
                    b = mid;
            }
            return 0.5 * (a + b);
        }
        if (g_hi == 0.0 && g_lo != 0.0) return hi;
        lo = hi;
        g_lo = g_hi;
    }
    return std::nullopt;
}

} // namespace qcorr
