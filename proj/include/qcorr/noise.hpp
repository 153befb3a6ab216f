#pragma once
/**
 * @file noise.hpp
 * @brief Ornstein-Uhlenbeck frequency noise: correlation function, memory
 *        kernel and the accumulated dephasing exponent.
 *
 * The noise Omega(t) has zero mean and correlation
 *   alpha(dt) = (Gamma * gamma / 2) exp(-gamma |dt|).
 * gamma -> infinity at fixed Gamma is the white-noise (Markovian) limit.
 */

#include <algorithm>
#include <cmath>

#include "qcorr/errors.hpp"

namespace qcorr {

/// Canonical Markovianity settings.
inline constexpr double kMarkovianRatio = 10.0;
inline constexpr double kNonMarkovianRatio = 0.1;

struct NoiseParams {
    double gamma_rate = 1.0; ///< damping rate Gamma
    double bandwidth = 1.0;  ///< noise bandwidth gamma

    /// Builds parameters from the ratio gamma/Gamma.
    static NoiseParams from_ratio(double ratio, double gamma_rate = 1.0)
    {
        NoiseParams p{gamma_rate, ratio * gamma_rate};
        p.validate();
        return p;
    }

    double markovianity() const { return bandwidth / gamma_rate; }
    double correlation_time() const { return 1.0 / bandwidth; }

    void validate() const
    {
        detail::require(gamma_rate > 0.0 && std::isfinite(gamma_rate), "NoiseParams: Gamma must be positive");
        detail::require(bandwidth > 0.0 && std::isfinite(bandwidth), "NoiseParams: gamma must be positive");
    }
};

namespace detail {

inline double decay_factor(double x) { return x > 700.0 ? 0.0 : std::exp(-x); }

} // namespace detail

/// alpha(dt) = (Gamma gamma / 2) exp(-gamma |dt|)
inline double correlation(const NoiseParams& p, double dt)
{
    p.validate();
    return 0.5 * p.gamma_rate * p.bandwidth * detail::decay_factor(p.bandwidth * std::abs(dt));
}

/// G(t) = (Gamma / 2)(1 - exp(-gamma t))
inline double memory_kernel(const NoiseParams& p, double t)
{
    p.validate();
    detail::require(t >= 0.0, "memory_kernel: t must be non-negative");
    return -0.5 * p.gamma_rate * std::expm1(-std::min(p.bandwidth * t, 700.0));
}

/// f(t) = integral of G over [0, t] = (Gamma / 2)(t + (exp(-gamma t) - 1) / gamma).
/// Coherences of a single qubit decay as exp(-f(t)).
inline double decoherence_exponent(const NoiseParams& p, double t)
{
    p.validate();
    detail::require(t >= 0.0, "decoherence_exponent: t must be non-negative");
    const double x = p.bandwidth * t;
    // x + expm1(-x) loses digits for small x; use the series x^2/2 - x^3/6 + ...
    double g;
    if (x < 1e-3) {
        g = x * x * (0.5 - x * (1.0 / 6.0 - x * (1.0 / 24.0 - x * (1.0 / 120.0))));
    } else {
        g = x + std::expm1(-std::min(x, 700.0));
    }
    return 0.5 * p.gamma_rate * g / p.bandwidth;
}

} // namespace qcorr
