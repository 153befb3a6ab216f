#pragma once
/**
 * @file closed_forms.hpp
 * @brief Analytic correlation values for the dephased GHZ and W families.
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "qcorr/errors.hpp"
#include "qcorr/measures.hpp"
#include "qcorr/noise.hpp"
#include "qcorr/states.hpp"

namespace qcorr {

struct ClosedFormReport {
    double negativity = 0.0;
    double concurrence = 0.0;
    double discord = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
    DiscordBranch branch = DiscordBranch::None;
    double mabk = 0.0;
    double svetlichny = 0.0;

    double value(Measure m) const
    {
        switch (m) {
        case Measure::N: return negativity;
        case Measure::C: return concurrence;
        case Measure::D: return discord;
        case Measure::MABK: return mabk;
        default: return svetlichny;
        }
    }
};

/// theta_BC used for each Bell operator.
struct BellTheta {
    double mabk = 0.0;
    double svetlichny = 0.0;
};

/// theta_BC maximizing each expectation at t = 0.
inline BellTheta optimal_theta(Family family)
{
    return {analytic_optimal_theta(family, BellKind::MABK), analytic_optimal_theta(family, BellKind::Svetlichny)};
}

namespace detail {

inline void require_purity(double r, const char* who)
{
    require(r >= 0.0 && r <= 1.0, std::string(who) + ": purity must lie in [0, 1]");
}

// (1+x) ln(1+x) + (1-x) ln(1-x) for x in [0, 1]. The direct form cancels
// catastrophically for small x, so the series sum_k x^{2k} / (k (2k - 1)) is
// used there.
inline double symmetric_xlogx(double x)
{
    x = std::abs(x);
    if (x < 0.05) {
        const double x2 = x * x;
        double term = x2, sum = 0.0;
        for (int k = 1; k < 40; ++k) {
            const double add = term / (k * (2.0 * k - 1.0));
            sum += add;
            if (add < 1e-18 * sum) break;
            term *= x2;
        }
        return sum;
    }
    const double lower = x < 1.0 ? (1.0 - x) * std::log1p(-x) : 0.0;
    return (1.0 + x) * std::log1p(x) + lower;
}

} // namespace detail

/// GHZ family:
///   |<B>| = 2 r e^{-3f} |cos theta_BC|
///   |<S>| = 4 r e^{-3f} |cos theta_BC - sin theta_BC|
///   N     = max{0, -(1 - r - 4 r e^{-3f}) / 8}
/// The two-qubit marginals are classical, so C = D = 0.
inline ClosedFormReport ghz_closed_form(const NoiseParams& noise, double r, double t, BellTheta theta)
{
    detail::require_purity(r, "ghz_closed_form");
    const double e3 = std::exp(-3.0 * decoherence_exponent(noise, t));
    ClosedFormReport out;
    out.negativity = std::max(0.0, -(1.0 - r - 4.0 * r * e3) / 8.0);
    out.mabk = 2.0 * r * e3 * std::abs(std::cos(theta.mabk));
    out.svetlichny = 4.0 * r * e3 * std::abs(std::cos(theta.svetlichny) - std::sin(theta.svetlichny));
    return out;
}

inline ClosedFormReport ghz_closed_form(const NoiseParams& noise, double r, double t, double theta_bc)
{
    return ghz_closed_form(noise, r, t, BellTheta{theta_bc, theta_bc});
}

inline ClosedFormReport ghz_closed_form(const NoiseParams& noise, double r, double t)
{
    return ghz_closed_form(noise, r, t, optimal_theta(Family::GHZ));
}

/// X-form parameters of the AB marginal of the dephased W family:
/// a = (1 - r)/4, b = c = d = (3 + r)/12, z = (r/3) e^{-2f}, w = 0.
inline XStateParams w_reduced_params(double r, double f)
{
    const double b = (3.0 + r) / 12.0;
    return {(1.0 - r) / 4.0, b, b, b, (r / 3.0) * std::exp(-2.0 * f), 0.0};
}

/// The two discord branches of the W family.
///
/// D1 collapses algebraically to b [(1+x) ln(1+x) + (1-x) ln(1-x)] / ln 2 with
/// x = z/b; that form is evaluated so D1 stays resolvable when z is tiny.
/// D2 = S(A) - S(AB) + h((1 + k)/2), k = (r/3) sqrt(1 + 4 e^{-4f}).
inline DiscordX w_discord(double r, double f)
{
    const XStateParams p = w_reduced_params(r, f);
    const double z = p.z.real();
    const double d1 = p.b > 0.0 ? p.b * detail::symmetric_xlogx(z / p.b) / std::numbers::ln2 : 0.0;

    const std::array<double, 2> lambda_a{(3.0 - r) / 6.0, (3.0 + r) / 6.0};
    const double e2 = std::exp(-2.0 * f);
    const std::array<double, 4> lambda_ab{(1.0 - r) / 4.0, (3.0 + r) / 12.0, (3.0 + r - 4.0 * r * e2) / 12.0,
                                          (3.0 + r + 4.0 * r * e2) / 12.0};
    const double e4 = std::exp(-4.0 * f);
    const double kappa = std::min(1.0, (r / 3.0) * std::sqrt(1.0 + 4.0 * e4));
    const std::array<double, 2> outcome{0.5 * (1.0 + kappa), 0.5 * (1.0 - kappa)};
    const double d2 = shannon_bits(lambda_a) - shannon_bits(lambda_ab) + shannon_bits(outcome);
    return select_branch(d1, d2);
}

/// W family:
///   |<B>| = (r/2)(1 + 2e^{-2f}) |sin theta_BC|
///   |<S>| = r (1 + 2e^{-2f}) |cos theta_BC + sin theta_BC|
///   N     = max{0, -3 + 3r + 8 sqrt(2) r e^{-2f}} / 24
///   C     = max{0, 4 r e^{-2f} - sqrt(3 (1 - r)(3 + r))} / 6
///   D     = min{D1, D2}
inline ClosedFormReport w_closed_form(const NoiseParams& noise, double r, double t, BellTheta theta)
{
    detail::require_purity(r, "w_closed_form");
    const double f = decoherence_exponent(noise, t);
    const double e2 = std::exp(-2.0 * f);
    ClosedFormReport out;
    out.negativity = std::max(0.0, -3.0 + 3.0 * r + 8.0 * std::numbers::sqrt2 * r * e2) / 24.0;
    out.concurrence = std::max(0.0, 4.0 * r * e2 - std::sqrt(3.0 * (1.0 - r) * (3.0 + r))) / 6.0;
    const DiscordX d = w_discord(r, f);
    out.discord = d.value;
    out.d1 = d.d1;
    out.d2 = d.d2;
    out.branch = d.branch;
    out.mabk = 0.5 * r * (1.0 + 2.0 * e2) * std::abs(std::sin(theta.mabk));
    out.svetlichny = r * (1.0 + 2.0 * e2) * std::abs(std::cos(theta.svetlichny) + std::sin(theta.svetlichny));
    return out;
}

inline ClosedFormReport w_closed_form(const NoiseParams& noise, double r, double t, double theta_bc)
{
    return w_closed_form(noise, r, t, BellTheta{theta_bc, theta_bc});
}

inline ClosedFormReport w_closed_form(const NoiseParams& noise, double r, double t)
{
    return w_closed_form(noise, r, t, optimal_theta(Family::W));
}

inline ClosedFormReport closed_form(Family family, const NoiseParams& noise, double r, double t, BellTheta theta)
{
    return family == Family::GHZ ? ghz_closed_form(noise, r, t, theta) : w_closed_form(noise, r, t, theta);
}

inline ClosedFormReport closed_form(Family family, const NoiseParams& noise, double r, double t)
{
    return closed_form(family, noise, r, t, optimal_theta(family));
}

} // namespace qcorr
