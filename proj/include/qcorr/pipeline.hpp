#pragma once
/**
 * @file pipeline.hpp
 * @brief Numeric route: initial state -> dephasing channel -> measures.
 */

#include <numbers>

#include "qcorr/channel.hpp"
#include "qcorr/closed_forms.hpp"
#include "qcorr/measures.hpp"
#include "qcorr/states.hpp"

namespace qcorr {

/// Correlation values at one (family, r, gamma/Gamma, t) point.
struct CorrelationReport {
    double negativity = 0.0;
    double concurrence = 0.0;
    double discord = 0.0;
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

struct PipelineOptions {
    bool bipartite = true; ///< compute C and D on the AB marginal
    DiscordGrid grid{};
};

/// A discord optimum near the equator is the x-y branch, near a pole the z branch.
inline DiscordBranch branch_of_measurement(double theta)
{
    const double polar = std::abs(canonical_theta(theta));
    return std::abs(polar - std::numbers::pi / 4) < std::numbers::pi / 8 ? DiscordBranch::D2 : DiscordBranch::D1;
}

inline CorrelationReport measure_state(const Matrix8& rho, Family axes, BellTheta theta,
                                       const PipelineOptions& options = {})
{
    CorrelationReport out;
    out.negativity = tripartite_negativity(rho);
    if (options.bipartite) {
        const Matrix4 rho_ab = partial_trace<4>(rho, {Subsystem::A, Subsystem::B});
        out.concurrence = concurrence_general(rho_ab);
        const DiscordResult d = discord_general(rho_ab, options.grid);
        out.discord = d.value;
        out.branch = branch_of_measurement(d.theta);
    }
    out.mabk = bell_expectation(rho, bell_operator({theta.mabk, 0.0, axes}));
    out.svetlichny = bell_expectation(rho, svetlichny_operator({theta.svetlichny, 0.0, axes}));
    return out;
}

inline CorrelationReport numeric_report(Family family, const NoiseParams& noise, double r, double t, BellTheta theta,
                                        const PipelineOptions& options = {})
{
    const Matrix8 rho = evolve_dephasing(make_state(family, r), noise, t);
    return measure_state(rho, family, theta, options);
}

inline CorrelationReport numeric_report(Family family, const NoiseParams& noise, double r, double t,
                                        const PipelineOptions& options = {})
{
    return numeric_report(family, noise, r, t, optimal_theta(family), options);
}

} // namespace qcorr
