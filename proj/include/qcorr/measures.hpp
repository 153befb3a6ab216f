#pragma once
/**
 * @file measures.hpp
 * @brief Correlation measures evaluated directly on density matrices.
 *
 * - Wootters concurrence (general and X-form)
 * - bipartition negativity and the tripartite geometric mean
 * - quantum discord with projective measurements on qubit B, by search over
 *   the Bloch sphere or by the two-branch X-form expression
 * - MABK and Svetlichny operator expectations
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string_view>

#include "qcorr/errors.hpp"
#include "qcorr/matrix.hpp"
#include "qcorr/states.hpp"

namespace qcorr {

/// Eigenvalues in [-1e-10, 0) are treated as 0 before sqrt and log.
inline constexpr double kClampTolerance = 1e-10;

namespace detail {

inline double clamp_small_negative(double x) { return (x < 0.0 && x >= -kClampTolerance) ? 0.0 : x; }

// x log2(x / y) with the 0 log 0 = 0 convention.
inline double xlog_ratio(double x, double y) { return x > 0.0 ? x * std::log2(x / y) : 0.0; }

inline double entropy_2x2(double p00, double p11, cplx p01)
{
    const double mean = 0.5 * (p00 + p11);
    const double radius = std::sqrt(0.25 * (p00 - p11) * (p00 - p11) + std::norm(p01));
    const std::array<double, 2> ev{mean + radius, clamp_small_negative(mean - radius)};
    return shannon_bits(ev);
}

} // namespace detail

// ---------------------------------------------------------------------------
// X-states

/// Two-qubit X-form
///   [a 0 0 w]
///   [0 b z 0]
///   [0 z* c 0]
///   [w* 0 0 d]
struct XStateParams {
    double a = 0.25, b = 0.25, c = 0.25, d = 0.25;
    cplx z = 0.0, w = 0.0;
};

inline Matrix4 x_matrix(const XStateParams& p)
{
    Matrix4 m;
    m(0, 0) = p.a;
    m(1, 1) = p.b;
    m(2, 2) = p.c;
    m(3, 3) = p.d;
    m(1, 2) = p.z;
    m(2, 1) = std::conj(p.z);
    m(0, 3) = p.w;
    m(3, 0) = std::conj(p.w);
    return m;
}

/// Reads the X-form parameters; every entry outside the X pattern must vanish
/// within `tol`.
inline XStateParams x_params(const Matrix4& m, double tol = 1e-12)
{
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            const bool on_x = (i == j) || (i + j == 3);
            detail::require(on_x || std::abs(m(i, j)) <= tol, "x_params: matrix is not of X form");
        }
    return {m(0, 0).real(), m(1, 1).real(), m(2, 2).real(), m(3, 3).real(), m(1, 2), m(0, 3)};
}

// ---------------------------------------------------------------------------
// Concurrence

/// Eigenvalues of rho below this are dropped when building the square-root
/// factor used for the concurrence.
inline constexpr double kConcurrenceRankCutoff = 1e-13;

/// Wootters concurrence max{0, s1 - s2 - s3 - s4}, where s_i^2 are the
/// eigenvalues of R = rho (Y x Y) rho* (Y x Y).
///
/// With rho = W W^H, the s_i are the singular values of tau = W^T (Y x Y) W.
/// They are read off as the positive eigenvalues of the Hermitian dilation
/// [[0, tau], [tau^H, 0]], which keeps small s_i accurate to machine precision
/// instead of sqrt(machine precision).
inline double concurrence_general(const Matrix4& rho)
{
    const auto es = hermitian_eigensystem(rho);
    Matrix4 factor;
    for (std::size_t k = 0; k < 4; ++k) {
        const double mu = es.spectrum.values[k];
        if (mu < kConcurrenceRankCutoff) continue;
        const double s = std::sqrt(mu);
        for (std::size_t i = 0; i < 4; ++i) factor(i, k) = s * es.vectors(i, k);
    }
    const Matrix4 spin_flip = kron(pauli::y(), pauli::y());
    const Matrix4 tau = factor.transpose() * spin_flip * factor;

    Matrix8 dilation;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            dilation(i, 4 + j) = tau(i, j);
            dilation(4 + j, i) = std::conj(tau(i, j));
        }
    const auto s = hermitian_eigenvalues(dilation).values;
    return std::max(0.0, s[0] - s[1] - s[2] - s[3]);
}

/// C = 2 max{0, |z| - sqrt(a d), |w| - sqrt(b c)}
inline double concurrence_x(const XStateParams& p)
{
    const double ad = std::sqrt(std::max(0.0, p.a * p.d));
    const double bc = std::sqrt(std::max(0.0, p.b * p.c));
    return 2.0 * std::max({0.0, std::abs(p.z) - ad, std::abs(p.w) - bc});
}

// ---------------------------------------------------------------------------
// Negativity

/// N_{I-JK} = -(sum of negative eigenvalues of the partial transpose on I).
inline double negativity(const Matrix8& rho, Subsystem part)
{
    const auto spec = hermitian_eigenvalues(partial_transpose(rho, part));
    double n = 0.0;
    for (double x : spec.values)
        if (x < 0.0) n -= x;
    return n;
}

/// (N_{A-BC} N_{B-AC} N_{C-AB})^(1/3)
inline double tripartite_negativity(const Matrix8& rho)
{
    return std::cbrt(negativity(rho, Subsystem::A) * negativity(rho, Subsystem::B) * negativity(rho, Subsystem::C));
}

// ---------------------------------------------------------------------------
// Discord

/// Which measurement branch of the X-form discord is active: D1 is a sigma_z
/// measurement on B, D2 a measurement in the x-y plane.
enum class DiscordBranch { None, D1, D2 };

inline std::string_view to_string(DiscordBranch b)
{
    switch (b) {
    case DiscordBranch::D1: return "D1";
    case DiscordBranch::D2: return "D2";
    default: return "none";
    }
}

struct DiscordX {
    double value = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
    DiscordBranch branch = DiscordBranch::D1;
};

/// Pick the smaller branch; ties go to D1.
inline DiscordX select_branch(double d1, double d2)
{
    return d1 <= d2 ? DiscordX{d1, d1, d2, DiscordBranch::D1} : DiscordX{d2, d1, d2, DiscordBranch::D2};
}

/// X-form discord, valid for b = c:
///   D1 = S(A) - S(AB) - a log(a/(a+b)) - b log(b/(a+b)) - d log(d/(b+d)) - b log(b/(b+d))
///   D2 = S(A) - S(AB) - h((1+k)/2), k^2 = (a-d)^2 + 4(|z| + |w|)^2
/// with h the binary entropy written out as -p log p - (1-p) log(1-p).
inline DiscordX discord_x(const XStateParams& p)
{
    detail::require(std::abs(p.b - p.c) <= 1e-12, "discord_x: requires b = c");
    const double b = p.b;
    const std::array<double, 2> marginal{p.a + b, p.c + p.d};
    const double s_a = shannon_bits(marginal);

    const double outer_mean = 0.5 * (p.a + p.d);
    const double outer_radius = std::hypot(0.5 * (p.a - p.d), std::abs(p.w));
    const double inner_radius = std::abs(p.z);
    const std::array<double, 4> joint{
        outer_mean + outer_radius, detail::clamp_small_negative(outer_mean - outer_radius), b + inner_radius,
        detail::clamp_small_negative(b - inner_radius)};
    const double s_ab = shannon_bits(joint);

    const double d1 = s_a - s_ab - detail::xlog_ratio(p.a, p.a + b) - detail::xlog_ratio(b, p.a + b)
                      - detail::xlog_ratio(p.d, b + p.d) - detail::xlog_ratio(b, b + p.d);

    const double zw = std::abs(p.z) + std::abs(p.w);
    const double kappa = std::min(1.0, std::sqrt((p.a - p.d) * (p.a - p.d) + 4.0 * zw * zw));
    const std::array<double, 2> outcome{0.5 * (1.0 + kappa), 0.5 * (1.0 - kappa)};
    const double d2 = s_a - s_ab + shannon_bits(outcome);

    return select_branch(d1, d2);
}

/// Grid search settings: coarse theta x phi grid, then `refine_rounds`
/// rounds that each shrink the spacing by `zoom` around the best point.
struct DiscordGrid {
    int theta_points = 64;
    int phi_points = 128;
    int refine_rounds = 3;
    int zoom = 10;
};

struct DiscordResult {
    double value = 0.0;
    double mutual_information = 0.0;
    double classical_correlation = 0.0;
    double theta = 0.0; ///< optimal projector |1> = cos(theta)|+z> + e^{i phi} sin(theta)|-z>
    double phi = 0.0;
    Subsystem measured = Subsystem::B;
};

/// Average conditional entropy of A after measuring B in the basis
/// {cos t|+z> + e^{ip} sin t|-z>, sin t|+z> - e^{ip} cos t|-z>}.
inline double conditional_entropy_after_measurement(const Matrix4& rho, double theta, double phi)
{
    const cplx e = std::polar(1.0, phi);
    const std::array<std::array<cplx, 2>, 2> basis_vectors{{
        {std::cos(theta), e * std::sin(theta)},
        {std::sin(theta), -e * std::cos(theta)},
    }};
    double h = 0.0;
    for (const auto& v : basis_vectors) {
        // block(a, a') = <v|_B rho |v>_B
        std::array<cplx, 4> block{};
        for (std::size_t a = 0; a < 2; ++a)
            for (std::size_t ap = 0; ap < 2; ++ap) {
                cplx s = 0.0;
                for (std::size_t bb = 0; bb < 2; ++bb)
                    for (std::size_t bp = 0; bp < 2; ++bp) s += std::conj(v[bb]) * rho(2 * a + bb, 2 * ap + bp) * v[bp];
                block[2 * a + ap] = s;
            }
        const double prob = block[0].real() + block[3].real();
        if (prob <= 1e-15) continue;
        h += prob * detail::entropy_2x2(block[0].real() / prob, block[3].real() / prob, block[1] / prob);
    }
    return h;
}

/// D = I(AB) - max_{projective on B} J, maximized by grid search plus local zoom.
inline DiscordResult discord_general(const Matrix4& rho, const DiscordGrid& grid = {})
{
    detail::require(grid.theta_points >= 2 && grid.phi_points >= 1 && grid.zoom >= 2, "discord_general: bad grid");
    const double s_a = von_neumann_entropy(partial_trace<2>(rho, {Subsystem::A}));
    const double s_b = von_neumann_entropy(partial_trace<2>(rho, {Subsystem::B}));
    const double s_ab = von_neumann_entropy(rho);

    const double pi = std::numbers::pi;
    double d_theta = (pi / 2) / (grid.theta_points - 1);
    double d_phi = 2 * pi / grid.phi_points;
    double best = std::numeric_limits<double>::infinity();
    double best_theta = 0.0, best_phi = 0.0;
    for (int i = 0; i < grid.theta_points; ++i)
        for (int j = 0; j < grid.phi_points; ++j) {
            const double h = conditional_entropy_after_measurement(rho, i * d_theta, j * d_phi);
            if (h < best) {
                best = h;
                best_theta = i * d_theta;
                best_phi = j * d_phi;
            }
        }

    for (int round = 0; round < grid.refine_rounds; ++round) {
        const double span_theta = d_theta, span_phi = d_phi;
        d_theta /= grid.zoom;
        d_phi /= grid.zoom;
        const double centre_theta = best_theta, centre_phi = best_phi;
        for (int i = -grid.zoom; i <= grid.zoom; ++i)
            for (int j = -grid.zoom; j <= grid.zoom; ++j) {
                const double th = centre_theta + i * d_theta;
                const double ph = centre_phi + j * d_phi;
                if (std::abs(th - centre_theta) > span_theta || std::abs(ph - centre_phi) > span_phi) continue;
                const double h = conditional_entropy_after_measurement(rho, th, ph);
                if (h < best) {
                    best = h;
                    best_theta = th;
                    best_phi = ph;
                }
            }
    }

    DiscordResult out;
    out.mutual_information = s_a + s_b - s_ab;
    out.classical_correlation = s_a - best;
    out.value = std::max(0.0, out.mutual_information - out.classical_correlation);
    out.theta = best_theta;
    out.phi = best_phi;
    return out;
}

// ---------------------------------------------------------------------------
// Bell operators

enum class BellKind { MABK, Svetlichny };

inline std::string_view to_string(BellKind k) { return k == BellKind::MABK ? "mabk" : "svetlichny"; }

/// Measurement settings. Party A measures (M, M') = (first, second) axis of
/// the family (sigma_y, sigma_x for GHZ; sigma_z, sigma_x for W); parties B and C
/// rotate that pair by theta_b and theta_c.
struct BellAngles {
    double theta_b = 0.0;
    double theta_c = 0.0;
    Family axes = Family::GHZ;

    double theta_bc() const { return theta_b + theta_c; }
};

namespace detail {

struct AxisPair {
    Matrix2 primary;
    Matrix2 secondary;
};

inline AxisPair rotated_axes(Family axes, double theta)
{
    const Matrix2 m = axes == Family::GHZ ? pauli::y() : pauli::z();
    const Matrix2 mp = pauli::x();
    const double c = std::cos(theta), s = std::sin(theta);
    return {c * m - s * mp, s * m + c * mp};
}

struct PartySettings {
    AxisPair a, b, c;
};

inline PartySettings party_settings(const BellAngles& angles)
{
    return {rotated_axes(angles.axes, 0.0), rotated_axes(angles.axes, angles.theta_b),
            rotated_axes(angles.axes, angles.theta_c)};
}

} // namespace detail

/// MABK: (1/2)(M_A M_B M_C' + M_A M_B' M_C + M_A' M_B M_C - M_A' M_B' M_C')
inline Matrix8 bell_operator(const BellAngles& angles)
{
    const auto [a, b, c] = detail::party_settings(angles);
    Matrix8 op = kron(a.primary, b.primary, c.secondary);
    op += kron(a.primary, b.secondary, c.primary);
    op += kron(a.secondary, b.primary, c.primary);
    op -= kron(a.secondary, b.secondary, c.secondary);
    return op * cplx(0.5);
}

/// Svetlichny: MMM + MMM' + MM'M + M'MM - M'M'M' - M'M'M - M'MM' - MM'M'
inline Matrix8 svetlichny_operator(const BellAngles& angles)
{
    const auto [a, b, c] = detail::party_settings(angles);
    Matrix8 op = kron(a.primary, b.primary, c.primary);
    op += kron(a.primary, b.primary, c.secondary);
    op += kron(a.primary, b.secondary, c.primary);
    op += kron(a.secondary, b.primary, c.primary);
    op -= kron(a.secondary, b.secondary, c.secondary);
    op -= kron(a.secondary, b.secondary, c.primary);
    op -= kron(a.secondary, b.primary, c.secondary);
    op -= kron(a.primary, b.secondary, c.secondary);
    return op;
}

inline Matrix8 bell_operator(BellKind kind, const BellAngles& angles)
{
    return kind == BellKind::MABK ? bell_operator(angles) : svetlichny_operator(angles);
}

/// |Tr(op rho)|
inline double bell_expectation(const Matrix8& rho, const Matrix8& op)
{
    detail::require(is_hermitian(op), "bell_expectation: operator is not Hermitian");
    cplx t = 0.0;
    for (std::size_t i = 0; i < 8; ++i)
        for (std::size_t j = 0; j < 8; ++j) t += op(i, j) * rho(j, i);
    return std::abs(t.real());
}

inline constexpr double kMabkLocalBound = 1.0;
inline constexpr double kSvetlichnyLocalBound = 4.0;

inline double local_bound(BellKind kind) { return kind == BellKind::MABK ? kMabkLocalBound : kSvetlichnyLocalBound; }
inline bool violates_mabk(double expectation) { return expectation > kMabkLocalBound; }
inline bool violates_svetlichny(double expectation) { return expectation > kSvetlichnyLocalBound; }

/// Maximizing theta_BC for the GHZ/W families; every expectation has period pi
/// in theta_BC, and these are the representatives in (-pi/2, pi/2].
inline double analytic_optimal_theta(Family family, BellKind kind)
{
    constexpr double pi = std::numbers::pi;
    if (family == Family::GHZ) return kind == BellKind::MABK ? 0.0 : -pi / 4;
    return kind == BellKind::MABK ? pi / 2 : pi / 4;
}

/// Reduces an angle modulo pi into (-pi/2, pi/2].
inline double canonical_theta(double theta)
{
    constexpr double pi = std::numbers::pi;
    double t = std::fmod(theta, pi);
    if (t > pi / 2) t -= pi;
    if (t <= -pi / 2) t += pi;
    return t;
}

/// Angles maximizing |<op>| on rho0. Only theta_BC matters for the GHZ/W
/// families, so theta_c is fixed at 0 and theta_b carries theta_BC. The search
/// is a 3600-point scan of [0, 2 pi) followed by golden-section refinement.
/// A flat objective (e.g. the maximally mixed state) returns the analytic
/// optimum of the family.
inline BellAngles optimize_bell_angles(Family family, BellKind kind, const Matrix8& rho0)
{
    constexpr double pi = std::numbers::pi;
    auto value = [&](double theta) { return bell_expectation(rho0, bell_operator(kind, {theta, 0.0, family})); };

    constexpr int kScan = 3600;
    const double step = 2 * pi / kScan;
    double best_theta = 0.0, best = -1.0, worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i < kScan; ++i) {
        const double v = value(i * step);
        worst = std::min(worst, v);
        if (v > best) {
            best = v;
            best_theta = i * step;
        }
    }
    if (best - worst < 1e-12) return {analytic_optimal_theta(family, kind), 0.0, family};

    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = best_theta - step, hi = best_theta + step;
    double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
    double f1 = value(x1), f2 = value(x2);
    while (hi - lo > 1e-12) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = value(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = value(x1);
        }
    }
    return {canonical_theta(0.5 * (lo + hi)), 0.0, family};
}

// ---------------------------------------------------------------------------
// Measure identifiers

enum class Measure { N, C, D, MABK, Svetlichny };

inline std::string_view to_string(Measure m)
{
    switch (m) {
    case Measure::N: return "N";
    case Measure::C: return "C";
    case Measure::D: return "D";
    case Measure::MABK: return "mabk";
    default: return "svetlichny";
    }
}

/// Classical threshold each measure is compared against for sudden death.
inline double death_threshold(Measure m)
{
    switch (m) {
    case Measure::MABK: return kMabkLocalBound;
    case Measure::Svetlichny: return kSvetlichnyLocalBound;
    default: return 0.0;
    }
}

} // namespace qcorr
