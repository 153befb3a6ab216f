#pragma once
/**
 * @file channel.hpp
 * @brief Local single-qubit channels lifted to three qubits.
 *
 * A single-qubit channel is parameterized by (u, v, z):
 *   rho11 -> u rho11 + v rho22
 *   rho22 -> (1-u) rho11 + (1-v) rho22
 *   rho12 -> z rho12
 * and three such channels acting independently on A, B and C produce the
 * three-qubit evolution. Two routes are provided: the element-by-element
 * formulas (lift_three_qubit) and the generic tensor contraction of the
 * single-qubit transfer tensors (lift_via_transfer).
 */

#include <array>
#include <cmath>
#include <complex>

#include "qcorr/basis.hpp"
#include "qcorr/errors.hpp"
#include "qcorr/matrix.hpp"
#include "qcorr/noise.hpp"

namespace qcorr {

struct ChannelParams {
    double u = 1.0;
    double v = 0.0;
    cplx z = 1.0;

    static constexpr ChannelParams identity() { return {}; }
};

inline constexpr double kChannelPsdTolerance = 1e-10;
inline constexpr double kDensityInputTolerance = 1e-10;

/// Pure dephasing: u = 1, v = 0, z = exp(-f(t)).
inline ChannelParams dephasing_params(const NoiseParams& noise, double t)
{
    detail::require(t >= 0.0, "dephasing_params: t must be non-negative");
    return {1.0, 0.0, std::exp(-decoherence_exponent(noise, t))};
}

namespace detail {

inline void require_density(const Matrix8& rho, const char* who)
{
    require(is_density_matrix(rho, kDensityInputTolerance), std::string(who) + ": input is not a density matrix");
}

inline void require_psd_output(const Matrix8& rho, const char* who)
{
    if (hermitian_eigenvalues(rho).min() < -kChannelPsdTolerance)
        throw ChannelContractError(std::string(who) + ": channel output is not positive semidefinite");
}

} // namespace detail

/// Three-qubit state after independent local channels, element by element.
/// Only the upper triangle is computed; the lower triangle is its conjugate.
/// Throws ChannelContractError when the output leaves the PSD cone.
inline Matrix8 lift_three_qubit(const Matrix8& rho0, const ChannelParams& pa, const ChannelParams& pb,
                                const ChannelParams& pc)
{
    detail::require_density(rho0, "lift_three_qubit");

    const double uA = pa.u, uB = pb.u, uC = pc.u;
    const double vA = pa.v, vB = pb.v, vC = pc.v;
    const double nuA = 1.0 - uA, nuB = 1.0 - uB, nuC = 1.0 - uC;
    const double nvA = 1.0 - vA, nvB = 1.0 - vB, nvC = 1.0 - vC;
    const cplx zA = pa.z, zB = pb.z, zC = pc.z;
    const cplx zBc = std::conj(zB), zCc = std::conj(zC);

    auto p = [&](int i, int j) { return rho0(basis::index_of(i), basis::index_of(j)); };
    Matrix8 out;
    auto set = [&](int i, int j, cplx value) {
        out(basis::index_of(i), basis::index_of(j)) = value;
        if (i != j) out(basis::index_of(j), basis::index_of(i)) = std::conj(value);
    };

    // populations
    set(1, 1, uA * uB * uC * p(1, 1) + uA * uB * vC * p(2, 2) + uA * vB * uC * p(3, 3) + uA * vB * vC * p(4, 4)
                  + vA * uB * uC * p(5, 5) + vA * uB * vC * p(6, 6) + vA * vB * uC * p(7, 7) + vA * vB * vC * p(8, 8));
    set(2, 2, uA * uB * nuC * p(1, 1) + uA * uB * nvC * p(2, 2) + uA * vB * nuC * p(3, 3) + uA * vB * nvC * p(4, 4)
                  + vA * uB * nuC * p(5, 5) + vA * uB * nvC * p(6, 6) + vA * vB * nuC * p(7, 7)
                  + vA * vB * nvC * p(8, 8));
    set(3, 3, uA * nuB * uC * p(1, 1) + uA * nuB * vC * p(2, 2) + uA * nvB * uC * p(3, 3) + uA * nvB * vC * p(4, 4)
                  + vA * nuB * uC * p(5, 5) + vA * nuB * vC * p(6, 6) + vA * nvB * uC * p(7, 7)
                  + vA * nvB * vC * p(8, 8));
    set(4, 4, uA * nuB * nuC * p(1, 1) + uA * nuB * nvC * p(2, 2) + uA * nvB * nuC * p(3, 3)
                  + uA * nvB * nvC * p(4, 4) + vA * nuB * nuC * p(5, 5) + vA * nuB * nvC * p(6, 6)
                  + vA * nvB * nuC * p(7, 7) + vA * nvB * nvC * p(8, 8));
    set(5, 5, nuA * uB * uC * p(1, 1) + nuA * uB * vC * p(2, 2) + nuA * vB * uC * p(3, 3) + nuA * vB * vC * p(4, 4)
                  + nvA * uB * uC * p(5, 5) + nvA * uB * vC * p(6, 6) + nvA * vB * uC * p(7, 7)
                  + nvA * vB * vC * p(8, 8));
    set(6, 6, nuA * uB * nuC * p(1, 1) + nuA * uB * nvC * p(2, 2) + nuA * vB * nuC * p(3, 3)
                  + nuA * vB * nvC * p(4, 4) + nvA * uB * nuC * p(5, 5) + nvA * uB * nvC * p(6, 6)
                  + nvA * vB * nuC * p(7, 7) + nvA * vB * nvC * p(8, 8));
    set(7, 7, nuA * nuB * uC * p(1, 1) + nuA * nuB * vC * p(2, 2) + nuA * nvB * uC * p(3, 3)
                  + nuA * nvB * vC * p(4, 4) + nvA * nuB * uC * p(5, 5) + nvA * nuB * vC * p(6, 6)
                  + nvA * nvB * uC * p(7, 7) + nvA * nvB * vC * p(8, 8));
    set(8, 8, nuA * nuB * nuC * p(1, 1) + nuA * nuB * nvC * p(2, 2) + nuA * nvB * nuC * p(3, 3)
                  + nuA * nvB * nvC * p(4, 4) + nvA * nuB * nuC * p(5, 5) + nvA * nuB * nvC * p(6, 6)
                  + nvA * nvB * nuC * p(7, 7) + nvA * nvB * nvC * p(8, 8));

    // coherences
    set(1, 2, uA * uB * zC * p(1, 2) + uA * vB * zC * p(3, 4) + vA * uB * zC * p(5, 6) + vA * vB * zC * p(7, 8));
    set(1, 3, uA * zB * uC * p(1, 3) + uA * zB * vC * p(2, 4) + vA * zB * uC * p(5, 7) + vA * zB * vC * p(6, 8));
    set(1, 4, uA * zB * zC * p(1, 4) + vA * zB * zC * p(5, 8));
    set(1, 5, zA * uB * uC * p(1, 5) + zA * uB * vC * p(2, 6) + zA * vB * uC * p(3, 7) + zA * vB * vC * p(4, 8));
    set(1, 6, zA * uB * zC * p(1, 6) + zA * vB * zC * p(3, 8));
    set(1, 7, zA * zB * uC * p(1, 7) + zA * zB * vC * p(2, 8));
    set(1, 8, zA * zB * zC * p(1, 8));
    set(2, 3, uA * zB * zCc * p(2, 3) + vA * zB * zCc * p(6, 7));
    set(2, 4, uA * zB * nuC * p(1, 3) + uA * zB * nvC * p(2, 4) + vA * zB * nuC * p(5, 7) + vA * zB * nvC * p(6, 8));
    set(2, 5, zA * uB * zCc * p(2, 5) + zA * vB * zCc * p(4, 7));
    set(2, 6, zA * uB * nuC * p(1, 5) + zA * uB * nvC * p(2, 6) + zA * vB * nuC * p(3, 7) + zA * vB * nvC * p(4, 8));
    set(2, 7, zA * zB * zCc * p(2, 7));
    set(2, 8, zA * zB * nuC * p(1, 7) + zA * zB * nvC * p(2, 8));
    set(3, 4, uA * nuB * zC * p(1, 2) + uA * nvB * zC * p(3, 4) + vA * nuB * zC * p(5, 6) + vA * nvB * zC * p(7, 8));
    set(3, 5, zA * zBc * uC * p(3, 5) + zA * zBc * vC * p(4, 6));
    set(3, 6, zA * zBc * zC * p(3, 6));
    set(3, 7, zA * nuB * uC * p(1, 5) + zA * nuB * vC * p(2, 6) + zA * nvB * uC * p(3, 7) + zA * nvB * vC * p(4, 8));
    set(3, 8, zA * nuB * zC * p(1, 6) + zA * nvB * zC * p(3, 8));
    set(4, 5, zA * zBc * zCc * p(4, 5));
    set(4, 6, zA * zBc * nuC * p(3, 5) + zA * zBc * nvC * p(4, 6));
    set(4, 7, zA * nuB * zCc * p(2, 5) + zA * nvB * zCc * p(4, 7));
    set(4, 8, zA * nuB * nuC * p(1, 5) + zA * nuB * nvC * p(2, 6) + zA * nvB * nuC * p(3, 7)
                  + zA * nvB * nvC * p(4, 8));
    set(5, 6, nuA * uB * zC * p(1, 2) + nuA * vB * zC * p(3, 4) + nvA * uB * zC * p(5, 6) + nvA * vB * zC * p(7, 8));
    set(5, 7, nuA * zB * uC * p(1, 3) + nuA * zB * vC * p(2, 4) + nvA * zB * uC * p(5, 7) + nvA * zB * vC * p(6, 8));
    set(5, 8, nuA * zB * zC * p(1, 4) + nvA * zB * zC * p(5, 8));
    set(6, 7, nuA * zB * zCc * p(2, 3) + nvA * zB * zCc * p(6, 7));
    set(6, 8, nuA * zB * nuC * p(1, 3) + nuA * zB * nvC * p(2, 4) + nvA * zB * nuC * p(5, 7)
                  + nvA * zB * nvC * p(6, 8));
    set(7, 8, nuA * nuB * zC * p(1, 2) + nuA * nvB * zC * p(3, 4) + nvA * nuB * zC * p(5, 6)
                  + nvA * nvB * zC * p(7, 8));

    detail::require_psd_output(out, "lift_three_qubit");
    return out;
}

/// Single-qubit transfer tensor T[2i+i'][2l+l'] mapping rho_{ll'}(0) to rho_{ii'}(t).
using TransferTensor = std::array<std::array<cplx, 4>, 4>;

inline TransferTensor single_qubit_transfer(const ChannelParams& p)
{
    TransferTensor t{};
    t[0][0] = p.u;
    t[0][3] = p.v;
    t[3][0] = 1.0 - p.u;
    t[3][3] = 1.0 - p.v;
    t[1][1] = p.z;
    t[2][2] = std::conj(p.z);
    return t;
}

/// Generic three-qubit contraction
///   rho_{i1i1',i2i2',i3i3'}(t) = sum A_{i1i1'}^{l1l1'} A_{i2i2'}^{l2l2'} A_{i3i3'}^{l3l3'} rho_{l1l1',l2l2',l3l3'}(0).
inline Matrix8 lift_via_transfer(const Matrix8& rho0, const ChannelParams& pa, const ChannelParams& pb,
                                 const ChannelParams& pc)
{
    const std::array<TransferTensor, 3> t{single_qubit_transfer(pa), single_qubit_transfer(pb),
                                          single_qubit_transfer(pc)};
    auto bit = [](std::size_t index, std::size_t q) { return (index >> (2 - q)) & 1u; };
    Matrix8 out;
    for (std::size_t i = 0; i < 8; ++i)
        for (std::size_t j = 0; j < 8; ++j) {
            cplx s = 0.0;
            for (std::size_t l = 0; l < 8; ++l)
                for (std::size_t m = 0; m < 8; ++m) {
                    cplx coeff = 1.0;
                    for (std::size_t q = 0; q < 3 && coeff != 0.0; ++q)
                        coeff *= t[q][2 * bit(i, q) + bit(j, q)][2 * bit(l, q) + bit(m, q)];
                    if (coeff != 0.0) s += coeff * rho0(l, m);
                }
            out(i, j) = s;
        }
    return out;
}

/// Pure-dephasing evolution using the decay-class tables: populations are
/// unchanged and a coherence between basis states differing on k qubits is
/// multiplied by exp(-k f(t)).
inline Matrix8 evolve_dephasing(const Matrix8& rho0, const NoiseParams& noise, double t)
{
    detail::require(t >= 0.0, "evolve_dephasing: t must be non-negative");
    detail::require_density(rho0, "evolve_dephasing");
    const double z1 = std::exp(-decoherence_exponent(noise, t));
    const double z2 = z1 * z1;
    const double z3 = z2 * z1;

    Matrix8 out;
    for (std::size_t i = 0; i < 8; ++i) out(i, i) = rho0(i, i);
    auto scale = [&](const auto& table, double factor) {
        for (const auto& [a, b] : table) {
            const auto i = basis::index_of(a), j = basis::index_of(b);
            out(i, j) = rho0(i, j) * factor;
            out(j, i) = std::conj(out(i, j));
        }
    };
    scale(basis::kSingleDecay, z1);
    scale(basis::kDoubleDecay, z2);
    scale(basis::kTripleDecay, z3);
    return out;
}

} // namespace qcorr
