#pragma once
/**
 * @file states.hpp
 * @brief GHZ-type and W-type initial states,
 *        rho(0) = (1 - r)/8 I_8 + r |psi><psi|.
 */

#include <cmath>
#include <string_view>

#include "qcorr/basis.hpp"
#include "qcorr/errors.hpp"
#include "qcorr/matrix.hpp"

namespace qcorr {

enum class Family { GHZ, W };

inline std::string_view to_string(Family f) { return f == Family::GHZ ? "GHZ" : "W"; }

struct PurityMix {
    Family family = Family::GHZ;
    double r = 1.0; ///< purity in [0, 1]
};

namespace detail {

template <std::size_t K>
Matrix8 mix_with_uniform_superposition(const std::array<int, K>& labels, double r)
{
    Matrix8 rho = Matrix8::identity() * cplx((1.0 - r) / 8.0);
    const double weight = r / static_cast<double>(K);
    for (int a : labels)
        for (int b : labels) rho(basis::index_of(a), basis::index_of(b)) += weight;
    return rho;
}

} // namespace detail

inline Matrix8 make_state(const PurityMix& mix)
{
    detail::require(mix.r >= 0.0 && mix.r <= 1.0, "make_state: purity must lie in [0, 1]");
    return mix.family == Family::GHZ ? detail::mix_with_uniform_superposition(basis::kGhzLabels, mix.r)
                                     : detail::mix_with_uniform_superposition(basis::kWLabels, mix.r);
}

inline Matrix8 make_state(Family family, double r) { return make_state(PurityMix{family, r}); }

} // namespace qcorr
