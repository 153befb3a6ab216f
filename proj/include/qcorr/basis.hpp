#pragma once
/**
 * @file basis.hpp
 * @brief The three-qubit standard basis and the index tables that refer to it.
 *
 * Basis states are numbered 1..8 as
 *   |1>=|111>, |2>=|110>, |3>=|101>, |4>=|100>, |5>=|011>, |6>=|010>, |7>=|001>, |8>=|000>
 * and matrix index = label - 1. Every other header that names a basis state by
 * number goes through this table.
 */

#include <array>
#include <bit>
#include <cstddef>
#include <string>
#include <utility>

namespace qcorr::basis {

inline constexpr std::size_t kDim = 8;

/// Matrix index of a 1-based basis label.
constexpr std::size_t index_of(int label) { return static_cast<std::size_t>(label - 1); }

/// Ket digits of a matrix index, e.g. 3 -> "100".
inline std::string ket(std::size_t index)
{
    std::string s(3, '0');
    for (std::size_t q = 0; q < 3; ++q) s[q] = (index & (std::size_t{4} >> q)) ? '0' : '1';
    return s;
}

/// Number of qubits whose state differs between two basis indices. Under pure
/// dephasing the element (i, j) decays as exp(-order * f).
constexpr int coherence_order(std::size_t i, std::size_t j) { return std::popcount(i ^ j); }

using LabelPair = std::pair<int, int>;

// Upper-triangle element labels grouped by decay class, as tabulated for the
// pure-dephasing solution.
inline constexpr std::array<LabelPair, 12> kSingleDecay{{
    {1, 2}, {1, 3}, {1, 5}, {2, 4}, {2, 6}, {3, 4}, {3, 7}, {4, 8}, {5, 6}, {5, 7}, {6, 8}, {7, 8},
}};
inline constexpr std::array<LabelPair, 12> kDoubleDecay{{
    {1, 4}, {1, 6}, {1, 7}, {2, 3}, {2, 5}, {2, 8}, {3, 5}, {3, 8}, {4, 6}, {4, 7}, {5, 8}, {6, 7},
}};
inline constexpr std::array<LabelPair, 4> kTripleDecay{{
    {1, 8}, {2, 7}, {3, 6}, {4, 5},
}};

/// |GHZ> = (|111> + |000>)/sqrt(2)
inline constexpr std::array<int, 2> kGhzLabels{1, 8};
/// |W> = (|100> + |010> + |001>)/sqrt(3)
inline constexpr std::array<int, 3> kWLabels{4, 6, 7};

} // namespace qcorr::basis
