#pragma once

#include <stdexcept>
#include <string>

namespace qcorr {

/// A precondition of a numerical routine was violated by the caller.
class ContractError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// A channel produced a state outside the density-matrix set, which means its
/// parameters do not describe a physical map.
class ChannelContractError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool condition, const std::string& message)
{
    if (!condition) throw ContractError(message);
}

} // namespace detail
} // namespace qcorr
