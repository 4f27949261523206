#ifndef PTRG_INSTANTON_HPP
#define PTRG_INSTANTON_HPP

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ptrg
{

/// Dilute instanton gas splitting for V = -x^2/2 + lambda x^4 (hbar = 1, unit mass):
///   2 sqrt(2 sqrt2 / (pi lambda)) exp(-1 / (3 sqrt2 lambda)).
/// Only meaningful for small lambda.
template <typename Scalar>
Scalar instanton_gap(Scalar lambda)
{
    using std::exp;
    using std::sqrt;
    if (!(lambda > 0))
        throw std::domain_error("instanton_gap: lambda must be positive");
    const Scalar sqrt2 = std::numbers::sqrt2_v<Scalar>;
    const Scalar pi = std::numbers::pi_v<Scalar>;
    return 2 * sqrt(2 * sqrt2 / (pi * lambda)) * exp(-1 / (3 * sqrt2 * lambda));
}

} // namespace ptrg

#endif // PTRG_INSTANTON_HPP
