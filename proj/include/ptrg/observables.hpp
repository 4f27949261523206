#ifndef PTRG_OBSERVABLES_HPP
#define PTRG_OBSERVABLES_HPP

#include <cmath>
#include <stdexcept>

#include "ptrg/flow_rhs.hpp"

namespace ptrg
{

/// Energy gap as the renormalized mass sqrt(V''(0) / Z(0)) of the k -> 0 action.
/// A negative curvature means the barrier has not melted yet; the gap is
/// then undefined rather than zero.
template <typename Scalar>
Scalar gap_from_flow(Scalar v2_origin, Scalar z_origin)
{
    using std::sqrt;
    if (!(z_origin > 0))
        throw std::domain_error("gap_from_flow: Z(0) must be positive");
    if (!(v2_origin >= 0))
        throw std::domain_error("gap_from_flow: V''(0) is negative, potential not yet convex");
    return sqrt(v2_origin / z_origin);
}

struct GapEstimate
{
    double value = 0;
    SchemeSpec scheme;
    double v2_origin = 0;
    double z_origin = 1;
};

inline GapEstimate make_gap_estimate(const SchemeSpec& scheme, double v2_origin, double z_origin)
{
    return {gap_from_flow(v2_origin, z_origin), scheme, v2_origin, z_origin};
}

} // namespace ptrg

#endif // PTRG_OBSERVABLES_HPP
