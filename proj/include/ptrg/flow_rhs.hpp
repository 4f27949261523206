#ifndef PTRG_FLOW_RHS_HPP
#define PTRG_FLOW_RHS_HPP

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ptrg
{

enum class SchemeKind
{
    WegnerHoughton,
    ProperTimeLO,
    ProperTimeNLO,
    ProperTimeFiniteM,
};

struct SchemeSpec
{
    SchemeKind kind = SchemeKind::ProperTimeNLO;
    int m = 0; // only meaningful for ProperTimeFiniteM

    static SchemeSpec wegner_houghton() { return {SchemeKind::WegnerHoughton, 0}; }
    static SchemeSpec pt_lo() { return {SchemeKind::ProperTimeLO, 0}; }
    static SchemeSpec pt_nlo() { return {SchemeKind::ProperTimeNLO, 0}; }
    static SchemeSpec pt_finite_m(int m)
    {
        if (m < 1)
            throw std::invalid_argument("proper-time index m must be >= 1");
        return {SchemeKind::ProperTimeFiniteM, m};
    }

    /// Schemes that evolve Z alongside V.
    bool runs_z() const { return kind == SchemeKind::ProperTimeNLO || kind == SchemeKind::ProperTimeFiniteM; }
};

std::string to_string(SchemeKind kind);

/// Thrown when a flow leaves the domain where its right-hand side is defined
/// (non-positive log argument or fractional-power base).
class PositivityViolation : public std::domain_error
{
public:
    using std::domain_error::domain_error;
};

/// Local data entering the flow equations at one grid node.
template <typename Scalar>
struct PointData
{
    Scalar k = 1;
    Scalar v2 = 0; // V''
    Scalar v3 = 0; // V'''
    Scalar z = 1;
    Scalar z1 = 0; // Z'
    Scalar z2 = 0; // Z''
    Scalar d = 1;  // Euclidean dimension
};

/// k dV/dk and k dZ/dk at one node.
template <typename Scalar>
struct FlowRate
{
    Scalar dv = 0;
    Scalar dz = 0;
};

/// Gamma(m + 1 - d/2) / ((4 pi)^(d/2) Gamma(m + 1)), evaluated through lgamma
/// so that large m does not overflow.
template <typename Scalar>
Scalar alpha(int m, Scalar d)
{
    using std::exp;
    using std::lgamma;
    using std::log;
    const Scalar a = Scalar(m) + 1 - d / 2;
    if (m < 1 || !(a > 0))
        throw std::domain_error("alpha: Gamma(m + 1 - d/2) is at or beyond a pole");
    const Scalar four_pi = 4 * std::numbers::pi_v<Scalar>;
    return exp(lgamma(a) - lgamma(Scalar(m) + 1) - d / 2 * log(four_pi));
}

namespace detail
{

/// Finite-m proper-time flow with the m k^2 shifted regulator.
/// `pref` must equal alpha(m, d) * (k^2 m)^(d/2); the caller guarantees
/// z k^2 + v2/m > 0.
template <typename Scalar>
FlowRate<Scalar> pt_m_unchecked(const PointData<Scalar>& p, int m, Scalar pref, bool with_z)
{
    using std::exp;
    using std::log;
    const Scalar mm = Scalar(m);
    const Scalar a1 = mm + 1 - p.d / 2;
    const Scalar zk2 = p.z * p.k * p.k;
    const Scalar base = zk2 + p.v2 / mm;
    const Scalar common = pref * exp(a1 * log(zk2 / base));

    FlowRate<Scalar> r;
    r.dv = common;
    if (!with_z)
        return r;

    const Scalar a2 = mm + 2 - p.d / 2;
    const Scalar a3 = mm + 3 - p.d / 2;
    const Scalar c21 = (4 + 18 * p.d - p.d * p.d) / 24;
    const Scalar t1 = a1 / (mm * base) * (-p.z2 + c21 * p.z1 * p.z1 / p.z);
    const Scalar t2 = (10 - p.d) * a1 * a2 / (6 * mm * mm * base * base) * p.z1 * p.v3;
    const Scalar t3 = a1 * a2 * a3 / (6 * mm * mm * mm * base * base * base) * p.z * p.v3 * p.v3;
    r.dz = common * (t1 + t2 - t3);
    return r;
}

/// m -> infinity proper-time flow. `pref` must equal (k^2 / 4 pi)^(d/2).
template <typename Scalar>
FlowRate<Scalar> pt_inf_unchecked(const PointData<Scalar>& p, Scalar pref, bool with_z)
{
    using std::exp;
    const Scalar zk2 = p.z * p.k * p.k;
    // exp underflows to exactly 0 for strongly suppressed modes
    const Scalar common = pref * exp(-p.v2 / zk2);

    FlowRate<Scalar> r;
    r.dv = common;
    if (!with_z || common == 0)
        return r;

    const Scalar c21 = (4 + 18 * p.d - p.d * p.d) / 24;
    const Scalar bracket = -p.z2 / zk2 + c21 * p.z1 * p.z1 / (p.z * zk2) + (10 - p.d) * p.z1 * p.v3 / (6 * zk2 * zk2)
        - p.z * p.v3 * p.v3 / (6 * zk2 * zk2 * zk2);
    r.dz = common * bracket;
    return r;
}

/// Sharp-cutoff local potential flow in one dimension; requires k^2 + v2 > 0.
template <typename Scalar>
FlowRate<Scalar> wh_unchecked(const PointData<Scalar>& p)
{
    using std::log1p;
    FlowRate<Scalar> r;
    r.dv = -p.k / (2 * std::numbers::pi_v<Scalar>)*log1p(p.v2 / (p.k * p.k));
    return r;
}

template <typename Scalar>
Scalar pt_m_prefactor(int m, Scalar k, Scalar d)
{
    using std::pow;
    return alpha<Scalar>(m, d) * pow(k * k * Scalar(m), d / 2);
}

template <typename Scalar>
Scalar pt_inf_prefactor(Scalar k, Scalar d)
{
    using std::pow;
    return pow(k * k / (4 * std::numbers::pi_v<Scalar>), d / 2);
}

} // namespace detail

/// k dV/dk and k dZ/dk from the finite-m proper-time flow.
template <typename Scalar>
FlowRate<Scalar> rhs_pt_m(const PointData<Scalar>& p, int m)
{
    if (m < 1)
        throw std::invalid_argument("rhs_pt_m: m must be >= 1");
    if (!(p.k > 0) || !(p.z > 0))
        throw std::invalid_argument("rhs_pt_m: k and z must be positive");
    if (!(p.z * p.k * p.k + p.v2 / Scalar(m) > 0))
        throw PositivityViolation("rhs_pt_m: z k^2 + V''/m <= 0");
    return detail::pt_m_unchecked(p, m, detail::pt_m_prefactor(m, p.k, p.d), true);
}

/// k dV/dk and k dZ/dk from the m -> infinity proper-time flow.
template <typename Scalar>
FlowRate<Scalar> rhs_pt_inf(const PointData<Scalar>& p)
{
    if (!(p.k > 0) || !(p.z > 0))
        throw std::invalid_argument("rhs_pt_inf: k and z must be positive");
    return detail::pt_inf_unchecked(p, detail::pt_inf_prefactor(p.k, p.d), true);
}

/// k dV/dk from the Wegner-Houghton local potential flow (dz is always 0).
template <typename Scalar>
FlowRate<Scalar> rhs_wh(const PointData<Scalar>& p)
{
    if (!(p.k > 0))
        throw std::invalid_argument("rhs_wh: k must be positive");
    if (!(1 + p.v2 / (p.k * p.k) > 0))
        throw PositivityViolation("rhs_wh: 1 + V''/k^2 <= 0");
    return detail::wh_unchecked(p);
}

} // namespace ptrg

#endif // PTRG_FLOW_RHS_HPP
