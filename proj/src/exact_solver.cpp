#include "ptrg/exact_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ptrg
{

int sturm_count(const Tridiagonal& t, double shift)
{
    const Eigen::Index n = t.diag.size();
    int count = 0;
    double q = t.diag[0] - shift;
    if (q < 0)
        ++count;
    for (Eigen::Index i = 1; i < n; ++i) {
        if (q == 0)
            q = std::numeric_limits<double>::epsilon() * (std::abs(t.off[i - 1]) + std::abs(shift) + 1);
        q = t.diag[i] - shift - t.off[i - 1] * t.off[i - 1] / q;
        if (q < 0)
            ++count;
    }
    return count;
}

double lowest_eigenvalue(const Tridiagonal& t)
{
    // Gershgorin bounds
    const Eigen::Index n = t.diag.size();
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (Eigen::Index i = 0; i < n; ++i) {
        double r = 0;
        if (i > 0)
            r += std::abs(t.off[i - 1]);
        if (i + 1 < n)
            r += std::abs(t.off[i]);
        lo = std::min(lo, t.diag[i] - r);
        hi = std::max(hi, t.diag[i] + r);
    }
    for (int it = 0; it < 200 && hi - lo > 4 * std::numeric_limits<double>::epsilon() * std::max(std::abs(lo), std::abs(hi));
         ++it) {
        const double mid = 0.5 * (lo + hi);
        if (sturm_count(t, mid) >= 1)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

namespace
{

/// Eigenvector near `eigenvalue` by inverse iteration (Thomas solves).
Eigen::VectorXd inverse_iteration(const Tridiagonal& t, double eigenvalue)
{
    const Eigen::Index n = t.diag.size();
    const double shift = eigenvalue - 1e-10 * (1 + std::abs(eigenvalue));
    Eigen::VectorXd x = Eigen::VectorXd::Ones(n);
    Eigen::VectorXd c(n), d(n);
    for (int it = 0; it < 3; ++it) {
        // forward sweep
        double denom = t.diag[0] - shift;
        c[0] = n > 1 ? t.off[0] / denom : 0;
        d[0] = x[0] / denom;
        for (Eigen::Index i = 1; i < n; ++i) {
            denom = t.diag[i] - shift - t.off[i - 1] * c[i - 1];
            c[i] = i + 1 < n ? t.off[i] / denom : 0;
            d[i] = (x[i] - t.off[i - 1] * d[i - 1]) / denom;
        }
        x[n - 1] = d[n - 1];
        for (Eigen::Index i = n - 2; i >= 0; --i)
            x[i] = d[i] - c[i] * x[i + 1];
        x /= x.cwiseAbs().maxCoeff();
    }
    return x;
}

struct SectorLevels
{
    double even;
    double odd;
    double boundary_amplitude;
};

SectorLevels solve_sectors(const ModelParams& params, double x_max, int n_half)
{
    const Tridiagonal even = even_sector(params, x_max, n_half);
    const Tridiagonal odd = odd_sector(params, x_max, n_half);
    SectorLevels out;
    out.even = lowest_eigenvalue(even);
    out.odd = lowest_eigenvalue(odd);
    const Eigen::VectorXd pe = inverse_iteration(even, out.even);
    const Eigen::VectorXd po = inverse_iteration(odd, out.odd);
    out.boundary_amplitude = std::max(std::abs(pe[pe.size() - 1]), std::abs(po[po.size() - 1]));
    return out;
}

} // namespace

// Half-line nodes x_j = j h, j = 0 .. n_half, with psi(x_max) = 0 at j = n_half.
Tridiagonal even_sector(const ModelParams& params, double x_max, int n_half)
{
    const double h = x_max / n_half;
    const double kin = 0.5 / (h * h);
    // unknowns at j = 0 .. n_half - 1; reflection psi(-h) = psi(h) at the origin,
    // symmetrized by rescaling psi(0) with sqrt(2)
    Tridiagonal t;
    t.diag.resize(n_half);
    t.off.setConstant(n_half - 1, -kin);
    for (int j = 0; j < n_half; ++j)
        t.diag[j] = 2 * kin + bare_potential(params, j * h);
    t.off[0] = -std::sqrt(2.0) * kin;
    return t;
}

Tridiagonal odd_sector(const ModelParams& params, double x_max, int n_half)
{
    const double h = x_max / n_half;
    const double kin = 0.5 / (h * h);
    // unknowns at j = 1 .. n_half - 1, psi(0) = 0
    Tridiagonal t;
    t.diag.resize(n_half - 1);
    t.off.setConstant(n_half - 2, -kin);
    for (int j = 1; j < n_half; ++j)
        t.diag[j - 1] = 2 * kin + bare_potential(params, j * h);
    return t;
}

EigenResult schrodinger_gap(const ModelParams& params, const EigenConfig& cfg)
{
    params.validate();
    if (!(params.lambda > 0 || params.m_squared > 0))
        throw std::invalid_argument("schrodinger_gap: potential is not confining");
    if (cfg.n_points < 101 || cfg.n_points % 2 == 0)
        throw std::invalid_argument("schrodinger_gap: n_points must be odd and >= 101");
    const auto minima = classical_minima(params);
    const double outer = std::abs(minima.back());
    if (!(cfg.x_max > 0) || cfg.x_max < 3 * outer)
        throw DomainTooSmall("schrodinger_gap: x_max must cover the classical minima by a factor 3");

    const int n_half = (cfg.n_points - 1) / 2;
    const SectorLevels coarse = solve_sectors(params, cfg.x_max, n_half);

    EigenResult r;
    r.boundary_amplitude = coarse.boundary_amplitude;
    if (cfg.refine) {
        const SectorLevels fine = solve_sectors(params, cfg.x_max, 2 * n_half);
        r.e0 = (4 * fine.even - coarse.even) / 3;
        r.e1 = (4 * fine.odd - coarse.odd) / 3;
        r.gap = r.e1 - r.e0;
        r.gap_error = std::abs(r.gap - (fine.odd - fine.even));
        r.boundary_amplitude = std::max(r.boundary_amplitude, fine.boundary_amplitude);
    } else {
        r.e0 = coarse.even;
        r.e1 = coarse.odd;
        r.gap = r.e1 - r.e0;
    }
    if (r.boundary_amplitude > 1e-8)
        throw DomainTooSmall("schrodinger_gap: eigenfunction does not decay inside x_max");
    return r;
}

} // namespace ptrg
