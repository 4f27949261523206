#ifndef PTRG_EXACT_SOLVER_HPP
#define PTRG_EXACT_SOLVER_HPP

#include <stdexcept>

#include <Eigen/Dense>

#include "ptrg/model.hpp"

namespace ptrg
{

struct EigenConfig
{
    double x_max = 12.0;
    int n_points = 8001; // across [-x_max, x_max]
    bool refine = true;  // Richardson extrapolation over h and h/2
};

struct EigenResult
{
    double e0 = 0; // even sector
    double e1 = 0; // odd sector
    double gap = 0;
    /// Richardson residual |extrapolated - fine grid| on the gap; zero when
    /// refinement is off.
    double gap_error = 0;
    /// Largest |psi(x_max)| / max |psi| over the two sectors.
    double boundary_amplitude = 0;
};

/// Thrown when the box is too small to contain the low-lying states.
class DomainTooSmall : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Symmetric tridiagonal matrix stored by diagonal and sub-diagonal.
struct Tridiagonal
{
    Eigen::VectorXd diag;
    Eigen::VectorXd off; // size diag.size() - 1
};

/// Number of eigenvalues strictly below `shift` (Sturm sequence count).
int sturm_count(const Tridiagonal& t, double shift);

/// Lowest eigenvalue by bisection on the Sturm count.
double lowest_eigenvalue(const Tridiagonal& t);

/// Lowest even- and odd-parity levels of H = -1/2 d^2/dx^2 + V(x) with the
/// bare potential, discretized with the three-point Laplacian on [0, x_max].
EigenResult schrodinger_gap(const ModelParams& params, const EigenConfig& cfg = {});

/// Matrices of the two parity sectors on a half-line grid of `n_half`
/// interior intervals; exposed for testing.
Tridiagonal even_sector(const ModelParams& params, double x_max, int n_half);
Tridiagonal odd_sector(const ModelParams& params, double x_max, int n_half);

} // namespace ptrg

#endif // PTRG_EXACT_SOLVER_HPP
