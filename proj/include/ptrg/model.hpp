#ifndef PTRG_MODEL_HPP
#define PTRG_MODEL_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace ptrg
{

/// Bare anharmonic / double-well problem V(x) = m2/2 x^2 + lambda x^4,
/// specified at the UV scale `cutoff` in `dimension` Euclidean dimensions.
/// Units: hbar = 1, unit mass.
struct ModelParams
{
    double m_squared = -1.0;
    double lambda = 0.05;
    double cutoff = 1500.0;
    double dimension = 1.0;

    /// Throws std::invalid_argument when the instance is not usable.
    void validate() const
    {
        if (!std::isfinite(m_squared) || !std::isfinite(lambda) || !std::isfinite(cutoff))
            throw std::invalid_argument("ModelParams: non-finite coupling");
        if (lambda < 0.0)
            throw std::invalid_argument("ModelParams: lambda must be >= 0");
        if (cutoff <= 0.0)
            throw std::invalid_argument("ModelParams: cutoff must be > 0");
        if (cutoff * cutoff < 100.0 * std::abs(m_squared))
            throw std::invalid_argument("ModelParams: cutoff^2 must exceed 100 |m_squared|");
        if (!(dimension > 0.0))
            throw std::invalid_argument("ModelParams: dimension must be > 0");
    }
};

/// Uniform symmetric grid on [-x_max, x_max]. n_points is odd so that the
/// centre node sits exactly on x = 0.
class SpatialGrid
{
public:
    SpatialGrid(double x_max, int n_points) : x_max_(x_max), n_(n_points)
    {
        if (!(x_max > 0.0) || !std::isfinite(x_max))
            throw std::invalid_argument("SpatialGrid: x_max must be > 0");
        if (n_points < 5 || n_points % 2 == 0)
            throw std::invalid_argument("SpatialGrid: n_points must be odd and >= 5");
        h_ = 2.0 * x_max / (n_points - 1);
    }

    double x_max() const { return x_max_; }
    int size() const { return n_; }
    double spacing() const { return h_; }
    int center() const { return (n_ - 1) / 2; }

    /// Node coordinate; symmetric by construction so that x(center) == 0.
    double x(int i) const { return (i - center()) * h_; }

    Eigen::VectorXd nodes() const
    {
        Eigen::VectorXd out(n_);
        for (int i = 0; i < n_; ++i)
            out[i] = x(i);
        return out;
    }

    bool operator==(const SpatialGrid& o) const { return x_max_ == o.x_max_ && n_ == o.n_; }

private:
    double x_max_;
    int n_;
    double h_;
};

template <typename Scalar>
Scalar bare_potential(const ModelParams& p, Scalar x)
{
    const Scalar x2 = x * x;
    return Scalar(0.5) * Scalar(p.m_squared) * x2 + Scalar(p.lambda) * x2 * x2;
}

inline std::vector<double> classical_minima(const ModelParams& p)
{
    if (p.m_squared >= 0.0 || p.lambda == 0.0)
        return {0.0};
    const double xs = std::sqrt(-p.m_squared / (4.0 * p.lambda));
    return {-xs, xs};
}

inline constexpr int kDefaultGridPoints = 2001;

/// Domain large enough to hold the minima and the Z peak: max(8, 3 x*).
inline double default_x_max(const ModelParams& p)
{
    double outer = 0.0;
    for (double m : classical_minima(p))
        outer = std::max(outer, std::abs(m));
    return std::max(8.0, 3.0 * outer);
}

inline SpatialGrid default_grid(const ModelParams& p, int n_points = kDefaultGridPoints)
{
    return SpatialGrid(default_x_max(p), n_points);
}

} // namespace ptrg

#endif // PTRG_MODEL_HPP
