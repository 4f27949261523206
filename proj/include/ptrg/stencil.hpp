#ifndef PTRG_STENCIL_HPP
#define PTRG_STENCIL_HPP

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "ptrg/model.hpp"

namespace ptrg
{

template <typename Scalar>
using FieldT = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
using Field = FieldT<double>;

/// Finite-difference weights for the `order`-th derivative at `z` from
/// samples at `nodes` (Fornberg's recursion). Returns one weight per node.
template <typename Scalar>
std::vector<Scalar> fornberg_weights(Scalar z, const std::vector<Scalar>& nodes, int order)
{
    const int n = static_cast<int>(nodes.size());
    if (order < 0 || order >= n)
        throw std::invalid_argument("fornberg_weights: need more nodes than the derivative order");

    // c[j][k]: weight of node j for derivative k
    std::vector<std::vector<Scalar>> c(n, std::vector<Scalar>(order + 1, Scalar(0)));
    Scalar c1 = 1;
    Scalar c4 = nodes[0] - z;
    c[0][0] = 1;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, order);
        Scalar c2 = 1;
        const Scalar c5 = c4;
        c4 = nodes[i] - z;
        for (int j = 0; j < i; ++j) {
            const Scalar c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k)
                c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<Scalar> w(n);
    for (int j = 0; j < n; ++j)
        w[j] = c[j][order];
    return w;
}

/// Precomputed first/second/third derivative stencils on a uniform grid.
///
/// Interior nodes use centred 5-point stencils: fourth-order accurate for
/// orders 1 and 2, second-order for order 3 ([-1, 2, 0, -2, 1] / 2h^3).
/// The two nodes nearest each boundary use one-sided windows of the same
/// accuracy order (5 points for orders 1 and 3, 6 points for order 2).
template <typename Scalar>
class DerivativeStencil
{
public:
    static constexpr int kMaxWidth = 6;

    DerivativeStencil(const SpatialGrid& grid, int order) : n_(grid.size()), order_(order)
    {
        if (order < 1 || order > 3)
            throw std::invalid_argument("derivative order must be 1, 2 or 3");
        if (n_ < 7)
            throw std::invalid_argument("derivative needs a grid with at least 7 points");

        const Scalar scale = Scalar(1) / std::pow(Scalar(grid.spacing()), order);
        const int width = (order == 2) ? 6 : 5;

        interior_ = weights_at(0, -2, 5, scale);
        // window [0, width) seen from node b; the right edge reuses it mirrored
        for (int b = 0; b < 2; ++b)
            left_[b] = weights_at(0, -b, width, scale);
        width_ = width;
    }

    int order() const { return order_; }

    /// Mirror-exact: an even (odd) input gives an output whose parity is
    /// exactly that of the derivative, bit for bit.
    template <typename In, typename Out>
    void apply(const Eigen::MatrixBase<In>& f, Eigen::MatrixBase<Out>& out) const
    {
        const Scalar w0 = interior_[0], w1 = interior_[1], w2 = interior_[2];
        if (order_ % 2 == 0) {
            for (int i = 2; i < n_ - 2; ++i)
                out[i] = w0 * (f[i - 2] + f[i + 2]) + w1 * (f[i - 1] + f[i + 1]) + w2 * f[i];
        } else {
            for (int i = 2; i < n_ - 2; ++i)
                out[i] = w0 * (f[i - 2] - f[i + 2]) + w1 * (f[i - 1] - f[i + 1]);
        }
        const Scalar sign = order_ % 2 == 0 ? Scalar(1) : Scalar(-1);
        for (int b = 0; b < 2; ++b) {
            Scalar lo = 0, hi = 0;
            for (int j = 0; j < width_; ++j) {
                lo += left_[b][j] * f[j];
                hi += left_[b][j] * f[n_ - 1 - j];
            }
            out[b] = lo;
            out[n_ - 1 - b] = sign * hi;
        }
    }

    FieldT<Scalar> operator()(const FieldT<Scalar>& f) const
    {
        if (f.size() != n_)
            throw std::invalid_argument("field length does not match grid");
        FieldT<Scalar> out(n_);
        apply(f, out);
        return out;
    }

private:
    std::array<Scalar, kMaxWidth> weights_at(int z, int first, int width, Scalar scale) const
    {
        std::vector<Scalar> nodes(width);
        for (int j = 0; j < width; ++j)
            nodes[j] = Scalar(first + j);
        const auto w = fornberg_weights<Scalar>(Scalar(z), nodes, order_);
        std::array<Scalar, kMaxWidth> out{};
        for (int j = 0; j < width; ++j)
            out[j] = w[j] * scale;
        return out;
    }

    int n_;
    int order_;
    int width_ = 5;
    std::array<Scalar, kMaxWidth> interior_{};
    std::array<std::array<Scalar, kMaxWidth>, 2> left_{};
};

/// One-shot spatial derivative of a sampled field.
template <typename Scalar>
FieldT<Scalar> derivative(const SpatialGrid& grid, const FieldT<Scalar>& f, int order)
{
    return DerivativeStencil<Scalar>(grid, order)(f);
}

inline Field derivative(const SpatialGrid& grid, const Field& f, int order)
{
    return derivative<double>(grid, f, order);
}

/// Samples a callable on every node of the grid.
template <typename Fn>
Field sample(const SpatialGrid& grid, Fn&& fn)
{
    Field out(grid.size());
    for (int i = 0; i < grid.size(); ++i)
        out[i] = fn(grid.x(i));
    return out;
}

} // namespace ptrg

#endif // PTRG_STENCIL_HPP
