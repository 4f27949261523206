#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ptrg/stencil.hpp"

using namespace ptrg;

TEST_CASE("quartic field: interior derivatives are exact")
{
    const SpatialGrid g(4.0, 81); // h = 0.1, x = 1 is node 50
    const Field f = sample(g, [](double x) { return std::pow(x, 4); });
    const int at_one = 50;
    REQUIRE(g.x(at_one) == doctest::Approx(1.0));
    CHECK(derivative(g, f, 1)[at_one] == doctest::Approx(4.0).epsilon(1e-10));
    CHECK(derivative(g, f, 2)[at_one] == doctest::Approx(12.0).epsilon(1e-10));
    CHECK(derivative(g, f, 3)[at_one] == doctest::Approx(24.0).epsilon(1e-10));
}

TEST_CASE("constant field has vanishing derivatives")
{
    const SpatialGrid g(3.0, 31);
    const Field f = Field::Constant(31, 2.5);
    for (int order = 1; order <= 3; ++order)
        CHECK(derivative(g, f, order).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("interior stencil weights")
{
    // standard 5-point weights, h = 1
    const SpatialGrid g(5.0, 11);
    Field delta = Field::Zero(11);
    delta[5] = 1;
    // response at nodes 3..7 reads off the weights in reverse
    const Field d2 = derivative(g, delta, 2);
    CHECK(d2[5] == doctest::Approx(-30.0 / 12));
    CHECK(d2[4] == doctest::Approx(16.0 / 12));
    CHECK(d2[3] == doctest::Approx(-1.0 / 12));
    const Field d3 = derivative(g, delta, 3);
    CHECK(d3[3] == doctest::Approx(0.5));  // weight of f[i+2] seen from i = 3
    CHECK(d3[4] == doctest::Approx(-1.0)); // weight of f[i+1]
    CHECK(d3[5] == doctest::Approx(0.0));
    CHECK(d3[6] == doctest::Approx(1.0));
    CHECK(d3[7] == doctest::Approx(-0.5));
}

TEST_CASE("boundary stencils are exact up to their polynomial degree")
{
    const SpatialGrid g(1.0, 21);
    // exactness degree: order 1 -> 4, order 2 -> 5, order 3 -> 4
    const int degree[4] = {0, 4, 5, 4};
    for (int order = 1; order <= 3; ++order) {
        const int p = degree[order];
        const Field f = sample(g, [&](double x) { return std::pow(x + 0.3, p); });
        const Field d = derivative(g, f, order);
        for (int i : {0, 1, 19, 20}) {
            double expect = 1;
            for (int j = 0; j < order; ++j)
                expect *= (p - j);
            expect *= std::pow(g.x(i) + 0.3, p - order);
            CHECK(d[i] == doctest::Approx(expect).epsilon(1e-8));
        }
    }
}

TEST_CASE("linearity")
{
    std::mt19937 rng(11);
    std::normal_distribution<double> n(0, 1);
    const SpatialGrid g(2.0, 41);
    for (int trial = 0; trial < 20; ++trial) {
        Field f(41), h(41);
        for (int i = 0; i < 41; ++i) {
            f[i] = n(rng);
            h[i] = n(rng);
        }
        const double a = n(rng), b = n(rng);
        for (int order = 1; order <= 3; ++order) {
            const Field lhs = derivative(g, Field(a * f + b * h), order);
            const Field rhs = a * derivative(g, f, order) + b * derivative(g, h, order);
            CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-9 * (1 + rhs.cwiseAbs().maxCoeff()));
        }
    }
}

TEST_CASE("parity of derivatives of an even field")
{
    const SpatialGrid g(5.0, 101);
    const Field f = sample(g, [](double x) { return std::cos(x) + 0.1 * x * x * x * x; });
    const int n = g.size();
    for (int order = 1; order <= 3; ++order) {
        const Field d = derivative(g, f, order);
        const double sign = order == 2 ? 1.0 : -1.0;
        for (int i = 2; i < n - 2; ++i)
            CHECK(d[i] == doctest::Approx(sign * d[n - 1 - i]).epsilon(1e-10));
    }
}

TEST_CASE("fourth-order convergence of the second derivative")
{
    auto interior_error = [](int n) {
        const SpatialGrid g(3.0, n);
        const Field f = sample(g, [](double x) { return std::sin(x); });
        const Field d = derivative(g, f, 2);
        double err = 0;
        for (int i = 2; i < n - 2; ++i)
            err = std::max(err, std::abs(d[i] + std::sin(g.x(i))));
        return err;
    };
    const double coarse = interior_error(61);
    const double fine = interior_error(121);
    CHECK(coarse / fine >= 16 * 0.8);
}

TEST_CASE("errors")
{
    const SpatialGrid g(1.0, 11);
    const Field f = Field::Zero(11);
    CHECK_THROWS_AS(derivative(g, f, 0), std::invalid_argument);
    CHECK_THROWS_AS(derivative(g, f, 4), std::invalid_argument);
    CHECK_THROWS_AS(derivative(g, Field(Field::Zero(9)), 2), std::invalid_argument);
    CHECK_THROWS_AS(derivative(SpatialGrid(1.0, 5), Field(Field::Zero(5)), 1), std::invalid_argument);
}
