#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "ptrg/exact_solver.hpp"

using namespace ptrg;

namespace
{
ModelParams make(double m2, double lambda)
{
    ModelParams p;
    p.m_squared = m2;
    p.lambda = lambda;
    return p;
}

Eigen::MatrixXd dense(const Tridiagonal& t)
{
    const Eigen::Index n = t.diag.size();
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    a.diagonal() = t.diag;
    a.diagonal(1) = t.off;
    a.diagonal(-1) = t.off;
    return a;
}

// <H> in a Gaussian of variance s2 centred at a, for -1/2 d^2/dx^2 + m2/2 x^2 + lambda x^4
double gaussian_energy(const ModelParams& p, double a, double s2)
{
    const double a2 = a * a;
    return 1 / (8 * s2) + 0.5 * p.m_squared * (a2 + s2) + p.lambda * (a2 * a2 + 6 * a2 * s2 + 3 * s2 * s2);
}
} // namespace

TEST_CASE("Sturm count matches a dense eigensolver")
{
    std::mt19937 rng(42);
    std::normal_distribution<double> n(0, 1);
    for (int trial = 0; trial < 10; ++trial) {
        Tridiagonal t;
        t.diag.resize(30);
        t.off.resize(29);
        for (int i = 0; i < 30; ++i)
            t.diag[i] = 3 * n(rng);
        for (int i = 0; i < 29; ++i)
            t.off[i] = n(rng);
        const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(dense(t)).eigenvalues();
        CHECK(lowest_eigenvalue(t) == doctest::Approx(ev[0]).epsilon(1e-12));
        for (double shift : {-2.0, 0.0, 1.5}) {
            int below = 0;
            for (Eigen::Index i = 0; i < ev.size(); ++i)
                below += ev[i] < shift;
            CHECK(sturm_count(t, shift) == below);
        }
    }
}

TEST_CASE("parity sectors reproduce the full-line spectrum")
{
    // small full-line three-point discretization versus the two half-line sectors
    const ModelParams p = make(-1, 0.1);
    const double x_max = 6;
    const int n_half = 60;
    const double h = x_max / n_half;
    const int n_full = 2 * n_half - 1; // interior nodes of [-x_max, x_max]
    Eigen::MatrixXd full = Eigen::MatrixXd::Zero(n_full, n_full);
    for (int i = 0; i < n_full; ++i) {
        const double x = (i - (n_half - 1)) * h;
        full(i, i) = 1 / (h * h) + bare_potential(p, x);
        if (i + 1 < n_full)
            full(i, i + 1) = full(i + 1, i) = -0.5 / (h * h);
    }
    const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(full).eigenvalues();
    CHECK(lowest_eigenvalue(even_sector(p, x_max, n_half)) == doctest::Approx(ev[0]).epsilon(1e-11));
    CHECK(lowest_eigenvalue(odd_sector(p, x_max, n_half)) == doctest::Approx(ev[1]).epsilon(1e-11));
}

TEST_CASE("harmonic oscillator")
{
    const EigenResult r = schrodinger_gap(make(1, 0));
    CHECK(r.gap == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(r.e0 == doctest::Approx(0.5).epsilon(1e-5));
}

TEST_CASE("reference gaps")
{
    CHECK(std::abs(schrodinger_gap(make(1, 0.4)).gap - 1.5482) < 3e-4);
    CHECK(std::abs(schrodinger_gap(make(-1, 0.06)).gap - 0.1031) < 3e-4);
    CHECK(std::abs(schrodinger_gap(make(-1, 0.1)).gap - 0.2969) < 3e-4);
    CHECK(std::abs(schrodinger_gap(make(-1, 0.4)).gap - 0.9667) < 3e-4);
    // independently cross-checked full-line value; the table prints 0.0003
    CHECK(schrodinger_gap(make(-1, 0.02)).gap == doctest::Approx(9.3112e-5).epsilon(1e-3));
}

TEST_CASE("second-order grid convergence")
{
    const ModelParams p = make(-1, 0.1);
    auto gap = [&](int n) {
        EigenConfig c;
        c.n_points = n;
        c.refine = false;
        return schrodinger_gap(p, c).gap;
    };
    const double g1 = gap(401), g2 = gap(801), g3 = gap(1601);
    const double ratio = (g1 - g2) / (g2 - g3);
    CHECK(ratio == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("variational bound and parity ordering")
{
    for (double lambda : {0.02, 0.05, 0.1, 0.4}) {
        const ModelParams p = make(-1, lambda);
        const EigenResult r = schrodinger_gap(p);
        CHECK(r.e0 < r.e1);
        CHECK(r.gap > 0);
        const double a = classical_minima(p)[1];
        double best = INFINITY;
        for (double s2 = 0.01; s2 < 3; s2 *= 1.05)
            best = std::min(best, gaussian_energy(p, a, s2));
        CHECK(r.e0 <= best);
    }
}

TEST_CASE("gap collapses monotonically as the double well deepens")
{
    double prev = INFINITY;
    for (double lambda : {0.4, 0.3, 0.2, 0.1, 0.07, 0.06, 0.05, 0.04, 0.03, 0.02}) {
        const double g = schrodinger_gap(make(-1, lambda)).gap;
        CHECK(g < prev);
        prev = g;
    }
}

TEST_CASE("invalid inputs")
{
    CHECK_THROWS_AS(schrodinger_gap(make(-1, 0)), std::invalid_argument);
    EigenConfig small;
    small.x_max = 5; // minima at 3.54 for lambda = 0.02
    CHECK_THROWS_AS(schrodinger_gap(make(-1, 0.02), small), DomainTooSmall);
    EigenConfig tight;
    tight.x_max = 2.5;
    tight.n_points = 2001;
    // minima at 0.5; box covers them but clips the wave function tail
    CHECK_THROWS_AS(schrodinger_gap(make(-1, 1.0), tight), DomainTooSmall);
    EigenConfig coarse;
    coarse.n_points = 50;
    CHECK_THROWS_AS(schrodinger_gap(make(1, 0.1), coarse), std::invalid_argument);
}
