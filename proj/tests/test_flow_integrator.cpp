#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ptrg/flow_integrator.hpp"

using namespace ptrg;

namespace
{
ModelParams make(double m2, double lambda, double cutoff = 1500)
{
    ModelParams p;
    p.m_squared = m2;
    p.lambda = lambda;
    p.cutoff = cutoff;
    return p;
}

double max_asymmetry(const Field& f)
{
    const Eigen::Index n = f.size();
    double out = 0;
    for (Eigen::Index i = 0; i < n; ++i)
        out = std::max(out, std::abs(f[i] - f[n - 1 - i]));
    return out;
}
} // namespace

TEST_CASE("initial state")
{
    const ModelParams p = make(-1, 0.05);
    const SpatialGrid g = default_grid(p, 401);
    const FlowState s = initialize(p, g);
    CHECK(s.k == 1500);
    CHECK(s.v[g.center()] == 0.0);
    CHECK((s.z.array() == 1.0).all());
    CHECK(max_asymmetry(s.v) == 0.0);

    const ModelParams h = make(1, 0);
    const FlowState sh = initialize(h, g);
    for (int i = 0; i < g.size(); ++i)
        CHECK(sh.v[i] == 0.5 * g.x(i) * g.x(i));
}

TEST_CASE("harmonic oscillator: curvature never flows")
{
    const ModelParams p = make(1, 0);
    for (SchemeSpec s : {SchemeSpec::pt_lo(), SchemeSpec::wegner_houghton(), SchemeSpec::pt_nlo()}) {
        const FlowResult r = integrate(p, s, default_grid(p), SteppingConfig{});
        REQUIRE(r.converged());
        CHECK(r.delta_e == doctest::Approx(1.0).epsilon(1e-4));
    }
}

TEST_CASE("anharmonic oscillator, sharp cutoff")
{
    const ModelParams p = make(1, 1.0);
    const FlowResult r = integrate(p, SchemeSpec::wegner_houghton(), default_grid(p), SteppingConfig{});
    REQUIRE(r.converged());
    CHECK(std::abs(r.delta_e - 1.9291) < 0.002);
    // LO schemes never touch Z
    CHECK((r.final_state.z.array() == 1.0).all());
    CHECK(r.diagnostics.max_symmetry_error < 1e-8);
}

TEST_CASE("anharmonic oscillator, proper time NLO")
{
    const ModelParams p = make(1, 1.0);
    const FlowResult r = integrate(p, SchemeSpec::pt_nlo(), default_grid(p), SteppingConfig{});
    REQUIRE(r.converged());
    CHECK(std::abs(r.delta_e - 1.9380) < 0.002);
    CHECK(std::abs(r.z_origin - 1.0052) < 0.002);
    CHECK(r.delta_e == doctest::Approx(std::sqrt(r.v2_origin / r.z_origin)));
    CHECK((r.final_state.z.array() > 0).all());
}

TEST_CASE("double well, proper time LO")
{
    const ModelParams p = make(-1, 0.1);
    const FlowResult r = integrate(p, SchemeSpec::pt_lo(), default_grid(p), SteppingConfig{});
    REQUIRE(r.converged());
    CHECK(std::abs(r.delta_e - 0.3280) < 0.003);
    CHECK((r.final_state.z.array() == 1.0).all());
    CHECK(max_asymmetry(r.final_state.v) < 1e-8 * (1 + r.final_state.v.cwiseAbs().maxCoeff()));
}

TEST_CASE("double well, NLO: barrier melts and Z grows at the origin")
{
    const ModelParams p = make(-1, 0.2);
    const FlowResult r = integrate(p, SchemeSpec::pt_nlo(), default_grid(p), SteppingConfig{});
    REQUIRE(r.converged());
    CHECK(r.v2_origin > 0);
    CHECK(r.history.front().v2 == doctest::Approx(-1.0));
    bool crossed = false;
    for (std::size_t i = 1; i < r.history.size(); ++i)
        crossed = crossed || (r.history[i - 1].v2 < 0 && r.history[i].v2 >= 0);
    CHECK(crossed);
    CHECK(std::abs(r.delta_e - 0.6227) < 0.003);
    CHECK(std::abs(r.z_origin - 1.0416) / 1.0416 < 0.02);
    CHECK(r.diagnostics.max_symmetry_error < 1e-8);
}

TEST_CASE("grid and tolerance robustness")
{
    const ModelParams p = make(-1, 0.4);
    const FlowResult base = integrate(p, SchemeSpec::pt_nlo(), default_grid(p), SteppingConfig{});
    const FlowResult fine = integrate(p, SchemeSpec::pt_nlo(), default_grid(p, 4001), SteppingConfig{});
    SteppingConfig tight;
    tight.rel_tol = 1e-8;
    const FlowResult tol = integrate(p, SchemeSpec::pt_nlo(), default_grid(p), tight);
    REQUIRE(base.converged());
    CHECK(std::abs(fine.delta_e - base.delta_e) < 3e-4 * base.delta_e);
    CHECK(std::abs(tol.delta_e - base.delta_e) < 0.003);
}

TEST_CASE("snapshots")
{
    const ModelParams p = make(-1, 0.3);
    const SpatialGrid g = default_grid(p, 801);
    const std::vector<double> ks = {1500, 10, 1, 0.5, 1e-3};
    const FlowResult r = integrate(p, SchemeSpec::pt_nlo(), g, SteppingConfig{}, ks);
    REQUIRE(r.snapshots.size() == ks.size());
    CHECK(r.snapshots[0].k == 1500);
    CHECK(r.snapshots[0].v == initialize(p, g).v);
    for (std::size_t i = 1; i + 1 < ks.size(); ++i)
        CHECK(std::abs(std::log(r.snapshots[i].k / ks[i])) < 0.05);
    // beyond the end of the flow: the final state
    CHECK(r.snapshots.back().k == r.final_state.k);
}

TEST_CASE("peak width monitor aborts an under-resolved flow")
{
    const ModelParams p = make(-1, 0.05);
    const FlowResult r = integrate(p, SchemeSpec::pt_nlo(), SpatialGrid(8, 401), SteppingConfig{});
    CHECK(r.termination == Termination::ResolutionAbort);
    CHECK(std::isnan(r.delta_e));
    CHECK(r.diagnostics.final_peak_half_width < 6);
}

TEST_CASE("positivity abort when the sharp-cutoff log loses its argument")
{
    // curvature -100 with a weak quartic: k^2 + V'' reaches zero near k = 10
    const ModelParams p = make(-100, 0.01, 100);
    const FlowResult r = integrate(p, SchemeSpec::wegner_houghton(), SpatialGrid(8, 401), SteppingConfig{});
    CHECK(r.termination == Termination::PositivityAbort);
    CHECK(std::isnan(r.delta_e));
    CHECK(r.final_state.k == doctest::Approx(10).epsilon(0.01));
}

TEST_CASE("step limit")
{
    const ModelParams p = make(-1, 0.1);
    SteppingConfig cfg;
    cfg.max_steps = 10;
    const FlowResult r = integrate(p, SchemeSpec::pt_lo(), default_grid(p, 401), cfg);
    CHECK(r.termination == Termination::StepLimit);
    CHECK(r.diagnostics.steps == 10);
    CHECK(std::isnan(r.delta_e));
}

TEST_CASE("finite-m sweep")
{
    const ModelParams p = make(1, 0.4);
    const SpatialGrid g = default_grid(p, 801);
    const auto only_inf = sweep_m(p, {}, g, SteppingConfig{});
    REQUIRE(only_inf.size() == 1);
    CHECK(only_inf[0].m == 0);

    const auto s = sweep_m(p, {5, 20}, g, SteppingConfig{});
    REQUIRE(s.size() == 3);
    CHECK(s[0].m == 5);
    CHECK(s[1].m == 20);
    const double v_inf = s[2].v2_origin;
    CHECK(std::abs(s[1].v2_origin - v_inf) < std::abs(s[0].v2_origin - v_inf));
    CHECK_THROWS_AS(sweep_m(p, {0}, g, SteppingConfig{}), std::invalid_argument);
}

TEST_CASE("invalid requests")
{
    const ModelParams p = make(-1, 0.1);
    const SpatialGrid g = default_grid(p, 401);
    CHECK_THROWS_AS(integrate(p, SchemeSpec::pt_lo(), g, SteppingConfig{}, {1, 10}), std::invalid_argument);
    CHECK_THROWS_AS(integrate(p, SchemeSpec::pt_lo(), g, SteppingConfig{}, {2000}), std::invalid_argument);
    SteppingConfig bad;
    bad.rel_tol = 0;
    CHECK_THROWS_AS(integrate(p, SchemeSpec::pt_lo(), g, bad), std::invalid_argument);
    bad = {};
    bad.k_min = 2000;
    CHECK_THROWS_AS(integrate(p, SchemeSpec::pt_lo(), g, bad), std::invalid_argument);
    ModelParams d3 = p;
    d3.dimension = 3;
    CHECK_THROWS_AS(integrate(d3, SchemeSpec::wegner_houghton(), g, SteppingConfig{}), std::invalid_argument);
}
