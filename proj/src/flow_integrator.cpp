#include "ptrg/flow_integrator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ptrg/observables.hpp"

namespace ptrg
{

std::string to_string(SchemeKind kind)
{
    switch (kind) {
    case SchemeKind::WegnerHoughton: return "wh";
    case SchemeKind::ProperTimeLO: return "pt-lo";
    case SchemeKind::ProperTimeNLO: return "pt-nlo";
    case SchemeKind::ProperTimeFiniteM: return "pt-m";
    }
    return "unknown";
}

std::string to_string(Termination t)
{
    switch (t) {
    case Termination::PlateauReached: return "PlateauReached";
    case Termination::KMinReached: return "KMinReached";
    case Termination::PositivityAbort: return "PositivityAbort";
    case Termination::ResolutionAbort: return "ResolutionAbort";
    case Termination::StepLimit: return "StepLimit";
    }
    return "unknown";
}

bool is_abort(Termination t)
{
    return t != Termination::PlateauReached && t != Termination::KMinReached;
}

void SteppingConfig::validate(double cutoff) const
{
    if (!(rel_tol > 0) || !(abs_tol > 0) || !(plateau_tol > 0))
        throw std::invalid_argument("SteppingConfig: tolerances must be positive");
    if (!(k_min > 0) || !(k_min < cutoff))
        throw std::invalid_argument("SteppingConfig: need 0 < k_min < cutoff");
    if (max_steps < 1)
        throw std::invalid_argument("SteppingConfig: max_steps must be >= 1");
}

FlowState initialize(const ModelParams& params, const SpatialGrid& grid)
{
    params.validate();
    FlowState s;
    s.k = params.cutoff;
    s.v = sample(grid, [&](double x) { return bare_potential(params, x); });
    s.z = Field::Ones(grid.size());
    return s;
}

namespace
{

/// Method-of-lines right-hand side d/dtau of (V, Z), tau = ln(cutoff / k).
/// The state vector holds V, followed by Z for schemes that run it.
class FlowOperator
{
public:
    FlowOperator(const ModelParams& params, const SchemeSpec& scheme, const SpatialGrid& grid)
        : params_(params), scheme_(scheme), n_(grid.size()), d1_(grid, 1), d2_(grid, 2), d3_(grid, 3),
          v2_(n_), v3_(n_), z1_(n_), z2_(n_)
    {
        if (scheme.kind == SchemeKind::ProperTimeFiniteM) {
            if (scheme.m < 1)
                throw std::invalid_argument("ProperTimeFiniteM requires m >= 1");
            alpha_ = alpha<double>(scheme.m, params.dimension);
        }
        if (scheme.kind == SchemeKind::WegnerHoughton && params.dimension != 1.0)
            throw std::invalid_argument("the Wegner-Houghton flow is implemented for dimension 1 only");
    }

    int state_size() const { return scheme_.runs_z() ? 2 * n_ : n_; }

    double k_at(double tau) const { return params_.cutoff * std::exp(-tau); }

    /// Returns false when the state leaves the scheme's domain of validity.
    bool operator()(double tau, const Eigen::VectorXd& y, Eigen::VectorXd& dy)
    {
        const double k = k_at(tau);
        const double d = params_.dimension;
        const bool with_z = scheme_.runs_z();
        const auto v = y.head(n_);
        d2_.apply(v, v2_);
        if (with_z) {
            const auto z = y.tail(n_);
            d3_.apply(v, v3_);
            d1_.apply(z, z1_);
            d2_.apply(z, z2_);
        }

        PointData<double> p;
        p.k = k;
        p.d = d;
        const double k2 = k * k;
        double pref = 0;
        switch (scheme_.kind) {
        case SchemeKind::ProperTimeFiniteM:
            pref = alpha_ * std::pow(k2 * scheme_.m, d / 2);
            break;
        case SchemeKind::ProperTimeLO:
        case SchemeKind::ProperTimeNLO:
            pref = detail::pt_inf_prefactor(k, d);
            break;
        case SchemeKind::WegnerHoughton:
            break;
        }

        for (int i = 0; i < n_; ++i) {
            p.v2 = v2_[i];
            if (with_z) {
                p.z = y[n_ + i];
                p.v3 = v3_[i];
                p.z1 = z1_[i];
                p.z2 = z2_[i];
                if (!(p.z > 0))
                    return false;
            }
            FlowRate<double> r;
            switch (scheme_.kind) {
            case SchemeKind::WegnerHoughton:
                if (!(k2 + p.v2 > 0))
                    return false;
                r = detail::wh_unchecked(p);
                break;
            case SchemeKind::ProperTimeLO:
                r = detail::pt_inf_unchecked(p, pref, false);
                break;
            case SchemeKind::ProperTimeNLO:
                r = detail::pt_inf_unchecked(p, pref, true);
                break;
            case SchemeKind::ProperTimeFiniteM:
                if (!(p.z * k2 + p.v2 / scheme_.m > 0))
                    return false;
                r = detail::pt_m_unchecked(p, scheme_.m, pref, with_z);
                break;
            }
            // d/dtau = -k d/dk
            dy[i] = -r.dv;
            if (with_z)
                dy[n_ + i] = -r.dz;
        }
        return dy.allFinite();
    }

private:
    ModelParams params_;
    SchemeSpec scheme_;
    int n_;
    DerivativeStencil<double> d1_, d2_, d3_;
    Field v2_, v3_, z1_, z2_;
    double alpha_ = 0;
};

// Dormand-Prince 5(4) tableau
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200, e6 = 22.0 / 525,
                 e7 = -1.0 / 40;

double origin_curvature(const SpatialGrid& grid, const Field& v)
{
    const int c = grid.center();
    const double h2 = grid.spacing() * grid.spacing();
    return (-v[c - 2] + 16 * v[c - 1] - 30 * v[c] + 16 * v[c + 1] - v[c + 2]) / (12 * h2);
}

double symmetry_error(const Field& v, const Field& z)
{
    const int n = static_cast<int>(v.size());
    double dv = 0, dz = 0;
    for (int i = 0; i < n / 2; ++i) {
        dv = std::max(dv, std::abs(v[i] - v[n - 1 - i]));
        dz = std::max(dz, std::abs(z[i] - z[n - 1 - i]));
    }
    return std::max(dv, dz) / (1 + v.cwiseAbs().maxCoeff());
}

} // namespace

double peak_half_width(const Field& z)
{
    Eigen::Index top = 0;
    const double peak = z.maxCoeff(&top);
    const double level = 1 + (peak - 1) / 2;
    Eigen::Index lo = top, hi = top;
    while (lo > 0 && z[lo - 1] > level)
        --lo;
    while (hi + 1 < z.size() && z[hi + 1] > level)
        ++hi;
    return 0.5 * static_cast<double>(hi - lo + 1);
}

FlowResult integrate(const ModelParams& params, const SchemeSpec& scheme, const SpatialGrid& grid,
                     const SteppingConfig& cfg, const std::vector<double>& snapshot_ks)
{
    params.validate();
    cfg.validate(params.cutoff);
    if (grid.size() < 7)
        throw std::invalid_argument("integrate: grid needs at least 7 points");
    for (std::size_t i = 0; i < snapshot_ks.size(); ++i) {
        if (!(snapshot_ks[i] > 0) || snapshot_ks[i] > params.cutoff)
            throw std::invalid_argument("integrate: snapshot k must lie in (0, cutoff]");
        if (i > 0 && snapshot_ks[i] > snapshot_ks[i - 1])
            throw std::invalid_argument("integrate: snapshot ks must be sorted descending");
    }

    FlowOperator rhs(params, scheme, grid);
    const int n = grid.size();
    const bool with_z = scheme.runs_z();
    const double tau_end = std::log(params.cutoff / cfg.k_min);
    const double min_step = 1e-12 * tau_end;

    FlowState init = initialize(params, grid);
    Eigen::VectorXd y(rhs.state_size());
    y.head(n) = init.v;
    if (with_z)
        y.tail(n) = init.z;

    const Field unit_z = Field::Ones(n);
    auto make_state = [&](double tau, const Eigen::VectorXd& s) {
        FlowState st;
        st.k = rhs.k_at(tau);
        st.v = s.head(n);
        st.z = with_z ? Field(s.tail(n)) : unit_z;
        return st;
    };

    FlowResult result;
    auto& diag = result.diagnostics;
    std::vector<double> history_tau;
    auto record_origin = [&](double tau, const Eigen::VectorXd& s) {
        const double v2 = origin_curvature(grid, s.head(n));
        const double z0 = with_z ? s[n + grid.center()] : 1.0;
        result.history.push_back({rhs.k_at(tau), v2, z0});
        history_tau.push_back(tau);
    };

    result.snapshots.reserve(snapshot_ks.size());
    std::size_t next_snapshot = 0;
    // Assigns every pending snapshot whose k lies in [k(tau_new), k(tau_old)].
    auto capture_snapshots = [&](double tau_old, const Eigen::VectorXd& y_old, double tau_new,
                                 const Eigen::VectorXd& y_new, bool final) {
        while (next_snapshot < snapshot_ks.size()) {
            const double t_req = std::log(params.cutoff / snapshot_ks[next_snapshot]);
            if (t_req > tau_new && !final)
                break;
            const bool use_old = std::abs(t_req - tau_old) < std::abs(t_req - tau_new);
            result.snapshots.push_back(use_old ? make_state(tau_old, y_old) : make_state(tau_new, y_new));
            ++next_snapshot;
        }
    };

    Eigen::VectorXd k1(y.size()), k2(y.size()), k3(y.size()), k4(y.size()), k5(y.size()), k6(y.size()),
        k7(y.size()), stage(y.size()), y_new(y.size()), err(y.size());
    const DerivativeStencil<double> curvature_op(grid, 2);
    Field err_v2(n), new_v2(n);

    double tau = 0;
    if (!rhs(tau, y, k1))
        throw std::invalid_argument("integrate: initial condition outside the scheme's domain");
    record_origin(tau, y);

    double dt = std::min(1e-3, tau_end);
    bool last_failed_guard = false;
    result.termination = Termination::KMinReached;

    while (true) {
        if (diag.steps >= cfg.max_steps) {
            result.termination = Termination::StepLimit;
            diag.message = "maximum number of steps reached";
            break;
        }
        if (tau + dt > tau_end)
            dt = tau_end - tau;

        bool ok = true;
        stage = y + dt * a21 * k1;
        ok = ok && rhs(tau + c2 * dt, stage, k2);
        if (ok) {
            stage = y + dt * (a31 * k1 + a32 * k2);
            ok = rhs(tau + c3 * dt, stage, k3);
        }
        if (ok) {
            stage = y + dt * (a41 * k1 + a42 * k2 + a43 * k3);
            ok = rhs(tau + c4 * dt, stage, k4);
        }
        if (ok) {
            stage = y + dt * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
            ok = rhs(tau + c5 * dt, stage, k5);
        }
        if (ok) {
            stage = y + dt * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
            ok = rhs(tau + dt, stage, k6);
        }
        if (ok) {
            y_new = y + dt * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
            ok = rhs(tau + dt, y_new, k7);
        }
        if (!ok) {
            ++diag.rejected;
            dt *= 0.5;
            last_failed_guard = true;
            if (dt < min_step) {
                result.termination = Termination::PositivityAbort;
                diag.message = "flow left the scheme's domain of validity at k = " + std::to_string(rhs.k_at(tau));
                break;
            }
            continue;
        }

        err = dt * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        // V enters the flow only through its derivatives, and its level drifts
        // by O(cutoff); the error is therefore measured on V''.
        curvature_op.apply(err.head(n), err_v2);
        curvature_op.apply(y_new.head(n), new_v2);
        double err_norm = 0;
        for (int i = 0; i < n; ++i) {
            const double scale = cfg.abs_tol + cfg.rel_tol * std::abs(new_v2[i]);
            err_norm = std::max(err_norm, std::abs(err_v2[i]) / scale);
        }
        for (Eigen::Index i = n; i < y.size(); ++i) {
            const double scale = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
            err_norm = std::max(err_norm, std::abs(err[i]) / scale);
        }

        if (err_norm > 1.0) {
            ++diag.rejected;
            dt *= std::max(0.2, 0.9 * std::pow(err_norm, -0.2));
            if (dt < min_step) {
                result.termination = Termination::StepLimit;
                diag.message = "step size underflow from error control at k = " + std::to_string(rhs.k_at(tau));
                break;
            }
            continue;
        }

        // accepted
        const double tau_old = tau;
        tau += dt;
        ++diag.steps;
        diag.smallest_step = std::min(diag.smallest_step, dt);
        capture_snapshots(tau_old, y, tau, y_new, false);
        y.swap(y_new);
        k1.swap(k7);
        record_origin(tau, y);

        if (with_z) {
            diag.peak_abs_dz = std::max(diag.peak_abs_dz, k1.tail(n).cwiseAbs().maxCoeff());
            const auto z = y.tail(n);
            if (z.maxCoeff() - 1 > cfg.peak_monitor_threshold) {
                diag.final_peak_half_width = peak_half_width(z);
                if (diag.final_peak_half_width < cfg.min_peak_half_width) {
                    result.termination = Termination::ResolutionAbort;
                    diag.message = "Z peak narrower than the grid resolves at k = " + std::to_string(rhs.k_at(tau));
                    break;
                }
            }
        }
        if (diag.steps % 64 == 0) {
            const FlowState s = make_state(tau, y);
            diag.max_symmetry_error = std::max(diag.max_symmetry_error, symmetry_error(s.v, s.z));
        }

        if (tau >= tau_end) {
            result.termination = Termination::KMinReached;
            break;
        }

        // plateau: compare the origin ratio with its value one e-fold of k earlier
        const auto& now = result.history.back();
        if (now.v2 > 0 && tau >= 1.0) {
            const auto it = std::upper_bound(history_tau.begin(), history_tau.end(), tau - 1.0);
            const auto& then = result.history[static_cast<std::size_t>(it - history_tau.begin()) - 1];
            const double r_now = now.v2 / now.z;
            const double r_then = then.v2 / then.z;
            if (r_then > 0 && std::abs(r_now - r_then) <= cfg.plateau_tol * r_now) {
                result.termination = Termination::PlateauReached;
                break;
            }
        }

        const double grow = err_norm > 0 ? 0.9 * std::pow(err_norm, -0.2) : 5.0;
        dt *= last_failed_guard ? std::min(1.0, grow) : std::clamp(grow, 0.2, 5.0);
        last_failed_guard = false;
    }

    result.final_state = make_state(tau, y);
    capture_snapshots(tau, y, tau, y, true);
    {
        const double s = symmetry_error(result.final_state.v, result.final_state.z);
        diag.max_symmetry_error = std::max(diag.max_symmetry_error, s);
    }
    result.v2_origin = origin_curvature(grid, result.final_state.v);
    result.z_origin = result.final_state.z[grid.center()];
    if (result.converged() && result.v2_origin >= 0)
        result.delta_e = gap_from_flow(result.v2_origin, result.z_origin);
    return result;
}

std::vector<MSweepEntry> sweep_m(const ModelParams& params, const std::vector<int>& m_list, const SpatialGrid& grid,
                                 const SteppingConfig& cfg)
{
    std::vector<MSweepEntry> out;
    out.reserve(m_list.size() + 1);
    for (int m : m_list) {
        if (m < 1)
            throw std::invalid_argument("sweep_m: m must be >= 1 (got " + std::to_string(m) + ")");
        const FlowResult r = integrate(params, SchemeSpec::pt_finite_m(m), grid, cfg);
        out.push_back({m, r.v2_origin, r.z_origin, r.termination});
    }
    const FlowResult r = integrate(params, SchemeSpec::pt_nlo(), grid, cfg);
    out.push_back({0, r.v2_origin, r.z_origin, r.termination});
    return out;
}

} // namespace ptrg
