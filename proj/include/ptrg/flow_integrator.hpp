#ifndef PTRG_FLOW_INTEGRATOR_HPP
#define PTRG_FLOW_INTEGRATOR_HPP

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "ptrg/flow_rhs.hpp"
#include "ptrg/model.hpp"
#include "ptrg/stencil.hpp"

namespace ptrg
{

/// Running truncation (V, Z) at scale k.
struct FlowState
{
    double k = 0;
    Field v;
    Field z;
};

struct SteppingConfig
{
    double rel_tol = 1e-7;
    double abs_tol = 1e-9;
    double k_min = 1e-3;
    std::int64_t max_steps = 1'000'000;
    /// Relative change of V''(k,0)/Z(k,0) over the last e-fold of k below
    /// which the flow counts as converged.
    double plateau_tol = 1e-6;
    /// Abort when the Z-peak half-width drops below this many grid spacings.
    double min_peak_half_width = 6.0;
    /// The peak monitor only engages once max Z - 1 exceeds this.
    double peak_monitor_threshold = 0.05;

    void validate(double cutoff) const;
};

enum class Termination
{
    PlateauReached,
    KMinReached,
    PositivityAbort,
    ResolutionAbort,
    StepLimit,
};

std::string to_string(Termination t);
bool is_abort(Termination t);

struct FlowDiagnostics
{
    std::int64_t steps = 0;
    std::int64_t rejected = 0;
    double smallest_step = std::numeric_limits<double>::infinity();
    double peak_abs_dz = 0;
    double max_symmetry_error = 0;
    double final_peak_half_width = std::numeric_limits<double>::infinity(); // in grid spacings
    std::string message;
};

/// One sample of the flow at the origin, recorded per accepted step.
struct OriginSample
{
    double k;
    double v2;
    double z;
};

struct FlowResult
{
    FlowState final_state;
    double v2_origin = 0;
    double z_origin = 1;
    /// NaN unless the flow converged with a non-negative curvature at x = 0.
    double delta_e = std::numeric_limits<double>::quiet_NaN();
    Termination termination = Termination::KMinReached;
    std::vector<FlowState> snapshots;
    std::vector<OriginSample> history;
    FlowDiagnostics diagnostics;

    bool converged() const { return !is_abort(termination); }
};

/// Half-width, in grid spacings, of the region around max z where
/// z - 1 exceeds half its peak value.
double peak_half_width(const Field& z);

FlowState initialize(const ModelParams& params, const SpatialGrid& grid);

/// Integrates the chosen flow from k = cutoff down to cfg.k_min (or until
/// the gap has plateaued). `snapshot_ks` must be sorted descending; each entry
/// receives the accepted state nearest to it in ln k.
FlowResult integrate(const ModelParams& params, const SchemeSpec& scheme, const SpatialGrid& grid,
                     const SteppingConfig& cfg, const std::vector<double>& snapshot_ks = {});

struct MSweepEntry
{
    int m; // 0 stands for m = infinity
    double v2_origin;
    double z_origin;
    Termination termination;
};

/// Finite-m flows for every entry of `m_list` followed by the m = infinity
/// (ProperTimeNLO) run, which is reported with m = 0.
std::vector<MSweepEntry> sweep_m(const ModelParams& params, const std::vector<int>& m_list, const SpatialGrid& grid,
                                 const SteppingConfig& cfg);

} // namespace ptrg

#endif // PTRG_FLOW_INTEGRATOR_HPP
