#ifndef PTRG_REPRODUCTION_HPP
#define PTRG_REPRODUCTION_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ptrg/exact_solver.hpp"
#include "ptrg/flow_integrator.hpp"

namespace ptrg
{

/// Grid and stepping settings shared by every run of a batch. Unset grid
/// fields fall back to the per-model defaults.
struct RunSettings
{
    double cutoff = 1500.0;
    std::optional<double> x_max;
    int n_points = kDefaultGridPoints;
    SteppingConfig stepping;
    EigenConfig eigen;
    int jobs = 1;

    SpatialGrid grid_for(const ModelParams& p) const;
    ModelParams model(double m2, double lambda) const;
};

/// Outcome of one flow integration, flattened for CSV output.
struct RunRecord
{
    SchemeSpec scheme;
    double m2 = 0;
    double lambda = 0;
    std::optional<double> delta_e; // empty for aborted runs
    double v2_origin = 0;
    double z_origin = 1;
    Termination termination = Termination::KMinReached;
    double wall_seconds = 0;
};

RunRecord run_flow(const ModelParams& params, const SchemeSpec& scheme, const RunSettings& settings);

std::string run_record_header();
std::string to_csv(const RunRecord& r);

/// Six significant digits, the precision of every CSV this project writes.
std::string format_number(double x);

/// Runs fn(0) .. fn(count - 1) on up to `jobs` threads.
void parallel_for(int count, int jobs, const std::function<void(int)>& fn);

// ---------------------------------------------------------------------------
// Gap table

struct TableKey
{
    double m2;
    double lambda;
};

/// The sixteen (M^2, lambda) rows of the published gap table.
const std::vector<TableKey>& table1_keys();

enum class TableColumn
{
    WegnerHoughton,
    ProperTimeLO,
    Exact,
    ProperTimeNLO,
};

std::optional<TableColumn> parse_table_column(const std::string& name);

struct TableCell
{
    std::optional<double> value;
    std::string status; // termination tag for flows, "ok" for the oracle
};

struct Table1Row
{
    TableKey key;
    std::optional<TableCell> wh, pt_lo, exact, pt_nlo;
    std::optional<double> z_origin; // from the PT-NLO run
};

std::vector<Table1Row> table1(const std::vector<TableKey>& keys, const std::vector<TableColumn>& columns,
                              const RunSettings& settings);

std::string table1_csv(const std::vector<Table1Row>& rows, const std::vector<TableColumn>& columns);

/// Parses `m2=-1,lambda=0.06` into a key; throws std::invalid_argument.
TableKey parse_table_filter(const std::string& text);

// ---------------------------------------------------------------------------
// Finite-m convergence sweep and field snapshots

struct Fig1Row
{
    double m2;
    double lambda;
    int m; // 0 encodes m = infinity
    double v2_origin;
    double z_origin;
    Termination termination;
};

std::vector<int> default_m_list();
std::vector<TableKey> default_fig1_models();

std::vector<Fig1Row> fig1(const std::vector<TableKey>& models, const std::vector<int>& m_list,
                          const RunSettings& settings);
std::string fig1_csv(const std::vector<Fig1Row>& rows);

std::vector<double> default_fig2_ks(double cutoff, double k_min);

struct Fig2Data
{
    std::vector<double> requested_k;
    FlowResult flow;
    SpatialGrid grid;
};

Fig2Data fig2(const ModelParams& params, const std::vector<double>& ks, const RunSettings& settings);
std::string fig2_csv(const Fig2Data& data);

} // namespace ptrg

#endif // PTRG_REPRODUCTION_HPP
