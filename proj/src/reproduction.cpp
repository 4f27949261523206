#include "ptrg/reproduction.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace ptrg
{

SpatialGrid RunSettings::grid_for(const ModelParams& p) const
{
    return SpatialGrid(x_max.value_or(default_x_max(p)), n_points);
}

ModelParams RunSettings::model(double m2, double lambda) const
{
    ModelParams p;
    p.m_squared = m2;
    p.lambda = lambda;
    p.cutoff = cutoff;
    p.validate();
    return p;
}

RunRecord run_flow(const ModelParams& params, const SchemeSpec& scheme, const RunSettings& settings)
{
    const auto t0 = std::chrono::steady_clock::now();
    const FlowResult r = integrate(params, scheme, settings.grid_for(params), settings.stepping);
    RunRecord rec;
    rec.scheme = scheme;
    rec.m2 = params.m_squared;
    rec.lambda = params.lambda;
    if (!std::isnan(r.delta_e))
        rec.delta_e = r.delta_e;
    rec.v2_origin = r.v2_origin;
    rec.z_origin = r.z_origin;
    rec.termination = r.termination;
    rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rec;
}

std::string format_number(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

std::string run_record_header()
{
    return "scheme,m,m2,lambda,delta_e,v2_origin,z_origin,termination,wall_seconds";
}

std::string to_csv(const RunRecord& r)
{
    std::ostringstream os;
    os << to_string(r.scheme.kind) << ',';
    if (r.scheme.kind == SchemeKind::ProperTimeFiniteM)
        os << r.scheme.m;
    os << ',' << format_number(r.m2) << ',' << format_number(r.lambda) << ',';
    if (r.delta_e)
        os << format_number(*r.delta_e);
    os << ',' << format_number(r.v2_origin) << ',' << format_number(r.z_origin) << ',' << to_string(r.termination)
       << ',' << format_number(r.wall_seconds);
    return os.str();
}

void parallel_for(int count, int jobs, const std::function<void(int)>& fn)
{
    if (jobs <= 1 || count <= 1) {
        for (int i = 0; i < count; ++i)
            fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (int i = next++; i < count; i = next++) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
            }
        }
    };
    std::vector<std::jthread> pool;
    for (int t = 0; t < std::min(jobs, count); ++t)
        pool.emplace_back(worker);
    pool.clear();
    if (failure)
        std::rethrow_exception(failure);
}

const std::vector<TableKey>& table1_keys()
{
    static const std::vector<TableKey> keys = {
        {1, 1.0},   {1, 0.4},    {1, 0.1},    {1, 0.05},   {1, 0.03},   {1, 0.02},   {-1, 0.4},   {-1, 0.3},
        {-1, 0.2},  {-1, 0.1},   {-1, 0.07},  {-1, 0.06},  {-1, 0.05},  {-1, 0.04},  {-1, 0.03},  {-1, 0.02},
    };
    return keys;
}

std::optional<TableColumn> parse_table_column(const std::string& name)
{
    if (name == "wh")
        return TableColumn::WegnerHoughton;
    if (name == "pt-lo")
        return TableColumn::ProperTimeLO;
    if (name == "exact")
        return TableColumn::Exact;
    if (name == "pt-nlo")
        return TableColumn::ProperTimeNLO;
    return std::nullopt;
}

namespace
{

bool has_column(const std::vector<TableColumn>& cols, TableColumn c)
{
    return std::find(cols.begin(), cols.end(), c) != cols.end();
}

TableCell cell_from(const RunRecord& r)
{
    return {r.delta_e, to_string(r.termination)};
}

std::string cell_value(const std::optional<TableCell>& c)
{
    return c && c->value ? format_number(*c->value) : std::string();
}

} // namespace

std::vector<Table1Row> table1(const std::vector<TableKey>& keys, const std::vector<TableColumn>& columns,
                              const RunSettings& settings)
{
    // one task per (row, column) so that parallel runs balance
    struct Task
    {
        std::size_t row;
        TableColumn column;
    };
    std::vector<Task> tasks;
    for (std::size_t i = 0; i < keys.size(); ++i)
        for (TableColumn c : {TableColumn::WegnerHoughton, TableColumn::ProperTimeLO, TableColumn::Exact,
                              TableColumn::ProperTimeNLO})
            if (has_column(columns, c))
                tasks.push_back({i, c});

    std::vector<Table1Row> rows(keys.size());
    for (std::size_t i = 0; i < keys.size(); ++i)
        rows[i].key = keys[i];

    parallel_for(static_cast<int>(tasks.size()), settings.jobs, [&](int t) {
        const Task& task = tasks[t];
        Table1Row& row = rows[task.row];
        const ModelParams p = settings.model(row.key.m2, row.key.lambda);
        switch (task.column) {
        case TableColumn::WegnerHoughton:
            row.wh = cell_from(run_flow(p, SchemeSpec::wegner_houghton(), settings));
            break;
        case TableColumn::ProperTimeLO:
            row.pt_lo = cell_from(run_flow(p, SchemeSpec::pt_lo(), settings));
            break;
        case TableColumn::Exact: {
            const EigenResult e = schrodinger_gap(p, settings.eigen);
            row.exact = TableCell{e.gap, "ok"};
            break;
        }
        case TableColumn::ProperTimeNLO: {
            const RunRecord r = run_flow(p, SchemeSpec::pt_nlo(), settings);
            row.pt_nlo = cell_from(r);
            if (r.delta_e)
                row.z_origin = r.z_origin;
            break;
        }
        }
    });
    return rows;
}

std::string table1_csv(const std::vector<Table1Row>& rows, const std::vector<TableColumn>& columns)
{
    const bool wh = has_column(columns, TableColumn::WegnerHoughton);
    const bool lo = has_column(columns, TableColumn::ProperTimeLO);
    const bool ex = has_column(columns, TableColumn::Exact);
    const bool nlo = has_column(columns, TableColumn::ProperTimeNLO);

    std::ostringstream os;
    os << "m2,lambda";
    if (wh)
        os << ",delta_e_wh";
    if (lo)
        os << ",delta_e_pt_lo";
    if (ex)
        os << ",delta_e_exact";
    if (nlo)
        os << ",delta_e_pt_nlo,z_origin";
    if (wh)
        os << ",status_wh";
    if (lo)
        os << ",status_pt_lo";
    if (nlo)
        os << ",status_pt_nlo";
    os << '\n';

    for (const auto& r : rows) {
        os << format_number(r.key.m2) << ',' << format_number(r.key.lambda);
        if (wh)
            os << ',' << cell_value(r.wh);
        if (lo)
            os << ',' << cell_value(r.pt_lo);
        if (ex)
            os << ',' << cell_value(r.exact);
        if (nlo)
            os << ',' << cell_value(r.pt_nlo) << ',' << (r.z_origin ? format_number(*r.z_origin) : std::string());
        if (wh)
            os << ',' << (r.wh ? r.wh->status : "");
        if (lo)
            os << ',' << (r.pt_lo ? r.pt_lo->status : "");
        if (nlo)
            os << ',' << (r.pt_nlo ? r.pt_nlo->status : "");
        os << '\n';
    }
    return os.str();
}

TableKey parse_table_filter(const std::string& text)
{
    std::optional<double> m2, lambda;
    std::istringstream is(text);
    std::string item;
    while (std::getline(is, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("filter item without '=': " + item);
        const std::string name = item.substr(0, eq);
        double value = 0;
        try {
            std::size_t used = 0;
            value = std::stod(item.substr(eq + 1), &used);
            if (used != item.size() - eq - 1)
                throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            throw std::invalid_argument("filter value is not a number: " + item);
        }
        if (name == "m2")
            m2 = value;
        else if (name == "lambda")
            lambda = value;
        else
            throw std::invalid_argument("unknown filter key: " + name);
    }
    if (!m2 || !lambda)
        throw std::invalid_argument("filter needs both m2= and lambda=");
    return {*m2, *lambda};
}

std::vector<int> default_m_list()
{
    return {5, 8, 10, 15, 20, 30, 50};
}

std::vector<TableKey> default_fig1_models()
{
    return {{1, 0.4}, {-1, 0.05}};
}

std::vector<Fig1Row> fig1(const std::vector<TableKey>& models, const std::vector<int>& m_list,
                          const RunSettings& settings)
{
    for (int m : m_list)
        if (m < 1)
            throw std::invalid_argument("fig1: m must be >= 1 (got " + std::to_string(m) + ")");

    const int per_model = static_cast<int>(m_list.size()) + 1;
    std::vector<Fig1Row> rows(models.size() * per_model);
    parallel_for(static_cast<int>(rows.size()), settings.jobs, [&](int t) {
        const TableKey& key = models[t / per_model];
        const int j = t % per_model;
        const int m = j < static_cast<int>(m_list.size()) ? m_list[j] : 0;
        const ModelParams p = settings.model(key.m2, key.lambda);
        const SchemeSpec scheme = m > 0 ? SchemeSpec::pt_finite_m(m) : SchemeSpec::pt_nlo();
        const FlowResult r = integrate(p, scheme, settings.grid_for(p), settings.stepping);
        rows[t] = {key.m2, key.lambda, m, r.v2_origin, r.z_origin, r.termination};
    });
    return rows;
}

std::string fig1_csv(const std::vector<Fig1Row>& rows)
{
    std::ostringstream os;
    os << "m2,lambda,m,inv_m,v2_origin,z_origin,termination\n";
    for (const auto& r : rows) {
        os << format_number(r.m2) << ',' << format_number(r.lambda) << ',';
        if (r.m > 0)
            os << r.m;
        os << ',' << format_number(r.m > 0 ? 1.0 / r.m : 0.0) << ',' << format_number(r.v2_origin) << ','
           << format_number(r.z_origin) << ',' << to_string(r.termination) << '\n';
    }
    return os.str();
}

std::vector<double> default_fig2_ks(double cutoff, double k_min)
{
    return {cutoff, 10, 1, 0.5, 0.2, 0.1, k_min};
}

Fig2Data fig2(const ModelParams& params, const std::vector<double>& ks, const RunSettings& settings)
{
    const SpatialGrid grid = settings.grid_for(params);
    FlowResult r = integrate(params, SchemeSpec::pt_nlo(), grid, settings.stepping, ks);
    return {ks, std::move(r), grid};
}

std::string fig2_csv(const Fig2Data& data)
{
    std::ostringstream os;
    os << "k,x,v2,z\n";
    const DerivativeStencil<double> d2(data.grid, 2);
    for (std::size_t s = 0; s < data.flow.snapshots.size(); ++s) {
        const FlowState& st = data.flow.snapshots[s];
        const Field v2 = d2(st.v);
        const std::string k = format_number(data.requested_k[s]);
        for (int i = 0; i < data.grid.size(); ++i)
            os << k << ',' << format_number(data.grid.x(i)) << ',' << format_number(v2[i]) << ','
               << format_number(st.z[i]) << '\n';
    }
    return os.str();
}

} // namespace ptrg
