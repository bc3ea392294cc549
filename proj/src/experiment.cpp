#include "surveil/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include <omp.h>

namespace surveil {

namespace {

constexpr double kRateC3Tol = 1e-6;

std::string format_number(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (std::isnan(x)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

double to_db(double sinr) { return sinr > 0.0 ? linear_to_db(sinr) : -INFINITY; }

ResultRow make_row(Method m, const SweepPoint& pt, int realization, const SinrReport& rep,
                   std::string status) {
    ResultRow row;
    row.method = m;
    row.n_r = pt.n_r;
    row.p_a_db = pt.p_a_db;
    row.p_max_db = pt.p_max_db;
    row.realization = realization;
    row.sinr_b_db = to_db(rep.sinr_b);
    row.sinr_e_db = to_db(rep.sinr_e);
    row.rate_bps_hz = rep.rate;
    row.status = std::move(status);
    return row;
}

using Task = std::pair<std::size_t, int>;  // grid index, realization

std::vector<Task> tasks_of(const ExperimentConfig& cfg, const std::vector<SweepPoint>& grid) {
    std::vector<Task> tasks;
    tasks.reserve(grid.size() * static_cast<std::size_t>(cfg.realizations));
    for (std::size_t g = 0; g < grid.size(); ++g) {
        for (int r = 0; r < cfg.realizations; ++r) tasks.emplace_back(g, r);
    }
    return tasks;
}

SweepResult finish(std::vector<std::vector<ResultRow>>& per_task) {
    SweepResult out;
    for (auto& rows : per_task) {
        for (auto& row : rows) out.rows.push_back(std::move(row));
    }
    std::stable_sort(out.rows.begin(), out.rows.end(), row_less);
    out.summary = summarize(out.rows);
    return out;
}

}  // namespace

const char* to_string(Method m) {
    switch (m) {
        case Method::ActiveSca: return "active-sca";
        case Method::ActiveElementwise: return "active-elementwise";
        case Method::Passive: return "passive";
    }
    return "unknown";
}

Method parse_method(const std::string& name) {
    for (Method m : {Method::ActiveSca, Method::ActiveElementwise, Method::Passive}) {
        if (name == to_string(m)) return m;
    }
    throw std::invalid_argument("unknown method '" + name + "'");
}

std::vector<Method> parse_methods(const std::string& list) {
    std::vector<Method> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const Method m = parse_method(item);
        if (std::find(out.begin(), out.end(), m) != out.end()) {
            throw std::invalid_argument("duplicate method '" + item + "'");
        }
        out.push_back(m);
    }
    if (out.empty()) throw std::invalid_argument("empty method list");
    return out;
}

void ExperimentConfig::validate() const {
    layout.validate();
    fading.validate();
    sca.validate();
    if (n_r.empty() || p_a_db.empty() || p_max_db.empty() || methods.empty()) {
        throw std::invalid_argument("config: n_r, p_a_db, p_max_db and methods must be non-empty");
    }
    if (n_r.size() > 1 && p_a_db.size() > 1) {
        throw std::invalid_argument("config: only one of n_r and p_a_db may be swept");
    }
    for (int n : n_r) {
        if (n < 1) throw std::invalid_argument("config: n_r entries must be >= 1");
    }
    for (double x : p_a_db) {
        if (!std::isfinite(x)) throw std::invalid_argument("config: p_a_db must be finite");
    }
    for (double x : p_max_db) {
        if (!std::isfinite(x)) throw std::invalid_argument("config: p_max_db must be finite");
    }
    if (realizations < 1) throw std::invalid_argument("config: realizations must be >= 1");
    if (rounds < 1) throw std::invalid_argument("config: rounds must be >= 1");
    for (std::size_t i = 0; i < methods.size(); ++i) {
        for (std::size_t j = i + 1; j < methods.size(); ++j) {
            if (methods[i] == methods[j]) throw std::invalid_argument("config: duplicate method");
        }
    }
}

ExperimentConfig fig3_config(int realizations, std::uint64_t seed) {
    ExperimentConfig cfg;
    cfg.n_r = {20};
    cfg.p_a_db = {60, 65, 70, 75, 80, 85, 90};
    cfg.p_max_db = {60};
    cfg.realizations = realizations;
    cfg.base_seed = seed;
    return cfg;
}

ExperimentConfig fig4_config(int realizations, std::uint64_t seed) {
    ExperimentConfig cfg;
    cfg.n_r.clear();
    for (int n = 4; n <= 40; n += 4) cfg.n_r.push_back(n);
    cfg.p_a_db = {80};
    cfg.p_max_db = {50, 60};
    cfg.realizations = realizations;
    cfg.base_seed = seed;
    return cfg;
}

std::vector<SweepPoint> sweep_grid(const ExperimentConfig& cfg) {
    std::vector<SweepPoint> grid;
    for (int n : cfg.n_r) {
        for (double pa : cfg.p_a_db) {
            for (double pm : cfg.p_max_db) grid.push_back({n, pa, pm});
        }
    }
    return grid;
}

bool row_less(const ResultRow& a, const ResultRow& b) {
    return std::tie(a.method, a.n_r, a.p_a_db, a.p_max_db, a.realization) <
           std::tie(b.method, b.n_r, b.p_a_db, b.p_max_db, b.realization);
}

std::vector<ResultRow> run_point(const ExperimentConfig& cfg, const SweepPoint& point,
                                 int realization, const TraceSink& sink) {
    RngStream rng(cfg.base_seed, static_cast<std::uint64_t>(realization));
    const ChannelSet ch = generate_channels(cfg.layout, cfg.fading, point.n_r, rng);
    const AugmentedChannels aug = augment(ch);
    PowerBudget pb;
    pb.p_a = db_to_linear(point.p_a_db);
    pb.p_max = db_to_linear(point.p_max_db);

    std::vector<ResultRow> rows;
    for (Method m : cfg.methods) {
        switch (m) {
            case Method::ActiveSca: {
                const ScaResult res = sca_solve(ch, aug, pb, cfg.sca);
                if (sink) sink(point, realization, res.trace);
                rows.push_back(make_row(m, point, realization,
                                        eavesdrop_rate(res.v, aug, pb, kRateC3Tol),
                                        to_string(res.trace.outcome)));
                break;
            }
            case Method::ActiveElementwise: {
                const CoordinateDescentResult res = coordinate_descent(ch, pb, cfg.rounds);
                rows.push_back(make_row(m, point, realization,
                                        eavesdrop_rate(res.v, aug, pb, kRateC3Tol), "ok"));
                break;
            }
            case Method::Passive: {
                const ReflectVector v = passive_optimize(ch, pb, cfg.rounds);
                rows.push_back(make_row(m, point, realization,
                                        passive_rate(v, ch, pb, kRateC3Tol), "ok"));
                break;
            }
        }
    }
    return rows;
}

std::vector<SummaryRow> summarize(const std::vector<ResultRow>& sorted_rows) {
    std::vector<SummaryRow> out;
    for (const ResultRow& row : sorted_rows) {
        if (out.empty() || out.back().method != row.method || out.back().n_r != row.n_r ||
            out.back().p_a_db != row.p_a_db || out.back().p_max_db != row.p_max_db) {
            out.push_back({row.method, row.n_r, row.p_a_db, row.p_max_db, 0.0, 0});
        }
        out.back().mean_rate_bps_hz += row.rate_bps_hz;
        ++out.back().realizations;
    }
    for (SummaryRow& s : out) s.mean_rate_bps_hz /= s.realizations;
    return out;
}

SweepResult run_sweep(const ExperimentConfig& cfg, const TraceSink& sink) {
    cfg.validate();
    const std::vector<SweepPoint> grid = sweep_grid(cfg);
    const std::vector<Task> tasks = tasks_of(cfg, grid);
    std::vector<std::vector<ResultRow>> per_task(tasks.size());
    std::vector<std::exception_ptr> errors(tasks.size());

    const auto n = static_cast<long>(tasks.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (long i = 0; i < n; ++i) {
        try {
            TraceSink guarded;
            if (sink) {
                guarded = [&sink](const SweepPoint& p, int r, const ScaTrace& t) {
#pragma omp critical(surveil_trace_sink)
                    sink(p, r, t);
                };
            }
            per_task[i] = run_point(cfg, grid[tasks[i].first], tasks[i].second, guarded);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return finish(per_task);
}

SweepResult run_sweep_serial(const ExperimentConfig& cfg, const TraceSink& sink) {
    cfg.validate();
    const std::vector<SweepPoint> grid = sweep_grid(cfg);
    const std::vector<Task> tasks = tasks_of(cfg, grid);
    std::vector<std::vector<ResultRow>> per_task(tasks.size());
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        per_task[i] = run_point(cfg, grid[tasks[i].first], tasks[i].second, sink);
    }
    return finish(per_task);
}

void write_rows_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
    os << kRowHeader << '\n';
    for (const ResultRow& r : rows) {
        os << to_string(r.method) << ',' << r.n_r << ',' << format_number(r.p_a_db) << ','
           << format_number(r.p_max_db) << ',' << r.realization << ','
           << format_number(r.sinr_b_db) << ',' << format_number(r.sinr_e_db) << ','
           << format_number(r.rate_bps_hz) << ',' << r.status << '\n';
    }
}

void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& summary) {
    os << kSummaryHeader << '\n';
    for (const SummaryRow& s : summary) {
        os << to_string(s.method) << ',' << s.n_r << ',' << format_number(s.p_a_db) << ','
           << format_number(s.p_max_db) << ',' << format_number(s.mean_rate_bps_hz) << ','
           << s.realizations << '\n';
    }
}

}  // namespace surveil
