#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "surveil/passive.hpp"
#include "surveil/sca.hpp"

namespace surveil {

enum class Method { ActiveSca, ActiveElementwise, Passive };

/// "active-sca", "active-elementwise", "passive".
const char* to_string(Method m);
/// Throws std::invalid_argument on an unknown name.
Method parse_method(const std::string& name);
/// Comma-separated list, e.g. "active-sca,passive". Duplicates are rejected.
std::vector<Method> parse_methods(const std::string& list);

struct ExperimentConfig {
    NodeLayout layout{};
    FadingParams fading{};
    std::vector<int> n_r{20};
    std::vector<double> p_a_db{60, 65, 70, 75, 80, 85, 90};
    std::vector<double> p_max_db{60};
    std::vector<Method> methods{Method::ActiveSca, Method::ActiveElementwise, Method::Passive};
    int realizations = 1000;
    std::uint64_t base_seed = 1;
    ScaOptions sca{};
    int rounds = 3;

    /// Throws std::invalid_argument when both n_r and p_a_db hold several
    /// values, any list is empty, realizations < 1 or a nested field is invalid.
    void validate() const;
};

/// Rate-versus-P_A sweep: N_R = 20, P_max = 60 dB, P_A = 60..90 dB in steps of 5.
ExperimentConfig fig3_config(int realizations = 100, std::uint64_t seed = 1);
/// Rate-versus-N_R sweep: P_A = 80 dB, N_R = 4..40 in steps of 4, P_max in {50, 60} dB.
ExperimentConfig fig4_config(int realizations = 100, std::uint64_t seed = 1);

/// Fixed values of one grid point.
struct SweepPoint {
    int n_r = 0;
    double p_a_db = 0.0;
    double p_max_db = 0.0;
};

/// Cartesian product n_r x p_a_db x p_max_db, in that nesting order.
std::vector<SweepPoint> sweep_grid(const ExperimentConfig& cfg);

struct ResultRow {
    Method method = Method::Passive;
    int n_r = 0;
    double p_a_db = 0.0;
    double p_max_db = 0.0;
    int realization = 0;
    double sinr_b_db = 0.0;
    double sinr_e_db = 0.0;
    double rate_bps_hz = 0.0;
    std::string status;

    bool operator==(const ResultRow&) const = default;
};

/// Row ordering used before writing: method order, then n_r, p_a_db, p_max_db, realization.
bool row_less(const ResultRow& a, const ResultRow& b);

/// Receives the SCA trace of one (point, realization) when verbose output is wanted.
using TraceSink = std::function<void(const SweepPoint&, int realization, const ScaTrace&)>;

/// Evaluates every configured method on the channel drawn from
/// (base_seed, realization), one row per method in cfg.methods order.
std::vector<ResultRow> run_point(const ExperimentConfig& cfg, const SweepPoint& point,
                                 int realization, const TraceSink& sink = {});

struct SummaryRow {
    Method method = Method::Passive;
    int n_r = 0;
    double p_a_db = 0.0;
    double p_max_db = 0.0;
    double mean_rate_bps_hz = 0.0;
    int realizations = 0;

    bool operator==(const SummaryRow&) const = default;
};

struct SweepResult {
    std::vector<ResultRow> rows;        // sorted with row_less
    std::vector<SummaryRow> summary;    // one per (method, grid point), same order
};

/// Monte Carlo sweep with realizations spread over OpenMP threads. Output is
/// independent of the thread count and schedule.
SweepResult run_sweep(const ExperimentConfig& cfg, const TraceSink& sink = {});
/// Single-threaded reference of run_sweep; produces identical output.
SweepResult run_sweep_serial(const ExperimentConfig& cfg, const TraceSink& sink = {});

/// Means over realizations of sorted rows, grouped by method and grid point.
std::vector<SummaryRow> summarize(const std::vector<ResultRow>& sorted_rows);

inline constexpr const char* kRowHeader =
    "method,n_r,p_a_db,p_max_db,realization,sinr_b_db,sinr_e_db,rate_bps_hz,status";
inline constexpr const char* kSummaryHeader =
    "method,n_r,p_a_db,p_max_db,mean_rate_bps_hz,realizations";

void write_rows_csv(std::ostream& os, const std::vector<ResultRow>& rows);
void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& summary);

/// Parses a JSON config. Keys must be ExperimentConfig field names; absent
/// keys keep their defaults and unknown keys throw std::invalid_argument.
/// Exactly one of n_r and p_a_db must be given as a JSON array.
ExperimentConfig parse_config_json(const std::string& text);
ExperimentConfig load_config(const std::string& path);

}  // namespace surveil
