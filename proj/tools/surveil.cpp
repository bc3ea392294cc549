#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "surveil/experiment.hpp"

namespace {

std::string default_summary_path(const std::string& out) {
    const auto dot = out.rfind('.');
    const auto slash = out.find_last_of('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
        return out + "_summary.csv";
    }
    return out.substr(0, dot) + "_summary" + out.substr(dot);
}

void write_file(const std::string& path, const auto& writer) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
    writer(os);
    if (!os) throw std::runtime_error("write to '" + path + "' failed");
}

int execute(surveil::ExperimentConfig cfg, const std::string& methods, bool verbose,
            const std::string& out, std::string summary) {
    if (!methods.empty()) cfg.methods = surveil::parse_methods(methods);
    cfg.validate();

    surveil::TraceSink sink;
    bool header_written = false;
    if (verbose) {
        sink = [&](const surveil::SweepPoint& p, int realization, const surveil::ScaTrace& t) {
            std::cerr << "# n_r=" << p.n_r << " p_a_db=" << p.p_a_db << " p_max_db=" << p.p_max_db
                      << " realization=" << realization << " outcome=" << surveil::to_string(t.outcome)
                      << '\n';
            surveil::write_trace_csv(std::cerr, t, !header_written);
            header_written = true;
        };
    }
    const surveil::SweepResult res = surveil::run_sweep(cfg, sink);
    if (summary.empty()) summary = default_summary_path(out);
    write_file(out, [&](std::ostream& os) { surveil::write_rows_csv(os, res.rows); });
    write_file(summary, [&](std::ostream& os) { surveil::write_summary_csv(os, res.summary); });
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Active-surface surveillance simulation and optimization"};
    app.require_subcommand(1);

    std::string methods;
    bool verbose = false;
    std::string out;
    std::string summary;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", out, "Per-realization CSV")->required();
        sub->add_option("--summary", summary, "Summary CSV (default: <out stem>_summary<ext>)");
        sub->add_option("--methods", methods, "Comma-separated: active-sca,active-elementwise,passive");
        sub->add_flag("--verbose", verbose, "Print SCA traces to stderr");
    };

    auto* run = app.add_subcommand("run", "Run an experiment from a JSON config");
    std::string config_path;
    run->add_option("--config", config_path, "JSON config")->required()->check(CLI::ExistingFile);
    add_common(run);

    auto* sweep = app.add_subcommand("sweep", "Run a preset sweep");
    std::string figure;
    int realizations = 100;
    std::uint64_t seed = 1;
    sweep->add_option("--figure", figure, "Preset")->required()->check(CLI::IsMember({"fig3", "fig4"}));
    sweep->add_option("--realizations", realizations, "Monte Carlo realizations")
        ->check(CLI::PositiveNumber);
    sweep->add_option("--seed", seed, "Base seed");
    add_common(sweep);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) return execute(surveil::load_config(config_path), methods, verbose, out, summary);
        const surveil::ExperimentConfig cfg = figure == "fig3"
                                                  ? surveil::fig3_config(realizations, seed)
                                                  : surveil::fig4_config(realizations, seed);
        return execute(cfg, methods, verbose, out, summary);
    } catch (const std::exception& e) {
        std::cerr << "surveil: " << e.what() << '\n';
        return 1;
    }
}
