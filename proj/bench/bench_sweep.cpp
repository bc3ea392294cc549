#include <chrono>
#include <cstdlib>
#include <iostream>

#include <omp.h>

#include "surveil/experiment.hpp"

// Wall time of the serial and OpenMP sweeps on a reduced Fig. 3 grid.
int main(int argc, char** argv) {
    const int realizations = argc > 1 ? std::atoi(argv[1]) : 16;
    surveil::ExperimentConfig cfg = surveil::fig3_config(realizations, 7);
    cfg.p_a_db = {70, 80, 90};

    auto time = [&](auto&& fn) {
        const auto t0 = std::chrono::steady_clock::now();
        surveil::SweepResult r = fn();
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return std::make_pair(std::move(r), s);
    };
    const auto [serial, ts] = time([&] { return surveil::run_sweep_serial(cfg); });
    const auto [parallel, tp] = time([&] { return surveil::run_sweep(cfg); });

    std::cout << "rows " << serial.rows.size() << ", threads " << omp_get_max_threads() << '\n'
              << "serial   " << ts << " s\n"
              << "parallel " << tp << " s\n"
              << "speedup  " << ts / tp << '\n'
              << "identical " << (serial.rows == parallel.rows ? "yes" : "no") << '\n';
    return serial.rows == parallel.rows ? 0 : 1;
}
