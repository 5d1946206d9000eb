#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>

#include "zakframe/signal.hpp"

namespace zakframe {

// One Monte Carlo configuration: the signal model (a spectrum verified
// exactly per fingerprint class, or an explicit generator set verified on a
// policy grid), the target inequality level, and the trial budget.
struct TrialConfig {
    int dim = 1;
    std::optional<RasterSpectrum> spectrum;
    std::optional<GeneratorSet> generators;
    double alpha = 0.5;
    double eps = 0.1;
    long long m = 0;  // 0 = from the matching sample-count formula
    int trials = 100;
    std::uint64_t base_seed = 1;
    GridPolicy policy = GridPolicy::net();
    int threads = 1;

    void validate() const;
};

struct TrialStats {
    long long m = 0;
    int trials = 0;
    int failures = 0;
    double failure_rate = 0.0;
    double alpha_min = 0.0;
    double alpha_median = 0.0;
    double alpha_max = 0.0;
    std::uint64_t base_seed = 0;
    std::vector<std::uint64_t> trial_seeds;
    std::vector<double> alphas;  // per trial, in trial order
};

// Trial t draws its pattern from seed base_seed + t, so runs are reproducible
// bit for bit at any thread count.
TrialStats run_trials(const TrialConfig& cfg);

// run_trials per requested m; duplicates are collapsed (reported via the
// returned flag), rows come back sorted by m.
struct SweepRow {
    TrialStats stats;
};
struct SweepResult {
    std::vector<TrialStats> rows;
    bool had_duplicates = false;
};
SweepResult sweep_m(const TrialConfig& cfg, std::vector<long long> m_values);

// Thm-3 style experiment: complete the raster to a level-k tile, size m by
// the k-tile formula with the input's complexity index, verify exactly.
TrialStats ktile_experiment(const RasterSpectrum& raster, double alpha, double eps, int trials,
                            std::uint64_t base_seed, int threads = 1);

void write_sweep_csv(std::ostream& os, const SweepResult& result);

}  // namespace zakframe
