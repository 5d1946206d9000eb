#include "zakframe/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>

#include "zakframe/parallel.hpp"

namespace zakframe {

void TrialConfig::validate() const {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0,1)");
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0,1)");
    if (m < 0) throw std::invalid_argument("m must be positive or zero for auto");
    if (!spectrum.has_value() && !generators.has_value())
        throw std::invalid_argument("config needs a spectrum or a generator set");
    if (spectrum.has_value() && spectrum->empty())
        throw std::invalid_argument("spectrum is empty");
}

namespace {

struct PreparedModel {
    std::optional<TilingDecomposition> dec;  // exact per-fingerprint route
    std::optional<GeneratorSet> gens;        // policy-grid route
    long long auto_m = 0;
};

PreparedModel prepare(const TrialConfig& cfg) {
    PreparedModel model;
    if (cfg.spectrum.has_value()) {
        const int k = k_level(*cfg.spectrum);
        const auto n_input = tiling_decomposition(*cfg.spectrum).complexity();
        model.dec = tiling_decomposition(complete_to_multitile(*cfg.spectrum, k));
        model.auto_m = sample_count_ktile(k, (long long)n_input, cfg.alpha, cfg.eps).m;
    } else {
        model.gens = *cfg.generators;
        model.gens->require_orthonormal();
        const double c_bound = model.gens->freq_periodization_bound();
        const double k_bound =
            model.gens->all_indicator() ? 0.0 : model.gens->zak_lipschitz() * cfg.policy.k_inflation;
        model.auto_m =
            sample_count_thm1(int(model.gens->size()), c_bound, k_bound, cfg.dim, cfg.alpha, cfg.eps)
                .m;
    }
    return model;
}

TrialStats summarize(const TrialConfig& cfg, long long m, std::vector<double> alphas,
                     const std::vector<char>& failed) {
    TrialStats stats;
    stats.m = m;
    stats.trials = cfg.trials;
    stats.base_seed = cfg.base_seed;
    stats.alphas = alphas;
    stats.trial_seeds.resize(std::size_t(cfg.trials));
    for (int t = 0; t < cfg.trials; ++t)
        stats.trial_seeds[std::size_t(t)] = cfg.base_seed + std::uint64_t(t);
    stats.failures = int(std::count(failed.begin(), failed.end(), char(1)));
    stats.failure_rate = double(stats.failures) / double(cfg.trials);
    std::sort(alphas.begin(), alphas.end());
    stats.alpha_min = alphas.front();
    stats.alpha_max = alphas.back();
    const std::size_t n = alphas.size();
    stats.alpha_median =
        n % 2 == 1 ? alphas[n / 2] : 0.5 * (alphas[n / 2 - 1] + alphas[n / 2]);
    return stats;
}

TrialStats run_prepared(const TrialConfig& cfg, const PreparedModel& model, long long m) {
    std::vector<double> alphas(static_cast<std::size_t>(cfg.trials), 0.0);
    std::vector<char> failed(std::size_t(cfg.trials), 0);
    parallel_for(std::size_t(cfg.trials), cfg.threads, [&](std::size_t t) {
        const auto pattern =
            SamplingPattern::random(cfg.dim, int(m), cfg.base_seed + std::uint64_t(t));
        const FrameReport report =
            model.dec.has_value()
                ? verify_frame_fingerprint(*model.dec, pattern, cfg.alpha)
                : verify_frame(*model.gens, pattern, cfg.alpha, cfg.policy, true);
        alphas[t] = report.alpha_achieved;
        failed[t] = report.pass ? 0 : 1;
    });
    return summarize(cfg, m, std::move(alphas), failed);
}

}  // namespace

TrialStats run_trials(const TrialConfig& cfg) {
    cfg.validate();
    const PreparedModel model = prepare(cfg);
    const long long m = cfg.m > 0 ? cfg.m : model.auto_m;
    return run_prepared(cfg, model, m);
}

SweepResult sweep_m(const TrialConfig& cfg, std::vector<long long> m_values) {
    cfg.validate();
    if (m_values.empty()) throw std::invalid_argument("sweep needs at least one m");
    SweepResult result;
    std::sort(m_values.begin(), m_values.end());
    const auto last = std::unique(m_values.begin(), m_values.end());
    result.had_duplicates = last != m_values.end();
    m_values.erase(last, m_values.end());
    const PreparedModel model = prepare(cfg);
    for (long long m : m_values) {
        if (m < 1) throw std::invalid_argument("m must be >= 1");
        result.rows.push_back(run_prepared(cfg, model, m));
    }
    return result;
}

TrialStats ktile_experiment(const RasterSpectrum& raster, double alpha, double eps, int trials,
                            std::uint64_t base_seed, int threads) {
    TrialConfig cfg;
    cfg.dim = raster.dim();
    cfg.spectrum = raster;
    cfg.alpha = alpha;
    cfg.eps = eps;
    cfg.trials = trials;
    cfg.base_seed = base_seed;
    cfg.threads = threads;
    return run_trials(cfg);
}

void write_sweep_csv(std::ostream& os, const SweepResult& result) {
    os << "m,trials,failures,failure_rate,alpha_min,alpha_median,alpha_max,seed\n";
    const auto previous = os.precision(17);
    for (const auto& row : result.rows) {
        os << row.m << ',' << row.trials << ',' << row.failures << ',' << row.failure_rate << ','
           << row.alpha_min << ',' << row.alpha_median << ',' << row.alpha_max << ','
           << row.base_seed << '\n';
    }
    os.precision(previous);
}

}  // namespace zakframe
