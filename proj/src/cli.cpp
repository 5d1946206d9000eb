#include "zakframe/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>

#include "zakframe/io.hpp"

namespace zakframe {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerifyFailed = 2;

void emit(std::ostream& out, const json& payload) { out << payload.dump(2) << '\n'; }

struct CliState {
    int threads = 1;
    std::optional<std::uint64_t> seed;

    std::uint64_t effective_seed(std::optional<std::uint64_t> local, std::ostream& err) const {
        const std::uint64_t s = local ? *local : seed.value_or(1);
        err << "seed: " << s << '\n';
        return s;
    }
};

int run_spectrum_analyze(const std::string& path, std::ostream& out) {
    const auto spectrum = spectrum_from_json(load_json_file(path));
    const auto raster = spectrum.to_raster();
    const auto dec = tiling_decomposition(raster);
    json offsets = json::array();
    for (const auto& l : offsets_union(raster)) offsets.push_back(l);
    emit(out, json{{"dim", raster.dim()},
                   {"grid", raster.grid()},
                   {"complexity_index", dec.complexity()},
                   {"level", k_level(raster)},
                   {"offsets_union", offsets}});
    return kExitOk;
}

int run_spectrum_complete(const std::string& path, int level, const std::string& out_path,
                          std::ostream& out) {
    const auto spectrum = spectrum_from_json(load_json_file(path));
    const auto completed = complete_to_multitile(spectrum.to_raster(), level);
    json payload;
    if (spectrum.is_multitile()) {
        // A uniform fingerprint stays uniform under completion.
        MultiTileSpectrum mt(completed.dim(), completed.fingerprint(std::size_t(0)),
                             spectrum.multitile().scale);
        payload = to_json(mt);
    } else {
        payload = to_json(completed);
    }
    if (!out_path.empty()) {
        std::ofstream f(out_path);
        if (!f) throw ValidationError("cannot write file: " + out_path);
        f << payload.dump(2) << '\n';
        emit(out, json{{"written", out_path}});
    } else {
        emit(out, payload);
    }
    return kExitOk;
}

json bounds_payload(const SampleCount& count, const char* formula, json inputs,
                    std::ostream& err) {
    if (count.clamped) err << "warning: log argument <= 1, sample count clamped to 1\n";
    return {{"m", count.m}, {"clamped", count.clamped}, {"formula", formula},
            {"inputs", std::move(inputs)}};
}

int run_verify(const CliState& state, const std::string& gens_path,
               const std::string& spectrum_path, const std::string& pattern_path, double alpha,
               const std::string& policy_text, std::ostream& out, std::ostream& err) {
    const auto pattern = pattern_from_json(load_json_file(pattern_path));
    const auto choice = parse_policy(policy_text);
    FrameReport report;
    if (choice.per_fingerprint) {
        if (spectrum_path.empty())
            throw ValidationError("policy 'per-fingerprint' needs --spectrum");
        const auto raster = spectrum_from_json(load_json_file(spectrum_path)).to_raster();
        const auto dec = tiling_decomposition(complete_to_multitile(raster, k_level(raster)));
        report = verify_frame_fingerprint(dec, pattern, alpha, state.threads);
    } else {
        GeneratorSet gens = [&] {
            if (!gens_path.empty()) return generators_from_json(load_json_file(gens_path));
            if (spectrum_path.empty())
                throw ValidationError("verify needs --generators or --spectrum");
            const auto raster = spectrum_from_json(load_json_file(spectrum_path)).to_raster();
            return indicator_generators(
                tiling_decomposition(complete_to_multitile(raster, k_level(raster))));
        }();
        report = verify_frame(gens, pattern, alpha, choice.grid_policy, false, state.threads);
    }
    emit(out, to_json(report));
    if (!report.pass) {
        err << "verification FAILED: alpha_achieved=" << report.alpha_achieved << '\n';
        return kExitVerifyFailed;
    }
    return kExitOk;
}

int run_simulate(const CliState& state, const std::string& spectrum_path,
                 const std::string& pattern_path, int grid, std::optional<std::uint64_t> seed,
                 std::ostream& out, std::ostream& err) {
    const auto raster = spectrum_from_json(load_json_file(spectrum_path)).to_raster(grid);
    if (raster.grid() != grid)
        throw ValidationError("raster spectrum grid does not match --grid");
    const auto pattern = pattern_from_json(load_json_file(pattern_path));
    const auto f = synthesize_random(raster, state.effective_seed(seed, err));
    const auto samples = take_samples(f, pattern);
    const double sample_energy = samples.values.squaredNorm();
    const double norm = f.norm_sq();
    emit(out, json{{"m", pattern.size()},
                   {"grid", grid},
                   {"coeff_energy", norm},
                   {"sample_energy", sample_energy},
                   {"energy_per_point", norm == 0.0 ? 0.0 : sample_energy / norm}});
    return kExitOk;
}

int run_reconstruct(const CliState& state, const std::string& spectrum_path,
                    const std::string& pattern_path, int grid, std::optional<std::uint64_t> seed,
                    double alpha, std::ostream& out, std::ostream& err) {
    const auto raster = spectrum_from_json(load_json_file(spectrum_path)).to_raster(grid);
    if (raster.grid() != grid)
        throw ValidationError("raster spectrum grid does not match --grid");
    const auto pattern = pattern_from_json(load_json_file(pattern_path));
    const auto gens =
        indicator_generators(tiling_decomposition(complete_to_multitile(raster, k_level(raster))));
    const auto f = synthesize_random(raster, state.effective_seed(seed, err));
    const auto samples = take_samples(f, pattern);
    ReconstructOptions opts;
    opts.alpha = alpha;
    const auto rec = reconstruct(samples, gens, opts);

    // Relative l2 coefficient error over the input support.
    double num = 0.0, den = 0.0;
    const auto& idx = f.spectrum.indexer();
    for (std::size_t c = 0; c < idx.size(); ++c) {
        const auto& fp = f.spectrum.fingerprint(c);
        const auto& rp = rec.spectrum.fingerprint(c);
        for (std::size_t t = 0; t < fp.size(); ++t) {
            const auto it = std::lower_bound(rp.begin(), rp.end(), fp[t]);
            const std::complex<double> got = (it != rp.end() && *it == fp[t])
                                                 ? rec.coeffs[c][std::size_t(it - rp.begin())]
                                                 : std::complex<double>{0.0, 0.0};
            num += std::norm(got - f.coeffs[c][t]);
            den += std::norm(f.coeffs[c][t]);
        }
    }
    const double rel = den == 0.0 ? 0.0 : std::sqrt(num / den);
    emit(out, json{{"m", pattern.size()}, {"grid", grid}, {"relative_error", rel}});
    return kExitOk;
}

int run_experiment(const CliState& state, bool sweep, const std::string& config_path,
                   const std::string& out_path, std::ostream& out, std::ostream& err) {
    auto cfg = experiment_config_from_json(load_json_file(config_path));
    cfg.trial.threads = state.threads;
    if (state.seed) cfg.trial.base_seed = *state.seed;
    err << "seed: " << cfg.trial.base_seed << '\n';

    const auto write_payload = [&](const std::string& text) {
        if (!out_path.empty()) {
            std::ofstream f(out_path);
            if (!f) throw ValidationError("cannot write file: " + out_path);
            f << text;
            out << text;
        } else {
            out << text;
        }
    };

    if (sweep) {
        if (cfg.m_values.empty()) throw ValidationError("sweep needs m_values in the config");
        const auto result = sweep_m(cfg.trial, cfg.m_values);
        if (result.had_duplicates) err << "warning: duplicate m values collapsed\n";
        std::ostringstream csv;
        write_sweep_csv(csv, result);
        write_payload(csv.str());
        return kExitOk;
    }
    const auto stats = run_trials(cfg.trial);
    write_payload(to_json(stats).dump(2) + "\n");
    if (stats.failure_rate > cfg.trial.eps) {
        err << "experiment FAILED: failure rate " << stats.failure_rate << " exceeds eps "
            << cfg.trial.eps << '\n';
        return kExitVerifyFailed;
    }
    return kExitOk;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"random periodic sampling patterns: spectra, frame verification, bounds"};
    app.require_subcommand(1);
    CliState state;
    app.add_option("--threads", state.threads, "worker thread cap (0 = hardware)");
    std::optional<std::uint64_t> global_seed;
    app.add_option("--seed", global_seed, "global random seed");

    // spectrum
    auto* spectrum_cmd = app.add_subcommand("spectrum", "spectrum combinatorics");
    spectrum_cmd->require_subcommand(1);
    std::string an_file;
    auto* analyze = spectrum_cmd->add_subcommand("analyze", "print complexity invariants");
    analyze->add_option("file", an_file, "spectrum JSON")->required();
    std::string cm_file, cm_out;
    int cm_level = 0;
    auto* complete = spectrum_cmd->add_subcommand("complete", "enlarge to a level-k tile");
    complete->add_option("file", cm_file, "spectrum JSON")->required();
    complete->add_option("--level", cm_level, "target level k")->required();
    complete->add_option("--out", cm_out, "output path (stdout when omitted)");

    // bounds
    auto* bounds_cmd = app.add_subcommand("bounds", "sample-count formulas");
    bounds_cmd->require_subcommand(1);
    int b_k = 1, b_d = 1;
    long long b_n = 1;
    double b_c = 1.0, b_kk = 0.0, b_alpha = 0.5, b_eps = 0.1;
    double b_volume = 0.0, b_surface = 0.0, b_kappa = 0.0;
    auto* thm1 = bounds_cmd->add_subcommand("thm1", "general shift-invariant bound");
    thm1->add_option("--k", b_k)->required();
    thm1->add_option("--C", b_c)->required();
    thm1->add_option("--K", b_kk)->required();
    thm1->add_option("--d", b_d)->required();
    thm1->add_option("--alpha", b_alpha)->required();
    thm1->add_option("--eps", b_eps)->required();
    auto* cor2 = bounds_cmd->add_subcommand("cor2", "union-of-cubes bound");
    cor2->add_option("--k", b_k)->required();
    cor2->add_option("--alpha", b_alpha)->required();
    cor2->add_option("--eps", b_eps)->required();
    auto* ktile = bounds_cmd->add_subcommand("ktile", "tiling-complexity bound");
    ktile->add_option("--k", b_k)->required();
    ktile->add_option("--N", b_n)->required();
    ktile->add_option("--alpha", b_alpha)->required();
    ktile->add_option("--eps", b_eps)->required();
    auto* general = bounds_cmd->add_subcommand("general", "Ahlfors-boundary bound");
    general->add_option("--volume", b_volume)->required();
    general->add_option("--surface", b_surface)->required();
    general->add_option("--kappa", b_kappa)->required();
    general->add_option("--d", b_d)->required();
    general->add_option("--alpha", b_alpha)->required();
    general->add_option("--eps", b_eps)->required();

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "frame verification report");
    std::string v_gens, v_spectrum, v_pattern, v_policy = "net";
    double v_alpha = 0.5;
    verify_cmd->add_option("--generators", v_gens, "generator set JSON");
    verify_cmd->add_option("--spectrum", v_spectrum, "spectrum JSON");
    verify_cmd->add_option("--pattern", v_pattern, "sampling pattern JSON")->required();
    verify_cmd->add_option("--alpha", v_alpha, "target inequality level")->required();
    verify_cmd->add_option("--policy", v_policy, "per-fingerprint | net[:inflation] | grid:G");

    // simulate / reconstruct
    auto* simulate_cmd = app.add_subcommand("simulate", "sample a random signal");
    std::string s_spectrum, s_pattern;
    int s_grid = 8;
    std::optional<std::uint64_t> s_seed;
    simulate_cmd->add_option("--spectrum", s_spectrum)->required();
    simulate_cmd->add_option("--pattern", s_pattern)->required();
    simulate_cmd->add_option("--grid", s_grid)->required();
    simulate_cmd->add_option("--seed", s_seed);
    auto* reconstruct_cmd = app.add_subcommand("reconstruct", "round-trip reconstruction error");
    std::string r_spectrum, r_pattern;
    int r_grid = 8;
    double r_alpha = 0.5;
    std::optional<std::uint64_t> r_seed;
    reconstruct_cmd->add_option("--spectrum", r_spectrum)->required();
    reconstruct_cmd->add_option("--pattern", r_pattern)->required();
    reconstruct_cmd->add_option("--grid", r_grid)->required();
    reconstruct_cmd->add_option("--seed", r_seed);
    reconstruct_cmd->add_option("--alpha", r_alpha);

    // experiment
    auto* experiment_cmd = app.add_subcommand("experiment", "Monte Carlo validation");
    experiment_cmd->require_subcommand(1);
    std::string e_config, e_out;
    auto* exp_run = experiment_cmd->add_subcommand("run", "single configuration");
    exp_run->add_option("--config", e_config)->required();
    exp_run->add_option("--out", e_out);
    auto* exp_sweep = experiment_cmd->add_subcommand("sweep", "sweep over m values");
    exp_sweep->add_option("--config", e_config)->required();
    exp_sweep->add_option("--out", e_out);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kExitOk;
        }
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    state.seed = global_seed;

    try {
        if (analyze->parsed()) return run_spectrum_analyze(an_file, out);
        if (complete->parsed()) return run_spectrum_complete(cm_file, cm_level, cm_out, out);
        if (thm1->parsed()) {
            emit(out, bounds_payload(sample_count_thm1(b_k, b_c, b_kk, b_d, b_alpha, b_eps),
                                     "thm1",
                                     json{{"k", b_k}, {"C", b_c}, {"K", b_kk}, {"d", b_d},
                                          {"alpha", b_alpha}, {"eps", b_eps}},
                                     err));
            return kExitOk;
        }
        if (cor2->parsed()) {
            emit(out, bounds_payload(sample_count_cor2(b_k, b_alpha, b_eps), "cor2",
                                     json{{"k", b_k}, {"alpha", b_alpha}, {"eps", b_eps}}, err));
            return kExitOk;
        }
        if (ktile->parsed()) {
            emit(out, bounds_payload(sample_count_ktile(b_k, b_n, b_alpha, b_eps), "ktile",
                                     json{{"k", b_k}, {"N", b_n}, {"alpha", b_alpha},
                                          {"eps", b_eps}},
                                     err));
            return kExitOk;
        }
        if (general->parsed()) {
            BoundaryGeometry geom{b_volume, b_surface, b_kappa, b_d};
            const auto result = sample_count_general(geom, b_alpha, b_eps);
            if (result.clamped)
                err << "warning: log argument <= 1, sample count clamped to 1\n";
            if (result.m > 100000000)
                err << "note: sample count too large to simulate; formula evaluation only\n";
            emit(out, json{{"m", result.m},
                           {"rho", result.rho},
                           {"cube_density", result.cube_density},
                           {"clamped", result.clamped},
                           {"formula", "general"},
                           {"inputs", json{{"volume", b_volume}, {"surface", b_surface},
                                           {"kappa", b_kappa}, {"d", b_d}, {"alpha", b_alpha},
                                           {"eps", b_eps}}}});
            return kExitOk;
        }
        if (verify_cmd->parsed())
            return run_verify(state, v_gens, v_spectrum, v_pattern, v_alpha, v_policy, out, err);
        if (simulate_cmd->parsed())
            return run_simulate(state, s_spectrum, s_pattern, s_grid, s_seed, out, err);
        if (reconstruct_cmd->parsed())
            return run_reconstruct(state, r_spectrum, r_pattern, r_grid, r_seed, r_alpha, out, err);
        if (exp_run->parsed()) return run_experiment(state, false, e_config, e_out, out, err);
        if (exp_sweep->parsed()) return run_experiment(state, true, e_config, e_out, out, err);
        err << "error: no subcommand selected\n";
        return kExitUsage;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const json::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}

}  // namespace zakframe
