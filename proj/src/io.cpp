#include "zakframe/io.hpp"

#include <fstream>

namespace zakframe {

namespace {

const json& require(const json& j, const char* key) {
    if (!j.is_object()) throw ValidationError("expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw ValidationError(std::string("missing field '") + key + "'");
    return *it;
}

int require_int(const json& j, const char* key) {
    const json& v = require(j, key);
    if (!v.is_number_integer()) throw ValidationError(std::string("field '") + key + "' must be an integer");
    return v.get<int>();
}

double require_number(const json& j, const char* key) {
    const json& v = require(j, key);
    if (!v.is_number()) throw ValidationError(std::string("field '") + key + "' must be a number");
    return v.get<double>();
}

LatticePoint int_vector(const json& v, int dim, const char* what) {
    if (!v.is_array() || int(v.size()) != dim)
        throw ValidationError(std::string(what) + " must be an integer array of length dim");
    LatticePoint p;
    p.reserve(v.size());
    for (const auto& c : v) {
        if (!c.is_number_integer())
            throw ValidationError(std::string(what) + " must contain integers");
        p.push_back(c.get<int>());
    }
    return p;
}

std::vector<LatticePoint> offsets_array(const json& v, int dim) {
    if (!v.is_array()) throw ValidationError("offsets must be an array");
    std::vector<LatticePoint> out;
    out.reserve(v.size());
    for (const auto& o : v) out.push_back(int_vector(o, dim, "offset"));
    return out;
}

}  // namespace

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ValidationError("invalid JSON in " + path + ": " + e.what());
    }
    return j;
}

RasterSpectrum SpectrumInput::to_raster(int default_grid) const {
    if (is_multitile()) return RasterSpectrum::from_multitile(multitile(), default_grid);
    return std::get<RasterSpectrum>(value);
}

int SpectrumInput::dim() const {
    return is_multitile() ? multitile().dim : std::get<RasterSpectrum>(value).dim();
}

SpectrumInput spectrum_from_json(const json& j) {
    const json& type = require(j, "type");
    if (!type.is_string()) throw ValidationError("field 'type' must be a string");
    const int dim = require_int(j, "dim");
    try {
        if (type == "multitile") {
            double scale = 1.0;
            if (j.contains("scale")) scale = require_number(j, "scale");
            return {MultiTileSpectrum(dim, offsets_array(require(j, "offsets"), dim), scale)};
        }
        if (type == "raster") {
            const int grid = require_int(j, "grid");
            const json& cells = require(j, "cells");
            if (!cells.is_array()) throw ValidationError("field 'cells' must be an array");
            RasterSpectrum::CellFingerprints fps;
            for (const auto& cell : cells)
                fps.emplace_back(int_vector(require(cell, "index"), dim, "cell index"),
                                 offsets_array(require(cell, "offsets"), dim));
            return {RasterSpectrum::from_cells(dim, grid, fps)};
        }
    } catch (const std::invalid_argument& e) {
        throw ValidationError(e.what());
    }
    throw ValidationError("spectrum type must be 'multitile' or 'raster'");
}

json to_json(const MultiTileSpectrum& mt) {
    json offsets = json::array();
    for (const auto& l : mt.offsets) offsets.push_back(l);
    return {{"dim", mt.dim}, {"type", "multitile"}, {"scale", mt.scale}, {"offsets", offsets}};
}

json to_json(const RasterSpectrum& raster) {
    json cells = json::array();
    for (std::size_t c = 0; c < raster.indexer().size(); ++c) {
        const auto& fp = raster.fingerprint(c);
        if (fp.empty()) continue;
        json offsets = json::array();
        for (const auto& l : fp) offsets.push_back(l);
        cells.push_back({{"index", raster.indexer().unflatten(c)}, {"offsets", offsets}});
    }
    return {{"dim", raster.dim()}, {"type", "raster"}, {"grid", raster.grid()}, {"cells", cells}};
}

GeneratorSet generators_from_json(const json& j) {
    const int dim = require_int(j, "dim");
    const json& members = require(j, "members");
    if (!members.is_array() || members.empty())
        throw ValidationError("field 'members' must be a nonempty array");
    std::vector<Generator> out;
    for (const auto& m : members) {
        LatticePoint base = int_vector(require(m, "base_freq"), dim, "base_freq");
        const json& prof = require(m, "profile");
        if (prof.is_string()) {
            if (prof != "indicator") throw ValidationError("unknown profile kind");
            out.push_back({std::move(base), FrequencyProfile::indicator()});
            continue;
        }
        const int grid = require_int(prof, "grid");
        const json& entries = require(prof, "entries");
        if (!entries.is_array()) throw ValidationError("profile 'entries' must be an array");
        try {
            RasterProfile rp(dim, grid);
            for (const auto& e : entries) {
                const auto cell = int_vector(require(e, "omega_index"), dim, "omega_index");
                const auto offset = int_vector(require(e, "offset"), dim, "offset");
                rp.set(cell, offset, {require_number(e, "re"), require_number(e, "im")});
            }
            out.push_back({std::move(base), FrequencyProfile::raster(std::move(rp))});
        } catch (const std::invalid_argument& e) {
            throw ValidationError(e.what());
        }
    }
    try {
        return GeneratorSet(dim, std::move(out));
    } catch (const std::invalid_argument& e) {
        throw ValidationError(e.what());
    }
}

json to_json(const GeneratorSet& gens) {
    json members = json::array();
    for (std::size_t i = 0; i < gens.size(); ++i) {
        const auto& g = gens.member(i);
        json m{{"base_freq", g.base_freq}};
        if (g.profile.is_indicator()) {
            m["profile"] = "indicator";
        } else {
            const auto& rp = g.profile.raster();
            const GridIndexer idx(rp.dim, rp.grid);
            json entries = json::array();
            for (std::size_t c = 0; c < idx.size(); ++c)
                for (const auto& [l, v] : rp.entries[c])
                    entries.push_back({{"omega_index", idx.unflatten(c)},
                                       {"offset", l},
                                       {"re", v.real()},
                                       {"im", v.imag()}});
            m["profile"] = {{"grid", rp.grid}, {"entries", entries}};
        }
        members.push_back(std::move(m));
    }
    return {{"dim", gens.dim()}, {"members", members}};
}

SamplingPattern pattern_from_json(const json& j) {
    const int dim = require_int(j, "dim");
    const json& pts = require(j, "points");
    if (!pts.is_array() || pts.empty())
        throw ValidationError("field 'points' must be a nonempty array");
    std::vector<std::vector<double>> points;
    for (const auto& p : pts) {
        if (!p.is_array() || int(p.size()) != dim)
            throw ValidationError("each point must be a number array of length dim");
        std::vector<double> x;
        for (const auto& c : p) {
            if (!c.is_number()) throw ValidationError("point coordinates must be numbers");
            x.push_back(c.get<double>());
        }
        points.push_back(std::move(x));
    }
    double scale = 1.0;
    if (j.contains("scale")) scale = require_number(j, "scale");
    try {
        SamplingPattern pattern(dim, std::move(points), scale);
        if (j.contains("seed")) pattern.seed = require(j, "seed").get<std::uint64_t>();
        return pattern;
    } catch (const std::invalid_argument& e) {
        throw ValidationError(e.what());
    }
}

json to_json(const SamplingPattern& pattern) {
    json j{{"dim", pattern.dim}, {"scale", pattern.scale}, {"points", pattern.points}};
    if (pattern.seed) j["seed"] = *pattern.seed;
    return j;
}

DiscreteSignal signal_from_json(const json& j) {
    const auto spectrum = spectrum_from_json(require(j, "spectrum"));
    const int grid = require_int(j, "grid");
    DiscreteSignal f(spectrum.to_raster(grid));
    const json& entries = require(j, "entries");
    if (!entries.is_array()) throw ValidationError("field 'entries' must be an array");
    const int d = f.dim();
    for (const auto& e : entries) {
        const json& idx = require(e, "indices");
        if (!idx.is_array() || int(idx.size()) != 2 * d)
            throw ValidationError("signal entry indices must hold cell and offset");
        std::vector<int> cell;
        LatticePoint offset;
        for (int i = 0; i < d; ++i) cell.push_back(idx[std::size_t(i)].get<int>());
        for (int i = d; i < 2 * d; ++i) offset.push_back(idx[std::size_t(i)].get<int>());
        const std::size_t c = f.spectrum.indexer().flatten(cell);
        const auto& fp = f.spectrum.fingerprint(c);
        const auto it = std::lower_bound(fp.begin(), fp.end(), offset);
        if (it == fp.end() || *it != offset)
            throw ValidationError("signal entry outside the spectrum support");
        f.coeffs[c][std::size_t(it - fp.begin())] = {require_number(e, "re"),
                                                     require_number(e, "im")};
    }
    return f;
}

json to_json(const DiscreteSignal& f) {
    json entries = json::array();
    const auto& idx = f.spectrum.indexer();
    for (std::size_t c = 0; c < idx.size(); ++c) {
        const auto cell = idx.unflatten(c);
        const auto& fp = f.spectrum.fingerprint(c);
        for (std::size_t t = 0; t < fp.size(); ++t) {
            std::vector<int> indices(cell.begin(), cell.end());
            indices.insert(indices.end(), fp[t].begin(), fp[t].end());
            entries.push_back({{"indices", indices},
                               {"re", f.coeffs[c][t].real()},
                               {"im", f.coeffs[c][t].imag()}});
        }
    }
    return {{"dim", f.dim()},
            {"grid", f.grid()},
            {"spectrum", to_json(f.spectrum)},
            {"entries", entries}};
}

SampleSet samples_from_json(const json& j) {
    const int dim = require_int(j, "dim");
    const int grid = require_int(j, "grid");
    auto pattern = pattern_from_json(require(j, "pattern"));
    const GridIndexer lattice(dim, grid);
    const Eigen::Index m = pattern.size();
    SampleSet s{dim, grid, std::move(pattern),
                Eigen::MatrixXcd::Zero(m, Eigen::Index(lattice.size()))};
    const json& entries = require(j, "entries");
    for (const auto& e : entries) {
        const json& idx = require(e, "indices");
        if (!idx.is_array() || int(idx.size()) != dim + 1)
            throw ValidationError("sample entry indices must hold point id and lattice shift");
        const int r = idx[0].get<int>();
        if (r < 0 || r >= s.pattern.size()) throw ValidationError("sample point id out of range");
        std::vector<int> shift;
        for (int i = 1; i <= dim; ++i) shift.push_back(idx[std::size_t(i)].get<int>());
        s.values(r, Eigen::Index(lattice.flatten(shift))) = {require_number(e, "re"),
                                                             require_number(e, "im")};
    }
    return s;
}

json to_json(const SampleSet& s) {
    const GridIndexer lattice(s.dim, s.grid);
    json entries = json::array();
    for (Eigen::Index r = 0; r < s.values.rows(); ++r) {
        for (std::size_t lp = 0; lp < lattice.size(); ++lp) {
            const auto shift = lattice.unflatten(lp);
            std::vector<int> indices{int(r)};
            indices.insert(indices.end(), shift.begin(), shift.end());
            const auto v = s.values(r, Eigen::Index(lp));
            entries.push_back({{"indices", indices}, {"re", v.real()}, {"im", v.imag()}});
        }
    }
    return {{"dim", s.dim}, {"grid", s.grid}, {"pattern", to_json(s.pattern)}, {"entries", entries}};
}

json to_json(const FrameReport& report) {
    json fibers = json::array();
    for (const auto& f : report.per_fiber)
        fibers.push_back(
            {{"omega", f.omega_id}, {"lambda_min", f.lambda_min}, {"lambda_max", f.lambda_max}});
    return {{"pass", report.pass},
            {"m", report.m},
            {"alpha_target", report.alpha_target},
            {"alpha_achieved", report.alpha_achieved},
            {"global_min", report.global_min},
            {"global_max", report.global_max},
            {"rank_deficient", report.rank_deficient},
            {"grid_spec", report.grid_spec},
            {"fibers", fibers}};
}

json to_json(const TrialStats& stats) {
    return {{"m", stats.m},
            {"trials", stats.trials},
            {"failures", stats.failures},
            {"failure_rate", stats.failure_rate},
            {"alpha_min", stats.alpha_min},
            {"alpha_median", stats.alpha_median},
            {"alpha_max", stats.alpha_max},
            {"seed", stats.base_seed}};
}

PolicyChoice parse_policy(const std::string& text) {
    PolicyChoice choice;
    if (text == "per-fingerprint") {
        choice.per_fingerprint = true;
        return choice;
    }
    if (text == "net") {
        choice.grid_policy = GridPolicy::net();
        return choice;
    }
    if (text.rfind("net:", 0) == 0) {
        const double inflation = std::stod(text.substr(4));
        if (!(inflation >= 1.0)) throw ValidationError("net inflation must be >= 1");
        choice.grid_policy = GridPolicy::net(inflation);
        return choice;
    }
    if (text.rfind("grid:", 0) == 0) {
        const int g = std::stoi(text.substr(5));
        if (g < 1) throw ValidationError("grid resolution must be >= 1");
        choice.grid_policy = GridPolicy::explicit_grid(g);
        return choice;
    }
    throw ValidationError("policy must be 'per-fingerprint', 'net[:inflation]' or 'grid:G'");
}

ExperimentConfig experiment_config_from_json(const json& j) {
    ExperimentConfig cfg;
    cfg.trial.dim = require_int(j, "dim");
    if (j.contains("spectrum")) {
        const auto spectrum = spectrum_from_json(j["spectrum"]);
        cfg.trial.spectrum = spectrum.to_raster();
        if (spectrum.dim() != cfg.trial.dim) throw ValidationError("spectrum dimension mismatch");
    }
    if (j.contains("generators")) {
        cfg.trial.generators = generators_from_json(j["generators"]);
        if (cfg.trial.generators->dim() != cfg.trial.dim)
            throw ValidationError("generator dimension mismatch");
    }
    cfg.trial.alpha = require_number(j, "alpha");
    cfg.trial.eps = require_number(j, "eps");
    if (j.contains("m")) {
        const json& m = j["m"];
        if (m.is_string()) {
            if (m != "auto") throw ValidationError("m must be an integer or 'auto'");
        } else if (m.is_number_integer()) {
            cfg.trial.m = m.get<long long>();
        } else {
            throw ValidationError("m must be an integer or 'auto'");
        }
    }
    cfg.trial.trials = require_int(j, "trials");
    if (j.contains("base_seed")) cfg.trial.base_seed = require(j, "base_seed").get<std::uint64_t>();
    if (j.contains("threads")) cfg.trial.threads = require_int(j, "threads");
    if (j.contains("policy")) {
        const json& p = j["policy"];
        if (!p.is_string()) throw ValidationError("policy must be a string");
        const auto choice = parse_policy(p.get<std::string>());
        if (!choice.per_fingerprint) cfg.trial.policy = choice.grid_policy;
    }
    if (j.contains("m_values")) {
        const json& mv = j["m_values"];
        if (!mv.is_array()) throw ValidationError("m_values must be an array");
        for (const auto& v : mv) {
            if (!v.is_number_integer()) throw ValidationError("m_values must contain integers");
            cfg.m_values.push_back(v.get<long long>());
        }
    }
    try {
        cfg.trial.validate();
    } catch (const std::invalid_argument& e) {
        throw ValidationError(e.what());
    }
    return cfg;
}

}  // namespace zakframe
