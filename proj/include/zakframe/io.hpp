#pragma once

#include <json.hpp>
#include <variant>

#include "zakframe/experiments.hpp"

namespace zakframe {

using json = nlohmann::json;

// Raised for malformed or schema-violating input documents.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SpectrumInput {
    std::variant<MultiTileSpectrum, RasterSpectrum> value;

    bool is_multitile() const { return std::holds_alternative<MultiTileSpectrum>(value); }
    const MultiTileSpectrum& multitile() const { return std::get<MultiTileSpectrum>(value); }
    RasterSpectrum to_raster(int default_grid = 1) const;
    int dim() const;
};

SpectrumInput spectrum_from_json(const json& j);
json to_json(const MultiTileSpectrum& mt);
json to_json(const RasterSpectrum& raster);

GeneratorSet generators_from_json(const json& j);
json to_json(const GeneratorSet& gens);

SamplingPattern pattern_from_json(const json& j);
json to_json(const SamplingPattern& pattern);

DiscreteSignal signal_from_json(const json& j);
json to_json(const DiscreteSignal& f);

SampleSet samples_from_json(const json& j);
json to_json(const SampleSet& s);

json to_json(const FrameReport& report);
json to_json(const TrialStats& stats);

// Policy strings: "per-fingerprint", "net", "net:INFLATION", "grid:G".
struct PolicyChoice {
    bool per_fingerprint = false;
    GridPolicy grid_policy = GridPolicy::net();
};
PolicyChoice parse_policy(const std::string& text);

// Experiment configuration document; sweep values are carried separately.
struct ExperimentConfig {
    TrialConfig trial;
    std::vector<long long> m_values;
};
ExperimentConfig experiment_config_from_json(const json& j);

json load_json_file(const std::string& path);

}  // namespace zakframe
