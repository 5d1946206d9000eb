#pragma once

#include <atomic>
#include <complex>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "zakframe/spectrum.hpp"

namespace zakframe {

// A frequency grid point: cell index on a G-per-axis raster of the
// fundamental domain. The numeric frequency is the cell center.
struct FiberIndex {
    std::vector<int> cell;
    int grid = 1;

    std::vector<double> value() const {
        return GridIndexer(int(cell.size()), grid).center(cell);
    }
    static FiberIndex origin(int dim) { return {std::vector<int>(std::size_t(dim), 0), 1}; }
};

// psi-hat = indicator of the fundamental cube: the band-limiting profile with
// unit periodization and frequency-flat Zak transform.
struct AnalyticIndicator {};

// Sampled profile: psi-hat(omega_j + l) for grid cells omega_j and finitely
// many offsets l per cell.
struct RasterProfile {
    int dim = 1;
    int grid = 1;
    // Linear cell id -> (offset, value), sorted by offset.
    std::vector<std::vector<std::pair<LatticePoint, std::complex<double>>>> entries;

    RasterProfile(int d, int g) : dim(d), grid(g), entries(GridIndexer(d, g).size()) {}
    void set(std::span<const int> cell, const LatticePoint& offset, std::complex<double> value);
};

class FrequencyProfile {
public:
    static FrequencyProfile indicator() { return FrequencyProfile(AnalyticIndicator{}); }
    static FrequencyProfile raster(RasterProfile p) { return FrequencyProfile(std::move(p)); }

    bool is_indicator() const { return std::holds_alternative<AnalyticIndicator>(v_); }
    const RasterProfile& raster() const { return std::get<RasterProfile>(v_); }

    bool operator==(const FrequencyProfile& other) const;

private:
    explicit FrequencyProfile(std::variant<AnalyticIndicator, RasterProfile> v) : v_(std::move(v)) {}
    std::variant<AnalyticIndicator, RasterProfile> v_;
};

// Z_{psi-hat}(omega, x) = sum_l psi-hat(omega + l) e^{-2 pi i <l, x>}.
std::complex<double> zak_profile(const FrequencyProfile& profile, const FiberIndex& omega,
                                 std::span<const double> x);

struct Generator {
    LatticePoint base_freq;
    FrequencyProfile profile;
};

// phi-hat_i(omega + l) = psi-hat_i(omega + l - l_i).
std::complex<double> generator_fiber_value(const Generator& g, const FiberIndex& omega,
                                           const LatticePoint& l);

// Z_{phi-hat_i}(omega, x) = e^{-2 pi i <l_i, x>} Z_{psi-hat_i}(omega, x).
std::complex<double> zak_generator(const Generator& g, const FiberIndex& omega,
                                   std::span<const double> x);

// Offsets l for which phi-hat_i(omega + l) can be nonzero at the given cell.
std::vector<LatticePoint> generator_fiber_support(const Generator& g, const FiberIndex& omega);

struct OrthoReport {
    bool ok = false;
    double max_deviation = 0.0;
};

class GeneratorSet {
public:
    GeneratorSet(int dim, std::vector<Generator> members);
    GeneratorSet(const GeneratorSet& other);
    GeneratorSet& operator=(const GeneratorSet& other);

    int dim() const { return dim_; }
    std::size_t size() const { return members_.size(); }
    const Generator& member(std::size_t i) const { return members_[i]; }
    const std::vector<Generator>& members() const { return members_; }

    // Common grid of the raster members; 0 when all members are analytic.
    int profile_grid() const { return profile_grid_; }
    bool all_indicator() const { return profile_grid_ == 0; }

    // C: max over members and grid cells of sum_l |psi-hat(omega_j + l)|.
    double freq_periodization_bound() const;

    // K: finite-grid estimate of the Lipschitz constant of omega ->
    // Z_{psi-hat}(omega, x), probing x on the same grid. A lower estimate of
    // the essential supremum; callers may inflate it.
    double zak_lipschitz() const;

    // Cached orthonormality verdict at tolerance 1e-9; throws when it fails.
    void require_orthonormal() const;

    // Indicator members contribute nothing; raster members are estimated by
    // finite-model synthesis of psi on the time lattice.
    double quadratic_time_periodization_estimate() const;
    bool quadratic_periodization_asserted = true;

private:
    int dim_;
    std::vector<Generator> members_;
    int profile_grid_ = 0;
    mutable std::atomic<double> c_cache_;
    mutable std::atomic<double> k_cache_;
    mutable std::atomic<int> ortho_cache_;  // -1 unknown, 0 failed, 1 passed
};

// Max entrywise deviation of the fiber Gramian from the identity over all
// grid cells.
OrthoReport orthonormality_check(const GeneratorSet& gens, double tol);

// One indicator-type generator per tile layer of a level-k decomposition:
// member i covers the i-th smallest offset of every class.
GeneratorSet indicator_generators(const TilingDecomposition& dec);

}  // namespace zakframe
