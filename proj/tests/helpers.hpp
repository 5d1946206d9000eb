#pragma once

#include <random>
#include <set>
#include <vector>

#include "zakframe/generators.hpp"
#include "zakframe/rng.hpp"
#include "zakframe/spectrum.hpp"

namespace zakframe::testing {

// ---------------------------------------------------------------------------
// Interval oracle: a 1-d set as a union of half-open intervals [lo, hi).
// Used to derive fingerprints by brute-force membership, independently of the
// raster machinery.
struct IntervalSet {
    std::vector<std::pair<double, double>> parts;

    bool contains_interval(double lo, double hi) const {
        for (const auto& [a, b] : parts)
            if (lo >= a - 1e-12 && hi <= b + 1e-12) return true;
        return false;
    }
};

inline RasterSpectrum raster_from_intervals(const IntervalSet& set, int grid, int max_offset) {
    RasterSpectrum::CellFingerprints cells;
    for (int c = 0; c < grid; ++c) {
        const double lo = -0.5 + double(c) / grid;
        const double hi = lo + 1.0 / grid;
        std::vector<LatticePoint> offsets;
        for (int l = -max_offset; l <= max_offset; ++l)
            if (set.contains_interval(lo + l, hi + l)) offsets.push_back({l});
        if (!offsets.empty()) cells.push_back({{c}, offsets});
    }
    return RasterSpectrum::from_cells(1, grid, cells);
}

// The two-piece model set [-1/2,1/2) u ([-1/2,0) + 2).
inline RasterSpectrum two_piece_spectrum() {
    return raster_from_intervals({{{-0.5, 0.5}, {1.5, 2.0}}}, 2, 4);
}

// ---------------------------------------------------------------------------
// Exhaustive minimal-partition oracle for tiny rasters: the smallest number
// of groups of nonempty cells such that each group shares one fingerprint.
inline std::size_t brute_force_min_groups(const RasterSpectrum& raster) {
    std::vector<std::vector<LatticePoint>> prints;
    for (std::size_t c = 0; c < raster.indexer().size(); ++c)
        if (!raster.fingerprint(c).empty()) prints.push_back(raster.fingerprint(c));
    const std::size_t n = prints.size();
    if (n == 0) return 0;
    // Assign each cell a group id; valid if same-group cells share prints.
    std::size_t best = n;
    std::vector<std::size_t> group(n, 0);
    const auto valid = [&](std::size_t groups) {
        for (std::size_t g = 0; g < groups; ++g) {
            const std::vector<LatticePoint>* ref = nullptr;
            for (std::size_t i = 0; i < n; ++i) {
                if (group[i] != g) continue;
                if (!ref)
                    ref = &prints[i];
                else if (*ref != prints[i])
                    return false;
            }
        }
        return true;
    };
    // Enumerate all assignments with at most n groups (n <= 8 keeps this tiny).
    const std::size_t total = [&] {
        std::size_t t = 1;
        for (std::size_t i = 0; i < n; ++i) t *= n;
        return t;
    }();
    for (std::size_t code = 0; code < total; ++code) {
        std::size_t x = code;
        std::size_t used = 0;
        for (std::size_t i = 0; i < n; ++i) {
            group[i] = x % n;
            used = std::max(used, group[i] + 1);
            x /= n;
        }
        if (used < best && valid(used)) best = used;
    }
    return best;
}

// ---------------------------------------------------------------------------
// Random instances.
inline RasterSpectrum random_raster(std::mt19937_64& rng, int dim, int grid, int max_offset,
                                    double fill = 0.8) {
    RasterSpectrum raster(dim, grid);
    const GridIndexer idx(dim, grid);
    const auto all = lattice_ball(dim, max_offset);
    for (std::size_t c = 0; c < idx.size(); ++c) {
        if (uniform01(rng) > fill) continue;
        const std::size_t count = 1 + rng() % 3;
        std::set<LatticePoint> chosen;
        while (chosen.size() < count) chosen.insert(all[rng() % all.size()]);
        raster.set_fingerprint(c, {chosen.begin(), chosen.end()});
    }
    return raster;
}

inline RasterProfile random_profile(std::mt19937_64& rng, int dim, int grid, int max_offset,
                                    int offsets_per_cell = 2) {
    RasterProfile rp(dim, grid);
    const GridIndexer idx(dim, grid);
    const auto all = lattice_ball(dim, max_offset);
    for (std::size_t c = 0; c < idx.size(); ++c) {
        std::set<LatticePoint> chosen;
        while (int(chosen.size()) < offsets_per_cell) chosen.insert(all[rng() % all.size()]);
        for (const auto& l : chosen) rp.set(idx.unflatten(c), l, complex_gaussian(rng));
    }
    return rp;
}

// Indicator generators phi_i = e^{2 pi i <l_i, .>} sinc with the given bases.
inline GeneratorSet indicator_set(int dim, const std::vector<LatticePoint>& bases) {
    std::vector<Generator> members;
    for (const auto& l : bases) members.push_back({l, FrequencyProfile::indicator()});
    return GeneratorSet(dim, std::move(members));
}

}  // namespace zakframe::testing
