#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "zakframe/lattice.hpp"

namespace zakframe {

// Union of k congruent cubes of side `scale` centered at the lattice points
// scale * offsets[i]. With scale = 1 these are integer translates of the
// fundamental cube.
struct MultiTileSpectrum {
    int dim = 1;
    std::vector<LatticePoint> offsets;
    double scale = 1.0;

    MultiTileSpectrum() = default;
    MultiTileSpectrum(int d, std::vector<LatticePoint> offs, double s = 1.0);

    std::size_t bands() const { return offsets.size(); }
};

// A compact frequency set stored on a G-per-axis raster of the fundamental
// domain: each cell carries the finite set of integer offsets l such that
// cell + l belongs to the set. Exact for raster-aligned sets.
class RasterSpectrum {
public:
    RasterSpectrum(int dim, int grid);

    using CellFingerprints = std::vector<std::pair<LatticePoint, std::vector<LatticePoint>>>;
    static RasterSpectrum from_cells(int dim, int grid, const CellFingerprints& cells);
    static RasterSpectrum from_multitile(const MultiTileSpectrum& mt, int grid = 1);

    int dim() const { return indexer_.dim(); }
    int grid() const { return indexer_.grid(); }
    const GridIndexer& indexer() const { return indexer_; }
    int offset_bound() const { return r_max_; }

    // Sorted offset set of one cell.
    const std::vector<LatticePoint>& fingerprint(std::size_t cell) const {
        return cells_[cell];
    }
    const std::vector<LatticePoint>& fingerprint(std::span<const int> cell) const {
        return cells_[indexer_.flatten(cell)];
    }

    void set_fingerprint(std::size_t cell, std::vector<LatticePoint> offsets);

    bool empty() const;

private:
    GridIndexer indexer_;
    std::vector<std::vector<LatticePoint>> cells_;
    int r_max_ = 0;
};

// Partition of the nonempty raster cells into level sets of the fingerprint
// map: cells[n] all share offset_sets[n], and distinct n have distinct sets.
struct TilingDecomposition {
    int dim = 1;
    int grid = 1;
    std::vector<std::vector<std::size_t>> cells;           // Q_n, linear cell ids
    std::vector<std::vector<LatticePoint>> offset_sets;    // B_n, sorted

    std::size_t complexity() const { return cells.size(); }  // N
};

// Scalar boundary data of a compact set: measure, surface measure and the
// Ahlfors regularity constant of the boundary. Supplied by the caller.
struct BoundaryGeometry {
    double volume = 0.0;
    double surface = 0.0;
    double kappa = 0.0;
    int dim = 1;

    void validate() const;
};

// Canonicalized cell -> offsets map (cells in index order, offsets sorted).
std::map<LatticePoint, std::vector<LatticePoint>> fingerprints(const RasterSpectrum& raster);

TilingDecomposition tiling_decomposition(const RasterSpectrum& raster);

// Maximal fingerprint cardinality over cells (0 for the empty set).
int k_level(const RasterSpectrum& raster);

// Union of all fingerprints, sorted.
std::vector<LatticePoint> offsets_union(const RasterSpectrum& raster);

// Enlarges every cell fingerprint to cardinality exactly k. Cells of one
// decomposition class receive the same added offsets (the empty cells form
// their own class), so the complexity index grows by at most one.
// Throws if k < k_level(raster) with message "level below current maximum".
RasterSpectrum complete_to_multitile(const RasterSpectrum& raster, int k);

double unit_ball_volume(int dim);

// C_d = 2 * beta_d * (1 + sqrt(d-1))^2 * 11^d
double covering_constant(int dim);

struct RhoCover {
    double rho = 0.0;
    MultiTileSpectrum cover;       // cubes of side rho on the lattice rho*Z^d
    double cube_bound = 0.0;       // 2|Omega|/rho^d
    bool within_bound = true;      // cover.bands() <= cube_bound
};

// rho from the boundary geometry and the smallest union of rho-lattice cubes
// containing the rasterized set. Cube count is checked against 2|Omega|/rho^d;
// violation (possible on coarse rasters) is reported, not fatal.
RhoCover rho_and_cover(const BoundaryGeometry& geom, const RasterSpectrum& raster);

}  // namespace zakframe
