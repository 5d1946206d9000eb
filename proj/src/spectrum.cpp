#include "zakframe/spectrum.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace zakframe {

MultiTileSpectrum::MultiTileSpectrum(int d, std::vector<LatticePoint> offs, double s)
    : dim(d), offsets(std::move(offs)), scale(s) {
    if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
    if (scale <= 0.0) throw std::invalid_argument("scale must be positive");
    if (offsets.empty()) throw std::invalid_argument("at least one band required");
    std::set<LatticePoint> seen;
    for (const auto& l : offsets) {
        if (int(l.size()) != dim) throw std::invalid_argument("offset dimension mismatch");
        if (!seen.insert(l).second) throw std::invalid_argument("offsets must be distinct");
    }
}

RasterSpectrum::RasterSpectrum(int dim, int grid)
    : indexer_(dim, grid), cells_(indexer_.size()) {}

RasterSpectrum RasterSpectrum::from_cells(int dim, int grid, const CellFingerprints& cells) {
    RasterSpectrum r(dim, grid);
    for (const auto& [cell, offsets] : cells) {
        if (int(cell.size()) != dim) throw std::invalid_argument("cell index dimension mismatch");
        r.set_fingerprint(r.indexer_.flatten(cell), offsets);
    }
    return r;
}

RasterSpectrum RasterSpectrum::from_multitile(const MultiTileSpectrum& mt, int grid) {
    if (mt.scale != 1.0)
        throw std::invalid_argument("rasterization requires unit scale");
    RasterSpectrum r(mt.dim, grid);
    for (std::size_t c = 0; c < r.indexer_.size(); ++c) r.set_fingerprint(c, mt.offsets);
    return r;
}

void RasterSpectrum::set_fingerprint(std::size_t cell, std::vector<LatticePoint> offsets) {
    for (const auto& l : offsets) {
        if (int(l.size()) != dim()) throw std::invalid_argument("offset dimension mismatch");
        r_max_ = std::max(r_max_, linf_norm(l));
    }
    std::sort(offsets.begin(), offsets.end());
    if (std::adjacent_find(offsets.begin(), offsets.end()) != offsets.end())
        throw std::invalid_argument("fingerprint offsets must be distinct");
    cells_[cell] = std::move(offsets);
}

bool RasterSpectrum::empty() const {
    for (const auto& f : cells_)
        if (!f.empty()) return false;
    return true;
}

void BoundaryGeometry::validate() const {
    if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
    if (!(volume > 0.0) || !std::isfinite(volume))
        throw std::invalid_argument("volume must be positive and finite");
    if (!(surface > 0.0) || !std::isfinite(surface))
        throw std::invalid_argument("surface must be positive and finite");
    if (!(kappa > 0.0) || !std::isfinite(kappa))
        throw std::invalid_argument("kappa must be positive and finite");
}

std::map<LatticePoint, std::vector<LatticePoint>> fingerprints(const RasterSpectrum& raster) {
    std::map<LatticePoint, std::vector<LatticePoint>> out;
    for (std::size_t c = 0; c < raster.indexer().size(); ++c)
        out.emplace(raster.indexer().unflatten(c), raster.fingerprint(c));
    return out;
}

TilingDecomposition tiling_decomposition(const RasterSpectrum& raster) {
    TilingDecomposition dec;
    dec.dim = raster.dim();
    dec.grid = raster.grid();
    std::map<std::vector<LatticePoint>, std::size_t> classes;
    for (std::size_t c = 0; c < raster.indexer().size(); ++c) {
        const auto& f = raster.fingerprint(c);
        if (f.empty()) continue;
        auto it = classes.find(f);
        if (it == classes.end()) {
            it = classes.emplace(f, dec.cells.size()).first;
            dec.cells.emplace_back();
            dec.offset_sets.push_back(f);
        }
        dec.cells[it->second].push_back(c);
    }
    return dec;
}

int k_level(const RasterSpectrum& raster) {
    std::size_t k = 0;
    for (std::size_t c = 0; c < raster.indexer().size(); ++c)
        k = std::max(k, raster.fingerprint(c).size());
    return int(k);
}

std::vector<LatticePoint> offsets_union(const RasterSpectrum& raster) {
    std::set<LatticePoint> u;
    for (std::size_t c = 0; c < raster.indexer().size(); ++c)
        for (const auto& l : raster.fingerprint(c)) u.insert(l);
    return {u.begin(), u.end()};
}

RasterSpectrum complete_to_multitile(const RasterSpectrum& raster, int k) {
    if (k < k_level(raster))
        throw std::invalid_argument("level below current maximum");

    // One shared enlargement per fingerprint class; empty cells are a class.
    std::map<std::vector<LatticePoint>, std::vector<LatticePoint>> enlarged;
    RasterSpectrum out(raster.dim(), raster.grid());
    for (std::size_t c = 0; c < raster.indexer().size(); ++c) {
        const auto& f = raster.fingerprint(c);
        auto it = enlarged.find(f);
        if (it == enlarged.end()) {
            std::vector<LatticePoint> grown = f;
            while (int(grown.size()) < k) {
                LatticePoint add = smallest_absent_offset(grown, raster.dim());
                grown.insert(std::upper_bound(grown.begin(), grown.end(), add), add);
            }
            it = enlarged.emplace(f, std::move(grown)).first;
        }
        out.set_fingerprint(c, it->second);
    }
    return out;
}

double unit_ball_volume(int dim) {
    if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
    return std::pow(std::numbers::pi, double(dim) / 2.0) / std::tgamma(double(dim) / 2.0 + 1.0);
}

double covering_constant(int dim) {
    const double beta = unit_ball_volume(dim);
    const double s = 1.0 + std::sqrt(double(dim - 1));
    return 2.0 * beta * s * s * std::pow(11.0, double(dim));
}

RhoCover rho_and_cover(const BoundaryGeometry& geom, const RasterSpectrum& raster) {
    geom.validate();
    if (geom.dim != raster.dim()) throw std::invalid_argument("dimension mismatch");
    const int d = raster.dim();
    const int G = raster.grid();

    RhoCover out;
    out.rho = (geom.kappa / covering_constant(d)) * (geom.volume / geom.surface);
    const double rho = out.rho;

    // Cubes rho*([-1/2,1/2]^d + n) that overlap some raster box in positive
    // measure, enumerated per raster cell+offset box.
    std::set<LatticePoint> cubes;
    for (std::size_t c = 0; c < raster.indexer().size(); ++c) {
        const auto& f = raster.fingerprint(c);
        if (f.empty()) continue;
        const auto cell = raster.indexer().unflatten(c);
        for (const auto& l : f) {
            // Per-axis integer ranges of overlapping cubes.
            std::vector<std::pair<long long, long long>> ranges(static_cast<std::size_t>(d), {0, 0});
            double count_estimate = 1.0;
            for (int i = 0; i < d; ++i) {
                const double lo = -0.5 + double(cell[std::size_t(i)]) / double(G) + double(l[std::size_t(i)]);
                const double hi = lo + 1.0 / double(G);
                // n with rho*(n - 1/2) < hi and lo < rho*(n + 1/2)
                const long long n_min = (long long)std::floor(lo / rho - 0.5) + 1;
                const long long n_max = (long long)std::ceil(hi / rho + 0.5) - 1;
                ranges[std::size_t(i)] = {n_min, n_max};
                count_estimate *= double(n_max - n_min + 1);
                if (count_estimate > 4e7)
                    throw std::runtime_error("rho-cover has too many cubes to enumerate");
            }
            LatticePoint n(static_cast<std::size_t>(d), 0);
            for (int i = 0; i < d; ++i) n[std::size_t(i)] = int(ranges[std::size_t(i)].first);
            while (true) {
                cubes.insert(n);
                int i = d - 1;
                while (i >= 0 && (long long)n[std::size_t(i)] == ranges[std::size_t(i)].second) {
                    n[std::size_t(i)] = int(ranges[std::size_t(i)].first);
                    --i;
                }
                if (i < 0) break;
                ++n[std::size_t(i)];
            }
        }
    }
    if (cubes.empty()) throw std::invalid_argument("empty spectrum has no cover");

    out.cover = MultiTileSpectrum(d, {cubes.begin(), cubes.end()}, rho);
    out.cube_bound = 2.0 * geom.volume / std::pow(rho, double(d));
    out.within_bound = double(out.cover.bands()) <= out.cube_bound;
    return out;
}

}  // namespace zakframe
