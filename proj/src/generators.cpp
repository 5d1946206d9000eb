#include "zakframe/generators.hpp"

#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

namespace zakframe {

namespace {

const RasterProfile* raster_or_null(const FrequencyProfile& p) {
    return p.is_indicator() ? nullptr : &p.raster();
}

void check_fiber(const FiberIndex& omega, int dim, int required_grid) {
    if (int(omega.cell.size()) != dim) throw std::invalid_argument("fiber dimension mismatch");
    if (required_grid != 0 && omega.grid != required_grid)
        throw std::invalid_argument("fiber off the profile grid");
    GridIndexer idx(dim, omega.grid);
    if (!idx.in_range(omega.cell)) throw std::invalid_argument("fiber cell out of range");
}

}  // namespace

void RasterProfile::set(std::span<const int> cell, const LatticePoint& offset,
                        std::complex<double> value) {
    if (int(offset.size()) != dim) throw std::invalid_argument("offset dimension mismatch");
    auto& list = entries[GridIndexer(dim, grid).flatten(cell)];
    auto it = std::lower_bound(list.begin(), list.end(), offset,
                               [](const auto& a, const LatticePoint& b) { return a.first < b; });
    if (it != list.end() && it->first == offset)
        it->second = value;
    else
        list.insert(it, {offset, value});
}

bool FrequencyProfile::operator==(const FrequencyProfile& other) const {
    if (is_indicator() != other.is_indicator()) return false;
    if (is_indicator()) return true;
    const auto& a = raster();
    const auto& b = other.raster();
    return a.dim == b.dim && a.grid == b.grid && a.entries == b.entries;
}

std::complex<double> zak_profile(const FrequencyProfile& profile, const FiberIndex& omega,
                                 std::span<const double> x) {
    if (profile.is_indicator()) {
        check_fiber(omega, int(x.size()), 0);
        return {1.0, 0.0};
    }
    const auto& rp = profile.raster();
    check_fiber(omega, rp.dim, rp.grid);
    std::complex<double> z{0.0, 0.0};
    const auto cell_id = GridIndexer(rp.dim, rp.grid).flatten(omega.cell);
    for (const auto& [l, v] : rp.entries[cell_id]) z += v * unit_phase(-dot(x, l));
    return z;
}

std::complex<double> generator_fiber_value(const Generator& g, const FiberIndex& omega,
                                           const LatticePoint& l) {
    LatticePoint shifted(l.size());
    for (std::size_t i = 0; i < l.size(); ++i) shifted[i] = l[i] - g.base_freq[i];
    if (g.profile.is_indicator()) {
        for (int c : shifted)
            if (c != 0) return {0.0, 0.0};
        return {1.0, 0.0};
    }
    const auto& rp = g.profile.raster();
    check_fiber(omega, rp.dim, rp.grid);
    const auto& list = rp.entries[GridIndexer(rp.dim, rp.grid).flatten(omega.cell)];
    auto it = std::lower_bound(list.begin(), list.end(), shifted,
                               [](const auto& a, const LatticePoint& b) { return a.first < b; });
    if (it != list.end() && it->first == shifted) return it->second;
    return {0.0, 0.0};
}

std::complex<double> zak_generator(const Generator& g, const FiberIndex& omega,
                                   std::span<const double> x) {
    return unit_phase(-dot(x, g.base_freq)) * zak_profile(g.profile, omega, x);
}

std::vector<LatticePoint> generator_fiber_support(const Generator& g, const FiberIndex& omega) {
    std::vector<LatticePoint> supp;
    if (g.profile.is_indicator()) {
        supp.push_back(g.base_freq);
        return supp;
    }
    const auto& rp = g.profile.raster();
    check_fiber(omega, rp.dim, rp.grid);
    for (const auto& [t, v] : rp.entries[GridIndexer(rp.dim, rp.grid).flatten(omega.cell)]) {
        if (v == std::complex<double>{0.0, 0.0}) continue;
        LatticePoint l(t.size());
        for (std::size_t i = 0; i < t.size(); ++i) l[i] = t[i] + g.base_freq[i];
        supp.push_back(std::move(l));
    }
    return supp;
}

GeneratorSet::GeneratorSet(int dim, std::vector<Generator> members)
    : dim_(dim), members_(std::move(members)) {
    if (dim_ < 1) throw std::invalid_argument("dimension must be >= 1");
    if (members_.empty()) throw std::invalid_argument("at least one generator required");
    for (const auto& m : members_) {
        if (int(m.base_freq.size()) != dim_)
            throw std::invalid_argument("base frequency dimension mismatch");
        if (const auto* rp = raster_or_null(m.profile)) {
            if (rp->dim != dim_) throw std::invalid_argument("profile dimension mismatch");
            if (profile_grid_ == 0)
                profile_grid_ = rp->grid;
            else if (profile_grid_ != rp->grid)
                throw std::invalid_argument("mixed profile grids");
        }
    }
    for (std::size_t i = 0; i < members_.size(); ++i)
        for (std::size_t j = i + 1; j < members_.size(); ++j)
            if (members_[i].base_freq == members_[j].base_freq &&
                members_[i].profile == members_[j].profile)
                throw std::invalid_argument("duplicate generator");
    c_cache_.store(std::numeric_limits<double>::quiet_NaN());
    k_cache_.store(std::numeric_limits<double>::quiet_NaN());
    ortho_cache_.store(-1);
}

GeneratorSet::GeneratorSet(const GeneratorSet& other)
    : quadratic_periodization_asserted(other.quadratic_periodization_asserted),
      dim_(other.dim_),
      members_(other.members_),
      profile_grid_(other.profile_grid_) {
    c_cache_.store(other.c_cache_.load());
    k_cache_.store(other.k_cache_.load());
    ortho_cache_.store(other.ortho_cache_.load());
}

GeneratorSet& GeneratorSet::operator=(const GeneratorSet& other) {
    if (this == &other) return *this;
    quadratic_periodization_asserted = other.quadratic_periodization_asserted;
    dim_ = other.dim_;
    members_ = other.members_;
    profile_grid_ = other.profile_grid_;
    c_cache_.store(other.c_cache_.load());
    k_cache_.store(other.k_cache_.load());
    ortho_cache_.store(other.ortho_cache_.load());
    return *this;
}

double GeneratorSet::freq_periodization_bound() const {
    double cached = c_cache_.load();
    if (!std::isnan(cached)) return cached;
    double c = 0.0;
    for (const auto& m : members_) {
        if (m.profile.is_indicator()) {
            c = std::max(c, 1.0);
            continue;
        }
        const auto& rp = m.profile.raster();
        for (const auto& list : rp.entries) {
            double s = 0.0;
            for (const auto& [l, v] : list) s += std::abs(v);
            c = std::max(c, s);
        }
    }
    c_cache_.store(c);
    return c;
}

double GeneratorSet::zak_lipschitz() const {
    double cached = k_cache_.load();
    if (!std::isnan(cached)) return cached;
    double k = 0.0;
    if (profile_grid_ != 0) {
        const GridIndexer idx(dim_, profile_grid_);
        if (profile_grid_ < 2) throw std::invalid_argument("degenerate grid");
        // Probe x on the same grid as omega.
        std::vector<std::vector<double>> probes;
        probes.reserve(idx.size());
        for (std::size_t p = 0; p < idx.size(); ++p) probes.push_back(idx.center(idx.unflatten(p)));
        for (const auto& m : members_) {
            if (m.profile.is_indicator()) continue;
            for (std::size_t a = 0; a < idx.size(); ++a) {
                const FiberIndex fa{idx.unflatten(a), profile_grid_};
                const auto wa = idx.center(fa.cell);
                for (std::size_t b = a + 1; b < idx.size(); ++b) {
                    const FiberIndex fb{idx.unflatten(b), profile_grid_};
                    const auto wb = idx.center(fb.cell);
                    double dist = 0.0;
                    for (int i = 0; i < dim_; ++i)
                        dist = std::max(dist, std::abs(wa[std::size_t(i)] - wb[std::size_t(i)]));
                    for (const auto& x : probes) {
                        const auto za = zak_profile(m.profile, fa, x);
                        const auto zb = zak_profile(m.profile, fb, x);
                        k = std::max(k, std::abs(za - zb) / dist);
                    }
                }
            }
        }
    }
    k_cache_.store(k);
    return k;
}

void GeneratorSet::require_orthonormal() const {
    int cached = ortho_cache_.load();
    if (cached == -1) {
        cached = orthonormality_check(*this, 1e-9).ok ? 1 : 0;
        ortho_cache_.store(cached);
    }
    if (cached != 1)
        throw std::runtime_error(
            "generator translates are not orthonormal (pass waive flag to override)");
}

double GeneratorSet::quadratic_time_periodization_estimate() const {
    if (profile_grid_ == 0) return 0.0;
    const GridIndexer idx(dim_, profile_grid_);
    const int G = profile_grid_;
    double d_bound = 0.0;
    // psi(x + l') over one period lattice block, synthesized from the stored
    // fiber values exactly as the finite signal model does.
    const GridIndexer lattice(dim_, G);
    const double norm = 1.0 / double(idx.size());
    for (const auto& m : members_) {
        if (m.profile.is_indicator()) continue;
        const auto& rp = m.profile.raster();
        for (std::size_t xc = 0; xc < idx.size(); ++xc) {
            const auto x = idx.center(idx.unflatten(xc));
            double energy = 0.0;
            for (std::size_t lp = 0; lp < lattice.size(); ++lp) {
                const auto lpc = lattice.unflatten(lp);
                std::complex<double> val{0.0, 0.0};
                for (std::size_t c = 0; c < idx.size(); ++c) {
                    const auto w = idx.center(idx.unflatten(c));
                    for (const auto& [l, v] : rp.entries[c]) {
                        double t = 0.0;
                        for (int i = 0; i < dim_; ++i)
                            t += (w[std::size_t(i)] + double(l[std::size_t(i)])) *
                                 (x[std::size_t(i)] + double(lpc[std::size_t(i)]));
                        val += v * unit_phase(t);
                    }
                }
                energy += std::norm(val * norm);
            }
            d_bound = std::max(d_bound, energy);
        }
    }
    return d_bound;
}

OrthoReport orthonormality_check(const GeneratorSet& gens, double tol) {
    const std::size_t k = gens.size();
    OrthoReport rep;
    const int grid = gens.profile_grid() == 0 ? 1 : gens.profile_grid();
    const GridIndexer idx(gens.dim(), grid);
    for (std::size_t c = 0; c < idx.size(); ++c) {
        const FiberIndex omega{idx.unflatten(c), grid};
        // Union of fiber supports at this cell.
        std::set<LatticePoint> support;
        for (std::size_t i = 0; i < k; ++i)
            for (auto& l : generator_fiber_support(gens.member(i), omega))
                support.insert(std::move(l));
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = i; j < k; ++j) {
                std::complex<double> gij{0.0, 0.0};
                for (const auto& l : support)
                    gij += generator_fiber_value(gens.member(i), omega, l) *
                           std::conj(generator_fiber_value(gens.member(j), omega, l));
                const double dev = std::abs(gij - (i == j ? 1.0 : 0.0));
                rep.max_deviation = std::max(rep.max_deviation, dev);
            }
        }
    }
    rep.ok = rep.max_deviation <= tol;
    return rep;
}

GeneratorSet indicator_generators(const TilingDecomposition& dec) {
    if (dec.complexity() == 0) throw std::invalid_argument("empty decomposition");
    const std::size_t k = dec.offset_sets.front().size();
    for (const auto& b : dec.offset_sets)
        if (b.size() != k)
            throw std::invalid_argument("decomposition classes have unequal cardinality");

    std::vector<RasterProfile> profiles(k, RasterProfile(dec.dim, dec.grid));
    const GridIndexer idx(dec.dim, dec.grid);
    std::size_t covered = 0;
    for (std::size_t n = 0; n < dec.cells.size(); ++n) {
        for (std::size_t c : dec.cells[n]) {
            const auto cell = idx.unflatten(c);
            for (std::size_t i = 0; i < k; ++i)
                profiles[i].set(cell, dec.offset_sets[n][i], {1.0, 0.0});
            ++covered;
        }
    }
    if (covered != idx.size())
        throw std::invalid_argument("decomposition does not cover the fundamental domain");

    std::vector<Generator> members;
    members.reserve(k);
    for (std::size_t i = 0; i < k; ++i)
        members.push_back({LatticePoint(std::size_t(dec.dim), 0),
                           FrequencyProfile::raster(std::move(profiles[i]))});
    return GeneratorSet(dec.dim, std::move(members));
}

}  // namespace zakframe
