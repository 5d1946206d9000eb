#include "zakframe/verify.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <set>
#include <sstream>

#include "zakframe/parallel.hpp"
#include "zakframe/rng.hpp"

namespace zakframe {

namespace {

std::string format_omega(std::span<const double> w) {
    std::ostringstream os;
    os << "omega=(";
    for (std::size_t i = 0; i < w.size(); ++i) os << (i ? "," : "") << w[i];
    os << ")";
    return os.str();
}

struct Extremes {
    double lo, hi;
};

Extremes hermitian_extremes(const Eigen::MatrixXcd& t) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(t, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    return {ev(0), ev(ev.size() - 1)};
}

FrameReport assemble_report(std::vector<FiberExtremes> fibers, int m, std::size_t k, double alpha,
                            std::string grid_spec) {
    FrameReport rep;
    rep.per_fiber = std::move(fibers);
    rep.m = m;
    rep.alpha_target = alpha;
    rep.grid_spec = std::move(grid_spec);
    rep.rank_deficient = std::size_t(m) < k;
    rep.global_min = rep.per_fiber.front().lambda_min;
    rep.global_max = rep.per_fiber.front().lambda_max;
    for (const auto& f : rep.per_fiber) {
        rep.global_min = std::min(rep.global_min, f.lambda_min);
        rep.global_max = std::max(rep.global_max, f.lambda_max);
    }
    rep.alpha_achieved =
        std::max(1.0 - rep.global_min / double(m), rep.global_max / double(m) - 1.0);
    rep.pass = rep.global_min >= double(m) * (1.0 - alpha) &&
               rep.global_max <= double(m) * (1.0 + alpha);
    return rep;
}

// Eigenvalues clamped up to 0: T is PSD by construction, so tiny negative
// values are roundoff.
FiberExtremes fiber_extremes(std::string id, const Eigen::MatrixXcd& t) {
    auto [lo, hi] = hermitian_extremes(t);
    return {std::move(id), std::max(0.0, lo), std::max(0.0, hi)};
}

}  // namespace

SamplingPattern::SamplingPattern(int d, std::vector<std::vector<double>> pts, double s)
    : dim(d), points(std::move(pts)), scale(s) {
    if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
    if (scale <= 0.0) throw std::invalid_argument("scale must be positive");
    if (points.empty()) throw std::invalid_argument("pattern needs at least one point");
    for (const auto& p : points) {
        if (int(p.size()) != dim) throw std::invalid_argument("point dimension mismatch");
        for (double c : p)
            if (!(c >= -0.5 && c <= 0.5))
                throw std::invalid_argument("points must lie in the closed fundamental cell");
    }
}

SamplingPattern SamplingPattern::random(int dim, int m, std::uint64_t seed) {
    if (m < 1) throw std::invalid_argument("pattern needs at least one point");
    std::mt19937_64 rng(seed);
    std::vector<std::vector<double>> pts(std::size_t(m),
                                         std::vector<double>(std::size_t(dim), 0.0));
    for (auto& p : pts)
        for (auto& c : p) c = uniform_unit(rng);
    SamplingPattern out(dim, std::move(pts));
    out.seed = seed;
    return out;
}

Eigen::MatrixXcd zak_matrix(const GeneratorSet& gens, const SamplingPattern& pattern,
                            const FiberIndex& omega, bool waive_orthonormality) {
    if (gens.dim() != pattern.dim) throw std::invalid_argument("dimension mismatch");
    if (!waive_orthonormality) gens.require_orthonormal();
    const auto w = omega.value();
    const std::size_t k = gens.size();
    const std::size_t m = std::size_t(pattern.size());
    Eigen::MatrixXcd z(k, m);
    std::vector<double> neg_x(static_cast<std::size_t>(gens.dim()));
    for (std::size_t j = 0; j < m; ++j) {
        const auto& x = pattern.points[j];
        for (std::size_t i = 0; i < x.size(); ++i) neg_x[i] = -x[i];
        const auto carrier = unit_phase(dot(x, std::span<const double>(w)));
        for (std::size_t i = 0; i < k; ++i)
            z(Eigen::Index(i), Eigen::Index(j)) =
                carrier * zak_generator(gens.member(i), omega, neg_x);
    }
    return z;
}

Eigen::MatrixXcd gram_matrix(const GeneratorSet& gens, const SamplingPattern& pattern,
                             const FiberIndex& omega, bool waive_orthonormality) {
    const Eigen::MatrixXcd z = zak_matrix(gens, pattern, omega, waive_orthonormality);
    return z.conjugate() * z.transpose();
}

Eigen::MatrixXcd multitile_gram(const TilingDecomposition& dec, const SamplingPattern& pattern,
                                std::size_t class_index) {
    if (class_index >= dec.complexity()) throw std::invalid_argument("class index out of range");
    if (dec.dim != pattern.dim) throw std::invalid_argument("dimension mismatch");
    const auto& b = dec.offset_sets[class_index];
    const std::size_t k = b.size();
    for (const auto& other : dec.offset_sets)
        if (other.size() != k)
            throw std::invalid_argument("decomposition classes have unequal cardinality");
    Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(Eigen::Index(k), Eigen::Index(k));
    LatticePoint diff(static_cast<std::size_t>(dec.dim), 0);
    for (const auto& x : pattern.points) {
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = 0; j < k; ++j) {
                for (std::size_t c = 0; c < diff.size(); ++c) diff[c] = b[j][c] - b[i][c];
                t(Eigen::Index(i), Eigen::Index(j)) += unit_phase(dot(x, diff));
            }
        }
    }
    return t;
}

NetResolution net_resolution(int k, double c_bound, double k_bound, double alpha, int dim) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0,1)");
    if (!(c_bound > 0.0)) throw std::invalid_argument("C must be positive");
    if (k_bound < 0.0) throw std::invalid_argument("K must be nonnegative");
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
    NetResolution out;
    if (k_bound == 0.0) {
        out.delta = std::numeric_limits<double>::infinity();
        out.count = 1;
        return out;
    }
    out.delta = std::min(0.5, alpha / (4.0 * double(k) * c_bound * k_bound));
    const double per_dim = std::ceil(1.0 / (2.0 * out.delta));
    const double total = std::pow(per_dim, double(dim));
    if (total > 9e18) throw std::overflow_error("net cardinality overflow");
    out.count = (long long)std::llround(total);
    return out;
}

FrameReport verify_frame(const GeneratorSet& gens, const SamplingPattern& pattern, double alpha,
                         const GridPolicy& policy, bool waive_orthonormality, int threads) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0,1)");
    if (!waive_orthonormality) gens.require_orthonormal();
    const int d = gens.dim();

    // Fiber set requested by the policy, snapped to the profile grid when the
    // set carries raster profiles (their Zak values exist only there).
    std::vector<FiberIndex> fibers;
    std::ostringstream spec;
    const int profile_grid = gens.profile_grid();
    int requested = 0;
    if (policy.kind == GridPolicy::Kind::Net) {
        const double c_bound = gens.freq_periodization_bound();
        const double k_bound = gens.all_indicator() ? 0.0
                                                    : gens.zak_lipschitz() * policy.k_inflation;
        const auto net = net_resolution(int(gens.size()), c_bound, k_bound, alpha, d);
        if (net.count == 1) {
            requested = 1;
            spec << "net: constant in omega, single fiber";
        } else {
            requested = int(std::ceil(1.0 / (2.0 * net.delta)));
            spec << "net: delta=" << net.delta << ", " << net.count << " fibers requested";
        }
    } else {
        if (policy.grid < 1) throw std::invalid_argument("empty grid");
        requested = policy.grid;
        spec << "grid: " << policy.grid << " per axis";
    }

    if (profile_grid == 0) {
        if (gens.all_indicator() && policy.kind == GridPolicy::Kind::Net) {
            fibers.push_back(FiberIndex::origin(d));
        } else {
            const GridIndexer idx(d, requested);
            for (std::size_t c = 0; c < idx.size(); ++c)
                fibers.push_back({idx.unflatten(c), requested});
        }
    } else {
        // Snap each requested cell center to the nearest profile cell.
        std::set<std::vector<int>> snapped;
        const GridIndexer req(d, requested);
        for (std::size_t c = 0; c < req.size(); ++c) {
            const auto w = req.center(req.unflatten(c));
            std::vector<int> cell(static_cast<std::size_t>(d), 0);
            for (int i = 0; i < d; ++i) {
                const double t = (w[std::size_t(i)] + 0.5) * double(profile_grid) - 0.5;
                cell[std::size_t(i)] =
                    std::clamp(int(std::lround(t)), 0, profile_grid - 1);
            }
            snapped.insert(std::move(cell));
        }
        for (const auto& cell : snapped) fibers.push_back({cell, profile_grid});
        if (int(fibers.size()) != requested || profile_grid != requested)
            spec << "; snapped to " << fibers.size() << " profile cells";
    }

    std::vector<FiberExtremes> results(fibers.size());
    parallel_for(fibers.size(), threads, [&](std::size_t i) {
        const Eigen::MatrixXcd t = gram_matrix(gens, pattern, fibers[i], true);
        results[i] = fiber_extremes(format_omega(fibers[i].value()), t);
    });
    return assemble_report(std::move(results), pattern.size(), gens.size(), alpha, spec.str());
}

FrameReport verify_frame_fingerprint(const TilingDecomposition& dec,
                                     const SamplingPattern& pattern, double alpha, int threads) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0,1)");
    if (dec.complexity() == 0) throw std::invalid_argument("empty grid");
    const std::size_t k = dec.offset_sets.front().size();
    std::vector<FiberExtremes> results(dec.complexity());
    parallel_for(dec.complexity(), threads, [&](std::size_t n) {
        const Eigen::MatrixXcd t = multitile_gram(dec, pattern, n);
        std::ostringstream id;
        id << "class=" << n;
        results[n] = fiber_extremes(id.str(), t);
    });
    return assemble_report(std::move(results), pattern.size(), k, alpha,
                           "per-fingerprint exact");
}

BernsteinTail bernstein_tail(int k, long long m, double c_bound, double alpha) {
    if (k < 1 || m < 1) throw std::invalid_argument("k and m must be >= 1");
    if (!(c_bound > 0.0)) throw std::invalid_argument("C must be positive");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0,1)");
    const double kc2 = double(k) * c_bound * c_bound;
    const double nu = double(m) * alpha / 2.0;
    const double sigma2 = std::max(0.0, double(m) * (kc2 - 1.0));
    const double b = kc2 + 1.0;
    BernsteinTail out;
    out.raw = double(k) * std::exp(-(nu * nu / 2.0) / (sigma2 + b * nu / 3.0));
    out.simplified = double(k) * std::exp(-alpha * alpha * double(m) / (10.0 * kc2));
    return out;
}

namespace {

SampleCount ceil_count(double value) {
    SampleCount out;
    if (!(value > 0.0)) {
        out.m = 1;
        out.clamped = true;
        return out;
    }
    out.m = (long long)std::ceil(value);
    out.clamped = false;
    return out;
}

}  // namespace

SampleCount sample_count_thm1(int k, double c_bound, double k_bound, int dim, double alpha,
                              double eps) {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    if (!(c_bound > 0.0)) throw std::invalid_argument("C must be positive");
    if (k_bound < 0.0) throw std::invalid_argument("K must be nonnegative");
    if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0,1)");
    if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
    const double arg = (2.0 * double(k) / eps) *
                       std::pow(2.0 * double(k) * c_bound * k_bound / alpha + 1.0, double(dim));
    if (arg <= 1.0) return {1, true};
    return ceil_count(10.0 * (c_bound * c_bound / (alpha * alpha)) * double(k) * std::log(arg));
}

SampleCount sample_count_cor2(int k, double alpha, double eps) {
    return sample_count_thm1(k, 1.0, 0.0, 1, alpha, eps);
}

SampleCount sample_count_ktile(int k, long long complexity, double alpha, double eps) {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    if (complexity < 1) throw std::invalid_argument("complexity index must be >= 1");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0,1)");
    if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
    const double arg = 2.0 * double(complexity) * double(k) / eps;
    if (arg <= 1.0) return {1, true};
    return ceil_count(10.0 / (alpha * alpha) * double(k) * std::log(arg));
}

GeneralSampleCount sample_count_general(const BoundaryGeometry& geom, double alpha, double eps) {
    geom.validate();
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0,1)");
    if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
    GeneralSampleCount out;
    out.rho = (geom.kappa / covering_constant(geom.dim)) * (geom.volume / geom.surface);
    out.cube_density = geom.volume / std::pow(out.rho, double(geom.dim));
    const double arg = 4.0 / eps * out.cube_density;
    if (arg <= 1.0) {
        out.m = 1;
        out.clamped = true;
        return out;
    }
    const double value = 20.0 / (alpha * alpha) * out.cube_density * std::log(arg);
    if (value > 9e18) throw std::overflow_error("sample count overflow");
    const auto count = ceil_count(value);
    out.m = count.m;
    out.clamped = count.clamped;
    return out;
}

}  // namespace zakframe
