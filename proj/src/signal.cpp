#include "zakframe/signal.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include "zakframe/rng.hpp"

namespace zakframe {

namespace {

int mod_grid(int v, int grid) {
    const int r = v % grid;
    return r < 0 ? r + grid : r;
}

// Inner fiber sums a_r[j] = sum_l f-hat(omega_j + l) e^{2 pi i <omega_j + l, x>}.
Eigen::VectorXcd fiber_sums(const DiscreteSignal& f, std::span<const double> x) {
    const auto& idx = f.spectrum.indexer();
    Eigen::VectorXcd a = Eigen::VectorXcd::Zero(Eigen::Index(idx.size()));
    for (std::size_t c = 0; c < idx.size(); ++c) {
        const auto w = idx.center(idx.unflatten(c));
        const auto& fp = f.spectrum.fingerprint(c);
        std::complex<double> s{0.0, 0.0};
        for (std::size_t t = 0; t < fp.size(); ++t) {
            double phase = 0.0;
            for (std::size_t i = 0; i < w.size(); ++i)
                phase += (w[i] + double(fp[t][i])) * x[i];
            s += f.coeffs[c][t] * unit_phase(phase);
        }
        a(Eigen::Index(c)) = s;
    }
    return a;
}

}  // namespace

DiscreteSignal::DiscreteSignal(RasterSpectrum spec) : spectrum(std::move(spec)) {
    coeffs.resize(spectrum.indexer().size());
    for (std::size_t c = 0; c < coeffs.size(); ++c)
        coeffs[c].assign(spectrum.fingerprint(c).size(), {0.0, 0.0});
}

double DiscreteSignal::norm_sq() const {
    double s = 0.0;
    for (const auto& cell : coeffs)
        for (const auto& v : cell) s += std::norm(v);
    return s / double(spectrum.indexer().size());
}

DiscreteSignal synthesize_random(const RasterSpectrum& spectrum, std::uint64_t seed) {
    DiscreteSignal f(spectrum);
    std::mt19937_64 rng(seed);
    for (auto& cell : f.coeffs)
        for (auto& v : cell) v = complex_gaussian(rng);
    return f;
}

DiscreteSignal synthesize_random(const MultiTileSpectrum& spectrum, int grid, std::uint64_t seed) {
    return synthesize_random(RasterSpectrum::from_multitile(spectrum, grid), seed);
}

std::complex<double> evaluate(const DiscreteSignal& f, std::span<const double> x,
                              const LatticePoint& lattice_shift) {
    if (int(x.size()) != f.dim() || int(lattice_shift.size()) != f.dim())
        throw std::invalid_argument("dimension mismatch");
    const int G = f.grid();
    std::vector<double> shifted(x.size(), 0.0);
    for (std::size_t i = 0; i < x.size(); ++i)
        shifted[i] = x[i] + double(mod_grid(lattice_shift[i], G));
    const auto& idx = f.spectrum.indexer();
    std::complex<double> s{0.0, 0.0};
    for (std::size_t c = 0; c < idx.size(); ++c) {
        const auto w = idx.center(idx.unflatten(c));
        const auto& fp = f.spectrum.fingerprint(c);
        for (std::size_t t = 0; t < fp.size(); ++t) {
            double phase = 0.0;
            for (std::size_t i = 0; i < w.size(); ++i)
                phase += (w[i] + double(fp[t][i])) * shifted[i];
            s += f.coeffs[c][t] * unit_phase(phase);
        }
    }
    return s / double(idx.size());
}

SampleSet take_samples(const DiscreteSignal& f, const SamplingPattern& pattern) {
    if (pattern.dim != f.dim()) throw std::invalid_argument("dimension mismatch");
    const auto& idx = f.spectrum.indexer();
    const GridIndexer lattice(f.dim(), f.grid());
    const std::size_t m = std::size_t(pattern.size());
    SampleSet out{f.dim(), f.grid(), pattern,
                  Eigen::MatrixXcd::Zero(Eigen::Index(m), Eigen::Index(lattice.size()))};
    const double norm = 1.0 / double(idx.size());
    // Factor the lattice sum through the fiber sums: the integer offsets drop
    // out of the l' phase, leaving a plain transform over omega_j.
    for (std::size_t r = 0; r < m; ++r) {
        const Eigen::VectorXcd a = fiber_sums(f, pattern.points[r]);
        for (std::size_t lp = 0; lp < lattice.size(); ++lp) {
            const auto shift = lattice.unflatten(lp);
            std::complex<double> s{0.0, 0.0};
            for (std::size_t c = 0; c < idx.size(); ++c) {
                const auto w = idx.center(idx.unflatten(c));
                double phase = 0.0;
                for (std::size_t i = 0; i < w.size(); ++i) phase += w[i] * double(shift[i]);
                s += a(Eigen::Index(c)) * unit_phase(phase);
            }
            out.values(Eigen::Index(r), Eigen::Index(lp)) = s * norm;
        }
    }
    return out;
}

Eigen::MatrixXcd zak_of_samples(const SampleSet& samples) {
    const GridIndexer lattice(samples.dim, samples.grid);
    const GridIndexer freq(samples.dim, samples.grid);
    const std::size_t m = std::size_t(samples.values.rows());
    Eigen::MatrixXcd y = Eigen::MatrixXcd::Zero(Eigen::Index(m), Eigen::Index(freq.size()));
    for (std::size_t j = 0; j < freq.size(); ++j) {
        const auto w = freq.center(freq.unflatten(j));
        for (std::size_t lp = 0; lp < lattice.size(); ++lp) {
            const auto shift = lattice.unflatten(lp);
            double phase = 0.0;
            for (std::size_t i = 0; i < w.size(); ++i) phase -= double(shift[i]) * w[i];
            const auto ph = unit_phase(phase);
            for (std::size_t r = 0; r < m; ++r)
                y(Eigen::Index(r), Eigen::Index(j)) +=
                    samples.values(Eigen::Index(r), Eigen::Index(lp)) * ph;
        }
    }
    return y;
}

Eigen::VectorXcd fiber_coefficients(const DiscreteSignal& f, const GeneratorSet& gens,
                                    const FiberIndex& omega) {
    const std::size_t k = gens.size();
    const auto& idx = f.spectrum.indexer();
    const std::size_t cell = idx.flatten(omega.cell);
    const auto& fp = f.spectrum.fingerprint(cell);
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(Eigen::Index(k));
    for (std::size_t i = 0; i < k; ++i) {
        std::complex<double> s{0.0, 0.0};
        for (std::size_t t = 0; t < fp.size(); ++t)
            s += f.coeffs[cell][t] * std::conj(generator_fiber_value(gens.member(i), omega, fp[t]));
        c(Eigen::Index(i)) = s;
    }
    return c;
}

DiscreteSignal reconstruct(const SampleSet& samples, const GeneratorSet& gens,
                           const ReconstructOptions& opts) {
    if (gens.dim() != samples.dim) throw std::invalid_argument("dimension mismatch");
    const int G = samples.grid;
    if (!opts.waive_orthonormality) gens.require_orthonormal();
    if (!opts.waive_verification) {
        const auto report = verify_frame(gens, samples.pattern, opts.alpha,
                                         GridPolicy::explicit_grid(G), true);
        if (!report.pass)
            throw std::runtime_error("frame verification failed at the signal grid (alpha=" +
                                     std::to_string(opts.alpha) + ")");
    }

    // Output support: union of generator fiber supports per cell.
    const GridIndexer idx(samples.dim, G);
    RasterSpectrum support(samples.dim, G);
    for (std::size_t c = 0; c < idx.size(); ++c) {
        const FiberIndex omega{idx.unflatten(c), G};
        std::set<LatticePoint> cell_support;
        for (std::size_t i = 0; i < gens.size(); ++i)
            for (auto& l : generator_fiber_support(gens.member(i), omega))
                cell_support.insert(std::move(l));
        support.set_fingerprint(c, {cell_support.begin(), cell_support.end()});
    }

    const Eigen::MatrixXcd y = zak_of_samples(samples);
    DiscreteSignal out(std::move(support));
    for (std::size_t c = 0; c < idx.size(); ++c) {
        const FiberIndex omega{idx.unflatten(c), G};
        const Eigen::MatrixXcd z = zak_matrix(gens, samples.pattern, omega, true);
        const Eigen::MatrixXcd t = z.conjugate() * z.transpose();
        const Eigen::VectorXcd rhs = z.conjugate() * y.col(Eigen::Index(c));
        const Eigen::VectorXcd coef = t.ldlt().solve(rhs);
        const double residual = (t * coef - rhs).norm();
        if (!(residual <= 1e-8 * (1.0 + rhs.norm()))) {
            std::ostringstream os;
            os << "near-singular normal equations at fiber ";
            for (std::size_t i = 0; i < omega.cell.size(); ++i)
                os << (i ? "," : "") << omega.cell[i];
            throw std::runtime_error(os.str());
        }
        const auto& fp = out.spectrum.fingerprint(c);
        for (std::size_t tgt = 0; tgt < fp.size(); ++tgt) {
            std::complex<double> v{0.0, 0.0};
            for (std::size_t i = 0; i < gens.size(); ++i)
                v += coef(Eigen::Index(i)) * generator_fiber_value(gens.member(i), omega, fp[tgt]);
            out.coeffs[c][tgt] = v;
        }
    }
    return out;
}

EnergyIdentity energy_identity_check(const DiscreteSignal& f, const GeneratorSet& gens,
                                     const SamplingPattern& pattern) {
    EnergyIdentity out;
    const SampleSet samples = take_samples(f, pattern);
    out.sample_energy = samples.values.squaredNorm();

    const auto& idx = f.spectrum.indexer();
    double quad = 0.0;
    for (std::size_t c = 0; c < idx.size(); ++c) {
        const FiberIndex omega{idx.unflatten(c), f.grid()};
        const Eigen::VectorXcd coef = fiber_coefficients(f, gens, omega);
        const Eigen::MatrixXcd t = gram_matrix(gens, pattern, omega, true);
        quad += std::real(coef.dot(t * coef));
    }
    out.zak_energy = quad / double(idx.size());
    out.relative_gap = out.sample_energy == 0.0
                           ? 0.0
                           : std::abs(out.sample_energy - out.zak_energy) / out.sample_energy;
    return out;
}

}  // namespace zakframe
