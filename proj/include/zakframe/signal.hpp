#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "zakframe/verify.hpp"

namespace zakframe {

// Finite frequency model: coefficients f-hat(omega_j + l) on the active
// (cell, offset) pairs of a raster spectrum. All integrals of the continuum
// theory become exact finite sums at the grid fibers.
struct DiscreteSignal {
    RasterSpectrum spectrum;
    // coeffs[cell][t] pairs with spectrum.fingerprint(cell)[t].
    std::vector<std::vector<std::complex<double>>> coeffs;

    explicit DiscreteSignal(RasterSpectrum spec);

    int dim() const { return spectrum.dim(); }
    int grid() const { return spectrum.grid(); }

    // G^{-d} sum |f-hat|^2; normalized so sampling energies compare directly.
    double norm_sq() const;
};

DiscreteSignal synthesize_random(const RasterSpectrum& spectrum, std::uint64_t seed);
DiscreteSignal synthesize_random(const MultiTileSpectrum& spectrum, int grid, std::uint64_t seed);

// f(x + l') = G^{-d} sum_{j,l} f-hat(omega_j + l) e^{2 pi i <omega_j + l, x + l'>},
// with l' reduced mod G per axis.
std::complex<double> evaluate(const DiscreteSignal& f, std::span<const double> x,
                              const LatticePoint& lattice_shift);

// Sample values f(x_r + l') for all pattern nodes r and one period block of
// lattice shifts l' in {0..G-1}^d (the model is G-periodic).
struct SampleSet {
    int dim = 1;
    int grid = 1;
    SamplingPattern pattern;
    Eigen::MatrixXcd values;  // m x G^d, column = linear l' index
};

SampleSet take_samples(const DiscreteSignal& f, const SamplingPattern& pattern);

// y(r, j) = sum_{l'} values(r, l') e^{-2 pi i <l', omega_j>}: the finite Zak
// transform of the samples along the period lattice.
Eigen::MatrixXcd zak_of_samples(const SampleSet& samples);

struct ReconstructOptions {
    double alpha = 0.5;
    bool waive_verification = false;
    bool waive_orthonormality = false;
};

// Per-fiber least squares: solve T(omega_j) c = conj(Z) y via the Hermitian
// normal equations and reassemble f-hat from the generator fibers.
DiscreteSignal reconstruct(const SampleSet& samples, const GeneratorSet& gens,
                           const ReconstructOptions& opts = {});

struct EnergyIdentity {
    double sample_energy = 0.0;  // sum_r sum_{l'} |f(x_r + l')|^2
    double zak_energy = 0.0;     // G^{-d} sum_j <T(omega_j) c_j, c_j>
    double relative_gap = 0.0;
};

// The two sides of the sampling-energy identity computed through unrelated
// code paths; requires f in the span of the generator fibers.
EnergyIdentity energy_identity_check(const DiscreteSignal& f, const GeneratorSet& gens,
                                     const SamplingPattern& pattern);

// Fiber coefficients of f in the generator basis at one grid cell (the
// generator fibers are assumed orthonormal there).
Eigen::VectorXcd fiber_coefficients(const DiscreteSignal& f, const GeneratorSet& gens,
                                    const FiberIndex& omega);

}  // namespace zakframe
