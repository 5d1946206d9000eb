#include <doctest.h>

#include "helpers.hpp"

using namespace zakframe;
using namespace zakframe::testing;

namespace {

// Independent route for Z_{phi-hat}: the raw sum over the shifted support,
// never routed through the phase identity used by the library.
std::complex<double> zak_generator_direct(const Generator& g, const FiberIndex& omega,
                                          std::span<const double> x) {
    std::complex<double> z{0.0, 0.0};
    for (const auto& l : generator_fiber_support(g, omega))
        z += generator_fiber_value(g, omega, l) * unit_phase(-dot(x, l));
    return z;
}

}  // namespace

TEST_CASE("zak profile of the indicator is identically one") {
    const auto profile = FrequencyProfile::indicator();
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const int dim = 1 + int(rng() % 2);
        const int grid = 1 + int(rng() % 8);
        const GridIndexer idx(dim, grid);
        const FiberIndex omega{idx.unflatten(rng() % idx.size()), grid};
        std::vector<double> x(std::size_t(dim), 0.0);
        for (auto& c : x) c = uniform_unit(rng);
        CHECK(zak_profile(profile, omega, x) == std::complex<double>{1.0, 0.0});
    }
}

TEST_CASE("zak profile of a single-offset profile is constant in x") {
    RasterProfile rp(1, 2);
    const std::complex<double> c{0.3, -1.7};
    rp.set(std::vector<int>{0}, {0}, c);
    rp.set(std::vector<int>{1}, {0}, c);
    const auto profile = FrequencyProfile::raster(rp);
    for (double x : {-0.5, -0.25, 0.0, 0.37, 0.5}) {
        const std::vector<double> xs{x};
        CHECK(std::abs(zak_profile(profile, {{0}, 2}, xs) - c) < 1e-15);
        CHECK(std::abs(zak_profile(profile, {{1}, 2}, xs) - c) < 1e-15);
    }
}

TEST_CASE("two-offset zak profile cancels at the half period") {
    RasterProfile rp(1, 2);
    rp.set(std::vector<int>{0}, {0}, {1.0, 0.0});
    rp.set(std::vector<int>{0}, {1}, {1.0, 0.0});
    const std::vector<double> x{0.5};
    const auto z = zak_profile(FrequencyProfile::raster(rp), {{0}, 2}, x);
    CHECK(std::abs(z) < 1e-15);  // 1 + e^{-i pi}
}

TEST_CASE("zak profile rejects off-grid fibers") {
    RasterProfile rp(1, 4);
    rp.set(std::vector<int>{0}, {0}, {1.0, 0.0});
    const std::vector<double> x{0.0};
    CHECK_THROWS_AS(zak_profile(FrequencyProfile::raster(rp), {{0}, 8}, x),
                    std::invalid_argument);
}

TEST_CASE("zak profile is linear in the profile values") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const int dim = 1 + int(rng() % 2);
        const int grid = 2 + int(rng() % 3);
        const auto a = random_profile(rng, dim, grid, 2);
        const auto b = random_profile(rng, dim, grid, 2);
        const std::complex<double> ca = complex_gaussian(rng);
        const std::complex<double> cb = complex_gaussian(rng);

        RasterProfile sum(dim, grid);
        const GridIndexer idx(dim, grid);
        for (std::size_t c = 0; c < idx.size(); ++c) {
            const auto cell = idx.unflatten(c);
            for (const auto& [l, v] : a.entries[c]) sum.set(cell, l, ca * v);
            for (const auto& [l, v] : b.entries[c]) {
                std::complex<double> prev{0.0, 0.0};
                for (const auto& [la, va] : sum.entries[c])
                    if (la == l) prev = va;
                sum.set(cell, l, prev + cb * v);
            }
        }

        const FiberIndex omega{idx.unflatten(rng() % idx.size()), grid};
        std::vector<double> x(std::size_t(dim), 0.0);
        for (auto& c : x) c = uniform_unit(rng);
        const auto lhs = zak_profile(FrequencyProfile::raster(sum), omega, x);
        const auto rhs = ca * zak_profile(FrequencyProfile::raster(a), omega, x) +
                         cb * zak_profile(FrequencyProfile::raster(b), omega, x);
        CHECK(std::abs(lhs - rhs) < 1e-12);
    }
}

TEST_CASE("periodization bound of indicator sets is one") {
    const auto gens = indicator_set(1, {{0}, {1}, {-2}});
    CHECK(gens.freq_periodization_bound() == 1.0);
    CHECK(gens.zak_lipschitz() == 0.0);
}

TEST_CASE("periodization bound sums offset magnitudes") {
    RasterProfile rp(1, 2);
    rp.set(std::vector<int>{0}, {0}, {3.0, 0.0});
    GeneratorSet single(1, {{{0}, FrequencyProfile::raster(rp)}});
    CHECK(single.freq_periodization_bound() == doctest::Approx(3.0).epsilon(1e-15));

    RasterProfile two(1, 2);
    two.set(std::vector<int>{0}, {0}, std::polar(1.0, 0.4));
    two.set(std::vector<int>{0}, {1}, std::polar(1.0, -2.2));
    GeneratorSet pair(1, {{{0}, FrequencyProfile::raster(two)}});
    CHECK(pair.freq_periodization_bound() == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("zak lipschitz estimate on a two-point grid") {
    RasterProfile rp(1, 2);
    rp.set(std::vector<int>{0}, {0}, {0.0, 0.0});
    rp.set(std::vector<int>{1}, {0}, {1.0, 0.0});
    GeneratorSet gens(1, {{{0}, FrequencyProfile::raster(rp)}});
    CHECK(gens.zak_lipschitz() == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("zak lipschitz vanishes for omega-constant profiles") {
    std::mt19937_64 rng(5);
    RasterProfile rp(1, 4);
    const auto v0 = complex_gaussian(rng);
    const auto v1 = complex_gaussian(rng);
    for (int c = 0; c < 4; ++c) {
        rp.set(std::vector<int>{c}, {0}, v0);
        rp.set(std::vector<int>{c}, {-1}, v1);
    }
    GeneratorSet gens(1, {{{0}, FrequencyProfile::raster(rp)}});
    CHECK(gens.zak_lipschitz() == doctest::Approx(0.0));
}

TEST_CASE("zak lipschitz rejects a degenerate grid") {
    RasterProfile rp(1, 1);
    rp.set(std::vector<int>{0}, {0}, {1.0, 0.0});
    GeneratorSet gens(1, {{{0}, FrequencyProfile::raster(rp)}});
    CHECK_THROWS_AS(gens.zak_lipschitz(), std::invalid_argument);
}

TEST_CASE("constants are invariant under a unimodular phase") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        const int grid = 2 + int(rng() % 3);
        const auto rp = random_profile(rng, 1, grid, 2);
        const auto phase = std::polar(1.0, 2.0 * std::numbers::pi * uniform01(rng));
        RasterProfile rotated(1, grid);
        const GridIndexer idx(1, grid);
        for (std::size_t c = 0; c < idx.size(); ++c)
            for (const auto& [l, v] : rp.entries[c]) rotated.set(idx.unflatten(c), l, phase * v);

        GeneratorSet a(1, {{{0}, FrequencyProfile::raster(rp)}});
        GeneratorSet b(1, {{{0}, FrequencyProfile::raster(rotated)}});
        CHECK(a.freq_periodization_bound() ==
              doctest::Approx(b.freq_periodization_bound()).epsilon(1e-12));
        CHECK(a.zak_lipschitz() == doctest::Approx(b.zak_lipschitz()).epsilon(1e-12));
    }
}

TEST_CASE("orthonormality holds for indicator sets with distinct bases") {
    for (int d : {1, 2}) {
        std::vector<LatticePoint> bases;
        for (int i = 0; i < 3; ++i) bases.push_back(LatticePoint(std::size_t(d), i));
        const auto report = orthonormality_check(indicator_set(d, bases), 1e-12);
        CHECK(report.ok);
        CHECK(report.max_deviation == 0.0);
    }
}

TEST_CASE("semantically duplicated generators fail orthonormality") {
    // Same phi expressed twice: once as the plain indicator, once as base
    // frequency 1 with the profile shifted one tile down.
    RasterProfile shifted(1, 2);
    shifted.set(std::vector<int>{0}, {-1}, {1.0, 0.0});
    shifted.set(std::vector<int>{1}, {-1}, {1.0, 0.0});
    GeneratorSet gens(1, {{{0}, FrequencyProfile::indicator()},
                          {{1}, FrequencyProfile::raster(shifted)}});
    const auto report = orthonormality_check(gens, 1e-9);
    CHECK_FALSE(report.ok);
    CHECK(report.max_deviation == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(gens.require_orthonormal(), std::runtime_error);
}

TEST_CASE("identical generator representations are rejected at construction") {
    CHECK_THROWS_AS(indicator_set(1, {{0}, {0}}), std::invalid_argument);
}

TEST_CASE("a unit-energy fiber profile passes orthonormality") {
    RasterProfile rp(1, 4);
    for (int c = 0; c < 4; ++c) {
        rp.set(std::vector<int>{c}, {0}, {0.6, 0.0});
        rp.set(std::vector<int>{c}, {1}, {0.8, 0.0});
    }
    GeneratorSet gens(1, {{{0}, FrequencyProfile::raster(rp)}});
    const auto report = orthonormality_check(gens, 1e-12);
    CHECK(report.ok);
}

TEST_CASE("orthonormality passes for the cube construction at every grid size") {
    for (int grid : {1, 2, 4, 8, 16}) {
        const auto raster =
            RasterSpectrum::from_multitile(MultiTileSpectrum(1, {{0}, {1}, {3}}), grid);
        const auto gens = indicator_generators(tiling_decomposition(raster));
        const auto report = orthonormality_check(gens, 1e-12);
        CHECK(report.ok);
        CHECK(report.max_deviation == 0.0);
    }
}

TEST_CASE("base-frequency phase identity against the direct fiber sum") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 50; ++trial) {
        const int dim = 1 + int(rng() % 2);
        const int grid = 2 + int(rng() % 3);
        LatticePoint base(std::size_t(dim), 0);
        for (auto& b : base) b = int(rng() % 5) - 2;
        const Generator g{base, FrequencyProfile::raster(random_profile(rng, dim, grid, 2))};

        const GridIndexer idx(dim, grid);
        const FiberIndex omega{idx.unflatten(rng() % idx.size()), grid};
        std::vector<double> x(std::size_t(dim), 0.0);
        for (auto& c : x) c = uniform_unit(rng);

        const auto direct = zak_generator_direct(g, omega, x);
        const auto composed = zak_generator(g, omega, x);
        CHECK(std::abs(direct - composed) < 1e-12);
        // And the identity in its explicit form.
        const auto phase = unit_phase(-dot(x, base));
        CHECK(std::abs(direct - phase * zak_profile(g.profile, omega, x)) < 1e-12);
    }
}

TEST_CASE("quadratic time periodization estimate of the unit-fiber profile") {
    RasterProfile rp(1, 4);
    for (int c = 0; c < 4; ++c) rp.set(std::vector<int>{c}, {0}, {1.0, 0.0});
    GeneratorSet gens(1, {{{0}, FrequencyProfile::raster(rp)}});
    const double d = gens.quadratic_time_periodization_estimate();
    CHECK(d > 0.0);
    CHECK(std::isfinite(d));
    CHECK(indicator_set(1, {{0}}).quadratic_time_periodization_estimate() == 0.0);
}
