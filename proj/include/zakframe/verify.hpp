#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>

#include "zakframe/generators.hpp"

namespace zakframe {

// m nodes in the closed fundamental cell; the full sampling set is the union
// of their (1/scale)-lattice translates.
struct SamplingPattern {
    int dim = 1;
    std::vector<std::vector<double>> points;
    double scale = 1.0;
    std::optional<std::uint64_t> seed;

    SamplingPattern() = default;
    SamplingPattern(int d, std::vector<std::vector<double>> pts, double s = 1.0);

    static SamplingPattern random(int dim, int m, std::uint64_t seed);

    int size() const { return int(points.size()); }
};

// k x m matrix with entry (i, j) = Z_{phi_i}(x_j, omega), assembled on the
// frequency side as e^{2 pi i <x_j, omega>} Z_{phi-hat_i}(omega, -x_j).
Eigen::MatrixXcd zak_matrix(const GeneratorSet& gens, const SamplingPattern& pattern,
                            const FiberIndex& omega, bool waive_orthonormality = false);

// T(omega) = conj(Z) Z^t, Hermitian PSD, k x k.
Eigen::MatrixXcd gram_matrix(const GeneratorSet& gens, const SamplingPattern& pattern,
                             const FiberIndex& omega, bool waive_orthonormality = false);

// Same matrix for a level-k tiling class without touching generator profiles:
// entry (i, j) = sum_r e^{2 pi i <x_r, b_j - b_i>} with b the sorted offsets
// of class n.
Eigen::MatrixXcd multitile_gram(const TilingDecomposition& dec, const SamplingPattern& pattern,
                                std::size_t class_index);

struct NetResolution {
    double delta = 0.0;     // infinity when the Zak transform is flat in omega
    long long count = 1;    // ceil(1/(2 delta))^d
};

NetResolution net_resolution(int k, double c_bound, double k_bound, double alpha, int dim);

struct GridPolicy {
    enum class Kind { Net, Grid };
    Kind kind = Kind::Net;
    int grid = 0;                // explicit grid resolution (Kind::Grid)
    double k_inflation = 2.0;    // multiplies the finite-grid K estimate (Kind::Net)

    static GridPolicy net(double inflation = 2.0) { return {Kind::Net, 0, inflation}; }
    static GridPolicy explicit_grid(int g) { return {Kind::Grid, g, 1.0}; }
};

struct FiberExtremes {
    std::string omega_id;
    double lambda_min = 0.0;
    double lambda_max = 0.0;
};

struct FrameReport {
    std::vector<FiberExtremes> per_fiber;
    double global_min = 0.0;
    double global_max = 0.0;
    int m = 0;
    double alpha_target = 0.0;
    double alpha_achieved = 0.0;
    bool pass = false;
    bool rank_deficient = false;
    std::string grid_spec;
};

// Extreme eigenvalues of T over the policy's fiber set; pass iff they stay
// within m(1 -/+ alpha). Fibers evaluate independently (data-parallel) and
// reduce in index order, so the report does not depend on the worker count.
FrameReport verify_frame(const GeneratorSet& gens, const SamplingPattern& pattern, double alpha,
                         const GridPolicy& policy, bool waive_orthonormality = false,
                         int threads = 1);

// Exact variant for level-k tilings: one matrix per decomposition class.
FrameReport verify_frame_fingerprint(const TilingDecomposition& dec,
                                     const SamplingPattern& pattern, double alpha,
                                     int threads = 1);

struct BernsteinTail {
    double raw = 0.0;         // matrix Bernstein with nu = m alpha / 2
    double simplified = 0.0;  // k exp(-alpha^2 m / (10 k C^2)), always >= raw
};

BernsteinTail bernstein_tail(int k, long long m, double c_bound, double alpha);

struct SampleCount {
    long long m = 1;
    bool clamped = false;  // log argument was <= 1
};

SampleCount sample_count_thm1(int k, double c_bound, double k_bound, int dim, double alpha,
                              double eps);
SampleCount sample_count_cor2(int k, double alpha, double eps);
SampleCount sample_count_ktile(int k, long long complexity, double alpha, double eps);

struct GeneralSampleCount {
    double rho = 0.0;
    long long m = 1;
    bool clamped = false;
    double cube_density = 0.0;  // |Omega| / rho^d
};

GeneralSampleCount sample_count_general(const BoundaryGeometry& geom, double alpha, double eps);

}  // namespace zakframe
