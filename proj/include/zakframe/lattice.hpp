#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

namespace zakframe {

// Integer lattice coordinates of length d.
using LatticePoint = std::vector<int>;

inline int linf_norm(const LatticePoint& p) {
    int r = 0;
    for (int c : p) r = std::max(r, std::abs(c));
    return r;
}

// Enumeration order for filling fingerprints up to a target level: smaller
// sup-norm shells first, within a shell smaller coordinate magnitudes first
// with positive before negative. In one dimension: 0, 1, -1, 2, -2, ...
inline bool completion_less(const LatticePoint& a, const LatticePoint& b) {
    const int na = linf_norm(a), nb = linf_norm(b);
    if (na != nb) return na < nb;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const int ma = std::abs(a[i]), mb = std::abs(b[i]);
        if (ma != mb) return ma < mb;
        const bool sa = a[i] < 0, sb = b[i] < 0;
        if (sa != sb) return sb;  // nonnegative first
    }
    return false;
}

// All lattice points with sup-norm <= radius, in completion order.
std::vector<LatticePoint> lattice_ball(int dim, int radius);

// Smallest lattice point (completion order) not contained in `present`.
// `present` must be sorted in the default lexicographic order.
LatticePoint smallest_absent_offset(const std::vector<LatticePoint>& present, int dim);

// Addressing for a d-dimensional grid of G cells per axis covering the
// fundamental domain [-1/2,1/2)^d. Cell centers serve as the frequency
// evaluation points.
class GridIndexer {
public:
    GridIndexer(int dim, int grid) : dim_(dim), grid_(grid) {
        if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
        if (grid < 1) throw std::invalid_argument("grid must be >= 1");
        size_ = 1;
        for (int i = 0; i < dim; ++i) {
            if (size_ > (std::size_t(1) << 40) / std::size_t(grid))
                throw std::invalid_argument("grid too large");
            size_ *= std::size_t(grid);
        }
    }

    int dim() const { return dim_; }
    int grid() const { return grid_; }
    std::size_t size() const { return size_; }

    bool in_range(std::span<const int> cell) const {
        if (int(cell.size()) != dim_) return false;
        for (int c : cell)
            if (c < 0 || c >= grid_) return false;
        return true;
    }

    std::size_t flatten(std::span<const int> cell) const {
        if (!in_range(cell)) throw std::invalid_argument("cell index out of range");
        std::size_t idx = 0;
        for (int c : cell) idx = idx * std::size_t(grid_) + std::size_t(c);
        return idx;
    }

    std::vector<int> unflatten(std::size_t idx) const {
        std::vector<int> cell(static_cast<std::size_t>(dim_));
        for (int i = dim_ - 1; i >= 0; --i) {
            cell[std::size_t(i)] = int(idx % std::size_t(grid_));
            idx /= std::size_t(grid_);
        }
        return cell;
    }

    // Cell-center frequency, component-wise -1/2 + (c + 1/2)/G.
    std::vector<double> center(std::span<const int> cell) const {
        std::vector<double> w(static_cast<std::size_t>(dim_));
        for (int i = 0; i < dim_; ++i)
            w[std::size_t(i)] = -0.5 + (double(cell[std::size_t(i)]) + 0.5) / double(grid_);
        return w;
    }

private:
    int dim_, grid_;
    std::size_t size_;
};

inline std::complex<double> unit_phase(double turns) {
    return std::polar(1.0, 2.0 * std::numbers::pi * turns);
}

inline double dot(std::span<const double> x, const LatticePoint& l) {
    double s = 0.0;
    for (std::size_t i = 0; i < l.size(); ++i) s += x[i] * double(l[i]);
    return s;
}

inline double dot(std::span<const double> x, std::span<const double> y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

}  // namespace zakframe
