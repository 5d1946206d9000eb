#include "zakframe/lattice.hpp"

namespace zakframe {

std::vector<LatticePoint> lattice_ball(int dim, int radius) {
    std::vector<LatticePoint> pts;
    LatticePoint cur(std::size_t(dim), -radius);
    while (true) {
        pts.push_back(cur);
        int i = dim - 1;
        while (i >= 0 && cur[std::size_t(i)] == radius) {
            cur[std::size_t(i)] = -radius;
            --i;
        }
        if (i < 0) break;
        ++cur[std::size_t(i)];
    }
    std::sort(pts.begin(), pts.end(), completion_less);
    return pts;
}

LatticePoint smallest_absent_offset(const std::vector<LatticePoint>& present, int dim) {
    for (int radius = 0;; ++radius) {
        for (const auto& cand : lattice_ball(dim, radius)) {
            if (linf_norm(cand) != radius) continue;  // inner shells already tried
            if (!std::binary_search(present.begin(), present.end(), cand))
                return cand;
        }
    }
}

}  // namespace zakframe
