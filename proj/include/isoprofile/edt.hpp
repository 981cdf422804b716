#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "field.hpp"

namespace isoprofile {

/// Exact Euclidean feature transform on a grid: for every cell, the index of
/// the nearest site cell and the squared distance to it in cell units.
/// Two separable passes (columns, then rows via the lower envelope of
/// parabolas), O(cells) overall. Cells with no site anywhere get -1 / +inf.
struct FeatureTransform {
    std::vector<std::int64_t> nearest;
    std::vector<double> dist_sq;
};

inline FeatureTransform feature_transform(const Grid& grid, const std::vector<char>& site) {
    const auto nx = static_cast<std::int64_t>(grid.nx);
    const auto ny = static_cast<std::int64_t>(grid.ny);
    constexpr double inf = std::numeric_limits<double>::infinity();

    // Column pass: nearest site row within each column.
    std::vector<std::int64_t> col_row(grid.size(), -1);
    for (std::int64_t i = 0; i < nx; ++i) {
        std::int64_t last = -1;
        for (std::int64_t j = 0; j < ny; ++j) {
            if (site[j * nx + i]) last = j;
            col_row[j * nx + i] = last;
        }
        std::int64_t next = -1;
        for (std::int64_t j = ny - 1; j >= 0; --j) {
            if (site[j * nx + i]) next = j;
            const std::int64_t prev = col_row[j * nx + i];
            if (next >= 0 && (prev < 0 || next - j < j - prev)) col_row[j * nx + i] = next;
        }
    }

    FeatureTransform out{std::vector<std::int64_t>(grid.size(), -1), std::vector<double>(grid.size(), inf)};
    std::vector<std::int64_t> hull(static_cast<std::size_t>(nx));
    std::vector<double> bound(static_cast<std::size_t>(nx) + 1);
    std::vector<double> f(static_cast<std::size_t>(nx));

    for (std::int64_t j = 0; j < ny; ++j) {
        std::int64_t k = -1;
        for (std::int64_t q = 0; q < nx; ++q) {
            const std::int64_t r = col_row[j * nx + q];
            if (r < 0) continue;
            f[q] = static_cast<double>((j - r) * (j - r));
            if (k < 0) {
                k = 0;
                hull[0] = q;
                bound[0] = -inf;
                bound[1] = inf;
                continue;
            }
            double s;
            for (;;) {
                const std::int64_t p = hull[k];
                s = ((f[q] + static_cast<double>(q * q)) - (f[p] + static_cast<double>(p * p))) /
                    (2.0 * static_cast<double>(q - p));
                if (s > bound[k]) break;
                if (--k < 0) break;
            }
            ++k;
            hull[k] = q;
            bound[k] = k == 0 ? -inf : s;
            bound[k + 1] = inf;
        }
        if (k < 0) continue;
        std::int64_t m = 0;
        for (std::int64_t x = 0; x < nx; ++x) {
            while (bound[m + 1] < static_cast<double>(x)) ++m;
            const std::int64_t q = hull[m];
            const double dx = static_cast<double>(x - q);
            out.dist_sq[j * nx + x] = dx * dx + f[q];
            out.nearest[j * nx + x] = col_row[j * nx + q] * nx + q;
        }
    }
    return out;
}

}  // namespace isoprofile
