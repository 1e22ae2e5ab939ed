#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

namespace polyoverlay {

using Point = std::vector<double>;

/// Numerical thresholds shared by the geometric modules. Relative entries are
/// scaled by the bounding-box diagonal (or the KKT max-norm) at the call site.
struct Tolerances {
    double feasibility = 1e-9;   ///< barycentric activity / feasibility
    double lagrangian = 1e-9;    ///< Lagrangian zero test, times KKT max-norm
    double pivot = 1e-12;        ///< singular pivot, times KKT max-norm
    double boundary = 1e-9;      ///< boundary shell, times bounding-box diagonal
    double merge = 1e-7;         ///< vertex identification, times diagonal
    double volume = 1e-12;       ///< minimum cell volume, times diagonal^n
};

/// Axis-aligned bounding box in any dimension.
struct BoundingBox {
    Point lower;
    Point upper;

    bool empty() const { return lower.empty(); }

    void extend(const Point& p)
    {
        if (lower.empty()) {
            lower = p;
            upper = p;
            return;
        }
        for (std::size_t i = 0; i < p.size(); ++i) {
            lower[i] = std::min(lower[i], p[i]);
            upper[i] = std::max(upper[i], p[i]);
        }
    }

    void extend(const BoundingBox& other)
    {
        if (other.empty())
            return;
        extend(other.lower);
        extend(other.upper);
    }

    double diagonal() const
    {
        double sum = 0.0;
        for (std::size_t i = 0; i < lower.size(); ++i)
            sum += (upper[i] - lower[i]) * (upper[i] - lower[i]);
        return std::sqrt(sum);
    }

    bool overlaps(const BoundingBox& other, double slack) const
    {
        if (empty() || other.empty())
            return false;
        for (std::size_t i = 0; i < lower.size(); ++i) {
            if (upper[i] + slack < other.lower[i] || other.upper[i] + slack < lower[i])
                return false;
        }
        return true;
    }
};

} // namespace polyoverlay
