#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "pbody/geometry/cone.hpp"

namespace pbody::lattice {

using geometry::Cone;
using geometry::TruncatingHalfspace;

/// Per-coordinate integer bounds.
struct TruncationBox {
    IntVec lo;
    IntVec hi;

    /// Number of integer points in the box (saturating at UINT64_MAX).
    std::uint64_t volume() const;
};

/// Box around C ∩ { <u, a> <= q * alpha }, rounded outward from the scaled
/// truncation vertices. Throws InvalidArgument for q < 1.
TruncationBox bounding_box(const Cone& cone, const TruncatingHalfspace& h, std::int64_t q);

/// Integer inequality <normal, x> <= bound.
struct IntRow {
    IntVec normal;
    std::int64_t bound;
};

/// Enumerates the integer points of a bounded polyhedron { x : <n_i, x> <= b_i }
/// in row-major order. Each prefix level carries a Fourier–Motzkin projection
/// of the system, so coordinate ranges are recomputed from the fixed prefix
/// and the innermost range is exact.
class PointEnumerator {
public:
    PointEnumerator(int d, std::vector<IntRow> rows);

    int dim() const { return dim_; }
    /// Range of the first coordinate; lo > hi when empty.
    std::pair<std::int64_t, std::int64_t> outer_range() const;

    /// Calls visit(const int64_t* x) for every point, in row-major order.
    void for_each(const std::function<void(const std::int64_t*)>& visit) const;
    /// As for_each, restricted to first coordinate x0.
    void for_each_slice(std::int64_t x0, const std::function<void(const std::int64_t*)>& visit) const;

    std::uint64_t count() const;
    /// Counts points passing the test; slices of the first coordinate are
    /// shared among workers and the exact partial counts summed.
    std::uint64_t count_if(const std::function<bool(const std::int64_t*)>& test, int workers = 1) const;

private:
    struct Level {
        // Rows in coordinates 0..k with nonzero coefficient on x_k.
        std::vector<IntRow> rows;
    };
    template <class F>
    void walk(int k, std::int64_t* x, const F& visit) const;
    bool range_at(int k, const std::int64_t* x, std::int64_t& lo, std::int64_t& hi) const;

    int dim_;
    std::vector<Level> levels_;
    bool infeasible_ = false;
};

/// Points of C ∩ Z^d with <u, a> <= bound.
PointEnumerator truncation_enumerator(const Cone& cone, std::span<const std::int64_t> a, std::int64_t bound);

/// Largest integer strictly below q * alpha.
std::int64_t strict_bound(const Rat& alpha, std::int64_t q);

/// Points of C ∩ Z^d with <u, a> < q * alpha, each once, row-major.
std::vector<IntVec> enumerate_points(const Cone& cone, const TruncatingHalfspace& h, std::int64_t q);
std::uint64_t count_points(const Cone& cone, const TruncatingHalfspace& h, std::int64_t q);

}  // namespace pbody::lattice
