#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "pbody/geometry/double_description.hpp"
#include "pbody/rational.hpp"

namespace pbody::geometry {

/// Inequality <normal, x> <= bound.
struct Inequality {
    IntVec normal;
    Rat bound;
};

/// Bounded convex polytope in R^d, stored as the double description of its
/// homogenization { (x, t) : t * bound - <normal, x> >= 0, t >= 0 }.
class Polytope {
public:
    /// Empty optional when the system is infeasible; throws Unbounded.
    static std::optional<Polytope> from_inequalities(int d, const std::vector<Inequality>& rows);
    /// Convex hull; empty optional when the points do not span R^d.
    static std::optional<Polytope> from_vertices(int d, const std::vector<RatVec>& points);

    int dim() const { return dim_; }

    /// Intersection with <normal, x> <= bound; empty when infeasible.
    std::optional<Polytope> clipped(const IntVec& normal, const Rat& bound) const;

    bool full_dimensional() const;

    /// Homogeneous vertex coordinates (x * t, t) with t > 0.
    const std::vector<BigVec>& homogeneous_vertices() const { return dd_.rays(); }
    std::vector<RatVec> vertices() const;

    /// Min and max of <f, x> over the polytope.
    std::pair<Rat, Rat> range(std::span<const std::int64_t> f) const;

    /// Exact volume by a pulling triangulation of the face lattice.
    Rat volume() const;

    /// Simplices as index lists into homogeneous_vertices().
    std::vector<std::vector<std::size_t>> triangulation() const;

private:
    Polytope(int d, DoubleDescription dd) : dim_(d), dd_(std::move(dd)) {}
    static std::optional<Polytope> finish(int d, DoubleDescription dd);

    int dim_;
    DoubleDescription dd_;
};

/// Exact volume of a bounded polytope given by inequalities (<= 4 dims).
Rat polytope_volume_exact(int d, const std::vector<Inequality>& rows);
/// Exact volume of the convex hull of the points (<= 4 dims).
Rat polytope_volume_exact(int d, const std::vector<RatVec>& vertices);

}  // namespace pbody::geometry
