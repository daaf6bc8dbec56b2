#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pbody/rational.hpp"

namespace pbody::geometry {

/// Full-dimensional pointed rational cone held as a dual pair: primitive
/// extreme rays and primitive facet normals (<u, n> >= 0 on the cone).
/// Both lists are irredundant and sorted lexicographically.
class Cone {
public:
    static Cone from_rays(int d, const std::vector<IntVec>& rays);
    static Cone from_normals(int d, const std::vector<IntVec>& normals);

    int dim() const { return dim_; }
    const std::vector<IntVec>& rays() const { return rays_; }
    const std::vector<IntVec>& normals() const { return normals_; }

    bool contains(std::span<const Rat> u) const;
    bool contains(std::span<const std::int64_t> u) const;

    /// Membership without the dimension check, for hot loops.
    bool contains_unchecked(const std::int64_t* u) const {
        for (const auto& n : normals_) {
            std::int64_t s = 0;
            for (int j = 0; j < dim_; ++j) s += n[static_cast<std::size_t>(j)] * u[j];
            if (s < 0) return false;
        }
        return true;
    }

    /// Primitive rescaling of the sum of the facet normals.
    IntVec truncating_vector() const;

    friend bool operator==(const Cone&, const Cone&) = default;

private:
    Cone(int d, std::vector<IntVec> rays, std::vector<IntVec> normals)
        : dim_(d), rays_(std::move(rays)), normals_(std::move(normals)) {}

    int dim_;
    std::vector<IntVec> rays_;
    std::vector<IntVec> normals_;
};

/// H = { u : <u, a> < alpha } with a positive on every extreme ray.
struct TruncatingHalfspace {
    IntVec a;
    Rat alpha;

    /// Validates against the cone; throws NotTruncating.
    static TruncatingHalfspace make(const Cone& cone, IntVec a, Rat alpha);
    /// truncating_vector(cone) with the given bound.
    static TruncatingHalfspace standard(const Cone& cone, Rat alpha = 1);

    friend bool operator==(const TruncatingHalfspace&, const TruncatingHalfspace&) = default;
};

/// Generic halfspace <u, normal> < bound (open) or <= bound (closed).
struct Halfspace {
    IntVec normal;
    Rat bound;
    bool open = true;

    static Halfspace make(IntVec normal, Rat bound, bool open = true);
};

/// Vertices of { u in C : <u, a> <= alpha }: the origin, then one point per ray.
std::vector<RatVec> truncation_vertices(const Cone& cone, const TruncatingHalfspace& h);

/// Change of coordinates taking a full-rank sublattice to Z^d.
struct LatticeTransform {
    std::vector<IntVec> basis;          // rows b_j, ambient coordinates
    std::vector<RatVec> inverse_basis;  // rows of the inverse matrix
    Int index;                          // |det basis|

    /// Coordinates c with v = sum_j c_j b_j; throws RayNotInLattice.
    IntVec to_sublattice(std::span<const std::int64_t> v) const;
    IntVec to_ambient(std::span<const std::int64_t> c) const;
    /// Pulls back a linear functional: <to_ambient(c), n> = <c, result>.
    IntVec pull_back_functional(std::span<const std::int64_t> n) const;
};

struct NormalizedCone {
    Cone cone;
    LatticeTransform transform;
};

/// Throws SingularBasis.
LatticeTransform lattice_transform(int d, const std::vector<IntVec>& basis);

NormalizedCone lattice_normalize(int d, const std::vector<IntVec>& basis, const std::vector<IntVec>& rays);

}  // namespace pbody::geometry
