#include "pbody/geometry/cone.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>

#include "pbody/error.hpp"
#include "pbody/geometry/double_description.hpp"

namespace pbody::geometry {

namespace {

void check_vectors(int d, const std::vector<IntVec>& vs, const char* what) {
    if (d < 1) fail(ErrorKind::InvalidArgument, "dimension must be positive");
    if (static_cast<std::size_t>(d) > kMaxDim) fail(ErrorKind::DimensionTooLarge, "dimension exceeds " + std::to_string(kMaxDim));
    if (vs.empty()) fail(ErrorKind::NotFullDimensional, std::string("no ") + what + " given");
    for (const auto& v : vs) {
        if (v.size() != static_cast<std::size_t>(d))
            fail(ErrorKind::DimensionMismatch, std::string(what) + " " + to_string(v) + " is not of dimension " + std::to_string(d));
        if (is_zero(v)) fail(ErrorKind::InvalidArgument, std::string("zero vector among ") + what);
    }
}

std::vector<BigVec> big_rows(const std::vector<IntVec>& vs) {
    std::vector<BigVec> rows;
    rows.reserve(vs.size());
    for (const auto& v : vs) rows.push_back(to_big(v));
    return rows;
}

std::vector<IntVec> small_rows(const std::vector<BigVec>& vs) {
    std::vector<IntVec> rows;
    rows.reserve(vs.size());
    for (const auto& v : vs) rows.push_back(to_int64(v));
    std::sort(rows.begin(), rows.end());
    return rows;
}

}  // namespace

Cone Cone::from_rays(int d, const std::vector<IntVec>& rays) {
    check_vectors(d, rays, "ray");
    if (rank(rays) < static_cast<std::size_t>(d))
        fail(ErrorKind::NotFullDimensional, "rays do not span R^" + std::to_string(d));
    auto normals = extreme_rays(big_rows(rays));
    if (rank(normals) < static_cast<std::size_t>(d))
        fail(ErrorKind::NotPointed, "the cone generated by the rays contains a line");
    auto extreme = extreme_rays(normals);
    return Cone(d, small_rows(extreme), small_rows(normals));
}

Cone Cone::from_normals(int d, const std::vector<IntVec>& normals) {
    check_vectors(d, normals, "normal");
    if (rank(normals) < static_cast<std::size_t>(d))
        fail(ErrorKind::NotPointed, "the normals do not span: the cone contains a line");
    auto rays = extreme_rays(big_rows(normals));
    if (rank(rays) < static_cast<std::size_t>(d))
        fail(ErrorKind::NotFullDimensional, "the cone cut out by the normals is not full-dimensional");
    auto irredundant = extreme_rays(rays);
    return Cone(d, small_rows(rays), small_rows(irredundant));
}

bool Cone::contains(std::span<const Rat> u) const {
    if (u.size() != static_cast<std::size_t>(dim_)) fail(ErrorKind::DimensionMismatch, "point dimension mismatch");
    for (const auto& n : normals_)
        if (dot(n, u) < 0) return false;
    return true;
}

bool Cone::contains(std::span<const std::int64_t> u) const {
    if (u.size() != static_cast<std::size_t>(dim_)) fail(ErrorKind::DimensionMismatch, "point dimension mismatch");
    return contains_unchecked(u.data());
}

IntVec Cone::truncating_vector() const {
    IntVec a(static_cast<std::size_t>(dim_), 0);
    for (const auto& n : normals_)
        for (std::size_t j = 0; j < a.size(); ++j) a[j] += n[j];
    return primitive(std::move(a));
}

TruncatingHalfspace TruncatingHalfspace::make(const Cone& cone, IntVec a, Rat alpha) {
    if (a.size() != static_cast<std::size_t>(cone.dim())) fail(ErrorKind::DimensionMismatch, "truncating vector dimension mismatch");
    for (const auto& r : cone.rays())
        if (dot(r, a) <= 0)
            fail(ErrorKind::NotTruncating, "vector " + to_string(a) + " is not positive on ray " + to_string(r));
    if (alpha <= 0) fail(ErrorKind::NotTruncating, "truncation bound must be positive");
    std::int64_t g = 0;
    for (auto x : a) g = std::gcd(g, std::abs(x));
    for (auto& x : a) x /= g;
    return {std::move(a), alpha / g};
}

TruncatingHalfspace TruncatingHalfspace::standard(const Cone& cone, Rat alpha) {
    return make(cone, cone.truncating_vector(), std::move(alpha));
}

Halfspace Halfspace::make(IntVec normal, Rat bound, bool open) {
    if (is_zero(normal)) fail(ErrorKind::InvalidArgument, "halfspace normal must be nonzero");
    std::int64_t g = 0;
    for (auto x : normal) g = std::gcd(g, std::abs(x));
    for (auto& x : normal) x /= g;
    return {std::move(normal), bound / g, open};
}

std::vector<RatVec> truncation_vertices(const Cone& cone, const TruncatingHalfspace& h) {
    std::vector<RatVec> out;
    out.emplace_back(static_cast<std::size_t>(cone.dim()), Rat(0));
    for (const auto& r : cone.rays()) {
        std::int64_t s = dot(r, h.a);
        if (s <= 0) fail(ErrorKind::NotTruncating, "ray " + to_string(r) + " is not cut by the halfspace");
        Rat t = h.alpha / s;
        RatVec v;
        for (auto x : r) v.push_back(t * x);
        out.push_back(std::move(v));
    }
    return out;
}

IntVec LatticeTransform::to_sublattice(std::span<const std::int64_t> v) const {
    const std::size_t d = basis.size();
    if (v.size() != d) fail(ErrorKind::DimensionMismatch, "vector dimension mismatch");
    IntVec c(d);
    for (std::size_t j = 0; j < d; ++j) {
        Rat s = 0;
        for (std::size_t i = 0; i < d; ++i) s += inverse_basis[i][j] * v[i];
        if (denominator(s) != 1)
            fail(ErrorKind::RayNotInLattice, "vector " + to_string(IntVec(v.begin(), v.end())) + " is not in the sublattice");
        c[j] = to_int64(numerator(s));
    }
    return c;
}

IntVec LatticeTransform::to_ambient(std::span<const std::int64_t> c) const {
    const std::size_t d = basis.size();
    IntVec v(d, 0);
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t i = 0; i < d; ++i) v[i] += c[j] * basis[j][i];
    return v;
}

IntVec LatticeTransform::pull_back_functional(std::span<const std::int64_t> n) const {
    IntVec out(basis.size());
    for (std::size_t j = 0; j < basis.size(); ++j) out[j] = dot(basis[j], n);
    return out;
}

LatticeTransform lattice_transform(int d, const std::vector<IntVec>& basis) {
    if (basis.size() != static_cast<std::size_t>(d)) fail(ErrorKind::DimensionMismatch, "basis must have d rows");
    for (const auto& b : basis)
        if (b.size() != static_cast<std::size_t>(d)) fail(ErrorKind::DimensionMismatch, "basis row dimension mismatch");
    auto inv = inverse(basis);
    if (inv.empty()) fail(ErrorKind::SingularBasis, "sublattice basis is singular");
    std::vector<BigVec> big;
    for (const auto& b : basis) big.push_back(to_big(b));
    return LatticeTransform{basis, inv, abs(determinant(big))};
}

NormalizedCone lattice_normalize(int d, const std::vector<IntVec>& basis, const std::vector<IntVec>& rays) {
    LatticeTransform t = lattice_transform(d, basis);
    std::vector<IntVec> local;
    for (const auto& r : rays) local.push_back(t.to_sublattice(r));
    return {Cone::from_rays(d, local), std::move(t)};
}

}  // namespace pbody::geometry
