#pragma once

#include <cstdint>
#include <vector>

#include "pbody/geometry/cone.hpp"
#include "pbody/psystem/psystem.hpp"

// Brute-force reference implementations. Nothing here calls the enumeration,
// staircase or membership code of the main library; only plain data (rays,
// normals, generator lists) is read from its objects.
namespace pbody::oracle {

inline constexpr std::uint64_t kMaxBoxPoints = 10'000'000;

/// Membership re-derived from the variant definitions.
bool naive_member(const psystem::PSystem& ps, std::int64_t q, const IntVec& u);

/// Full box scan of #{ u ∈ C ∩ Z^d : <u, a> < q alpha, u ∈ T_q }. BoxTooLarge past 10^7 points.
std::uint64_t naive_count(const psystem::PSystem& ps, std::int64_t q, const geometry::TruncatingHalfspace& h);

/// #(S \ (qU + S)) by scanning a box certified by stepping along each ray.
std::uint64_t naive_colength(const std::vector<IntVec>& generators, std::int64_t q, const geometry::Cone& cone);

/// #(S \ T_q) for any family, with the same stepping certificate.
std::uint64_t naive_colength(const psystem::PSystem& ps, std::int64_t q);

/// Integer box [lo, hi] subdivided into cells of side 1/k.
struct GridSpec {
    IntVec lo;
    IntVec hi;
    std::int64_t k = 1;
};

/// ∩ { <n, x> <= b } minus the union of the translates u + C.
struct GridRegion {
    std::vector<std::pair<IntVec, Rat>> halfspaces;
    std::vector<IntVec> removed;
    std::vector<IntVec> cone_normals;  // C for the removed translates
};

GridRegion hk_region(const geometry::Cone& cone, const std::vector<IntVec>& generators);
GridRegion fsig_region(const geometry::Cone& cone);
/// Integer box enclosing the region (from the cone data, independently).
GridSpec enclosing_grid(const geometry::Cone& cone, const GridRegion& region, std::int64_t k);

/// Midpoint rule: cells whose centre lies in the region, times 1/k^d.
double riemann_volume(const GridRegion& region, const GridSpec& grid);

struct Squeeze {
    Rat lower;  // cells certified inside
    Rat upper;  // cells not certified outside
};
Squeeze riemann_squeeze(const GridRegion& region, const GridSpec& grid);

}  // namespace pbody::oracle
