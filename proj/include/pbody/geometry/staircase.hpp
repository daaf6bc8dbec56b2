#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pbody/geometry/cone.hpp"

namespace pbody::geometry {

// Helpers for staircase sets G + C, the exponent sets of monomial ideals.

/// True iff u - g lies in the cone for some g in G.
bool in_staircase(const Cone& cone, std::span<const IntVec> generators, std::span<const std::int64_t> u);

/// Least k >= 0 with u + k * direction in G + C, computed facet by facet;
/// empty when no multiple ever enters. The direction must lie in the cone.
std::optional<std::int64_t> least_entry(const Cone& cone, std::span<const IntVec> generators,
                                        std::span<const std::int64_t> u, std::span<const std::int64_t> direction);

/// Drops every generator lying in another's translate of the cone (first
/// occurrence kept among equals); result sorted.
std::vector<IntVec> minimal_generators(const Cone& cone, std::vector<IntVec> generators);

/// Minkowski sum of two generator sets, minimalized.
std::vector<IntVec> minkowski_sum(const Cone& cone, std::span<const IntVec> a, std::span<const IntVec> b);

/// Per-ray least multiples k_r with k_r * r in G + C; empty when some ray
/// never enters (G + C is not cofinite in C).
std::optional<std::vector<std::int64_t>> ray_multiples(const Cone& cone, std::span<const IntVec> generators);

/// sum_r k_r <r, a>: every point of C outside G + C has <x, a> strictly
/// below this value. Empty when G + C is not cofinite.
std::optional<Rat> complement_bound(const Cone& cone, std::span<const IntVec> generators, std::span<const std::int64_t> a);

}  // namespace pbody::geometry
