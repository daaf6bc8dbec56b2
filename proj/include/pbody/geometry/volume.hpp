#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "pbody/geometry/cone.hpp"
#include "pbody/geometry/polytope.hpp"

namespace pbody::geometry {

/// The region C \ (U + C), optionally intersected with a halfspace.
struct RegionSpec {
    Cone cone;
    std::vector<IntVec> removed;
    std::optional<Halfspace> clip;
};

enum class VolumeMethod { Arrangement, ClosedForm, MonteCarlo };
std::string_view method_name(VolumeMethod m);

struct VolumeResult {
    std::optional<Rat> value;  // present for exact methods
    double mean = 0;
    double standard_error = 0;
    VolumeMethod method = VolumeMethod::Arrangement;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    std::size_t cells = 0;  // arrangement cells kept
};

inline constexpr int kMaxExactVolumeDim = 4;

/// Exact volume of a bounded region C \ (U + C) by cell decomposition.
/// Throws Unbounded when U + C is not cofinite in C, DimensionTooLarge for d > 4.
VolumeResult region_volume_exact(const RegionSpec& region);

/// The cells of the decomposition (disjoint interiors, union = region).
std::vector<Polytope> region_cells(const RegionSpec& region);

/// Box-rejection estimate; deterministic for a given seed regardless of the
/// worker count (samples are split into fixed chunks seeded seed + chunk).
VolumeResult region_volume_monte_carlo(const RegionSpec& region, std::uint64_t samples, std::uint64_t seed, int workers = 1);
VolumeResult polytope_volume_monte_carlo(int d, const std::vector<Inequality>& rows, std::uint64_t samples,
                                         std::uint64_t seed, int workers = 1);

/// Shared estimator over an explicit box and a membership test.
VolumeResult monte_carlo_volume(const std::vector<double>& lo, const std::vector<double>& hi,
                                const std::function<bool(const double*)>& inside, std::uint64_t samples,
                                std::uint64_t seed, int workers = 1);

}  // namespace pbody::geometry
