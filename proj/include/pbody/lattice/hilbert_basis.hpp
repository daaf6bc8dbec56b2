#pragma once

#include <optional>
#include <vector>

#include "pbody/geometry/cone.hpp"

namespace pbody::lattice {

struct HilbertBasis {
    std::vector<IntVec> elements;  // sorted
    Rat search_bound;              // bound on <u, a> used for the irreducible search
    Rat verified_bound;            // every S-point up to here decomposes over the elements
};

/// Minimal generating set of C ∩ Z^d for d <= 3. Without an explicit bound
/// the search starts at max_r <r, a> and is raised when verification fails;
/// an explicit bound that fails verification throws BoundTooSmall.
HilbertBasis hilbert_basis(const geometry::Cone& cone, std::optional<Rat> search_bound = std::nullopt);

}  // namespace pbody::lattice
