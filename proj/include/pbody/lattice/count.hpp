#pragma once

#include <cstdint>
#include <optional>

#include "pbody/lattice/enumerate.hpp"
#include "pbody/psystem/psystem.hpp"

namespace pbody::lattice {

struct CountRecord {
    int e = 0;
    std::int64_t q = 1;
    std::uint64_t count = 0;                // #(T_q ∩ qH)
    std::optional<std::uint64_t> colength;  // #(S \ T_q)
    int dim = 0;

    /// count / q^d and colength / q^d, exact.
    Rat normalized_count() const;
    std::optional<Rat> normalized_colength() const;
};

/// #{ u ∈ C ∩ Z^d : <u, a> < q alpha, u ∈ T_q }.
std::uint64_t count_members(const psystem::PSystem& ps, std::int64_t q, const TruncatingHalfspace& h, int workers = 1);

/// Every point of S \ T_q has <u, a> below this value (a = truncating vector):
/// the sum over rays r of k_r <r, a>, k_r least with k_r r ∈ T_q.
/// Throws NotPrimary when some ray never enters T_q.
std::int64_t colength_bound(const psystem::PSystem& ps, std::int64_t q);

/// #(S \ T_q), exact. Throws NotPrimary.
std::uint64_t colength(const psystem::PSystem& ps, std::int64_t q, int workers = 1);

}  // namespace pbody::lattice
