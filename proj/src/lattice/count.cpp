#include "pbody/lattice/count.hpp"

#include "pbody/error.hpp"

namespace pbody::lattice {

namespace {

Rat over_power(std::uint64_t n, std::int64_t q, int d) {
    Int den = 1;
    for (int i = 0; i < d; ++i) den *= q;
    return Rat(Int(n), den);
}

}  // namespace

Rat CountRecord::normalized_count() const { return over_power(count, q, dim); }

std::optional<Rat> CountRecord::normalized_colength() const {
    if (!colength) return std::nullopt;
    return over_power(*colength, q, dim);
}

std::uint64_t count_members(const psystem::PSystem& ps, std::int64_t q, const TruncatingHalfspace& h, int workers) {
    psystem::check_power(ps.prime(), q);
    auto hs = TruncatingHalfspace::make(ps.cone(), h.a, h.alpha);
    auto en = truncation_enumerator(ps.cone(), hs.a, strict_bound(hs.alpha, q));
    return en.count_if([&](const std::int64_t* u) { return ps.contains(q, u); }, workers);
}

std::int64_t colength_bound(const psystem::PSystem& ps, std::int64_t q) {
    psystem::check_power(ps.prime(), q);
    const Cone& cone = ps.cone();
    const IntVec a = cone.truncating_vector();
    const IntVec origin(static_cast<std::size_t>(cone.dim()), 0);
    std::int64_t bound = 0;
    for (const auto& r : cone.rays()) {
        auto k = ps.entry(q, origin, r);
        if (!k)
            fail(ErrorKind::NotPrimary, "no multiple of ray " + to_string(r) + " lies in T_" + std::to_string(q) +
                                            ": the complement is infinite");
        bound += *k * dot(r, a);
    }
    return bound;
}

std::uint64_t colength(const psystem::PSystem& ps, std::int64_t q, int workers) {
    const std::int64_t bound = colength_bound(ps, q);
    if (bound == 0) return 0;
    auto en = truncation_enumerator(ps.cone(), ps.cone().truncating_vector(), bound - 1);
    return en.count_if([&](const std::int64_t* u) { return !ps.contains(q, u); }, workers);
}

}  // namespace pbody::lattice
