#include "pbody/error.hpp"
#include "pbody/lattice/enumerate.hpp"
#include "pbody/lattice/hilbert_basis.hpp"
#include "pbody/psystem/psystem.hpp"

namespace pbody::psystem {

namespace {

constexpr std::uint64_t kIdealStride = 7;

}  // namespace

AxiomResult validate_axiom(const PSystem& ps, int e_max, const geometry::TruncatingHalfspace& h) {
    const Cone& cone = ps.cone();
    auto hs = geometry::TruncatingHalfspace::make(cone, h.a, h.alpha);
    std::vector<IntVec> steps = cone.dim() <= 3 ? lattice::hilbert_basis(cone).elements : cone.rays();
    const auto d = static_cast<std::size_t>(cone.dim());
    const int p = ps.prime();

    AxiomResult result;
    std::int64_t q = 1;
    for (int e = 0; e < e_max; ++e, q *= p) {
        auto en = lattice::truncation_enumerator(cone, hs.a, lattice::strict_bound(hs.alpha, q));
        std::uint64_t members = 0;
        IntVec pu(d), us(d);
        auto [lo, hi] = en.outer_range();
        for (std::int64_t x0 = lo; x0 <= hi && result.pass; ++x0) {
            en.for_each_slice(x0, [&](const std::int64_t* u) {
                if (!result.pass) return;
                ++result.points_checked;
                if (!ps.contains(q, u)) return;
                for (std::size_t j = 0; j < d; ++j) pu[j] = p * u[j];
                if (!ps.contains(q * p, pu.data())) {
                    result.pass = false;
                    result.witness = AxiomViolation{AxiomViolation::Type::Frobenius, q, IntVec(u, u + d), {}};
                    return;
                }
                if (members++ % kIdealStride != 0) return;
                for (const auto& s : steps) {
                    ++result.ideal_pairs_checked;
                    for (std::size_t j = 0; j < d; ++j) us[j] = u[j] + s[j];
                    if (!ps.contains(q, us.data())) {
                        result.pass = false;
                        result.witness = AxiomViolation{AxiomViolation::Type::Ideal, q, IntVec(u, u + d), s};
                        return;
                    }
                }
            });
        }
        if (!result.pass) break;
    }
    return result;
}

}  // namespace pbody::psystem
