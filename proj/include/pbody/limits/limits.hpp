#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pbody/geometry/polytope.hpp"
#include "pbody/lattice/count.hpp"
#include "pbody/psystem/psystem.hpp"

namespace pbody::limits {

using geometry::Cone;
using geometry::TruncatingHalfspace;
using lattice::CountRecord;
using psystem::PSystem;

enum class Mode { Truncation, Colength };

struct VolumeReport {
    std::vector<CountRecord> records;  // e = 1..e_max
    Rat limit_estimate = 0;            // last normalized value, or the exact value
    std::string limit_method = "last-value";
    std::optional<Rat> exact;
    std::string certification;  // formula that produced the exact value
    std::vector<std::string> superadditivity_violations;
    bool monotone_tail = true;  // |normalized - exact| nonincreasing along the records
};

/// Records for q = p, ..., p^e_max. Every record carries the truncation count
/// over h; colength mode adds #(S \ T_q). Throws NotPrimary in colength mode
/// for families with infinite complement.
VolumeReport volume_sequence(const PSystem& ps, int e_max, const TruncatingHalfspace& h, Mode mode, int workers = 1);

/// Attaches an exact limit; the estimate becomes the exact value.
void attach_exact(VolumeReport& report, const Rat& value, std::string certification);

/// vol(C \ (U + C)). Throws Unbounded, DimensionTooLarge.
Rat hk_exact(const Cone& cone, const std::vector<IntVec>& generators);

/// Rows of { u : 0 <= <u, v_i> <= 1 for all facet normals v_i }.
std::vector<geometry::Inequality> fsig_polytope(const Cone& cone);
/// Volume of fsig_polytope(cone).
Rat fsig_exact(const Cone& cone);

/// Colength sequence of the shifted F-signature family.
VolumeReport fsig_pair(const Cone& cone, int p, const IntVec& w, const Rat& lambda, int e_max, int workers = 1);

/// Length #(sat(T_q) \ T_q) for T_q = qU + S, d = 2. Records: count is the
/// truncation count of the Frobenius family in the standard halfspace,
/// colength is the length.
VolumeReport eghk_2d(const Cone& cone, int p, const std::vector<IntVec>& generators, int e_max, int workers = 1);

/// Every u ∈ sat(T_q) \ T_q lies in S \ (sum of the cq-th power of the maximal ideal)
/// for q = p^0..p^e_max; the m-order is computed exactly over the generators.
struct IntersectionResult {
    bool pass = true;
    std::int64_t q = 0;  // first failing q
    IntVec witness;
    std::int64_t order = 0;  // m-order of the witness
    std::uint64_t points_checked = 0;
};
IntersectionResult intersection_condition_check(const Cone& cone, int p, const std::vector<IntVec>& generators,
                                                std::int64_t c, int e_max,
                                                const std::optional<std::vector<IntVec>>& m_generators = std::nullopt);

enum class Positivity { Positive, Zero, Indeterminate };
std::string_view positivity_name(Positivity v);

struct PositivityResult {
    Positivity verdict = Positivity::Indeterminate;
    std::int64_t certificate = 0;  // least q∘ found
    std::string reason;
    std::optional<Rat> lower_bound;  // vol(C ∩ {<u,a> < min_g <g,a> / q∘}) when positive, d <= 4
};

/// Searches q∘ = p^0..p^qo_max_e with T_{q q∘} ⊆ qG + S for q = p^0..p^e_max.
PositivityResult positivity_check(const PSystem& ps, int e_max, int qo_max_e,
                                  const std::optional<std::vector<IntVec>>& m_generators = std::nullopt);

struct BrunnMinkowskiReport {
    Rat v1, v2, v12;
    bool exact = false;
    bool holds = false;
    double lhs = 0;  // v1^(1/d) + v2^(1/d)
    double rhs = 0;  // v12^(1/d)
};

/// vol(I)^(1/d) + vol(J)^(1/d) >= vol(IJ)^(1/d).
BrunnMinkowskiReport brunn_minkowski_check(const PSystem& ps1, const PSystem& ps2, int e_max, int workers = 1);

/// Exact decision of a^(1/d) + b^(1/d) >= c^(1/d) for nonnegative rationals;
/// unresolvable near-equality is reported as holding.
bool root_sum_at_least(const Rat& a, const Rat& b, const Rat& c, int d);

}  // namespace pbody::limits
