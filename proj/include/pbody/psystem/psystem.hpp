#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pbody/geometry/cone.hpp"

namespace pbody::psystem {

using geometry::Cone;

enum class Kind { Frobenius, Constant, FSignature, Sum, Shifted, Saturation2d, Custom };
std::string_view kind_name(Kind k);

struct MembershipWitness;

/// A p-system of semigroup ideals T_q ⊆ S = C ∩ Z^d, indexed by q = p^e.
class PSystem {
public:
    /// T_q = qU + S.
    static PSystem frobenius(const Cone& cone, int p, std::vector<IntVec> generators);
    /// T_q = U + S.
    static PSystem constant(const Cone& cone, int p, std::vector<IntVec> generators);
    /// T_q = S \ qP with P = { 0 <= <u, v_i> < 1 } over the facet normals.
    static PSystem fsignature(const Cone& cone, int p);
    /// T_q = sum of the terms' T_q.
    static PSystem sum(std::vector<PSystem> terms);
    /// u ∈ T_q iff u + (ceil(lambda q) - 1) w ∈ inner T_q.
    static PSystem shifted(PSystem inner, IntVec w, Rat lambda);
    /// Saturation of inner T_q in a planar cone. The bound caps generic ray
    /// searches; by default 4 * (max generator coordinate) * q.
    static PSystem saturation2d(PSystem inner, std::optional<std::int64_t> bound = std::nullopt);
    /// T_{p^e} = lists[e] + S for listed e, then T_{pq} = p T_q + S.
    static PSystem custom(const Cone& cone, int p, std::vector<std::vector<IntVec>> lists);

    Kind kind() const;
    int prime() const;
    const Cone& cone() const;
    int dim() const { return cone().dim(); }

    /// Exact membership; checks that q is a power of p and u ∈ S.
    bool member(std::int64_t q, std::span<const std::int64_t> u, MembershipWitness* witness = nullptr) const;
    /// Membership without argument checks.
    bool contains(std::int64_t q, const std::int64_t* u) const;

    /// Minimal generators of T_q when the family has an explicit staircase.
    std::optional<std::vector<IntVec>> generators(std::int64_t q) const;

    /// Least k >= 0 with u + k r ∈ T_q (r ∈ S); empty when no multiple enters.
    /// Families without a closed form search up to an internal cap and throw
    /// BoundExhausted past it.
    std::optional<std::int64_t> entry(std::int64_t q, std::span<const std::int64_t> u,
                                      std::span<const std::int64_t> r) const;

    // Variant data.
    const std::vector<IntVec>& base_generators() const;
    const std::vector<PSystem>& terms() const;
    const PSystem& inner() const;
    const IntVec& shift() const;
    const Rat& lambda() const;
    const std::vector<std::vector<IntVec>>& lists() const;
    std::optional<std::int64_t> saturation_bound() const;

    /// Shift amount ceil(lambda q) - 1 of a Shifted family.
    std::int64_t shift_steps(std::int64_t q) const;

    struct Node;

private:
    explicit PSystem(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

/// Throws InvalidArgument unless q is a positive power of p.
void check_power(int p, std::int64_t q);

/// Three-valued answer of the saturation test.
enum class Tri { No, Yes, Indeterminate };

/// u ∈ sat(T_q) iff u + k r1 and u + k r2 lie in T_q for some k <= bound.
Tri saturation2d_member(const PSystem& inner, std::int64_t q, std::span<const std::int64_t> u,
                        std::optional<std::int64_t> bound = std::nullopt);

/// Evidence for a membership answer that can be rechecked with inequalities.
struct MembershipWitness {
    enum class Evidence { Generator, Facet, Decomposition, Shift, Saturation, Refutation };
    std::int64_t q = 1;
    IntVec u;
    bool member = false;
    Evidence evidence = Evidence::Refutation;
    IntVec generator;                  // Generator: u - generator ∈ C
    std::size_t facet = 0;             // Facet: <u, v_facet> >= q
    std::vector<std::int64_t> values;  // Facet/Refutation of FSignature: all <u, v_i>
    IntVec first, second;              // Decomposition: u = first + second
    IntVec shifted;                    // Shift: the translated point
    std::int64_t k = 0;                // Saturation: both deep translates enter
    // Refutation against explicit generators: for each generator a facet it violates.
    std::vector<std::pair<IntVec, std::size_t>> refutations;

    /// Rechecks the evidence against the family.
    bool verify(const PSystem& ps) const;
};

struct AxiomViolation {
    enum class Type { Frobenius, Ideal };
    Type type;
    std::int64_t q;
    IntVec u;
    IntVec s;  // Ideal: the added semigroup element
};

struct AxiomResult {
    bool pass = true;
    std::optional<AxiomViolation> witness;
    std::uint64_t points_checked = 0;
    std::uint64_t ideal_pairs_checked = 0;
};

/// Checks p T_q ⊆ T_{pq} on every u ∈ T_q ∩ qH for e = 0..e_max-1 and the
/// ideal property on sampled pairs (u, s) with s from the Hilbert basis
/// (the extreme rays when d > 3). Returns the first counterexample.
AxiomResult validate_axiom(const PSystem& ps, int e_max, const geometry::TruncatingHalfspace& h);

}  // namespace pbody::psystem
