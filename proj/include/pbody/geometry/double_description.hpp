#pragma once

#include <cstddef>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "pbody/rational.hpp"

namespace pbody::geometry {

/// Incremental double-description state for a pointed polyhedral cone
/// { x : <row, x> >= 0 for every constraint row }.
///
/// Rays are kept primitive; each ray carries the set of constraint indices it
/// makes tight. Adjacency uses the combinatorial test: two rays are adjacent
/// iff no third ray is tight on every constraint they share.
class DoubleDescription {
public:
    using Bits = boost::dynamic_bitset<>;

    /// Requires the rows to have full rank (the cone is pointed); throws
    /// NotPointed otherwise.
    static DoubleDescription from_constraints(const std::vector<BigVec>& rows);

    void add_constraint(BigVec row);

    std::size_t dim() const { return dim_; }
    const std::vector<BigVec>& rays() const { return rays_; }
    const std::vector<BigVec>& constraints() const { return constraints_; }
    const Bits& tight(std::size_t ray) const { return tight_[ray]; }
    bool empty() const { return rays_.empty(); }

private:
    explicit DoubleDescription(std::size_t dim) : dim_(dim) {}

    std::size_t dim_;
    std::vector<BigVec> constraints_;
    std::vector<BigVec> rays_;
    std::vector<Bits> tight_;
};

/// Extreme rays of { x : <row, x> >= 0 }, primitive and sorted.
std::vector<BigVec> extreme_rays(const std::vector<BigVec>& rows);

}  // namespace pbody::geometry
