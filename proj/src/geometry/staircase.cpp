#include "pbody/geometry/staircase.hpp"

#include <algorithm>

namespace pbody::geometry {

namespace {

std::int64_t ceil_div(std::int64_t num, std::int64_t den) {
    // den > 0
    std::int64_t q = num / den;
    if (num % den != 0 && num > 0) ++q;
    return q;
}

}  // namespace

bool in_staircase(const Cone& cone, std::span<const IntVec> generators, std::span<const std::int64_t> u) {
    const std::size_t d = u.size();
    std::int64_t diff[kMaxDim];
    for (const auto& g : generators) {
        for (std::size_t j = 0; j < d; ++j) diff[j] = u[j] - g[j];
        if (cone.contains_unchecked(diff)) return true;
    }
    return false;
}

std::optional<std::int64_t> least_entry(const Cone& cone, std::span<const IntVec> generators,
                                        std::span<const std::int64_t> u, std::span<const std::int64_t> direction) {
    std::optional<std::int64_t> best;
    for (const auto& g : generators) {
        std::int64_t k = 0;
        bool feasible = true;
        for (const auto& n : cone.normals()) {
            std::int64_t slope = dot(direction, n);
            std::int64_t gap = dot(g, n) - dot(u, n);  // need k * slope >= gap
            if (slope == 0) {
                if (gap > 0) {
                    feasible = false;
                    break;
                }
            } else {
                k = std::max(k, ceil_div(gap, slope));
            }
        }
        if (feasible && (!best || k < *best)) best = k;
    }
    return best;
}

std::vector<IntVec> minimal_generators(const Cone& cone, std::vector<IntVec> generators) {
    std::sort(generators.begin(), generators.end());
    generators.erase(std::unique(generators.begin(), generators.end()), generators.end());
    std::vector<IntVec> out;
    IntVec diff(static_cast<std::size_t>(cone.dim()));
    for (std::size_t i = 0; i < generators.size(); ++i) {
        bool redundant = false;
        for (std::size_t j = 0; j < generators.size() && !redundant; ++j) {
            if (i == j) continue;
            for (std::size_t k = 0; k < diff.size(); ++k) diff[k] = generators[i][k] - generators[j][k];
            redundant = cone.contains_unchecked(diff.data());
        }
        if (!redundant) out.push_back(generators[i]);
    }
    return out;
}

std::vector<IntVec> minkowski_sum(const Cone& cone, std::span<const IntVec> a, std::span<const IntVec> b) {
    std::vector<IntVec> out;
    for (const auto& x : a) {
        for (const auto& y : b) {
            IntVec s(x.size());
            for (std::size_t j = 0; j < s.size(); ++j) s[j] = x[j] + y[j];
            out.push_back(std::move(s));
        }
    }
    return minimal_generators(cone, std::move(out));
}

std::optional<std::vector<std::int64_t>> ray_multiples(const Cone& cone, std::span<const IntVec> generators) {
    std::vector<std::int64_t> ks;
    IntVec origin(static_cast<std::size_t>(cone.dim()), 0);
    for (const auto& r : cone.rays()) {
        auto k = least_entry(cone, generators, origin, r);
        if (!k) return std::nullopt;
        ks.push_back(*k);
    }
    return ks;
}

std::optional<Rat> complement_bound(const Cone& cone, std::span<const IntVec> generators, std::span<const std::int64_t> a) {
    auto ks = ray_multiples(cone, generators);
    if (!ks) return std::nullopt;
    Rat beta = 0;
    for (std::size_t i = 0; i < ks->size(); ++i) beta += Rat((*ks)[i]) * dot(cone.rays()[i], a);
    return beta;
}

}  // namespace pbody::geometry
