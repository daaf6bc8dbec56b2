#pragma once

#include <random>

#include <doctest.h>

#include "pbody/error.hpp"
#include "pbody/geometry/cone.hpp"

namespace test {

using namespace pbody;
using geometry::Cone;

inline Cone orthant(int d = 2) {
    std::vector<IntVec> rays;
    for (int i = 0; i < d; ++i) {
        IntVec r(static_cast<std::size_t>(d), 0);
        r[static_cast<std::size_t>(i)] = 1;
        rays.push_back(r);
    }
    return Cone::from_rays(d, rays);
}

inline Cone a1() { return Cone::from_rays(2, {{2, -1}, {0, 1}}); }

template <class F>
ErrorKind kind_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an error");
    return ErrorKind::InvalidArgument;
}

// Random full-dimensional pointed cone in the positive orthant's neighbourhood:
// rays with positive last-coordinate sum so a = (1, ..., 1) style truncation works.
inline Cone random_cone(std::mt19937_64& rng, int d, int extra = 1, int span = 3) {
    std::uniform_int_distribution<int> coord(-span, span);
    for (;;) {
        std::vector<IntVec> rays;
        const int n = d + extra;
        for (int i = 0; i < n; ++i) {
            IntVec r(static_cast<std::size_t>(d));
            for (auto& x : r) x = coord(rng);
            r[static_cast<std::size_t>(i % d)] = std::abs(r[static_cast<std::size_t>(i % d)]) + 1;
            rays.push_back(r);
        }
        try {
            return Cone::from_rays(d, rays);
        } catch (const Error&) {
        }
    }
}

}  // namespace test
