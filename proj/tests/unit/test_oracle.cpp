#include "pbody/lattice/count.hpp"
#include "pbody/limits/limits.hpp"
#include "pbody/oracle/oracle.hpp"
#include "support.hpp"

using namespace test;
using geometry::TruncatingHalfspace;
using psystem::PSystem;

namespace {

TruncatingHalfspace trunc(const Cone& c, Rat alpha) { return TruncatingHalfspace::make(c, c.truncating_vector(), alpha); }

}  // namespace

TEST_CASE("naive counts") {
    CHECK(oracle::naive_count(PSystem::frobenius(orthant(), 2, {{1, 0}, {0, 1}}), 1, trunc(orthant(), 3)) == 5);
    CHECK(oracle::naive_count(PSystem::constant(orthant(), 2, {{0, 0}}), 1, trunc(orthant(), 2)) == 3);
    auto f = PSystem::fsignature(orthant(), 2);
    CHECK(oracle::naive_count(f, 2, trunc(orthant(), 4)) == lattice::count_members(f, 2, trunc(orthant(), 4)));
    CHECK(kind_of([] { oracle::naive_count(PSystem::fsignature(orthant(3), 2), 1024, trunc(orthant(3), 1)); }) == ErrorKind::BoxTooLarge);
}

TEST_CASE("naive colengths") {
    CHECK(oracle::naive_colength({{1, 0}, {0, 1}}, 4, orthant()) == 16);
    CHECK(oracle::naive_colength({{2, 0}, {1, 1}, {0, 2}}, 2, orthant()) == 12);
    // Regression anchor: the six points (0,0),(0,1),(1,0),(1,1),(2,-1),(3,-1).
    CHECK(oracle::naive_colength({{2, -1}, {1, 0}, {0, 1}}, 2, a1()) == 6);
    CHECK(oracle::naive_colength(PSystem::fsignature(a1(), 2), 4) == 8);
    CHECK(kind_of([] { oracle::naive_colength({{1, 0}}, 2, orthant()); }) == ErrorKind::NotPrimary);
}

TEST_CASE("naive membership") {
    auto sum = PSystem::sum({PSystem::frobenius(orthant(), 2, {{1, 0}}), PSystem::fsignature(orthant(), 2)});
    CHECK(oracle::naive_member(sum, 2, {4, 0}));
    CHECK_FALSE(oracle::naive_member(sum, 2, {3, 0}));
    CHECK_FALSE(oracle::naive_member(sum, 2, {2, 1}));
    CHECK(oracle::naive_member(sum, 2, {2, 2}));
    auto sh = PSystem::shifted(PSystem::fsignature(orthant(), 2), {1, 0}, Rat(1, 2));
    CHECK(oracle::naive_member(sh, 8, {5, 0}));
    CHECK_FALSE(oracle::naive_member(sh, 8, {4, 3}));
}

TEST_CASE("Riemann sums") {
    auto sq = oracle::hk_region(orthant(), {{1, 0}, {0, 1}});
    const double v = oracle::riemann_volume(sq, oracle::enclosing_grid(orthant(), sq, 100));
    CHECK(std::abs(v - 1.0) <= 2.0 / 100 * 4);
    auto fs = oracle::fsig_region(Cone::from_normals(2, {{1, 0}, {1, 2}}));
    CHECK(std::abs(oracle::riemann_volume(fs, oracle::enclosing_grid(a1(), fs, 200)) - 0.5) < 0.02);
    auto empty = oracle::hk_region(orthant(), {{0, 0}});
    CHECK(oracle::riemann_volume(empty, oracle::enclosing_grid(orthant(), empty, 50)) == 0.0);
    auto third = oracle::fsig_region(Cone::from_normals(2, {{0, 1}, {3, -1}}));
    CHECK(std::abs(oracle::riemann_volume(third, oracle::enclosing_grid(Cone::from_normals(2, {{0, 1}, {3, -1}}), third, 200)) - 1.0 / 3) <
          0.02);
    auto hk3 = oracle::hk_region(orthant(3), {{2, 0, 0}, {0, 2, 0}, {0, 0, 2}, {1, 1, 1}});
    CHECK(std::abs(oracle::riemann_volume(hk3, oracle::enclosing_grid(orthant(3), hk3, 20)) - 7.0) < 0.3);
}

TEST_CASE("property: squeeze tightens around the exact volume") {
    struct Case {
        Cone cone;
        oracle::GridRegion region;
        Rat exact;
    };
    std::vector<Case> cases;
    cases.push_back({a1(), oracle::hk_region(a1(), {{2, -1}, {1, 0}, {0, 1}}), Rat(3, 2)});
    cases.push_back({orthant(), oracle::hk_region(orthant(), {{3, 0}, {1, 1}, {0, 2}}), limits::hk_exact(orthant(), {{3, 0}, {1, 1}, {0, 2}})});
    auto c3 = Cone::from_normals(2, {{0, 1}, {3, -1}});
    cases.push_back({c3, oracle::fsig_region(c3), Rat(1, 3)});
    for (const auto& c : cases) {
        std::optional<oracle::Squeeze> prev;
        for (std::int64_t k : {50, 100, 200}) {
            auto s = oracle::riemann_squeeze(c.region, oracle::enclosing_grid(c.cone, c.region, k));
            CHECK(s.lower <= c.exact);
            CHECK(c.exact <= s.upper);
            if (prev) {
                CHECK(s.lower >= prev->lower);
                CHECK(s.upper <= prev->upper);
                if (prev->upper > prev->lower) CHECK(s.upper - s.lower < prev->upper - prev->lower);
            }
            prev = s;
        }
    }
}

TEST_CASE("property: oracle equivalence on random instances") {
    std::mt19937_64 rng(61);
    std::uniform_int_distribution<int> mult(1, 3);
    for (int trial = 0; trial < 40; ++trial) {
        const int d = 2 + (trial % 5 == 4);
        const int p = std::array{2, 3}[trial % 2];
        Cone c = random_cone(rng, d, trial % 2, 2);
        std::vector<IntVec> u;
        for (const auto& r : c.rays()) {
            IntVec g = r;
            const int k = mult(rng);
            for (auto& x : g) x *= k;
            u.push_back(g);
        }
        std::vector<PSystem> fams = {PSystem::frobenius(c, p, u), PSystem::fsignature(c, p),
                                     PSystem::sum({PSystem::frobenius(c, p, u), PSystem::fsignature(c, p)})};
        if (d == 2) fams.push_back(PSystem::saturation2d(PSystem::frobenius(c, p, {u.front()})));
        const std::int64_t q = d == 2 ? p * p : p;
        for (const auto& ps : fams) {
            auto h = trunc(c, 2);
            CHECK(oracle::naive_count(ps, q, h) == lattice::count_members(ps, q, h));
        }
        CHECK(oracle::naive_colength(u, q, c) == lattice::colength(fams[0], q));
        CHECK(oracle::naive_colength(fams[1], q) == lattice::colength(fams[1], q));
        // The naive sum scan is quadratic in the box; keep it to q = p in the plane.
        if (d == 2) CHECK(oracle::naive_colength(fams[2], p) == lattice::colength(fams[2], p));
    }
}
