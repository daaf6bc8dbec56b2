#include <algorithm>

#include "pbody/geometry/double_description.hpp"
#include "pbody/geometry/staircase.hpp"
#include "pbody/geometry/volume.hpp"
#include "pbody/oracle/oracle.hpp"
#include "support.hpp"

using namespace test;
using geometry::Halfspace;
using geometry::RegionSpec;
using geometry::TruncatingHalfspace;

namespace {

Rat exact_volume(const Cone& c, std::vector<IntVec> u) { return *geometry::region_volume_exact({c, std::move(u), std::nullopt}).value; }

std::vector<geometry::Inequality> fsig_rows(const Cone& c) {
    std::vector<geometry::Inequality> rows;
    for (const auto& n : c.normals()) {
        IntVec neg(n.size());
        for (std::size_t j = 0; j < n.size(); ++j) neg[j] = -n[j];
        rows.push_back({neg, Rat(0)});
        rows.push_back({n, Rat(1)});
    }
    return rows;
}

}  // namespace

TEST_CASE("rational helpers") {
    CHECK(to_string(parse_rat("6/4")) == "3/2");
    CHECK(to_string(parse_rat("-2")) == "-2");
    CHECK(to_decimal(Rat(2, 3)) == "0.666666666667");
    CHECK(to_decimal(Rat(-1, 8), 2) == "-0.13");
    CHECK(kind_of([] { parse_rat("1/0"); }) == ErrorKind::ParseError);
    CHECK(kind_of([] { ipow(2, 70); }) == ErrorKind::Overflow);
    CHECK(determinant({{Int(2), Int(1)}, {Int(1), Int(3)}}) == 5);
}

TEST_CASE("cone from rays") {
    auto o = Cone::from_rays(2, {{1, 0}, {0, 1}});
    CHECK(o.normals() == std::vector<IntVec>{{0, 1}, {1, 0}});
    auto c = Cone::from_rays(2, {{2, -1}, {0, 1}});
    CHECK(c.normals() == std::vector<IntVec>{{1, 0}, {1, 2}});
    auto r = Cone::from_rays(2, {{1, 0}, {1, 1}, {0, 1}});
    CHECK(r.rays() == std::vector<IntVec>{{0, 1}, {1, 0}});
    CHECK(r.normals() == std::vector<IntVec>{{0, 1}, {1, 0}});

    CHECK(kind_of([] { Cone::from_rays(2, {{1, 0}, {2, 0}}); }) == ErrorKind::NotFullDimensional);
    CHECK(kind_of([] { Cone::from_rays(2, {{1, 0}, {-1, 0}, {0, 1}}); }) == ErrorKind::NotPointed);
    CHECK(kind_of([] { Cone::from_rays(2, {{1, 0, 0}, {0, 1}}); }) == ErrorKind::DimensionMismatch);
}

TEST_CASE("cone from normals") {
    CHECK(Cone::from_normals(2, {{1, 0}, {0, 1}}).rays() == std::vector<IntVec>{{0, 1}, {1, 0}});
    CHECK(Cone::from_normals(2, {{1, 0}, {1, 2}}).rays() == std::vector<IntVec>{{0, 1}, {2, -1}});
    CHECK(Cone::from_normals(2, {{0, 1}, {3, -1}}).rays() == std::vector<IntVec>{{1, 0}, {1, 3}});
    CHECK(kind_of([] { Cone::from_normals(2, {{1, 0}}); }) == ErrorKind::NotPointed);
}

TEST_CASE("containment") {
    CHECK(orthant().contains(IntVec{3, 5}));
    CHECK_FALSE(a1().contains(IntVec{1, -1}));
    CHECK(a1().contains(IntVec{0, 0}));
    CHECK(a1().contains(RatVec{Rat(1), Rat(-1, 2)}));
    CHECK(kind_of([] { orthant().contains(IntVec{1, 2, 3}); }) == ErrorKind::DimensionMismatch);
}

TEST_CASE("truncating vector and vertices") {
    CHECK(orthant().truncating_vector() == IntVec{1, 1});
    CHECK(Cone::from_normals(2, {{1, 0}, {1, 2}}).truncating_vector() == IntVec{1, 1});
    CHECK(orthant(3).truncating_vector() == IntVec{1, 1, 1});

    auto v = geometry::truncation_vertices(orthant(), TruncatingHalfspace::make(orthant(), {1, 1}, 2));
    std::sort(v.begin(), v.end());
    CHECK(v == std::vector<RatVec>{{0, 0}, {0, 2}, {2, 0}});
    auto w = geometry::truncation_vertices(a1(), TruncatingHalfspace::make(a1(), {1, 1}, 1));
    std::sort(w.begin(), w.end());
    CHECK(w == std::vector<RatVec>{{0, 0}, {0, 1}, {2, -1}});
    auto x = geometry::truncation_vertices(orthant(3), TruncatingHalfspace::make(orthant(3), {1, 1, 1}, 3));
    CHECK(x.size() == 4);
    CHECK(std::count(x.begin(), x.end(), RatVec{3, 0, 0}) == 1);
    CHECK(kind_of([] { TruncatingHalfspace::make(a1(), {1, 0}, 1); }) == ErrorKind::NotTruncating);
    // Scaling a is absorbed by alpha.
    auto h = TruncatingHalfspace::make(orthant(), {2, 2}, 3);
    CHECK(h.a == IntVec{1, 1});
    CHECK(h.alpha == Rat(3, 2));
}

TEST_CASE("halfspace normalization") {
    auto h = Halfspace::make({2, 4}, Rat(3));
    CHECK(h.normal == IntVec{1, 2});
    CHECK(h.bound == Rat(3, 2));
    CHECK(kind_of([] { Halfspace::make({0, 0}, Rat(1)); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("exact region volume") {
    CHECK(exact_volume(orthant(), {{1, 0}, {0, 1}}) == 1);
    CHECK(exact_volume(orthant(), {{2, 0}, {1, 1}, {0, 2}}) == 3);
    CHECK(exact_volume(a1(), {{2, -1}, {1, 0}, {0, 1}}) == Rat(3, 2));
    CHECK(exact_volume(orthant(3), {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}) == 1);
    CHECK(exact_volume(orthant(3), {{2, 0, 0}, {0, 2, 0}, {0, 0, 2}, {1, 1, 1}}) == 7);
    CHECK(kind_of([] { exact_volume(orthant(), {{1, 0}}); }) == ErrorKind::Unbounded);
    CHECK(kind_of([] { exact_volume(orthant(5), {{1, 0, 0, 0, 0}}); }) == ErrorKind::DimensionTooLarge);
    CHECK(kind_of([] { exact_volume(a1(), {{1, -1}}); }) == ErrorKind::GeneratorOutsideSemigroup);
    // Clipping by a halfspace.
    auto clipped = geometry::region_volume_exact({orthant(), {{2, 0}, {0, 2}}, Halfspace::make({1, 1}, Rat(2), false)});
    CHECK(*clipped.value == 2);
}

TEST_CASE("exact polytope volume") {
    CHECK(geometry::polytope_volume_exact(2, fsig_rows(orthant())) == 1);
    CHECK(geometry::polytope_volume_exact(2, fsig_rows(Cone::from_normals(2, {{1, 0}, {1, 2}}))) == Rat(1, 2));
    CHECK(geometry::polytope_volume_exact(2, fsig_rows(Cone::from_normals(2, {{0, 1}, {3, -1}}))) == Rat(1, 3));
    CHECK(geometry::polytope_volume_exact(2, std::vector<RatVec>{{0, 0}, {1, 0}, {0, 1}}) == Rat(1, 2));
    CHECK(geometry::polytope_volume_exact(3, std::vector<RatVec>{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}}) == Rat(1, 6));
    CHECK(kind_of([] { geometry::polytope_volume_exact(2, std::vector<geometry::Inequality>{{{1, 0}, Rat(1)}, {{-1, 0}, Rat(0)}}); }) ==
          ErrorKind::Unbounded);
}

TEST_CASE("Monte Carlo volume") {
    auto sq = geometry::region_volume_monte_carlo({orthant(), {{1, 0}, {0, 1}}, std::nullopt}, 1'000'000, 11);
    CHECK(std::abs(sq.mean - 1.0) <= 3 * sq.standard_error + 1e-12);
    auto p = geometry::polytope_volume_monte_carlo(2, fsig_rows(Cone::from_normals(2, {{1, 0}, {1, 2}})), 1'000'000, 12);
    CHECK(p.standard_error > 0);
    CHECK(std::abs(p.mean - 0.5) <= 3 * p.standard_error);
    auto empty = geometry::region_volume_monte_carlo({orthant(), {{0, 0}}, std::nullopt}, 1000, 1);
    REQUIRE(empty.value);
    CHECK(*empty.value == 0);
    CHECK(empty.mean == 0);
    CHECK(kind_of([] { geometry::region_volume_monte_carlo({orthant(), {{1, 0}}, std::nullopt}, 10, 1); }) == ErrorKind::Unbounded);

    auto w1 = geometry::region_volume_monte_carlo({a1(), {{2, -1}, {1, 0}, {0, 1}}, std::nullopt}, 200'000, 5, 1);
    auto w4 = geometry::region_volume_monte_carlo({a1(), {{2, -1}, {1, 0}, {0, 1}}, std::nullopt}, 200'000, 5, 4);
    CHECK(w1.mean == w4.mean);
    CHECK(w1.standard_error == w4.standard_error);
}

TEST_CASE("lattice normalization") {
    auto nc = geometry::lattice_normalize(2, {{1, 1}, {0, 2}}, {{2, 0}, {0, 2}});
    CHECK(nc.cone.rays() == std::vector<IntVec>{{0, 1}, {2, -1}});
    CHECK(nc.transform.index == 2);
    auto id = geometry::lattice_normalize(2, {{1, 0}, {0, 1}}, {{1, 0}, {0, 1}});
    CHECK(id.transform.to_sublattice(IntVec{3, -4}) == IntVec{3, -4});
    auto tall = geometry::lattice_normalize(2, {{1, 0}, {0, 3}}, {{1, 0}, {0, 3}});
    CHECK(tall.cone.rays() == std::vector<IntVec>{{0, 1}, {1, 0}});
    CHECK(tall.transform.to_ambient(IntVec{0, 1}) == IntVec{0, 3});
    CHECK(tall.transform.pull_back_functional(IntVec{1, 1}) == IntVec{1, 3});
    CHECK(kind_of([] { geometry::lattice_normalize(2, {{1, 2}, {2, 4}}, {{1, 0}}); }) == ErrorKind::SingularBasis);
    CHECK(kind_of([] { geometry::lattice_normalize(2, {{1, 0}, {0, 3}}, {{0, 1}, {1, 0}}); }) == ErrorKind::RayNotInLattice);
}

TEST_CASE("property: dual pair is consistent and round-trips") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 60; ++trial) {
        const int d = 2 + trial % 2;
        Cone c = random_cone(rng, d, 1 + trial % 3);
        // Every normal is valid on every ray and tight on d - 1 independent rays; every ray tight on d - 1 normals.
        for (const auto& n : c.normals()) {
            std::vector<IntVec> tight;
            for (const auto& r : c.rays()) {
                CHECK(dot(r, n) >= 0);
                if (dot(r, n) == 0) tight.push_back(r);
            }
            CHECK(rank(tight) == static_cast<std::size_t>(d - 1));
        }
        for (const auto& r : c.rays()) {
            std::vector<IntVec> tight;
            for (const auto& n : c.normals())
                if (dot(r, n) == 0) tight.push_back(n);
            CHECK(rank(tight) == static_cast<std::size_t>(d - 1));
        }
        Cone back = Cone::from_normals(d, c.normals());
        CHECK(back == c);
        std::uniform_int_distribution<int> num(-20, 20), den(1, 7);
        for (int i = 0; i < 1000 / 60 + 1; ++i) {
            RatVec x(static_cast<std::size_t>(d));
            for (auto& v : x) v = Rat(num(rng), den(rng));
            CHECK(c.contains(x) == back.contains(x));
        }
        auto a = c.truncating_vector();
        for (const auto& r : c.rays()) CHECK(dot(r, a) > 0);
    }
}

TEST_CASE("property: exact volume invariances") {
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<int> coord(0, 6);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<IntVec> u = {{coord(rng) + 1, 0}, {0, coord(rng) + 1}};
        const int extra = trial % 4;
        for (int i = 0; i < extra; ++i) u.push_back({coord(rng), coord(rng)});
        const Rat v = exact_volume(orthant(), u);
        // Staircases of the orthant are unions of unit boxes: the lattice count is the area.
        CHECK(Rat(static_cast<std::int64_t>(oracle::naive_colength(u, 1, orthant()))) == v);
        auto perm = u;
        std::shuffle(perm.begin(), perm.end(), rng);
        CHECK(exact_volume(orthant(), perm) == v);
        auto red = u;
        red.push_back({u[0][0] + 1, u[0][1] + 2});
        CHECK(exact_volume(orthant(), red) == v);
        for (int k = 1; k <= 3; ++k) {
            std::vector<IntVec> scaled;
            for (const auto& g : u) scaled.push_back({k * g[0], k * g[1]});
            CHECK(exact_volume(orthant(), scaled) == v * k * k);
        }
        auto zero = u;
        zero.push_back({0, 0});
        CHECK(exact_volume(orthant(), zero) == 0);
    }
}

TEST_CASE("property: exact volume agrees with Monte Carlo within 4 standard errors") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 12; ++trial) {
        const int d = 2 + trial % 2;
        Cone c = random_cone(rng, d, trial % 2, 2);
        auto gens = c.rays();
        std::uniform_int_distribution<int> mult(1, 3);
        for (auto& g : gens) {
            const int k = mult(rng);
            for (auto& x : g) x *= k;
        }
        auto hb = c.rays();
        for (const auto& r : hb) {
            IntVec m(r.size());
            for (std::size_t j = 0; j < m.size(); ++j) m[j] = r[j] + hb.front()[j];
            gens.push_back(m);
        }
        RegionSpec region{c, gens, std::nullopt};
        const Rat exact = *geometry::region_volume_exact(region).value;
        auto mc = geometry::region_volume_monte_carlo(region, 400'000, 100 + static_cast<std::uint64_t>(trial));
        CHECK(std::abs(mc.mean - to_double(exact)) <= 4 * mc.standard_error + 1e-9);
        for (int k = 2; k <= 3; ++k) {
            std::vector<IntVec> scaled;
            for (const auto& g : gens) {
                IntVec s = g;
                for (auto& x : s) x *= k;
                scaled.push_back(s);
            }
            Rat f = 1;
            for (int i = 0; i < d; ++i) f *= k;
            CHECK(exact_volume(c, scaled) == exact * f);
        }
    }
}

TEST_CASE("property: region cells have disjoint interiors covering the region") {
    auto cells = geometry::region_cells({a1(), {{2, -1}, {1, 0}, {0, 1}}, std::nullopt});
    Rat total = 0;
    for (const auto& c : cells) total += c.volume();
    CHECK(total == Rat(3, 2));
    // Independent midpoint grid agrees to grid accuracy.
    auto region = oracle::hk_region(a1(), {{2, -1}, {1, 0}, {0, 1}});
    CHECK(std::abs(oracle::riemann_volume(region, oracle::enclosing_grid(a1(), region, 100)) - 1.5) < 0.05);
}

TEST_CASE("double description extreme rays") {
    auto rays = geometry::extreme_rays({{Int(1), Int(0), Int(0)}, {Int(0), Int(1), Int(0)}, {Int(0), Int(0), Int(1)}, {Int(1), Int(1), Int(-1)}});
    CHECK(rays.size() == 4);
}
