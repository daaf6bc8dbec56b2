#include <algorithm>
#include <cmath>

#include "pbody/lattice/count.hpp"
#include "pbody/limits/limits.hpp"
#include "pbody/oracle/oracle.hpp"
#include "support.hpp"

using namespace test;
using geometry::TruncatingHalfspace;
using limits::Mode;
using psystem::PSystem;

namespace {

TruncatingHalfspace unit_h(const Cone& c) { return TruncatingHalfspace::make(c, c.truncating_vector(), 1); }

const std::vector<IntVec> kA1Max = {{2, -1}, {1, 0}, {0, 1}};

// Random m-primary generator set: a multiple of each ray plus a few interior points.
std::vector<IntVec> random_primary(std::mt19937_64& rng, const Cone& c, int span) {
    std::uniform_int_distribution<int> mult(1, span), coin(0, 1);
    std::vector<IntVec> u;
    for (const auto& r : c.rays()) {
        IntVec g = r;
        const int k = mult(rng);
        for (auto& x : g) x *= k;
        u.push_back(g);
    }
    for (int i = 0; i < 2; ++i) {
        IntVec g(static_cast<std::size_t>(c.dim()), 0);
        for (const auto& r : c.rays())
            if (coin(rng))
                for (std::size_t j = 0; j < g.size(); ++j) g[j] += r[j];
        if (std::any_of(g.begin(), g.end(), [](std::int64_t x) { return x != 0; })) u.push_back(g);
    }
    return u;
}

}  // namespace

TEST_CASE("volume sequences") {
    auto f = limits::volume_sequence(PSystem::fsignature(orthant(), 2), 6, unit_h(orthant()), Mode::Colength);
    REQUIRE(f.records.size() == 6);
    for (const auto& r : f.records) CHECK(*r.normalized_colength() == 1);
    CHECK(f.records.front().e == 1);
    CHECK(f.records.back().q == 64);
    CHECK(f.limit_method == "last-value");

    auto hk = limits::volume_sequence(PSystem::frobenius(orthant(), 3, {{2, 0}, {1, 1}, {0, 2}}), 4, unit_h(orthant()), Mode::Colength);
    for (const auto& r : hk.records) CHECK(*r.normalized_colength() == 3);
    CHECK(hk.superadditivity_violations.empty());

    auto a1seq = limits::volume_sequence(PSystem::frobenius(a1(), 2, kA1Max), 10, unit_h(a1()), Mode::Colength);
    const Rat last = *a1seq.records.back().normalized_colength();
    CHECK(abs(last - Rat(3, 2)) <= Rat(3, 200));
    limits::attach_exact(a1seq, limits::hk_exact(a1(), kA1Max), "region_volume_exact");
    CHECK(a1seq.limit_method == "exact");
    CHECK(a1seq.limit_estimate == Rat(3, 2));
    CHECK(a1seq.monotone_tail);

    auto trunc = limits::volume_sequence(PSystem::frobenius(orthant(), 2, {{1, 0}}), 4, unit_h(orthant()), Mode::Truncation);
    for (const auto& r : trunc.records) CHECK_FALSE(r.colength.has_value());
    CHECK(kind_of([] { limits::volume_sequence(PSystem::frobenius(orthant(), 2, {{1, 0}}), 3, unit_h(orthant()), Mode::Colength); }) ==
          ErrorKind::NotPrimary);
}

TEST_CASE("exact volumes") {
    CHECK(limits::hk_exact(orthant(), {{1, 0}, {0, 1}}) == 1);
    CHECK(limits::hk_exact(orthant(), {{2, 0}, {1, 1}, {0, 2}}) == 3);
    CHECK(limits::hk_exact(a1(), kA1Max) == Rat(3, 2));
    CHECK(limits::fsig_exact(orthant()) == 1);
    CHECK(limits::fsig_exact(Cone::from_normals(2, {{1, 0}, {1, 2}})) == Rat(1, 2));
    CHECK(limits::fsig_exact(Cone::from_normals(2, {{0, 1}, {3, -1}})) == Rat(1, 3));
    CHECK(kind_of([] { limits::fsig_exact(orthant(5)); }) == ErrorKind::DimensionTooLarge);
    CHECK(kind_of([] { limits::hk_exact(orthant(), {{1, 0}}); }) == ErrorKind::Unbounded);
}

TEST_CASE("F-signature of pairs") {
    auto r = limits::fsig_pair(orthant(), 2, {1, 0}, Rat(1, 2), 8);
    for (const auto& rec : r.records) {
        // S \ T_q is the box [0, q - ceil(q/2) + 1) x [0, q).
        const std::int64_t q = rec.q;
        CHECK(*rec.colength == static_cast<std::uint64_t>((q - (q + 1) / 2 + 1) * q));
        if (q <= 16) CHECK(*rec.colength == oracle::naive_colength(PSystem::shifted(PSystem::fsignature(orthant(), 2), {1, 0}, Rat(1, 2)), q));
    }
    CHECK(abs(*r.records.back().normalized_colength() - Rat(1, 2)) <= Rat(1, 256));

    auto tiny = limits::fsig_pair(orthant(), 2, {1, 0}, Rat(1, 1024), 10);
    CHECK(*tiny.records.back().normalized_colength() == 1);

    auto diag = limits::fsig_pair(orthant(), 3, {1, 1}, Rat(1, 2), 5);
    const Rat v = *diag.records.back().normalized_colength();
    CHECK(v > 0);
    CHECK(v < 1);
    for (const auto& rec : diag.records)
        if (rec.q <= 27) CHECK(*rec.colength == oracle::naive_colength(PSystem::shifted(PSystem::fsignature(orthant(), 3), {1, 1}, Rat(1, 2)), rec.q));
    CHECK(kind_of([] { limits::fsig_pair(orthant(), 2, {0, 0}, Rat(1, 2), 3); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("generalized HK in the plane") {
    auto r = limits::eghk_2d(orthant(), 2, {{2, 0}, {1, 1}}, 6);
    for (const auto& rec : r.records) CHECK(*rec.colength == static_cast<std::uint64_t>(rec.q * rec.q));
    CHECK(r.limit_estimate == 1);
    auto principal = limits::eghk_2d(orthant(), 3, {{1, 0}}, 4);
    for (const auto& rec : principal.records) CHECK(*rec.colength == 0);
    CHECK(kind_of([] { limits::eghk_2d(orthant(3), 2, {{1, 0, 0}}, 2); }) == ErrorKind::DimensionNotTwo);

    auto ok = limits::intersection_condition_check(orthant(), 2, {{2, 0}, {1, 1}}, 3, 6);
    CHECK(ok.pass);
    CHECK(ok.points_checked > 0);
    CHECK(limits::intersection_condition_check(orthant(), 2, {{1, 0}}, 3, 6).pass);
    CHECK(limits::intersection_condition_check(orthant(), 2, {{1, 0}, {0, 1}}, 3, 6).pass);
    // With c = 1 the class x^q y^(q-1) has order 2q - 1 >= q.
    auto bad = limits::intersection_condition_check(orthant(), 2, {{2, 0}, {1, 1}}, 1, 3);
    CHECK_FALSE(bad.pass);
    CHECK(bad.order >= bad.q);
}

TEST_CASE("positivity") {
    auto frob = limits::positivity_check(PSystem::frobenius(orthant(), 2, {{2, 0}, {1, 1}, {0, 2}}), 4, 3);
    CHECK(frob.verdict == limits::Positivity::Positive);
    CHECK(frob.certificate == 1);
    auto zero = limits::positivity_check(PSystem::constant(orthant(), 2, {{0, 0}}), 4, 3);
    CHECK(zero.verdict == limits::Positivity::Zero);
    auto fz = limits::positivity_check(PSystem::frobenius(orthant(), 2, {{0, 0}}), 4, 3);
    CHECK(fz.verdict == limits::Positivity::Zero);
    auto fs = limits::positivity_check(PSystem::fsignature(orthant(), 2), 4, 3);
    CHECK(fs.verdict == limits::Positivity::Positive);
    CHECK(fs.certificate == 1);
    CHECK(limits::positivity_name(limits::Positivity::Indeterminate) == "indeterminate");
    auto cst = limits::positivity_check(PSystem::constant(orthant(), 2, {{1, 0}, {0, 1}}), 3, 2);
    CHECK(cst.verdict == limits::Positivity::Zero);
    // A single custom list extends to the Frobenius powers of m.
    auto slow = limits::positivity_check(PSystem::custom(orthant(), 2, {{{1, 0}, {0, 1}}}), 3, 2);
    CHECK(slow.verdict == limits::Positivity::Positive);
}

TEST_CASE("Brunn-Minkowski") {
    auto m = PSystem::frobenius(orthant(), 2, {{1, 0}, {0, 1}});
    auto r = limits::brunn_minkowski_check(m, m, 4);
    CHECK(r.exact);
    CHECK(r.v1 == 1);
    CHECK(r.v2 == 1);
    CHECK(r.v12 == 3);
    CHECK(r.holds);
    CHECK(r.lhs == doctest::Approx(2.0));
    CHECK(r.rhs == doctest::Approx(std::sqrt(3.0)));

    auto s = PSystem::constant(orthant(), 2, {{0, 0}});
    auto e = limits::brunn_minkowski_check(m, s, 4);
    CHECK(e.v2 == 0);
    CHECK(e.holds);
    CHECK(e.lhs == doctest::Approx(e.rhs));
}

TEST_CASE("exact root comparison") {
    CHECK(limits::root_sum_at_least(1, 1, 3, 2));
    CHECK(limits::root_sum_at_least(1, 1, 4, 2));
    CHECK_FALSE(limits::root_sum_at_least(1, 1, Rat(401, 100), 2));
    CHECK(limits::root_sum_at_least(1, 1, 8, 3));
    CHECK_FALSE(limits::root_sum_at_least(1, 1, Rat(8001, 1000), 3));
    CHECK(limits::root_sum_at_least(0, 0, 0, 4));
    CHECK(limits::root_sum_at_least(Rat(1, 3), 0, Rat(1, 3), 3));
    CHECK_FALSE(limits::root_sum_at_least(Rat(1, 3), 0, Rat(1, 2), 3));
    CHECK(limits::root_sum_at_least(16, 1, 81, 4));
    CHECK_FALSE(limits::root_sum_at_least(16, 1, 82, 4));
}

TEST_CASE("property: normalized colength approaches the exact volume like 1/q") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 10; ++trial) {
        const int p = std::array{2, 3}[trial % 2];
        const int e_max = p == 2 ? 8 : 6;
        Cone c = trial < 2 ? (trial == 0 ? orthant() : a1()) : random_cone(rng, 2, 0, 2);
        auto u = random_primary(rng, c, 3);
        auto ps = PSystem::frobenius(c, p, u);
        const Rat exact = limits::hk_exact(c, u);
        auto seq = limits::volume_sequence(ps, e_max, unit_h(c), Mode::Colength);
        CHECK(seq.superadditivity_violations.empty());
        auto err = [&](std::size_t i) { return abs(*seq.records[i].normalized_colength() - exact) * seq.records[i].q; };
        const Rat kappa = std::max(err(2), err(3));
        for (std::size_t i = 4; i < seq.records.size(); ++i) CHECK(err(i) <= kappa);
    }
}

TEST_CASE("property: eghk of a primary family is the HK multiplicity") {
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 6; ++trial) {
        Cone c = random_cone(rng, 2, 0, 2);
        auto u = random_primary(rng, c, 2);
        auto r = limits::eghk_2d(c, 2, u, 5);
        auto seq = limits::volume_sequence(PSystem::frobenius(c, 2, u), 5, unit_h(c), Mode::Colength);
        for (std::size_t i = 0; i < r.records.size(); ++i) CHECK(r.records[i].colength == seq.records[i].colength);
        REQUIRE(r.exact);
        CHECK(*r.exact == limits::hk_exact(c, u));
    }
}

TEST_CASE("property: positive verdicts bound colengths from below") {
    std::mt19937_64 rng(47);
    for (int trial = 0; trial < 8; ++trial) {
        Cone c = trial == 0 ? orthant() : random_cone(rng, 2, trial % 2, 2);
        auto ps = trial % 3 == 0 ? PSystem::fsignature(c, 2) : PSystem::frobenius(c, 2, random_primary(rng, c, 3));
        auto res = limits::positivity_check(ps, 4, 3);
        REQUIRE(res.verdict == limits::Positivity::Positive);
        REQUIRE(res.lower_bound);
        CHECK(*res.lower_bound > 0);
        auto seq = limits::volume_sequence(ps, 6, unit_h(c), Mode::Colength);
        for (const auto& rec : seq.records) CHECK(*rec.normalized_colength() >= *res.lower_bound);
    }
}

TEST_CASE("property: Brunn-Minkowski on random Frobenius pairs") {
    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 40; ++trial) {
        const int d = trial % 5 == 4 ? 3 : 2;
        Cone c = d == 2 ? orthant() : orthant(3);
        auto a = random_primary(rng, c, 5), b = random_primary(rng, c, 5);
        auto r = limits::brunn_minkowski_check(PSystem::frobenius(c, 2, a), PSystem::frobenius(c, 2, b), 3);
        CHECK(r.exact);
        CHECK(r.holds);
        CHECK(r.lhs >= r.rhs - 1e-9);
    }
}
