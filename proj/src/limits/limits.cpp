#include "pbody/limits/limits.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "pbody/error.hpp"
#include "pbody/geometry/staircase.hpp"
#include "pbody/geometry/volume.hpp"
#include "pbody/lattice/hilbert_basis.hpp"

namespace pbody::limits {

namespace {

Rat abs_rat(const Rat& r) { return r < 0 ? Rat(-r) : r; }

void check_e_max(int e_max) {
    if (e_max < 1) fail(ErrorKind::InvalidArgument, "e_max must be at least 1");
}

void diagnose(VolumeReport& report) {
    for (std::size_t i = 1; i < report.records.size(); ++i) {
        const auto& prev = report.records[i - 1];
        const auto& cur = report.records[i];
        if (cur.count < prev.count)
            report.superadditivity_violations.push_back("count(" + std::to_string(cur.q) + ") = " +
                                                        std::to_string(cur.count) + " < count(" +
                                                        std::to_string(prev.q) + ") = " + std::to_string(prev.count));
    }
}

std::vector<IntVec> m_generators_or_basis(const Cone& cone, const std::optional<std::vector<IntVec>>& given) {
    if (given) {
        if (given->empty()) fail(ErrorKind::EmptyGenerators, "maximal ideal generator list is empty");
        for (const auto& g : *given)
            if (g.size() != static_cast<std::size_t>(cone.dim()) || !cone.contains(g) || is_zero(g))
                fail(ErrorKind::GeneratorOutsideSemigroup, "maximal ideal generator " + to_string(g) + " is invalid");
        return *given;
    }
    return lattice::hilbert_basis(cone).elements;
}

}  // namespace

VolumeReport volume_sequence(const PSystem& ps, int e_max, const TruncatingHalfspace& h, Mode mode, int workers) {
    check_e_max(e_max);
    VolumeReport report;
    std::int64_t q = 1;
    for (int e = 1; e <= e_max; ++e) {
        q = q * ps.prime();
        CountRecord rec;
        rec.e = e;
        rec.q = q;
        rec.dim = ps.dim();
        rec.count = lattice::count_members(ps, q, h, workers);
        if (mode == Mode::Colength) rec.colength = lattice::colength(ps, q, workers);
        report.records.push_back(rec);
    }
    const auto& last = report.records.back();
    report.limit_estimate = mode == Mode::Colength ? *last.normalized_colength() : last.normalized_count();
    diagnose(report);
    return report;
}

void attach_exact(VolumeReport& report, const Rat& value, std::string certification) {
    report.exact = value;
    report.certification = std::move(certification);
    report.limit_estimate = value;
    report.limit_method = "exact";
    std::optional<Rat> prev;
    for (const auto& r : report.records) {
        auto norm = r.normalized_colength();
        if (!norm) continue;
        Rat err = abs_rat(*norm - value);
        if (prev && err > *prev) report.monotone_tail = false;
        prev = err;
    }
}

Rat hk_exact(const Cone& cone, const std::vector<IntVec>& generators) {
    if (generators.empty()) fail(ErrorKind::EmptyGenerators, "generator list is empty");
    return *geometry::region_volume_exact({cone, generators, std::nullopt}).value;
}

std::vector<geometry::Inequality> fsig_polytope(const Cone& cone) {
    std::vector<geometry::Inequality> rows;
    for (const auto& n : cone.normals()) {
        IntVec neg(n.size());
        for (std::size_t j = 0; j < n.size(); ++j) neg[j] = -n[j];
        rows.push_back({neg, Rat(0)});
        rows.push_back({n, Rat(1)});
    }
    return rows;
}

Rat fsig_exact(const Cone& cone) { return geometry::polytope_volume_exact(cone.dim(), fsig_polytope(cone)); }

VolumeReport fsig_pair(const Cone& cone, int p, const IntVec& w, const Rat& lambda, int e_max, int workers) {
    if (w.size() != static_cast<std::size_t>(cone.dim())) fail(ErrorKind::DimensionMismatch, "shift has the wrong dimension");
    if (is_zero(w)) fail(ErrorKind::InvalidArgument, "shift must be nonzero");
    auto ps = PSystem::shifted(PSystem::fsignature(cone, p), w, lambda);
    return volume_sequence(ps, e_max, TruncatingHalfspace::standard(cone), Mode::Colength, workers);
}

namespace {

void check_planar(const Cone& cone) {
    if (cone.dim() != 2) fail(ErrorKind::DimensionNotTwo, "generalized Hilbert-Kunz lengths need dimension 2");
}

// Every point of sat(T) \ T has <u, a> below this bound, T = G + S planar.
Rat saturation_gap_bound(const Cone& cone, const std::vector<IntVec>& gens, const IntVec& a) {
    const auto& rays = cone.rays();
    const auto& normals = cone.normals();
    Rat bound = 0;
    for (std::size_t i = 0; i < 2; ++i) {
        // Facet normal vanishing on the other ray measures the coordinate along rays[i].
        const IntVec& other = rays[1 - i];
        const IntVec* facet = nullptr;
        for (const auto& n : normals)
            if (dot(n, other) == 0) facet = &n;
        const std::int64_t unit = dot(rays[i], *facet);
        Rat m = 0;
        for (const auto& g : gens) m = std::max(m, Rat(dot(g, *facet), unit));
        bound += m * dot(rays[i], a);
    }
    return bound;
}

struct GapScan {
    std::uint64_t length = 0;
    std::vector<IntVec> points;
};

GapScan saturation_gap(const PSystem& frob, std::int64_t q, bool keep_points, int workers) {
    const Cone& cone = frob.cone();
    const IntVec a = cone.truncating_vector();
    auto gens = *frob.generators(q);
    Rat bound = saturation_gap_bound(cone, gens, a);
    GapScan scan;
    if (bound == 0) return scan;
    auto en = lattice::truncation_enumerator(cone, a, lattice::strict_bound(bound, 1));
    auto in_gap = [&](const std::int64_t* u) {
        if (frob.contains(q, u)) return false;
        auto t = psystem::saturation2d_member(frob, q, std::span<const std::int64_t>(u, 2));
        if (t == psystem::Tri::Indeterminate)
            fail(ErrorKind::BoundExhausted, "saturation test indeterminate at " + to_string(IntVec(u, u + 2)));
        return t == psystem::Tri::Yes;
    };
    if (!keep_points) {
        scan.length = en.count_if(in_gap, workers);
        return scan;
    }
    en.for_each([&](const std::int64_t* u) {
        if (in_gap(u)) scan.points.emplace_back(u, u + 2);
    });
    scan.length = scan.points.size();
    return scan;
}

}  // namespace

VolumeReport eghk_2d(const Cone& cone, int p, const std::vector<IntVec>& generators, int e_max, int workers) {
    check_planar(cone);
    check_e_max(e_max);
    auto frob = PSystem::frobenius(cone, p, generators);
    auto h = TruncatingHalfspace::standard(cone);
    VolumeReport report;
    std::int64_t q = 1;
    for (int e = 1; e <= e_max; ++e) {
        q *= p;
        CountRecord rec;
        rec.e = e;
        rec.q = q;
        rec.dim = 2;
        rec.count = lattice::count_members(frob, q, h, workers);
        rec.colength = saturation_gap(frob, q, false, workers).length;
        report.records.push_back(rec);
    }
    report.limit_estimate = *report.records.back().normalized_colength();
    // Primary ideals are saturated to S, so the length is the colength.
    const IntVec origin(2, 0);
    bool primary = true;
    for (const auto& r : cone.rays()) primary = primary && frob.entry(1, origin, r).has_value();
    if (primary) attach_exact(report, hk_exact(cone, generators), "region_volume_exact");
    diagnose(report);
    return report;
}

IntersectionResult intersection_condition_check(const Cone& cone, int p, const std::vector<IntVec>& generators,
                                                std::int64_t c, int e_max,
                                                const std::optional<std::vector<IntVec>>& m_generators) {
    check_planar(cone);
    if (c < 1) fail(ErrorKind::InvalidArgument, "c must be positive");
    if (e_max < 0) fail(ErrorKind::InvalidArgument, "e_max must be nonnegative");
    const auto mgens = m_generators_or_basis(cone, m_generators);
    auto frob = PSystem::frobenius(cone, p, generators);
    const IntVec a = cone.truncating_vector();
    IntersectionResult result;
    std::int64_t q = 1;
    for (int e = 0; e <= e_max; ++e, q *= p) {
        auto gap = saturation_gap(frob, q, true, 1);
        if (gap.points.empty()) continue;
        // m-order over the region below the largest gap point.
        std::int64_t top = 0;
        for (const auto& u : gap.points) top = std::max(top, dot(u, a));
        std::map<IntVec, std::int64_t> order;
        std::vector<std::pair<std::int64_t, IntVec>> pts;
        lattice::truncation_enumerator(cone, a, top).for_each([&](const std::int64_t* x) {
            IntVec v(x, x + 2);
            pts.emplace_back(dot(v, a), std::move(v));
        });
        std::stable_sort(pts.begin(), pts.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
        for (const auto& [level, x] : pts) {
            std::int64_t best = 0;
            for (const auto& g : mgens) {
                IntVec y{x[0] - g[0], x[1] - g[1]};
                auto it = order.find(y);
                if (it != order.end()) best = std::max(best, it->second + 1);
            }
            order[x] = best;
        }
        for (const auto& u : gap.points) {
            ++result.points_checked;
            const std::int64_t ord = order.at(u);
            if (ord >= c * q) {
                result.pass = false;
                result.q = q;
                result.witness = u;
                result.order = ord;
                return result;
            }
        }
    }
    return result;
}

std::string_view positivity_name(Positivity v) {
    switch (v) {
        case Positivity::Positive: return "positive";
        case Positivity::Zero: return "zero";
        case Positivity::Indeterminate: return "indeterminate";
    }
    return "unknown";
}

PositivityResult positivity_check(const PSystem& ps, int e_max, int qo_max_e,
                                  const std::optional<std::vector<IntVec>>& m_generators) {
    const Cone& cone = ps.cone();
    lattice::colength_bound(ps, 1);  // NotPrimary
    PositivityResult result;
    if (ps.kind() == psystem::Kind::Constant) {
        result.verdict = Positivity::Zero;
        result.reason = "constant family: the body is the whole cone";
        return result;
    }
    if (ps.kind() == psystem::Kind::Frobenius) {
        for (const auto& g : ps.base_generators()) {
            if (is_zero(g)) {
                result.verdict = Positivity::Zero;
                result.reason = "Frobenius family contains the origin: every T_q is S";
                return result;
            }
        }
    }
    const auto gens = m_generators_or_basis(cone, m_generators);
    const IntVec a = cone.truncating_vector();
    const Rat beta = *geometry::complement_bound(cone, gens, a);
    const int p = ps.prime();
    std::int64_t qo = 1;
    for (int eo = 0; eo <= qo_max_e; ++eo, qo *= p) {
        bool ok = true;
        std::int64_t q = 1;
        for (int e = 0; e <= e_max && ok; ++e, q *= p) {
            // Points of S outside qG + S have <u, a> < q beta.
            auto target = PSystem::frobenius(cone, p, gens);
            auto en = lattice::truncation_enumerator(cone, a, lattice::strict_bound(beta, q));
            std::uint64_t bad = en.count_if([&](const std::int64_t* u) {
                return ps.contains(q * qo, u) && !target.contains(q, u);
            });
            ok = bad == 0;
        }
        if (ok) {
            result.verdict = Positivity::Positive;
            result.certificate = qo;
            result.reason = "T_{q q0} lies in qG + S for every tested q";
            if (cone.dim() <= geometry::kMaxExactVolumeDim) {
                std::int64_t low = dot(gens.front(), a);
                for (const auto& g : gens) low = std::min(low, dot(g, a));
                std::vector<geometry::Inequality> rows;
                for (const auto& n : cone.normals()) {
                    IntVec neg(n.size());
                    for (std::size_t j = 0; j < n.size(); ++j) neg[j] = -n[j];
                    rows.push_back({neg, Rat(0)});
                }
                rows.push_back({a, Rat(low, qo)});
                result.lower_bound = geometry::polytope_volume_exact(cone.dim(), rows);
            }
            return result;
        }
    }
    result.verdict = Positivity::Indeterminate;
    result.reason = "no certificate up to q0 = " + std::to_string(qo / p);
    return result;
}

bool root_sum_at_least(const Rat& a, const Rat& b, const Rat& c, int d) {
    if (a < 0 || b < 0 || c < 0) fail(ErrorKind::InvalidArgument, "volumes must be nonnegative");
    if (d < 1) fail(ErrorKind::InvalidArgument, "dimension must be positive");
    if (c == 0) return true;
    if (a == 0) return b >= c;
    if (b == 0) return a >= c;
    if (d == 1) return a + b >= c;
    if (d == 2) {
        Rat t = c - a - b;
        return t <= 0 || 4 * a * b >= t * t;
    }
    auto power = [d](const Rat& x) {
        Rat r = 1;
        for (int i = 0; i < d; ++i) r *= x;
        return r;
    };
    struct Interval {
        Rat lo, hi;
    };
    auto start = [](const Rat& x) { return Interval{Rat(0), x > 1 ? x : Rat(1)}; };
    auto refine = [&](Interval& iv, const Rat& x) {
        Rat mid = (iv.lo + iv.hi) / 2;
        if (power(mid) <= x) {
            iv.lo = mid;
        } else {
            iv.hi = mid;
        }
    };
    Interval ia = start(a), ib = start(b), ic = start(c);
    for (int it = 0; it < 160; ++it) {
        if (ia.lo + ib.lo >= ic.hi) return true;
        if (ia.hi + ib.hi < ic.lo) return false;
        refine(ia, a);
        refine(ib, b);
        refine(ic, c);
    }
    return true;
}

BrunnMinkowskiReport brunn_minkowski_check(const PSystem& ps1, const PSystem& ps2, int e_max, int workers) {
    if (!(ps1.cone() == ps2.cone())) fail(ErrorKind::InvalidArgument, "families live on different cones");
    const Cone& cone = ps1.cone();
    const int d = cone.dim();
    lattice::colength_bound(ps1, 1);
    lattice::colength_bound(ps2, 1);
    BrunnMinkowskiReport rep;
    if (ps1.kind() == psystem::Kind::Frobenius && ps2.kind() == psystem::Kind::Frobenius && d <= geometry::kMaxExactVolumeDim) {
        rep.exact = true;
        rep.v1 = hk_exact(cone, ps1.base_generators());
        rep.v2 = hk_exact(cone, ps2.base_generators());
        rep.v12 = hk_exact(cone, geometry::minkowski_sum(cone, ps1.base_generators(), ps2.base_generators()));
    } else {
        auto h = TruncatingHalfspace::standard(cone);
        rep.v1 = volume_sequence(ps1, e_max, h, Mode::Colength, workers).limit_estimate;
        rep.v2 = volume_sequence(ps2, e_max, h, Mode::Colength, workers).limit_estimate;
        rep.v12 = volume_sequence(PSystem::sum({ps1, ps2}), e_max, h, Mode::Colength, workers).limit_estimate;
    }
    rep.holds = root_sum_at_least(rep.v1, rep.v2, rep.v12, d);
    const double inv = 1.0 / d;
    rep.lhs = std::pow(to_double(rep.v1), inv) + std::pow(to_double(rep.v2), inv);
    rep.rhs = std::pow(to_double(rep.v12), inv);
    return rep;
}

}  // namespace pbody::limits
