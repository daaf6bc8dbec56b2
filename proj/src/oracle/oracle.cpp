#include "pbody/oracle/oracle.hpp"

#include <algorithm>
#include <functional>

#include "pbody/error.hpp"

namespace pbody::oracle {

namespace {

using psystem::Kind;
using psystem::PSystem;

bool in_cone(const std::vector<IntVec>& normals, const IntVec& x) {
    for (const auto& n : normals) {
        std::int64_t s = 0;
        for (std::size_t j = 0; j < x.size(); ++j) s += n[j] * x[j];
        if (s < 0) return false;
    }
    return true;
}

bool in_translate(const std::vector<IntVec>& normals, const IntVec& x, const IntVec& g, std::int64_t m) {
    IntVec y(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) y[j] = x[j] - m * g[j];
    return in_cone(normals, y);
}

std::int64_t inner(const IntVec& x, const IntVec& y) {
    std::int64_t s = 0;
    for (std::size_t j = 0; j < x.size(); ++j) s += x[j] * y[j];
    return s;
}

IntVec normal_sum(const std::vector<IntVec>& normals) {
    IntVec s(normals.front().size(), 0);
    for (const auto& n : normals)
        for (std::size_t j = 0; j < s.size(); ++j) s[j] += n[j];
    return s;
}

// Box around { x ∈ C : <x, a> <= level } from the rays.
std::pair<IntVec, IntVec> cone_box(const std::vector<IntVec>& rays, const IntVec& a, const Rat& level) {
    const std::size_t d = a.size();
    IntVec lo(d, 0), hi(d, 0);
    for (const auto& r : rays) {
        const Rat t = level / inner(r, a);
        for (std::size_t j = 0; j < d; ++j) {
            const Rat c = t * r[j];
            lo[j] = std::min(lo[j], static_cast<std::int64_t>(floor_of(c)));
            hi[j] = std::max(hi[j], static_cast<std::int64_t>(ceil_of(c)));
        }
    }
    return {lo, hi};
}

void scan_box(const IntVec& lo, const IntVec& hi, const std::function<void(const IntVec&)>& visit) {
    const std::size_t d = lo.size();
    double size = 1;
    for (std::size_t j = 0; j < d; ++j) size *= static_cast<double>(hi[j] - lo[j] + 1);
    if (size > static_cast<double>(kMaxBoxPoints)) fail(ErrorKind::BoxTooLarge, "oracle box exceeds 10^7 points");
    IntVec x = lo;
    for (;;) {
        visit(x);
        std::size_t j = d;
        while (j > 0) {
            --j;
            if (x[j] < hi[j]) {
                ++x[j];
                for (std::size_t i = j + 1; i < d; ++i) x[i] = lo[i];
                break;
            }
            if (j == 0) return;
        }
    }
}

std::int64_t power_index(int p, std::int64_t q) {
    std::int64_t e = 0;
    while (q > 1) {
        q /= p;
        ++e;
    }
    return e;
}

std::int64_t max_entry(const PSystem& ps) {
    std::int64_t m = 1;
    auto see = [&](const std::vector<IntVec>& gs) {
        for (const auto& g : gs)
            for (auto x : g) m = std::max(m, x < 0 ? -x : x);
    };
    switch (ps.kind()) {
        case Kind::Frobenius:
        case Kind::Constant: see(ps.base_generators()); break;
        case Kind::Custom:
            for (const auto& l : ps.lists()) see(l);
            break;
        case Kind::Sum:
            for (const auto& t : ps.terms()) m = std::max(m, max_entry(t));
            break;
        case Kind::Shifted:
        case Kind::Saturation2d: m = std::max(m, max_entry(ps.inner())); break;
        case Kind::FSignature: break;
    }
    return m;
}

bool member_of_sum(const std::vector<PSystem>& terms, std::size_t from, std::int64_t q, const IntVec& u,
                   const std::vector<IntVec>& normals, const std::vector<IntVec>& rays);

bool member_rec(const PSystem& ps, std::int64_t q, const IntVec& u) {
    const auto& normals = ps.cone().normals();
    switch (ps.kind()) {
        case Kind::Frobenius:
            for (const auto& g : ps.base_generators())
                if (in_translate(normals, u, g, q)) return true;
            return false;
        case Kind::Constant:
            for (const auto& g : ps.base_generators())
                if (in_translate(normals, u, g, 1)) return true;
            return false;
        case Kind::Custom: {
            const auto& lists = ps.lists();
            const std::int64_t e = power_index(ps.prime(), q);
            const auto last = static_cast<std::int64_t>(lists.size()) - 1;
            const auto& list = lists[static_cast<std::size_t>(std::min(e, last))];
            std::int64_t m = 1;
            for (std::int64_t i = last; i < e; ++i) m *= ps.prime();
            for (const auto& g : list)
                if (in_translate(normals, u, g, m)) return true;
            return false;
        }
        case Kind::FSignature:
            for (const auto& n : normals)
                if (inner(u, n) >= q) return true;
            return false;
        case Kind::Sum: return member_of_sum(ps.terms(), 0, q, u, normals, ps.cone().rays());
        case Kind::Shifted: {
            const std::int64_t s = static_cast<std::int64_t>(ceil_of(ps.lambda() * q)) - 1;
            IntVec v = u;
            for (std::size_t j = 0; j < v.size(); ++j) v[j] += s * ps.shift()[j];
            return member_rec(ps.inner(), q, v);
        }
        case Kind::Saturation2d: {
            const auto& rays = ps.cone().rays();
            const std::int64_t cap = ps.saturation_bound() ? *ps.saturation_bound() : 4 * max_entry(ps.inner()) * q;
            for (std::int64_t k = 0; k <= cap; ++k) {
                bool both = true;
                for (const auto& r : rays) {
                    IntVec v = u;
                    for (std::size_t j = 0; j < v.size(); ++j) v[j] += k * r[j];
                    both = both && member_rec(ps.inner(), q, v);
                }
                if (both) return true;
            }
            return false;
        }
    }
    return false;
}

bool member_of_sum(const std::vector<PSystem>& terms, std::size_t from, std::int64_t q, const IntVec& u,
                   const std::vector<IntVec>& normals, const std::vector<IntVec>& rays) {
    if (from + 1 == terms.size()) return member_rec(terms[from], q, u);
    const IntVec a = normal_sum(normals);
    auto [lo, hi] = cone_box(rays, a, Rat(inner(u, a)));
    bool found = false;
    scan_box(lo, hi, [&](const IntVec& x) {
        if (found || !in_cone(normals, x)) return;
        IntVec y(u.size());
        for (std::size_t j = 0; j < y.size(); ++j) y[j] = u[j] - x[j];
        if (!in_cone(normals, y)) return;
        if (member_rec(terms[from], q, x) && member_of_sum(terms, from + 1, q, y, normals, rays)) found = true;
    });
    return found;
}

// Least k with k r ∈ T_q by stepping.
std::int64_t stepping_entry(const PSystem& ps, std::int64_t q, const IntVec& r) {
    const std::int64_t cap = 1'000'000;
    IntVec x(r.size());
    for (std::int64_t k = 0; k <= cap; ++k) {
        for (std::size_t j = 0; j < r.size(); ++j) x[j] = k * r[j];
        if (member_rec(ps, q, x)) return k;
    }
    fail(ErrorKind::NotPrimary, "no ray multiple up to 10^6 enters the ideal");
}

}  // namespace

bool naive_member(const PSystem& ps, std::int64_t q, const IntVec& u) { return member_rec(ps, q, u); }

std::uint64_t naive_count(const PSystem& ps, std::int64_t q, const geometry::TruncatingHalfspace& h) {
    const auto& cone = ps.cone();
    for (const auto& r : cone.rays())
        if (inner(r, h.a) <= 0) fail(ErrorKind::NotTruncating, "vector is not positive on the cone");
    const Rat level = h.alpha * q;
    auto [lo, hi] = cone_box(cone.rays(), h.a, level);
    std::uint64_t count = 0;
    scan_box(lo, hi, [&](const IntVec& x) {
        if (in_cone(cone.normals(), x) && Rat(inner(x, h.a)) < level && member_rec(ps, q, x)) ++count;
    });
    return count;
}

std::uint64_t naive_colength(const PSystem& ps, std::int64_t q) {
    const auto& cone = ps.cone();
    const IntVec a = normal_sum(cone.normals());
    std::int64_t level = 0;
    for (const auto& r : cone.rays()) level += stepping_entry(ps, q, r) * inner(r, a);
    auto [lo, hi] = cone_box(cone.rays(), a, Rat(level));
    std::uint64_t count = 0;
    scan_box(lo, hi, [&](const IntVec& x) {
        if (in_cone(cone.normals(), x) && inner(x, a) < level && !member_rec(ps, q, x)) ++count;
    });
    return count;
}

std::uint64_t naive_colength(const std::vector<IntVec>& generators, std::int64_t q, const geometry::Cone& cone) {
    const IntVec a = normal_sum(cone.normals());
    auto member = [&](const IntVec& x) {
        for (const auto& g : generators)
            if (in_translate(cone.normals(), x, g, q)) return true;
        return false;
    };
    std::int64_t level = 0;
    for (const auto& r : cone.rays()) {
        std::int64_t k = 0;
        IntVec x(r.size(), 0);
        while (!member(x)) {
            if (++k > 1'000'000) fail(ErrorKind::NotPrimary, "no ray multiple up to 10^6 enters the ideal");
            for (std::size_t j = 0; j < r.size(); ++j) x[j] = k * r[j];
        }
        level += k * inner(r, a);
    }
    auto [lo, hi] = cone_box(cone.rays(), a, Rat(level));
    std::uint64_t count = 0;
    scan_box(lo, hi, [&](const IntVec& x) {
        if (in_cone(cone.normals(), x) && inner(x, a) < level && !member(x)) ++count;
    });
    return count;
}

GridRegion hk_region(const geometry::Cone& cone, const std::vector<IntVec>& generators) {
    GridRegion region;
    region.cone_normals = cone.normals();
    region.removed = generators;
    for (const auto& n : cone.normals()) {
        IntVec neg(n.size());
        for (std::size_t j = 0; j < n.size(); ++j) neg[j] = -n[j];
        region.halfspaces.emplace_back(neg, Rat(0));
    }
    // Slab certified by stepping each ray into U + C.
    const IntVec a = normal_sum(cone.normals());
    std::int64_t level = 0;
    for (const auto& r : cone.rays()) {
        std::int64_t k = 0;
        auto entered = [&] {
            IntVec x(r.size());
            for (std::size_t j = 0; j < r.size(); ++j) x[j] = k * r[j];
            for (const auto& g : generators)
                if (in_translate(cone.normals(), x, g, 1)) return true;
            return false;
        };
        while (!entered())
            if (++k > 1'000'000) fail(ErrorKind::Unbounded, "region is unbounded");
        level += k * inner(r, a);
    }
    region.halfspaces.emplace_back(a, Rat(level));
    return region;
}

GridRegion fsig_region(const geometry::Cone& cone) {
    GridRegion region;
    region.cone_normals = cone.normals();
    for (const auto& n : cone.normals()) {
        IntVec neg(n.size());
        for (std::size_t j = 0; j < n.size(); ++j) neg[j] = -n[j];
        region.halfspaces.emplace_back(neg, Rat(0));
        region.halfspaces.emplace_back(n, Rat(1));
    }
    region.halfspaces.emplace_back(normal_sum(cone.normals()), Rat(static_cast<std::int64_t>(cone.normals().size())));
    return region;
}

GridSpec enclosing_grid(const geometry::Cone& cone, const GridRegion& region, std::int64_t k) {
    // The last halfspace is the slab <x, sum of normals> <= level.
    const auto& [a, level] = region.halfspaces.back();
    auto [lo, hi] = cone_box(cone.rays(), a, level);
    return {lo, hi, k};
}

namespace {

template <class F>
void scan_cells(const GridSpec& grid, const F& visit) {
    const std::size_t d = grid.lo.size();
    double cells = 1;
    IntVec lo(d), hi(d);
    for (std::size_t j = 0; j < d; ++j) {
        lo[j] = grid.lo[j] * grid.k;
        hi[j] = grid.hi[j] * grid.k - 1;
        cells *= static_cast<double>(hi[j] - lo[j] + 1);
    }
    if (cells > static_cast<double>(kMaxBoxPoints)) fail(ErrorKind::BoxTooLarge, "grid exceeds 10^7 cells");
    scan_box(lo, hi, visit);
}

Rat cells_volume(std::uint64_t cells, std::int64_t k, std::size_t d) {
    Int den = 1;
    for (std::size_t j = 0; j < d; ++j) den *= k;
    return Rat(Int(cells), den);
}

std::int64_t pos_sum(const IntVec& n) {
    std::int64_t s = 0;
    for (auto x : n) s += std::max<std::int64_t>(x, 0);
    return s;
}

std::int64_t neg_sum(const IntVec& n) {
    std::int64_t s = 0;
    for (auto x : n) s += std::min<std::int64_t>(x, 0);
    return s;
}

}  // namespace

double riemann_volume(const GridRegion& region, const GridSpec& grid) {
    const std::size_t d = grid.lo.size();
    // Centre (2Y + 1) / 2k.
    std::vector<std::int64_t> hs_bound;
    std::vector<std::int64_t> hs_sum;
    for (const auto& [n, b] : region.halfspaces) {
        hs_bound.push_back(static_cast<std::int64_t>(floor_of(b * 2 * grid.k)));
        std::int64_t s = 0;
        for (auto x : n) s += x;
        hs_sum.push_back(s);
    }
    std::uint64_t hits = 0;
    scan_cells(grid, [&](const IntVec& y) {
        for (std::size_t i = 0; i < region.halfspaces.size(); ++i)
            if (2 * inner(region.halfspaces[i].first, y) + hs_sum[i] > hs_bound[i]) return;
        for (const auto& u : region.removed) {
            bool inside = true;
            for (const auto& n : region.cone_normals) {
                std::int64_t s = 0;
                for (auto x : n) s += x;
                if (2 * inner(n, y) + s < 2 * grid.k * inner(n, u)) {
                    inside = false;
                    break;
                }
            }
            if (inside) return;
        }
        ++hits;
    });
    return to_double(cells_volume(hits, grid.k, d));
}

Squeeze riemann_squeeze(const GridRegion& region, const GridSpec& grid) {
    const std::size_t d = grid.lo.size();
    std::vector<std::int64_t> floor_kb, ceil_kb;
    for (const auto& [n, b] : region.halfspaces) {
        floor_kb.push_back(static_cast<std::int64_t>(floor_of(b * grid.k)));
        ceil_kb.push_back(static_cast<std::int64_t>(ceil_of(b * grid.k)));
    }
    std::uint64_t inside = 0, maybe = 0;
    scan_cells(grid, [&](const IntVec& y) {
        bool in = true, out = false;
        for (std::size_t i = 0; i < region.halfspaces.size() && !out; ++i) {
            const auto& n = region.halfspaces[i].first;
            const std::int64_t base = inner(n, y);
            if (base + pos_sum(n) > floor_kb[i]) in = false;
            if (base + neg_sum(n) >= ceil_kb[i]) out = true;
        }
        for (std::size_t t = 0; t < region.removed.size() && !out; ++t) {
            const auto& u = region.removed[t];
            bool separated = false, covered = true;
            for (const auto& n : region.cone_normals) {
                const std::int64_t base = inner(n, y), level = grid.k * inner(n, u);
                if (base + pos_sum(n) <= level) separated = true;
                if (base + neg_sum(n) < level) covered = false;
            }
            if (!separated) in = false;
            if (covered) out = true;
        }
        if (out) return;
        ++maybe;
        if (in) ++inside;
    });
    return {cells_volume(inside, grid.k, d), cells_volume(maybe, grid.k, d)};
}

}  // namespace pbody::oracle
