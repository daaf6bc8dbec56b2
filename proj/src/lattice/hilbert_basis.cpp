#include "pbody/lattice/hilbert_basis.hpp"

#include <algorithm>
#include <set>

#include "pbody/error.hpp"
#include "pbody/lattice/enumerate.hpp"

namespace pbody::lattice {

namespace {

struct Graded {
    std::int64_t level;
    IntVec point;
};

std::vector<Graded> graded_points(const geometry::Cone& cone, const IntVec& a, std::int64_t bound) {
    std::vector<Graded> pts;
    const auto d = static_cast<std::size_t>(cone.dim());
    truncation_enumerator(cone, a, bound).for_each([&](const std::int64_t* x) {
        IntVec p(x, x + d);
        pts.push_back({dot(p, a), std::move(p)});
    });
    std::stable_sort(pts.begin(), pts.end(), [](const Graded& l, const Graded& r) { return l.level < r.level; });
    return pts;
}

IntVec minus(const IntVec& x, const IntVec& y) {
    IntVec r(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) r[j] = x[j] - y[j];
    return r;
}

std::vector<IntVec> irreducibles(const geometry::Cone& cone, const IntVec& a, std::int64_t bound) {
    std::vector<Graded> basis;
    for (const auto& g : graded_points(cone, a, bound)) {
        if (g.level == 0) continue;
        bool reducible = false;
        for (const auto& h : basis) {
            if (h.level >= g.level) break;
            if (cone.contains(minus(g.point, h.point))) {
                reducible = true;
                break;
            }
        }
        if (!reducible) basis.push_back(g);
    }
    std::vector<IntVec> out;
    for (auto& b : basis) out.push_back(std::move(b.point));
    std::sort(out.begin(), out.end());
    return out;
}

bool generates(const geometry::Cone& cone, const IntVec& a, std::int64_t bound, const std::vector<IntVec>& basis) {
    std::set<IntVec> reached;
    for (const auto& g : graded_points(cone, a, bound)) {
        if (g.level == 0) {
            reached.insert(g.point);
            continue;
        }
        bool ok = false;
        for (const auto& h : basis) {
            if (reached.count(minus(g.point, h))) {
                ok = true;
                break;
            }
        }
        if (!ok) return false;
        reached.insert(g.point);
    }
    return true;
}

}  // namespace

HilbertBasis hilbert_basis(const geometry::Cone& cone, std::optional<Rat> search_bound) {
    if (cone.dim() > 3) fail(ErrorKind::DimensionTooLarge, "Hilbert basis search supports at most 3 dimensions");
    IntVec a = cone.truncating_vector();
    std::vector<std::int64_t> levels;
    for (const auto& r : cone.rays()) levels.push_back(dot(r, a));
    std::sort(levels.rbegin(), levels.rend());
    std::int64_t cover = 0;
    for (std::size_t i = 0; i < levels.size() && i < static_cast<std::size_t>(cone.dim()); ++i) cover += levels[i];

    Rat bound = search_bound ? *search_bound : Rat(levels.front());
    for (;;) {
        auto basis = irreducibles(cone, a, to_int64(floor_of(bound)));
        if (generates(cone, a, cover, basis)) return {basis, bound, Rat(cover)};
        if (search_bound)
            fail(ErrorKind::BoundTooSmall, "search bound " + to_string(bound) + " misses Hilbert basis elements");
        bound = Rat(cover);
    }
}

}  // namespace pbody::lattice
