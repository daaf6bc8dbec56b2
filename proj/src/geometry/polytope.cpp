#include "pbody/geometry/polytope.hpp"

#include <algorithm>
#include <set>

#include "pbody/error.hpp"

namespace pbody::geometry {

namespace {

constexpr int kMaxExactDim = 4;

BigVec homogeneous_row(const IntVec& normal, const Rat& bound) {
    // t * bound - <normal, x> >= 0, scaled by the bound's denominator.
    BigVec row;
    row.reserve(normal.size() + 1);
    for (auto x : normal) row.emplace_back(-Int(x) * denominator(bound));
    row.push_back(numerator(bound));
    return primitive(std::move(row));
}

std::size_t affine_rank(const std::vector<BigVec>& verts, const std::vector<std::size_t>& subset) {
    std::vector<BigVec> rows;
    rows.reserve(subset.size());
    for (auto i : subset) rows.push_back(verts[i]);
    return rank(rows);
}

Int factorial(int n) {
    Int f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

}  // namespace

std::optional<Polytope> Polytope::finish(int d, DoubleDescription dd) {
    for (const auto& r : dd.rays())
        if (r.back() == 0) fail(ErrorKind::Unbounded, "polyhedron is unbounded");
    if (dd.empty()) return std::nullopt;
    return Polytope(d, std::move(dd));
}

std::optional<Polytope> Polytope::from_inequalities(int d, const std::vector<Inequality>& rows) {
    std::vector<BigVec> hrows;
    BigVec t_row(static_cast<std::size_t>(d) + 1, Int(0));
    t_row.back() = 1;
    hrows.push_back(t_row);
    for (const auto& in : rows) {
        if (in.normal.size() != static_cast<std::size_t>(d)) fail(ErrorKind::DimensionMismatch, "inequality dimension mismatch");
        hrows.push_back(homogeneous_row(in.normal, in.bound));
    }
    std::vector<BigVec> linear;
    for (const auto& in : rows) linear.push_back(to_big(in.normal));
    if (rank(linear) < static_cast<std::size_t>(d)) fail(ErrorKind::Unbounded, "inequalities leave a line free: unbounded");
    return finish(d, DoubleDescription::from_constraints(hrows));
}

std::optional<Polytope> Polytope::from_vertices(int d, const std::vector<RatVec>& points) {
    std::vector<BigVec> hom;
    for (const auto& p : points) {
        if (p.size() != static_cast<std::size_t>(d)) fail(ErrorKind::DimensionMismatch, "vertex dimension mismatch");
        Int den = 1;
        for (const auto& x : p) den = boost::multiprecision::lcm(den, denominator(x));
        BigVec h;
        for (const auto& x : p) h.push_back(numerator(Rat(x * den)));
        h.push_back(den);
        hom.push_back(primitive(std::move(h)));
    }
    if (rank(hom) < static_cast<std::size_t>(d) + 1) return std::nullopt;
    auto facets = extreme_rays(hom);
    return finish(d, DoubleDescription::from_constraints(facets));
}

std::optional<Polytope> Polytope::clipped(const IntVec& normal, const Rat& bound) const {
    DoubleDescription dd = dd_;
    dd.add_constraint(homogeneous_row(normal, bound));
    if (dd.empty()) return std::nullopt;
    return Polytope(dim_, std::move(dd));
}

bool Polytope::full_dimensional() const {
    const auto& v = dd_.rays();
    if (v.size() < static_cast<std::size_t>(dim_) + 1) return false;
    return rank(v) == static_cast<std::size_t>(dim_) + 1;
}

std::vector<RatVec> Polytope::vertices() const {
    std::vector<RatVec> out;
    for (const auto& h : dd_.rays()) {
        RatVec v;
        for (int j = 0; j < dim_; ++j) v.emplace_back(h[static_cast<std::size_t>(j)], h.back());
        out.push_back(std::move(v));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::pair<Rat, Rat> Polytope::range(std::span<const std::int64_t> f) const {
    std::optional<Rat> lo, hi;
    for (const auto& h : dd_.rays()) {
        Int s = 0;
        for (int j = 0; j < dim_; ++j) s += h[static_cast<std::size_t>(j)] * f[static_cast<std::size_t>(j)];
        Rat v(s, h.back());
        if (!lo || v < *lo) lo = v;
        if (!hi || v > *hi) hi = v;
    }
    return {*lo, *hi};
}

std::vector<std::vector<std::size_t>> Polytope::triangulation() const {
    const auto& verts = dd_.rays();
    const std::size_t nc = dd_.constraints().size();
    // Vertex sets of the constraint hyperplanes.
    std::vector<std::vector<std::size_t>> on_constraint(nc);
    for (std::size_t v = 0; v < verts.size(); ++v)
        for (std::size_t c = 0; c < nc; ++c)
            if (dd_.tight(v).test(c)) on_constraint[c].push_back(v);

    std::vector<std::vector<std::size_t>> simplices;
    std::vector<std::size_t> prefix;
    // Pulling triangulation: cone the first vertex of a face over the
    // triangulations of the facets of that face not containing it.
    auto recurse = [&](auto&& self, const std::vector<std::size_t>& face, int k) -> void {
        if (k == 0) {
            auto s = prefix;
            s.push_back(face.front());
            simplices.push_back(std::move(s));
            return;
        }
        const std::size_t apex = face.front();
        std::set<std::vector<std::size_t>> seen;
        prefix.push_back(apex);
        for (std::size_t c = 0; c < nc; ++c) {
            std::vector<std::size_t> sub;
            std::set_intersection(face.begin(), face.end(), on_constraint[c].begin(), on_constraint[c].end(),
                                  std::back_inserter(sub));
            if (sub.size() < static_cast<std::size_t>(k) || sub.size() == face.size()) continue;
            if (std::binary_search(sub.begin(), sub.end(), apex)) continue;
            if (!seen.insert(sub).second) continue;
            if (affine_rank(verts, sub) != static_cast<std::size_t>(k)) continue;
            self(self, sub, k - 1);
        }
        prefix.pop_back();
    };
    std::vector<std::size_t> all(verts.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    if (full_dimensional()) recurse(recurse, all, dim_);
    return simplices;
}

Rat Polytope::volume() const {
    if (!full_dimensional()) return 0;
    const auto& verts = dd_.rays();
    Rat total = 0;
    for (const auto& s : triangulation()) {
        std::vector<BigVec> m;
        Int scale = 1;
        for (auto i : s) {
            m.push_back(verts[i]);
            scale *= verts[i].back();
        }
        total += Rat(abs(determinant(m)), scale);
    }
    return total / factorial(dim_);
}

Rat polytope_volume_exact(int d, const std::vector<Inequality>& rows) {
    if (d > kMaxExactDim) fail(ErrorKind::DimensionTooLarge, "exact volume supports at most 4 dimensions");
    auto p = Polytope::from_inequalities(d, rows);
    return p ? p->volume() : Rat(0);
}

Rat polytope_volume_exact(int d, const std::vector<RatVec>& vertices) {
    if (d > kMaxExactDim) fail(ErrorKind::DimensionTooLarge, "exact volume supports at most 4 dimensions");
    auto p = Polytope::from_vertices(d, vertices);
    return p ? p->volume() : Rat(0);
}

}  // namespace pbody::geometry
