#include "pbody/psystem/psystem.hpp"

#include <algorithm>
#include <map>
#include <mutex>

#include "pbody/error.hpp"
#include "pbody/geometry/staircase.hpp"
#include "pbody/lattice/enumerate.hpp"

namespace pbody::psystem {

using geometry::in_staircase;
using geometry::least_entry;
using geometry::minimal_generators;

std::string_view kind_name(Kind k) {
    switch (k) {
        case Kind::Frobenius: return "frobenius";
        case Kind::Constant: return "constant";
        case Kind::FSignature: return "fsignature";
        case Kind::Sum: return "sum";
        case Kind::Shifted: return "shifted";
        case Kind::Saturation2d: return "saturation2d";
        case Kind::Custom: return "custom";
    }
    return "unknown";
}

struct PSystem::Node {
    Node(Kind k, int prime, Cone c) : kind(k), p(prime), cone(std::move(c)) {}

    Kind kind;
    int p;
    Cone cone;
    std::vector<IntVec> gens;                // Frobenius, Constant
    std::vector<std::vector<IntVec>> lists;  // Custom
    std::vector<PSystem> terms;              // Sum terms; Shifted/Saturation2d inner at [0]
    std::vector<PSystem> rest;               // Sum: the terms other than the pivot, as one family
    std::size_t pivot = 0;
    bool explicit_sum = false;
    IntVec w;
    Rat lambda;
    std::optional<std::int64_t> sat_bound;

    mutable std::mutex cache_mutex;
    mutable std::map<std::int64_t, std::shared_ptr<const std::vector<IntVec>>> cache;
};

void check_power(int p, std::int64_t q) {
    if (q < 1) fail(ErrorKind::InvalidArgument, "q must be a positive power of p");
    std::int64_t r = q;
    while (r % p == 0) r /= p;
    if (r != 1) fail(ErrorKind::InvalidArgument, std::to_string(q) + " is not a power of " + std::to_string(p));
}

namespace {

int exponent_of(int p, std::int64_t q) {
    int e = 0;
    while (q > 1) {
        q /= p;
        ++e;
    }
    return e;
}

void check_generators(const Cone& cone, const std::vector<IntVec>& gens) {
    if (gens.empty()) fail(ErrorKind::EmptyGenerators, "generator list is empty");
    for (const auto& g : gens) {
        if (g.size() != static_cast<std::size_t>(cone.dim()))
            fail(ErrorKind::DimensionMismatch, "generator " + to_string(g) + " has the wrong dimension");
        if (!cone.contains(g)) fail(ErrorKind::GeneratorOutsideSemigroup, "generator " + to_string(g) + " is outside the semigroup");
    }
}

void check_prime(int p) {
    if (p < 2) fail(ErrorKind::InvalidArgument, "prime must be at least 2");
}

IntVec scaled(const IntVec& v, std::int64_t m) {
    IntVec r(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) r[j] = v[j] * m;
    return r;
}

std::vector<IntVec> scaled(const std::vector<IntVec>& vs, std::int64_t m) {
    std::vector<IntVec> out;
    out.reserve(vs.size());
    for (const auto& v : vs) out.push_back(scaled(v, m));
    return out;
}

// Exponential then binary search for the least k with test(k), assuming
// monotonicity; BoundExhausted past the cap.
std::int64_t monotone_search(std::int64_t cap, const std::function<bool(std::int64_t)>& test) {
    if (test(0)) return 0;
    std::int64_t lo = 0, hi = 1;
    while (!test(hi)) {
        if (hi >= cap)
            fail(ErrorKind::BoundExhausted, "no ray multiple up to " + std::to_string(cap) + " enters the ideal");
        lo = hi;
        hi = std::min(cap, hi * 2);
    }
    while (hi - lo > 1) {
        std::int64_t mid = lo + (hi - lo) / 2;
        if (test(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

std::int64_t max_coordinate(const PSystem& ps) {
    std::int64_t m = 1;
    auto visit = [&](const std::vector<IntVec>& gs) {
        for (const auto& g : gs)
            for (auto x : g) m = std::max(m, std::abs(x));
    };
    switch (ps.kind()) {
        case Kind::Frobenius:
        case Kind::Constant: visit(ps.base_generators()); break;
        case Kind::Custom:
            for (const auto& l : ps.lists()) visit(l);
            break;
        case Kind::Sum:
            for (const auto& t : ps.terms()) m = std::max(m, max_coordinate(t));
            break;
        case Kind::Shifted:
        case Kind::Saturation2d: m = std::max(m, max_coordinate(ps.inner())); break;
        case Kind::FSignature: break;
    }
    return m;
}

}  // namespace

PSystem PSystem::frobenius(const Cone& cone, int p, std::vector<IntVec> generators) {
    check_prime(p);
    check_generators(cone, generators);
    auto n = std::make_shared<Node>(Kind::Frobenius, p, cone);
    n->gens = minimal_generators(cone, std::move(generators));
    return PSystem(n);
}

PSystem PSystem::constant(const Cone& cone, int p, std::vector<IntVec> generators) {
    check_prime(p);
    check_generators(cone, generators);
    auto n = std::make_shared<Node>(Kind::Constant, p, cone);
    n->gens = minimal_generators(cone, std::move(generators));
    return PSystem(n);
}

PSystem PSystem::fsignature(const Cone& cone, int p) {
    check_prime(p);
    return PSystem(std::make_shared<Node>(Kind::FSignature, p, cone));
}

PSystem PSystem::sum(std::vector<PSystem> terms) {
    if (terms.empty()) fail(ErrorKind::EmptyGenerators, "sum of no families");
    for (const auto& t : terms) {
        if (!(t.cone() == terms.front().cone())) fail(ErrorKind::InvalidArgument, "summands live on different cones");
        if (t.prime() != terms.front().prime()) fail(ErrorKind::InvalidArgument, "summands have different primes");
    }
    if (terms.size() == 1) return terms.front();
    auto n = std::make_shared<Node>(Kind::Sum, terms.front().prime(), terms.front().cone());
    auto is_explicit = [](const PSystem& t) {
        return t.kind() == Kind::Frobenius || t.kind() == Kind::Constant || t.kind() == Kind::Custom ||
               (t.kind() == Kind::Sum && t.node_->explicit_sum);
    };
    n->explicit_sum = std::all_of(terms.begin(), terms.end(), is_explicit);
    n->pivot = 0;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (is_explicit(terms[i])) {
            n->pivot = i;
            break;
        }
    }
    std::vector<PSystem> others;
    for (std::size_t i = 0; i < terms.size(); ++i)
        if (i != n->pivot) others.push_back(terms[i]);
    n->rest.push_back(others.size() == 1 ? others.front() : sum(std::move(others)));
    n->terms = std::move(terms);
    return PSystem(n);
}

PSystem PSystem::shifted(PSystem inner, IntVec w, Rat lambda) {
    if (lambda <= 0) fail(ErrorKind::InvalidArgument, "lambda must be positive");
    check_generators(inner.cone(), {w});
    auto n = std::make_shared<Node>(Kind::Shifted, inner.prime(), inner.cone());
    n->terms.push_back(std::move(inner));
    n->w = std::move(w);
    n->lambda = std::move(lambda);
    return PSystem(n);
}

PSystem PSystem::saturation2d(PSystem inner, std::optional<std::int64_t> bound) {
    if (inner.dim() != 2) fail(ErrorKind::DimensionNotTwo, "saturation is only available in dimension 2");
    if (bound && *bound < 0) fail(ErrorKind::InvalidArgument, "saturation bound must be nonnegative");
    auto n = std::make_shared<Node>(Kind::Saturation2d, inner.prime(), inner.cone());
    n->terms.push_back(std::move(inner));
    n->sat_bound = bound;
    return PSystem(n);
}

PSystem PSystem::custom(const Cone& cone, int p, std::vector<std::vector<IntVec>> lists) {
    check_prime(p);
    if (lists.empty()) fail(ErrorKind::EmptyGenerators, "custom family has no generator lists");
    auto n = std::make_shared<Node>(Kind::Custom, p, cone);
    for (auto& l : lists) {
        check_generators(cone, l);
        n->lists.push_back(minimal_generators(cone, std::move(l)));
    }
    return PSystem(n);
}

Kind PSystem::kind() const { return node_->kind; }
int PSystem::prime() const { return node_->p; }
const Cone& PSystem::cone() const { return node_->cone; }
const std::vector<IntVec>& PSystem::base_generators() const { return node_->gens; }
const std::vector<PSystem>& PSystem::terms() const { return node_->terms; }
const PSystem& PSystem::inner() const {
    if (node_->kind != Kind::Shifted && node_->kind != Kind::Saturation2d)
        fail(ErrorKind::InvalidArgument, "family has no inner family");
    return node_->terms.front();
}
const IntVec& PSystem::shift() const { return node_->w; }
const Rat& PSystem::lambda() const { return node_->lambda; }
const std::vector<std::vector<IntVec>>& PSystem::lists() const { return node_->lists; }
std::optional<std::int64_t> PSystem::saturation_bound() const { return node_->sat_bound; }

std::int64_t PSystem::shift_steps(std::int64_t q) const { return to_int64(ceil_of(node_->lambda * q)) - 1; }

std::optional<std::vector<IntVec>> PSystem::generators(std::int64_t q) const {
    const Node& n = *node_;
    switch (n.kind) {
        case Kind::Frobenius: return scaled(n.gens, q);
        case Kind::Constant: return n.gens;
        case Kind::Custom: {
            const int e = exponent_of(n.p, q);
            const int last = static_cast<int>(n.lists.size()) - 1;
            if (e <= last) return n.lists[static_cast<std::size_t>(e)];
            return scaled(n.lists.back(), ipow(n.p, e - last));
        }
        case Kind::Sum: {
            if (!n.explicit_sum) return std::nullopt;
            {
                std::lock_guard lock(n.cache_mutex);
                auto it = n.cache.find(q);
                if (it != n.cache.end()) return *it->second;
            }
            std::vector<IntVec> acc = *n.terms.front().generators(q);
            for (std::size_t i = 1; i < n.terms.size(); ++i)
                acc = geometry::minkowski_sum(n.cone, acc, *n.terms[i].generators(q));
            std::lock_guard lock(n.cache_mutex);
            n.cache.emplace(q, std::make_shared<const std::vector<IntVec>>(acc));
            return acc;
        }
        default: return std::nullopt;
    }
}

namespace {

// Sum membership by decomposition u = u1 + u2 with u1 in the pivot family.
std::optional<std::pair<IntVec, IntVec>> decompose(const PSystem& pivot, const PSystem& rest, std::int64_t q,
                                                   const std::int64_t* u) {
    const Cone& cone = pivot.cone();
    const auto d = static_cast<std::size_t>(cone.dim());
    std::int64_t v[kMaxDim];
    if (auto gens = pivot.generators(q)) {
        for (const auto& g : *gens) {
            for (std::size_t j = 0; j < d; ++j) v[j] = u[j] - g[j];
            if (cone.contains_unchecked(v) && rest.contains(q, v)) return std::make_pair(g, IntVec(v, v + d));
        }
        return std::nullopt;
    }
    // u1 ∈ C ∩ (u - C).
    std::vector<lattice::IntRow> rows;
    for (const auto& n : cone.normals()) {
        IntVec neg(d);
        for (std::size_t j = 0; j < d; ++j) neg[j] = -n[j];
        rows.push_back({neg, 0});
        std::int64_t s = 0;
        for (std::size_t j = 0; j < d; ++j) s += n[j] * u[j];
        rows.push_back({n, s});
    }
    lattice::PointEnumerator en(cone.dim(), std::move(rows));
    std::optional<std::pair<IntVec, IntVec>> found;
    auto [lo, hi] = en.outer_range();
    for (std::int64_t x0 = lo; x0 <= hi && !found; ++x0) {
        en.for_each_slice(x0, [&](const std::int64_t* x) {
            if (found) return;
            for (std::size_t j = 0; j < d; ++j) v[j] = u[j] - x[j];
            if (pivot.contains(q, x) && rest.contains(q, v)) found.emplace(IntVec(x, x + d), IntVec(v, v + d));
        });
    }
    return found;
}

bool explicit_member(const Cone& cone, const std::vector<IntVec>& gens, std::int64_t m, const std::int64_t* u) {
    const auto d = static_cast<std::size_t>(cone.dim());
    std::int64_t v[kMaxDim];
    for (const auto& g : gens) {
        for (std::size_t j = 0; j < d; ++j) v[j] = u[j] - m * g[j];
        if (cone.contains_unchecked(v)) return true;
    }
    return false;
}

}  // namespace

namespace {

bool closed_entry(const PSystem& ps, std::int64_t q) {
    if (ps.kind() == Kind::FSignature || ps.generators(q)) return true;
    return ps.kind() == Kind::Shifted && closed_entry(ps.inner(), q);
}

// Tri answer together with a k at which both deep translates enter.
std::pair<Tri, std::int64_t> saturation_level(const PSystem& inner, std::int64_t q, std::span<const std::int64_t> u,
                                              std::optional<std::int64_t> bound) {
    if (inner.dim() != 2) fail(ErrorKind::DimensionNotTwo, "saturation is only available in dimension 2");
    if (u.size() != 2) fail(ErrorKind::DimensionMismatch, "point has the wrong dimension");
    const auto& rays = inner.cone().rays();
    if (closed_entry(inner, q)) {
        auto k1 = inner.entry(q, u, rays[0]);
        auto k2 = k1 ? inner.entry(q, u, rays[1]) : std::nullopt;
        if (!k1 || !k2) return {Tri::No, 0};
        return {Tri::Yes, std::max(*k1, *k2)};
    }
    // Membership of u + k r is monotone in k, so testing k = K decides "some k <= K".
    const std::int64_t k = bound ? *bound : 4 * max_coordinate(inner) * q;
    for (const auto& r : rays) {
        std::int64_t x[2] = {u[0] + k * r[0], u[1] + k * r[1]};
        if (!inner.contains(q, x)) return {Tri::Indeterminate, k};
    }
    return {Tri::Yes, k};
}

}  // namespace

bool PSystem::contains(std::int64_t q, const std::int64_t* u) const {
    const Node& n = *node_;
    const auto d = static_cast<std::size_t>(n.cone.dim());
    switch (n.kind) {
        case Kind::Frobenius: return explicit_member(n.cone, n.gens, q, u);
        case Kind::Constant: return explicit_member(n.cone, n.gens, 1, u);
        case Kind::Custom: {
            const int e = exponent_of(n.p, q);
            const int last = static_cast<int>(n.lists.size()) - 1;
            if (e <= last) return explicit_member(n.cone, n.lists[static_cast<std::size_t>(e)], 1, u);
            return explicit_member(n.cone, n.lists.back(), ipow(n.p, e - last), u);
        }
        case Kind::FSignature: {
            for (const auto& v : n.cone.normals()) {
                std::int64_t s = 0;
                for (std::size_t j = 0; j < d; ++j) s += v[j] * u[j];
                if (s >= q) return true;
            }
            return false;
        }
        case Kind::Sum: {
            if (n.explicit_sum) {
                auto gens = generators(q);
                return explicit_member(n.cone, *gens, 1, u);
            }
            return decompose(n.terms[n.pivot], n.rest.front(), q, u).has_value();
        }
        case Kind::Shifted: {
            std::int64_t v[kMaxDim];
            const std::int64_t s = shift_steps(q);
            for (std::size_t j = 0; j < d; ++j) v[j] = u[j] + s * n.w[j];
            return n.terms.front().contains(q, v);
        }
        case Kind::Saturation2d: {
            auto t = saturation2d_member(n.terms.front(), q, std::span<const std::int64_t>(u, d), n.sat_bound);
            if (t == Tri::Indeterminate)
                fail(ErrorKind::BoundExhausted, "saturation test for " + to_string(IntVec(u, u + d)) + " is indeterminate");
            return t == Tri::Yes;
        }
    }
    return false;
}

bool PSystem::member(std::int64_t q, std::span<const std::int64_t> u, MembershipWitness* witness) const {
    const Node& n = *node_;
    check_power(n.p, q);
    if (u.size() != static_cast<std::size_t>(n.cone.dim()))
        fail(ErrorKind::DimensionMismatch, "point has the wrong dimension");
    IntVec uv(u.begin(), u.end());
    if (!n.cone.contains(u)) fail(ErrorKind::PointOutsideSemigroup, "point " + to_string(uv) + " is outside the semigroup");
    const bool result = contains(q, u.data());
    if (!witness) return result;

    MembershipWitness& w = *witness;
    w = MembershipWitness{};
    w.q = q;
    w.u = uv;
    w.member = result;
    if (auto gens = generators(q)) {
        if (result) {
            w.evidence = MembershipWitness::Evidence::Generator;
            for (const auto& g : *gens) {
                IntVec diff(uv.size());
                for (std::size_t j = 0; j < diff.size(); ++j) diff[j] = uv[j] - g[j];
                if (n.cone.contains(diff)) {
                    w.generator = g;
                    break;
                }
            }
        } else {
            w.evidence = MembershipWitness::Evidence::Refutation;
            for (const auto& g : *gens) {
                IntVec diff(uv.size());
                for (std::size_t j = 0; j < diff.size(); ++j) diff[j] = uv[j] - g[j];
                const auto& normals = n.cone.normals();
                for (std::size_t i = 0; i < normals.size(); ++i) {
                    if (dot(diff, normals[i]) < 0) {
                        w.refutations.emplace_back(g, i);
                        break;
                    }
                }
            }
        }
        return result;
    }
    switch (n.kind) {
        case Kind::FSignature: {
            for (const auto& v : n.cone.normals()) w.values.push_back(dot(uv, v));
            if (result) {
                w.evidence = MembershipWitness::Evidence::Facet;
                w.facet = static_cast<std::size_t>(std::max_element(w.values.begin(), w.values.end()) - w.values.begin());
            } else {
                w.evidence = MembershipWitness::Evidence::Refutation;
            }
            break;
        }
        case Kind::Sum:
            if (result) {
                auto parts = decompose(n.terms[n.pivot], n.rest.front(), q, uv.data());
                w.evidence = MembershipWitness::Evidence::Decomposition;
                w.first = parts->first;
                w.second = parts->second;
            }
            break;
        case Kind::Shifted: {
            w.evidence = MembershipWitness::Evidence::Shift;
            w.shifted = uv;
            const std::int64_t s = shift_steps(q);
            for (std::size_t j = 0; j < uv.size(); ++j) w.shifted[j] += s * n.w[j];
            break;
        }
        case Kind::Saturation2d:
            if (result) {
                w.evidence = MembershipWitness::Evidence::Saturation;
                w.k = saturation_level(n.terms.front(), q, uv, n.sat_bound).second;
            }
            break;
        default: break;
    }
    return result;
}

std::optional<std::int64_t> PSystem::entry(std::int64_t q, std::span<const std::int64_t> u,
                                           std::span<const std::int64_t> r) const {
    const Node& n = *node_;
    const auto d = static_cast<std::size_t>(n.cone.dim());
    if (u.size() != d || r.size() != d) fail(ErrorKind::DimensionMismatch, "point has the wrong dimension");
    if (auto gens = generators(q)) return least_entry(n.cone, *gens, u, r);
    switch (n.kind) {
        case Kind::FSignature: {
            std::optional<std::int64_t> best;
            for (const auto& v : n.cone.normals()) {
                const std::int64_t have = dot(u, v), slope = dot(r, v);
                std::optional<std::int64_t> k;
                if (have >= q) {
                    k = 0;
                } else if (slope > 0) {
                    k = (q - have + slope - 1) / slope;
                }
                if (k && (!best || *k < *best)) best = k;
            }
            return best;
        }
        case Kind::Shifted: {
            IntVec v(u.begin(), u.end());
            const std::int64_t s = shift_steps(q);
            for (std::size_t j = 0; j < d; ++j) v[j] += s * n.w[j];
            return n.terms.front().entry(q, v, r);
        }
        case Kind::Saturation2d: {
            // u + k r is saturated-in only if some deeper u + (k + j) r lies in the inner ideal.
            auto inner = n.terms.front().entry(q, u, r);
            if (!inner) return std::nullopt;
            IntVec x(d);
            return monotone_search(std::max<std::int64_t>(*inner, 1), [&](std::int64_t k) {
                for (std::size_t j = 0; j < d; ++j) x[j] = u[j] + k * r[j];
                return contains(q, x.data());
            });
        }
        default: break;
    }
    std::int64_t cap = 64 * q * max_coordinate(*this);
    if (n.kind == Kind::Saturation2d && n.sat_bound) cap = std::max<std::int64_t>(*n.sat_bound, 1);
    IntVec x(d);
    return monotone_search(cap, [&](std::int64_t k) {
        for (std::size_t j = 0; j < d; ++j) x[j] = u[j] + k * r[j];
        return contains(q, x.data());
    });
}

Tri saturation2d_member(const PSystem& inner, std::int64_t q, std::span<const std::int64_t> u,
                        std::optional<std::int64_t> bound) {
    return saturation_level(inner, q, u, bound).first;
}

bool MembershipWitness::verify(const PSystem& ps) const {
    const Cone& cone = ps.cone();
    if (u.size() != static_cast<std::size_t>(cone.dim()) || !cone.contains(u)) return false;
    auto minus = [](const IntVec& a, const IntVec& b) {
        IntVec r(a.size());
        for (std::size_t j = 0; j < a.size(); ++j) r[j] = a[j] - b[j];
        return r;
    };
    switch (evidence) {
        case Evidence::Generator: {
            auto gens = ps.generators(q);
            if (!member || !gens) return false;
            return std::find(gens->begin(), gens->end(), generator) != gens->end() && cone.contains(minus(u, generator));
        }
        case Evidence::Facet: {
            if (!member || ps.kind() != Kind::FSignature) return false;
            const auto& normals = cone.normals();
            return facet < normals.size() && dot(u, normals[facet]) >= q;
        }
        case Evidence::Decomposition: {
            if (!member || ps.kind() != Kind::Sum || first.size() != u.size() || second.size() != u.size()) return false;
            for (std::size_t j = 0; j < u.size(); ++j)
                if (first[j] + second[j] != u[j]) return false;
            if (!cone.contains(first) || !cone.contains(second)) return false;
            // One summand from some term, the other from the sum of the rest.
            const auto& terms = ps.terms();
            for (std::size_t i = 0; i < terms.size(); ++i) {
                if (!terms[i].contains(q, first.data())) continue;
                std::vector<PSystem> others;
                for (std::size_t k = 0; k < terms.size(); ++k)
                    if (k != i) others.push_back(terms[k]);
                if (PSystem::sum(others).contains(q, second.data())) return true;
            }
            return false;
        }
        case Evidence::Shift: {
            if (ps.kind() != Kind::Shifted || shifted.size() != u.size()) return false;
            const std::int64_t s = ps.shift_steps(q);
            for (std::size_t j = 0; j < u.size(); ++j)
                if (shifted[j] != u[j] + s * ps.shift()[j]) return false;
            return ps.inner().contains(q, shifted.data()) == member;
        }
        case Evidence::Saturation: {
            if (!member || ps.kind() != Kind::Saturation2d || k < 0) return false;
            for (const auto& r : cone.rays()) {
                IntVec x = u;
                for (std::size_t j = 0; j < x.size(); ++j) x[j] += k * r[j];
                if (!ps.inner().contains(q, x.data())) return false;
            }
            return true;
        }
        case Evidence::Refutation: {
            if (member) return false;
            if (auto gens = ps.generators(q)) {
                if (refutations.size() != gens->size()) return false;
                for (std::size_t i = 0; i < gens->size(); ++i) {
                    const auto& [g, f] = refutations[i];
                    if (g != (*gens)[i] || f >= cone.normals().size()) return false;
                    if (dot(minus(u, g), cone.normals()[f]) >= 0) return false;
                }
                return true;
            }
            if (ps.kind() == Kind::FSignature) {
                const auto& normals = cone.normals();
                if (values.size() != normals.size()) return false;
                for (std::size_t i = 0; i < normals.size(); ++i)
                    if (values[i] != dot(u, normals[i]) || values[i] >= q) return false;
                return true;
            }
            return !ps.contains(q, u.data());
        }
    }
    return false;
}

}  // namespace pbody::psystem
