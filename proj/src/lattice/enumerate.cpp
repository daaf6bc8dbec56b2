#include "pbody/lattice/enumerate.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <thread>

#include "pbody/error.hpp"

namespace pbody::lattice {

namespace {

using i128 = __int128;

std::int64_t floor_div(i128 a, i128 b) {
    i128 q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    if (q > std::numeric_limits<std::int64_t>::max()) return std::numeric_limits<std::int64_t>::max();
    if (q < std::numeric_limits<std::int64_t>::min()) return std::numeric_limits<std::int64_t>::min();
    return static_cast<std::int64_t>(q);
}

std::int64_t ceil_div(i128 a, i128 b) { return -floor_div(-a, b); }

i128 gcd128(i128 a, i128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        i128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

bool fits(i128 v) {
    return v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max();
}

}  // namespace

std::uint64_t TruncationBox::volume() const {
    std::uint64_t v = 1;
    for (std::size_t j = 0; j < lo.size(); ++j) {
        if (hi[j] < lo[j]) return 0;
        auto w = static_cast<std::uint64_t>(hi[j] - lo[j]) + 1;
        if (v > std::numeric_limits<std::uint64_t>::max() / w) return std::numeric_limits<std::uint64_t>::max();
        v *= w;
    }
    return v;
}

TruncationBox bounding_box(const Cone& cone, const TruncatingHalfspace& h, std::int64_t q) {
    if (q < 1) fail(ErrorKind::InvalidArgument, "q must be at least 1");
    auto scaled = TruncatingHalfspace::make(cone, h.a, h.alpha * q);
    auto verts = geometry::truncation_vertices(cone, scaled);
    const auto d = static_cast<std::size_t>(cone.dim());
    TruncationBox box{IntVec(d, 0), IntVec(d, 0)};
    for (std::size_t j = 0; j < d; ++j) {
        Rat mn = 0, mx = 0;
        for (const auto& v : verts) {
            mn = std::min(mn, v[j]);
            mx = std::max(mx, v[j]);
        }
        box.lo[j] = to_int64(floor_of(mn));
        box.hi[j] = to_int64(ceil_of(mx));
    }
    return box;
}

PointEnumerator::PointEnumerator(int d, std::vector<IntRow> rows) : dim_(d), levels_(static_cast<std::size_t>(d)) {
    if (d < 1) fail(ErrorKind::InvalidArgument, "dimension must be positive");
    for (const auto& r : rows)
        if (r.normal.size() != static_cast<std::size_t>(d))
            fail(ErrorKind::DimensionMismatch, "inequality has the wrong dimension");

    std::vector<IntRow> sys = std::move(rows);
    for (int k = d - 1; k >= 0; --k) {
        const auto kk = static_cast<std::size_t>(k);
        std::vector<const IntRow*> pos, neg;
        std::map<IntVec, std::int64_t> next;
        auto keep = [&](IntVec normal, std::int64_t bound) {
            auto it = next.find(normal);
            if (it == next.end()) {
                next.emplace(std::move(normal), bound);
            } else {
                it->second = std::min(it->second, bound);
            }
        };
        for (const auto& r : sys) {
            if (r.normal[kk] > 0) {
                pos.push_back(&r);
            } else if (r.normal[kk] < 0) {
                neg.push_back(&r);
            } else if (k > 0) {
                keep(IntVec(r.normal.begin(), r.normal.begin() + k), r.bound);
            } else if (r.bound < 0) {
                infeasible_ = true;
            }
            if (r.normal[kk] != 0) levels_[kk].rows.push_back(r);
        }
        if (k == 0) break;
        for (const IntRow* p : pos) {
            for (const IntRow* n : neg) {
                i128 cp = p->normal[kk], cn = -static_cast<i128>(n->normal[kk]);
                std::vector<i128> comb(kk);
                i128 g = 0;
                for (std::size_t j = 0; j < kk; ++j) {
                    comb[j] = cn * p->normal[j] + cp * n->normal[j];
                    g = gcd128(g, comb[j]);
                }
                i128 b = cn * p->bound + cp * n->bound;
                if (g == 0) {
                    if (b < 0) infeasible_ = true;
                    continue;
                }
                IntVec normal(kk);
                for (std::size_t j = 0; j < kk; ++j) {
                    i128 v = comb[j] / g;
                    if (!fits(v)) fail(ErrorKind::Overflow, "projection coefficients overflow");
                    normal[j] = static_cast<std::int64_t>(v);
                }
                keep(std::move(normal), floor_div(b, g));
            }
        }
        sys.clear();
        for (auto& [normal, bound] : next) sys.push_back({normal, bound});
    }
    if (infeasible_) return;
    for (const auto& level : levels_) {
        bool up = false, down = false;
        for (const auto& r : level.rows) {
            const auto c = r.normal.back();
            up = up || c > 0;
            down = down || c < 0;
        }
        if (!up || !down) fail(ErrorKind::Unbounded, "enumeration region is unbounded");
    }
}

bool PointEnumerator::range_at(int k, const std::int64_t* x, std::int64_t& lo, std::int64_t& hi) const {
    bool has_lo = false, has_hi = false;
    lo = std::numeric_limits<std::int64_t>::min();
    hi = std::numeric_limits<std::int64_t>::max();
    const auto kk = static_cast<std::size_t>(k);
    for (const auto& r : levels_[kk].rows) {
        i128 s = 0;
        for (std::size_t j = 0; j < kk; ++j) s += static_cast<i128>(r.normal[j]) * x[j];
        i128 rem = static_cast<i128>(r.bound) - s;
        std::int64_t c = r.normal[kk];
        if (c > 0) {
            hi = std::min(hi, floor_div(rem, c));
            has_hi = true;
        } else {
            lo = std::max(lo, ceil_div(rem, c));
            has_lo = true;
        }
    }
    if (!has_lo || !has_hi) fail(ErrorKind::Unbounded, "enumeration region is unbounded");
    return lo <= hi;
}

std::pair<std::int64_t, std::int64_t> PointEnumerator::outer_range() const {
    if (infeasible_) return {1, 0};
    std::int64_t lo, hi;
    range_at(0, nullptr, lo, hi);
    return {lo, hi};
}

template <class F>
void PointEnumerator::walk(int k, std::int64_t* x, const F& visit) const {
    std::int64_t lo, hi;
    if (!range_at(k, x, lo, hi)) return;
    if (k == dim_ - 1) {
        for (std::int64_t v = lo; v <= hi; ++v) {
            x[k] = v;
            visit(static_cast<const std::int64_t*>(x));
        }
        return;
    }
    for (std::int64_t v = lo; v <= hi; ++v) {
        x[k] = v;
        walk(k + 1, x, visit);
    }
}

void PointEnumerator::for_each_slice(std::int64_t x0, const std::function<void(const std::int64_t*)>& visit) const {
    if (infeasible_) return;
    std::int64_t x[kMaxDim];
    if (static_cast<std::size_t>(dim_) > kMaxDim) fail(ErrorKind::DimensionTooLarge, "dimension exceeds the supported maximum");
    x[0] = x0;
    if (dim_ == 1) {
        visit(x);
        return;
    }
    walk(1, x, visit);
}

void PointEnumerator::for_each(const std::function<void(const std::int64_t*)>& visit) const {
    auto [lo, hi] = outer_range();
    for (std::int64_t v = lo; v <= hi; ++v) for_each_slice(v, visit);
}

std::uint64_t PointEnumerator::count() const {
    if (infeasible_) return 0;
    std::uint64_t total = 0;
    std::int64_t x[kMaxDim];
    std::function<void(int)> rec = [&](int k) {
        std::int64_t lo, hi;
        if (!range_at(k, x, lo, hi)) return;
        if (k == dim_ - 1) {
            total += static_cast<std::uint64_t>(hi - lo) + 1;
            return;
        }
        for (std::int64_t v = lo; v <= hi; ++v) {
            x[k] = v;
            rec(k + 1);
        }
    };
    rec(0);
    return total;
}

std::uint64_t PointEnumerator::count_if(const std::function<bool(const std::int64_t*)>& test, int workers) const {
    auto [lo, hi] = outer_range();
    if (lo > hi) return 0;
    std::atomic<std::int64_t> next{lo};
    std::atomic<std::uint64_t> total{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto work = [&] {
        std::uint64_t local = 0;
        try {
            for (std::int64_t v = next++; v <= hi; v = next++) {
                for_each_slice(v, [&](const std::int64_t* x) {
                    if (test(x)) ++local;
                });
            }
        } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
            next = hi + 1;
        }
        total += local;
    };
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
    return total;
}

PointEnumerator truncation_enumerator(const Cone& cone, std::span<const std::int64_t> a, std::int64_t bound) {
    std::vector<IntRow> rows;
    for (const auto& n : cone.normals()) {
        IntVec neg(n.size());
        for (std::size_t j = 0; j < n.size(); ++j) neg[j] = -n[j];
        rows.push_back({neg, 0});
    }
    rows.push_back({IntVec(a.begin(), a.end()), bound});
    return PointEnumerator(cone.dim(), std::move(rows));
}

std::int64_t strict_bound(const Rat& alpha, std::int64_t q) { return to_int64(ceil_of(alpha * q)) - 1; }

std::vector<IntVec> enumerate_points(const Cone& cone, const TruncatingHalfspace& h, std::int64_t q) {
    if (q < 1) fail(ErrorKind::InvalidArgument, "q must be at least 1");
    TruncatingHalfspace::make(cone, h.a, h.alpha);
    std::vector<IntVec> out;
    const auto d = static_cast<std::size_t>(cone.dim());
    truncation_enumerator(cone, h.a, strict_bound(h.alpha, q)).for_each([&](const std::int64_t* x) {
        out.emplace_back(x, x + d);
    });
    return out;
}

std::uint64_t count_points(const Cone& cone, const TruncatingHalfspace& h, std::int64_t q) {
    if (q < 1) fail(ErrorKind::InvalidArgument, "q must be at least 1");
    TruncatingHalfspace::make(cone, h.a, h.alpha);
    return truncation_enumerator(cone, h.a, strict_bound(h.alpha, q)).count();
}

}  // namespace pbody::lattice
