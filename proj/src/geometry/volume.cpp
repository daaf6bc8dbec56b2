#include "pbody/geometry/volume.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <thread>

#include "pbody/error.hpp"
#include "pbody/geometry/staircase.hpp"

namespace pbody::geometry {

std::string_view method_name(VolumeMethod m) {
    switch (m) {
        case VolumeMethod::Arrangement: return "arrangement";
        case VolumeMethod::ClosedForm: return "closed-form";
        case VolumeMethod::MonteCarlo: return "monte-carlo";
    }
    return "unknown";
}

namespace {

void check_region(const RegionSpec& region) {
    for (const auto& u : region.removed) {
        if (u.size() != static_cast<std::size_t>(region.cone.dim()))
            fail(ErrorKind::DimensionMismatch, "removed point " + to_string(u) + " has the wrong dimension");
        if (!region.cone.contains(u))
            fail(ErrorKind::GeneratorOutsideSemigroup, "removed point " + to_string(u) + " is outside the cone");
    }
    if (region.removed.empty()) fail(ErrorKind::Unbounded, "nothing removed: the region is the whole cone");
}

// C intersected with { <x, a> <= beta } and the optional clip, where beta
// certifies that the region lies below it. Empty when the region is empty.
std::optional<Polytope> bounding_polytope(const RegionSpec& region) {
    check_region(region);
    const Cone& cone = region.cone;
    IntVec a = cone.truncating_vector();
    auto beta = complement_bound(cone, region.removed, a);
    if (!beta)
        fail(ErrorKind::Unbounded, "C \\ (U + C) is unbounded: some extreme ray has no multiple in U + C");
    if (*beta == 0) return std::nullopt;
    std::vector<Inequality> rows;
    for (const auto& n : cone.normals()) {
        IntVec neg(n.size());
        for (std::size_t j = 0; j < n.size(); ++j) neg[j] = -n[j];
        rows.push_back({neg, Rat(0)});
    }
    rows.push_back({a, *beta});
    if (region.clip) rows.push_back({region.clip->normal, region.clip->bound});
    auto p = Polytope::from_inequalities(cone.dim(), rows);
    if (!p || !p->full_dimensional()) return std::nullopt;
    return p;
}

void subtract_translate(const Polytope& cell, const Cone& cone, const IntVec& g, std::vector<Polytope>& out) {
    const auto& normals = cone.normals();
    std::vector<std::pair<Rat, Rat>> ranges;
    std::vector<Rat> level;
    bool contained = true;
    for (const auto& n : normals) {
        ranges.push_back(cell.range(n));
        level.emplace_back(dot(g, n));
        if (ranges.back().second <= level.back()) {
            out.push_back(cell);  // interior misses g + C
            return;
        }
        contained = contained && ranges.back().first >= level.back();
    }
    if (contained) return;

    std::optional<Polytope> current = cell;
    for (std::size_t i = 0; i < normals.size() && current; ++i) {
        if (ranges[i].first >= level[i]) continue;
        auto below = current->clipped(normals[i], level[i]);
        if (below && below->full_dimensional()) out.push_back(std::move(*below));
        IntVec neg(normals[i].size());
        for (std::size_t j = 0; j < neg.size(); ++j) neg[j] = -normals[i][j];
        auto above = current->clipped(neg, -level[i]);
        if (above && above->full_dimensional()) {
            current = std::move(above);
        } else {
            current.reset();
        }
    }
    // What remains of `current` lies inside g + C.
}

}  // namespace

std::vector<Polytope> region_cells(const RegionSpec& region) {
    if (region.cone.dim() > kMaxExactVolumeDim)
        fail(ErrorKind::DimensionTooLarge, "exact region volume supports at most 4 dimensions");
    auto start = bounding_polytope(region);
    if (!start) return {};
    std::vector<Polytope> cells{std::move(*start)};
    for (const auto& g : minimal_generators(region.cone, region.removed)) {
        std::vector<Polytope> next;
        for (const auto& cell : cells) subtract_translate(cell, region.cone, g, next);
        cells = std::move(next);
        if (cells.empty()) break;
    }
    return cells;
}

VolumeResult region_volume_exact(const RegionSpec& region) {
    auto cells = region_cells(region);
    Rat total = 0;
    for (const auto& c : cells) total += c.volume();
    VolumeResult r;
    r.value = total;
    r.mean = to_double(total);
    r.method = cells.empty() ? VolumeMethod::ClosedForm : VolumeMethod::Arrangement;
    r.cells = cells.size();
    return r;
}

VolumeResult monte_carlo_volume(const std::vector<double>& lo, const std::vector<double>& hi,
                                const std::function<bool(const double*)>& inside, std::uint64_t samples,
                                std::uint64_t seed, int workers) {
    constexpr std::size_t kChunks = 64;
    const std::size_t d = lo.size();
    double box = 1;
    for (std::size_t j = 0; j < d; ++j) box *= hi[j] - lo[j];

    std::vector<std::uint64_t> hits(kChunks, 0);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        std::vector<double> x(d);
        for (std::size_t c = next++; c < kChunks; c = next++) {
            std::uint64_t n = samples / kChunks + (c < samples % kChunks ? 1 : 0);
            std::mt19937_64 rng(seed + c);
            std::uniform_real_distribution<double> unit(0.0, 1.0);
            std::uint64_t h = 0;
            for (std::uint64_t s = 0; s < n; ++s) {
                for (std::size_t j = 0; j < d; ++j) x[j] = lo[j] + (hi[j] - lo[j]) * unit(rng);
                if (inside(x.data())) ++h;
            }
            hits[c] = h;
        }
    };
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();

    std::uint64_t total = 0;
    for (auto h : hits) total += h;
    VolumeResult r;
    r.method = VolumeMethod::MonteCarlo;
    r.samples = samples;
    r.seed = seed;
    if (samples > 0) {
        double f = static_cast<double>(total) / static_cast<double>(samples);
        r.mean = box * f;
        r.standard_error = box * std::sqrt(f * (1 - f) / static_cast<double>(samples));
    }
    return r;
}

namespace {

void box_of(const Polytope& p, std::vector<double>& lo, std::vector<double>& hi) {
    const auto verts = p.vertices();
    const std::size_t d = static_cast<std::size_t>(p.dim());
    lo.assign(d, 0);
    hi.assign(d, 0);
    for (std::size_t j = 0; j < d; ++j) {
        Rat mn = verts.front()[j], mx = verts.front()[j];
        for (const auto& v : verts) {
            mn = std::min(mn, v[j]);
            mx = std::max(mx, v[j]);
        }
        lo[j] = to_double(mn);
        hi[j] = to_double(mx);
    }
}

}  // namespace

VolumeResult region_volume_monte_carlo(const RegionSpec& region, std::uint64_t samples, std::uint64_t seed, int workers) {
    auto start = bounding_polytope(region);
    if (!start) {
        VolumeResult r;
        r.method = VolumeMethod::MonteCarlo;
        r.value = Rat(0);
        r.samples = samples;
        r.seed = seed;
        return r;
    }
    std::vector<double> lo, hi;
    box_of(*start, lo, hi);
    const std::size_t d = lo.size();
    std::vector<std::vector<double>> normals, removed;
    for (const auto& n : region.cone.normals()) normals.emplace_back(n.begin(), n.end());
    for (const auto& u : region.removed) removed.emplace_back(u.begin(), u.end());
    std::vector<double> clip_n;
    double clip_b = 0;
    if (region.clip) {
        clip_n.assign(region.clip->normal.begin(), region.clip->normal.end());
        clip_b = to_double(region.clip->bound);
    }
    auto inside = [&](const double* x) {
        for (const auto& n : normals) {
            double s = 0;
            for (std::size_t j = 0; j < d; ++j) s += n[j] * x[j];
            if (s < 0) return false;
        }
        if (!clip_n.empty()) {
            double s = 0;
            for (std::size_t j = 0; j < d; ++j) s += clip_n[j] * x[j];
            if (s > clip_b) return false;
        }
        for (const auto& u : removed) {
            bool in_translate = true;
            for (const auto& n : normals) {
                double s = 0;
                for (std::size_t j = 0; j < d; ++j) s += n[j] * (x[j] - u[j]);
                if (s < 0) {
                    in_translate = false;
                    break;
                }
            }
            if (in_translate) return false;
        }
        return true;
    };
    return monte_carlo_volume(lo, hi, inside, samples, seed, workers);
}

VolumeResult polytope_volume_monte_carlo(int d, const std::vector<Inequality>& rows, std::uint64_t samples,
                                         std::uint64_t seed, int workers) {
    auto p = Polytope::from_inequalities(d, rows);
    if (!p || !p->full_dimensional()) {
        VolumeResult r;
        r.method = VolumeMethod::MonteCarlo;
        r.value = Rat(0);
        r.samples = samples;
        r.seed = seed;
        return r;
    }
    std::vector<double> lo, hi;
    box_of(*p, lo, hi);
    std::vector<std::vector<double>> normals;
    std::vector<double> bounds;
    for (const auto& in : rows) {
        normals.emplace_back(in.normal.begin(), in.normal.end());
        bounds.push_back(to_double(in.bound));
    }
    auto inside = [&](const double* x) {
        for (std::size_t i = 0; i < normals.size(); ++i) {
            double s = 0;
            for (std::size_t j = 0; j < normals[i].size(); ++j) s += normals[i][j] * x[j];
            if (s > bounds[i]) return false;
        }
        return true;
    };
    return monte_carlo_volume(lo, hi, inside, samples, seed, workers);
}

}  // namespace pbody::geometry
