#include "pbody/geometry/double_description.hpp"

#include <algorithm>

#include "pbody/error.hpp"

namespace pbody::geometry {

DoubleDescription DoubleDescription::from_constraints(const std::vector<BigVec>& rows) {
    if (rows.empty()) fail(ErrorKind::NotPointed, "no constraints: the cone is the whole space");
    const std::size_t d = rows.front().size();

    // Greedy basis of the row space.
    std::vector<std::size_t> basis;
    std::vector<BigVec> picked;
    for (std::size_t i = 0; i < rows.size() && basis.size() < d; ++i) {
        picked.push_back(rows[i]);
        if (rank(picked) == picked.size()) {
            basis.push_back(i);
        } else {
            picked.pop_back();
        }
    }
    if (basis.size() < d) fail(ErrorKind::NotPointed, "constraint rows do not span: the cone contains a line");

    DoubleDescription dd(d);
    for (auto i : basis) dd.constraints_.push_back(rows[i]);

    // Columns of the inverse of the basis block are the initial rays.
    std::vector<RatVec> a(d, RatVec(2 * d));
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) a[i][j] = Rat(dd.constraints_[i][j]);
        a[i][d + i] = 1;
    }
    for (std::size_t c = 0; c < d; ++c) {
        std::size_t p = c;
        while (a[p][c] == 0) ++p;
        std::swap(a[c], a[p]);
        Rat inv = 1 / a[c][c];
        for (auto& x : a[c]) x *= inv;
        for (std::size_t i = 0; i < d; ++i) {
            if (i == c || a[i][c] == 0) continue;
            Rat f = a[i][c];
            for (std::size_t j = c; j < 2 * d; ++j) a[i][j] -= f * a[c][j];
        }
    }
    for (std::size_t j = 0; j < d; ++j) {
        Int lcm = 1;
        for (std::size_t i = 0; i < d; ++i) lcm = boost::multiprecision::lcm(lcm, denominator(a[i][d + j]));
        BigVec ray(d);
        for (std::size_t i = 0; i < d; ++i) ray[i] = numerator(Rat(a[i][d + j] * lcm));
        dd.rays_.push_back(primitive(std::move(ray)));
        Bits bits(d);
        bits.set();
        bits.reset(j);
        dd.tight_.push_back(bits);
    }

    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (std::find(basis.begin(), basis.end(), i) != basis.end()) continue;
        dd.add_constraint(rows[i]);
    }
    return dd;
}

void DoubleDescription::add_constraint(BigVec row) {
    const std::size_t index = constraints_.size();
    constraints_.push_back(std::move(row));
    const BigVec& a = constraints_.back();
    for (auto& bits : tight_) bits.resize(index + 1);

    std::vector<Int> value(rays_.size());
    std::vector<std::size_t> pos, neg, zero;
    for (std::size_t i = 0; i < rays_.size(); ++i) {
        value[i] = dot(std::span<const Int>(a), std::span<const Int>(rays_[i]));
        if (value[i] > 0) {
            pos.push_back(i);
        } else if (value[i] < 0) {
            neg.push_back(i);
        } else {
            zero.push_back(i);
            tight_[i].set(index);
        }
    }
    if (neg.empty()) return;

    std::vector<BigVec> rays;
    std::vector<Bits> tight;
    for (auto i : pos) {
        rays.push_back(rays_[i]);
        tight.push_back(tight_[i]);
    }
    for (auto i : zero) {
        rays.push_back(rays_[i]);
        tight.push_back(tight_[i]);
    }

    const std::size_t min_common = dim_ >= 2 ? dim_ - 2 : 0;
    for (auto p : pos) {
        for (auto n : neg) {
            Bits common = tight_[p] & tight_[n];
            if (common.count() < min_common) continue;
            bool adjacent = true;
            for (std::size_t r = 0; r < rays_.size() && adjacent; ++r) {
                if (r == p || r == n) continue;
                if (common.is_subset_of(tight_[r])) adjacent = false;
            }
            if (!adjacent) continue;
            BigVec ray(dim_);
            for (std::size_t j = 0; j < dim_; ++j) ray[j] = value[p] * rays_[n][j] - value[n] * rays_[p][j];
            rays.push_back(primitive(std::move(ray)));
            common.set(index);
            tight.push_back(std::move(common));
        }
    }
    rays_ = std::move(rays);
    tight_ = std::move(tight);
}

std::vector<BigVec> extreme_rays(const std::vector<BigVec>& rows) {
    auto dd = DoubleDescription::from_constraints(rows);
    auto rays = dd.rays();
    std::sort(rays.begin(), rays.end());
    rays.erase(std::unique(rays.begin(), rays.end()), rays.end());
    return rays;
}

}  // namespace pbody::geometry
