#include "pbody/rational.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <limits>

#include "pbody/error.hpp"

namespace pbody {

std::string_view kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::NotFullDimensional: return "NotFullDimensional";
        case ErrorKind::NotPointed: return "NotPointed";
        case ErrorKind::NotTruncating: return "NotTruncating";
        case ErrorKind::Unbounded: return "Unbounded";
        case ErrorKind::DimensionTooLarge: return "DimensionTooLarge";
        case ErrorKind::SingularBasis: return "SingularBasis";
        case ErrorKind::RayNotInLattice: return "RayNotInLattice";
        case ErrorKind::NotPrimary: return "NotPrimary";
        case ErrorKind::BoundTooSmall: return "BoundTooSmall";
        case ErrorKind::GeneratorOutsideSemigroup: return "GeneratorOutsideSemigroup";
        case ErrorKind::EmptyGenerators: return "EmptyGenerators";
        case ErrorKind::PointOutsideSemigroup: return "PointOutsideSemigroup";
        case ErrorKind::DimensionNotTwo: return "DimensionNotTwo";
        case ErrorKind::BoundExhausted: return "BoundExhausted";
        case ErrorKind::BoxTooLarge: return "BoxTooLarge";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::ValidationError: return "ValidationError";
        case ErrorKind::CacheCorrupt: return "CacheCorrupt";
        case ErrorKind::Overflow: return "Overflow";
    }
    return "Unknown";
}

std::string to_string(const Rat& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

std::string to_string(const IntVec& v) {
    std::string out = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(v[i]);
    }
    return out + ")";
}

namespace {

Int parse_int(std::string_view text, std::string_view whole) {
    std::string s(text);
    auto begin = s.begin();
    if (begin != s.end() && (*begin == '-' || *begin == '+')) ++begin;
    if (begin == s.end() || !std::all_of(begin, s.end(), [](char c) { return c >= '0' && c <= '9'; }))
        fail(ErrorKind::ParseError, "not a rational number: \"" + std::string(whole) + "\"");
    if (s.front() == '+') s.erase(s.begin());
    return Int(s);
}

}  // namespace

Rat parse_rat(std::string_view text) {
    auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rat(parse_int(text, text));
    Int num = parse_int(text.substr(0, slash), text);
    Int den = parse_int(text.substr(slash + 1), text);
    if (den == 0) fail(ErrorKind::ParseError, "zero denominator in \"" + std::string(text) + "\"");
    return Rat(num, den);
}

std::string to_decimal(const Rat& r, int digits) {
    Int scale = boost::multiprecision::pow(Int(10), static_cast<unsigned>(digits));
    Rat scaled = abs(r) * scale + Rat(1, 2);
    Int q = floor_of(scaled);
    std::string body = q.str();
    if (digits > 0) {
        if (body.size() <= static_cast<std::size_t>(digits))
            body.insert(0, static_cast<std::size_t>(digits) + 1 - body.size(), '0');
        body.insert(body.size() - static_cast<std::size_t>(digits), ".");
    }
    bool negative = r < 0 && q != 0;
    return negative ? "-" + body : body;
}

double to_double(const Rat& r) { return r.convert_to<double>(); }

Int floor_of(const Rat& r) {
    Int q, rem;
    boost::multiprecision::divide_qr(numerator(r), denominator(r), q, rem);
    if (rem < 0) q -= 1;
    return q;
}

Int ceil_of(const Rat& r) { return -floor_of(-r); }

std::int64_t to_int64(const Int& value) {
    if (value > std::numeric_limits<std::int64_t>::max() || value < std::numeric_limits<std::int64_t>::min())
        fail(ErrorKind::Overflow, "integer " + value.str() + " does not fit in 64 bits");
    return value.convert_to<std::int64_t>();
}

IntVec primitive(IntVec v) {
    std::int64_t g = 0;
    for (auto x : v) g = std::gcd(g, std::abs(x));
    if (g > 1)
        for (auto& x : v) x /= g;
    return v;
}

BigVec primitive(BigVec v) {
    Int g = 0;
    for (const auto& x : v) g = gcd(g, abs(x));
    if (g > 1)
        for (auto& x : v) x /= g;
    return v;
}

BigVec to_big(std::span<const std::int64_t> v) {
    BigVec out;
    out.reserve(v.size());
    for (auto x : v) out.emplace_back(x);
    return out;
}

IntVec to_int64(const BigVec& v) {
    IntVec out;
    out.reserve(v.size());
    for (const auto& x : v) out.push_back(to_int64(x));
    return out;
}

std::int64_t dot(std::span<const std::int64_t> x, std::span<const std::int64_t> y) {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

Int dot(std::span<const Int> x, std::span<const Int> y) {
    Int s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

Rat dot(std::span<const std::int64_t> x, std::span<const Rat> y) {
    Rat s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) s += y[i] * x[i];
    return s;
}

bool is_zero(std::span<const std::int64_t> v) {
    return std::all_of(v.begin(), v.end(), [](std::int64_t x) { return x == 0; });
}

std::int64_t ipow(std::int64_t base, int exponent) {
    std::int64_t r = 1;
    for (int i = 0; i < exponent; ++i) {
        if (r > std::numeric_limits<std::int64_t>::max() / base)
            fail(ErrorKind::Overflow, "power overflows 64 bits");
        r *= base;
    }
    return r;
}

std::size_t rank(const std::vector<BigVec>& input) {
    if (input.empty()) return 0;
    std::vector<BigVec> m = input;
    const std::size_t cols = m.front().size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
        std::size_t pivot = r;
        while (pivot < m.size() && m[pivot][c] == 0) ++pivot;
        if (pivot == m.size()) continue;
        std::swap(m[r], m[pivot]);
        for (std::size_t i = r + 1; i < m.size(); ++i) {
            if (m[i][c] == 0) continue;
            Int a = m[r][c], b = m[i][c];
            for (std::size_t j = c; j < cols; ++j) m[i][j] = m[i][j] * a - m[r][j] * b;
            m[i] = primitive(std::move(m[i]));
        }
        ++r;
    }
    return r;
}

std::size_t rank(const std::vector<IntVec>& rows) {
    std::vector<BigVec> big;
    big.reserve(rows.size());
    for (const auto& r : rows) big.push_back(to_big(r));
    return rank(big);
}

Int determinant(std::vector<BigVec> m) {
    const std::size_t n = m.size();
    if (n == 0) return 1;
    Int sign = 1;
    Int prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            std::size_t p = k + 1;
            while (p < n && m[p][k] == 0) ++p;
            if (p == n) return 0;
            std::swap(m[k], m[p]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

std::vector<RatVec> inverse(const std::vector<IntVec>& rows) {
    const std::size_t n = rows.size();
    std::vector<RatVec> a(n, RatVec(2 * n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) a[i][j] = rows[i][j];
        a[i][n + i] = 1;
    }
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && a[p][c] == 0) ++p;
        if (p == n) return {};
        std::swap(a[c], a[p]);
        Rat inv = 1 / a[c][c];
        for (auto& x : a[c]) x *= inv;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == c || a[i][c] == 0) continue;
            Rat f = a[i][c];
            for (std::size_t j = 0; j < 2 * n; ++j) a[i][j] -= f * a[c][j];
        }
    }
    std::vector<RatVec> out(n, RatVec(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out[i][j] = a[i][n + j];
    return out;
}

}  // namespace pbody
