#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/gmp.hpp>

namespace pbody {

using Int = boost::multiprecision::mpz_int;
using Rat = boost::multiprecision::mpq_rational;

using IntVec = std::vector<std::int64_t>;
using RatVec = std::vector<Rat>;
using BigVec = std::vector<Int>;

/// Hard cap on the ambient dimension; hot loops use stack buffers of this size.
inline constexpr std::size_t kMaxDim = 16;

/// "p/q", or "n" when the denominator is one.
std::string to_string(const Rat& r);
std::string to_string(const IntVec& v);

/// Accepts "n", "-n", "p/q" (any sign, not necessarily reduced).
Rat parse_rat(std::string_view text);

/// Rounded decimal rendering with a fixed number of fractional digits.
std::string to_decimal(const Rat& r, int digits = 12);

double to_double(const Rat& r);

Int floor_of(const Rat& r);
Int ceil_of(const Rat& r);

std::int64_t to_int64(const Int& value);

/// Divides out the gcd of the entries; the zero vector is returned unchanged.
IntVec primitive(IntVec v);
BigVec primitive(BigVec v);

BigVec to_big(std::span<const std::int64_t> v);
IntVec to_int64(const BigVec& v);

std::int64_t dot(std::span<const std::int64_t> x, std::span<const std::int64_t> y);
Int dot(std::span<const Int> x, std::span<const Int> y);
Rat dot(std::span<const std::int64_t> x, std::span<const Rat> y);

bool is_zero(std::span<const std::int64_t> v);

std::int64_t ipow(std::int64_t base, int exponent);

/// Exact rank of an integer matrix given as a list of rows.
std::size_t rank(const std::vector<BigVec>& rows);
std::size_t rank(const std::vector<IntVec>& rows);

/// Determinant of a square integer matrix (fraction-free elimination).
Int determinant(std::vector<BigVec> rows);

/// Inverse of a square matrix; empty when the matrix is singular.
std::vector<RatVec> inverse(const std::vector<IntVec>& rows);

}  // namespace pbody
