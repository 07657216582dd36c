#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <numeric>
#include <string>

namespace heightlab {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline i64 iabs64(i64 v) { return v < 0 ? -v : v; }

inline i64 gcd64(i64 a, i64 b) {
    a = iabs64(a);
    b = iabs64(b);
    while (b != 0) {
        i64 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

/// Floor of the integer square root; v must be >= 0.
i64 isqrt64(i64 v);

/// Floor of the e-th root of v >= 0, e >= 1.
i64 iroot64(i64 v, int e);

BigInt big_isqrt(const BigInt& v);
BigInt big_iroot(const BigInt& v, int e);

/// True iff v is a perfect square (v < 0 is never a square).
bool is_square64(i64 v);

BigInt big_pow(const BigInt& base, unsigned exp);
BigInt binomial(unsigned n, unsigned k);

Rational rational_pow(const Rational& base, unsigned exp);
/// Parses "p", "-p" or "p/q" with q > 0 after normalization.
Rational parse_rational(const std::string& text);
double to_double(const Rational& r);
std::string to_string(const Rational& r);

/// Largest t >= 0 with (num*t)^e * Bden <= Bnum * den^e, i.e. the integer
/// box bound for a coordinate weighted by num/den under height bound B.
/// Returns -1 if even t = 0 fails (cannot happen for B >= 0).
i64 weighted_coord_bound(const Rational& B, int e, const BigInt& num, const BigInt& den);

} // namespace heightlab
