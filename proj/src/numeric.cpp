#include "heightlab/numeric.hpp"

#include <cmath>
#include <stdexcept>

namespace heightlab {

i64 isqrt64(i64 v) {
    if (v < 0) throw std::invalid_argument("isqrt64: negative input");
    if (v == 0) return 0;
    i64 r = static_cast<i64>(std::sqrt(static_cast<double>(v)));
    while (r > 0 && r * r > v) --r;
    while ((r + 1) * (r + 1) <= v) ++r;
    return r;
}

i64 iroot64(i64 v, int e) {
    if (v < 0 || e < 1) throw std::invalid_argument("iroot64: bad input");
    if (e == 1 || v <= 1) return v;
    i64 r = static_cast<i64>(std::llround(std::pow(static_cast<double>(v), 1.0 / e)));
    auto pow_le = [&](i64 t) {
        // t^e <= v with overflow guard
        i128 acc = 1;
        for (int i = 0; i < e; ++i) {
            acc *= t;
            if (acc > v) return false;
        }
        return true;
    };
    while (r > 0 && !pow_le(r)) --r;
    while (pow_le(r + 1)) ++r;
    return r;
}

BigInt big_isqrt(const BigInt& v) { return boost::multiprecision::sqrt(v); }

BigInt big_iroot(const BigInt& v, int e) {
    if (v < 0 || e < 1) throw std::invalid_argument("big_iroot: bad input");
    if (e == 1 || v <= 1) return v;
    if (e == 2) return big_isqrt(v);
    // bisection on bit length
    BigInt lo = 0, hi = BigInt(1) << (msb(v) / e + 2);
    while (lo < hi) {
        BigInt mid = (lo + hi + 1) / 2;
        if (big_pow(mid, static_cast<unsigned>(e)) <= v)
            lo = mid;
        else
            hi = mid - 1;
    }
    return lo;
}

bool is_square64(i64 v) {
    if (v < 0) return false;
    // quick residue filters before the exact root
    static const auto mask64 = [] {
        std::uint64_t m = 0;
        for (int i = 0; i < 64; ++i) m |= std::uint64_t(1) << ((i * i) & 63);
        return m;
    }();
    if ((mask64 >> (v & 63) & 1) == 0) return false;
    i64 r = isqrt64(v);
    return r * r == v;
}

BigInt big_pow(const BigInt& base, unsigned exp) { return boost::multiprecision::pow(base, exp); }

BigInt binomial(unsigned n, unsigned k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    BigInt r = 1;
    for (unsigned i = 1; i <= k; ++i) {
        r *= n - k + i;
        r /= i;
    }
    return r;
}

Rational rational_pow(const Rational& base, unsigned exp) {
    Rational r(big_pow(numerator(base), exp), big_pow(denominator(base), exp));
    return r;
}

Rational parse_rational(const std::string& text) {
    auto slash = text.find('/');
    try {
        if (slash == std::string::npos) return Rational(BigInt(text));
        BigInt num(text.substr(0, slash));
        BigInt den(text.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("zero denominator");
        return Rational(num, den);
    } catch (const std::exception&) {
        throw std::invalid_argument("parse_rational: malformed rational '" + text + "'");
    }
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

std::string to_string(const Rational& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

i64 weighted_coord_bound(const Rational& B, int e, const BigInt& num, const BigInt& den) {
    if (num <= 0 || den <= 0) throw std::invalid_argument("weighted_coord_bound: weight must be positive");
    // (num*t)^e * Bden <= Bnum * den^e
    const BigInt& bn = numerator(B);
    const BigInt& bd = denominator(B);
    if (bn < 0) return -1;
    BigInt rhs = bn * big_pow(den, static_cast<unsigned>(e));
    BigInt cap = rhs / bd; // (num*t)^e <= cap
    BigInt root = big_iroot(cap, e);
    BigInt t = root / num;
    // adjust for rounding at the boundary
    while (big_pow(num * (t + 1), static_cast<unsigned>(e)) * bd <= rhs) ++t;
    while (t > 0 && big_pow(num * t, static_cast<unsigned>(e)) * bd > rhs) --t;
    return t.convert_to<i64>();
}

} // namespace heightlab
