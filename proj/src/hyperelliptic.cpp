#include "heightlab/hyperelliptic.hpp"

#include "heightlab/errors.hpp"

#include <algorithm>
#include <limits>

namespace heightlab {

HyperellipticCurve::HyperellipticCurve(std::vector<i64> coeffs) : f(std::move(coeffs)) {
    if (f.size() != 6 || f[5] == 0)
        throw ParameterError("HyperellipticCurve: f must have degree exactly 5");
}

HyperellipticCurve HyperellipticCurve::ct_quadrics_curve() {
    return HyperellipticCurve({-17, 1, 18, -2, -1, 1});
}

namespace {

i64 mod_norm(i64 v, i64 p) {
    v %= p;
    return v < 0 ? v + p : v;
}

i64 pow_mod(i64 b, i64 e, i64 p) {
    i64 r = 1 % p;
    b = mod_norm(b, p);
    while (e > 0) {
        if (e & 1) r = static_cast<i64>((i128)r * b % p);
        b = static_cast<i64>((i128)b * b % p);
        e >>= 1;
    }
    return r;
}

// quadratic character of F_p as -1/0/1
int chi_p(i64 v, i64 p) {
    v = mod_norm(v, p);
    if (v == 0) return 0;
    i64 e = pow_mod(v, (p - 1) / 2, p);
    return e == 1 ? 1 : -1;
}

i64 eval_poly_mod(const std::vector<i64>& f, i64 x, i64 p) {
    i64 acc = 0;
    for (int i = static_cast<int>(f.size()) - 1; i >= 0; --i)
        acc = mod_norm((i128)acc * x % p + f[i], p);
    return acc;
}

// F_{p^2} = F_p[t]/(t^2 - c) for the smallest quadratic non-residue c
struct Fp2 {
    i64 p, c;

    explicit Fp2(i64 prime) : p(prime), c(0) {
        for (i64 v = 2; v < p; ++v)
            if (chi_p(v, p) == -1) { c = v; break; }
        if (c == 0) throw ParameterError("Fp2: no quadratic non-residue (p = 2?)");
    }

    using El = std::pair<i64, i64>; // a0 + a1 t

    El mul(El a, El b) const {
        i64 r0 = mod_norm((i128)a.first * b.first % p + (i128)a.second * b.second % p * c % p, p);
        i64 r1 = mod_norm((i128)a.first * b.second % p + (i128)a.second * b.first % p, p);
        return {r0, r1};
    }
    El add_scalar(El a, i64 s) const { return {mod_norm(a.first + s, p), a.second}; }

    // chi of F_q via the norm: chi_q(z) = chi_p(N(z)), N(z) = z0^2 - c z1^2
    int chi(El z) const {
        i64 norm = mod_norm((i128)z.first * z.first % p - (i128)z.second * z.second % p * c % p, p);
        return chi_p(norm, p);
    }
};

} // namespace

u64 hyperelliptic_count(const HyperellipticCurve& C, i64 p, int extension_degree) {
    if (p % 2 == 0) throw ParameterError("hyperelliptic_count: p must be odd");
    if (extension_degree != 1 && extension_degree != 2)
        throw ParameterError("hyperelliptic_count: extension degree must be 1 or 2");
    if (!verify_good_reduction(C, p))
        throw BadReduction("hyperelliptic_count: disc(f) = 0 mod " + std::to_string(p));
    if (extension_degree == 1) {
        u64 total = 1; // the point at infinity (deg f = 5)
        for (i64 x = 0; x < p; ++x)
            total += static_cast<u64>(1 + chi_p(eval_poly_mod(C.f, x, p), p));
        return total;
    }
    Fp2 F(p);
    u64 total = 1;
    for (i64 x0 = 0; x0 < p; ++x0)
        for (i64 x1 = 0; x1 < p; ++x1) {
            Fp2::El x{x0, x1};
            // Horner in F_{p^2}
            Fp2::El acc{0, 0};
            for (int i = 5; i >= 0; --i) acc = F.add_scalar(F.mul(acc, x), mod_norm(C.f[i], p));
            total += static_cast<u64>(1 + F.chi(acc));
        }
    return total;
}

std::array<i64, 5> FrobeniusCharpoly::coefficients() const {
    return {p * p, -p * a1, a2, -a1, 1};
}

u64 FrobeniusCharpoly::predicted_count(int extension_degree) const {
    if (extension_degree == 1) return static_cast<u64>(p + 1 - a1);
    if (extension_degree == 2) {
        // power sum s2 = a1^2 - 2 a2 of the four Frobenius eigenvalues
        i64 s2 = a1 * a1 - 2 * a2;
        return static_cast<u64>(p * p + 1 - s2);
    }
    throw ParameterError("FrobeniusCharpoly: extension degree must be 1 or 2");
}

FrobeniusCharpoly frobenius_charpoly(u64 N1, u64 N2, i64 p) {
    FrobeniusCharpoly fc;
    fc.p = p;
    fc.a1 = p + 1 - static_cast<i64>(N1);
    const i64 s2 = p * p + 1 - static_cast<i64>(N2);
    if ((fc.a1 * fc.a1 - s2) % 2 != 0)
        throw InconsistentCounts("frobenius_charpoly: a2 is not an integer");
    fc.a2 = (fc.a1 * fc.a1 - s2) / 2;
    // Weil bounds, as necessary conditions
    if (fc.a1 * fc.a1 > 16 * p)
        throw InconsistentCounts("frobenius_charpoly: |a1| violates the Weil bound");
    if (4 * iabs64(fc.a2) > 8 * p + fc.a1 * fc.a1)
        throw InconsistentCounts("frobenius_charpoly: |a2| violates the Weil bound");
    return fc;
}

namespace {

i64 eval_monic_quartic(const std::array<i64, 4>& c, i64 t) {
    i128 acc = 1;
    for (int i = 3; i >= 0; --i) acc = acc * t + c[i];
    if (acc > std::numeric_limits<i64>::max() || acc < std::numeric_limits<i64>::min())
        return acc > 0 ? 1 : -1; // only the sign matters for != 0
    return static_cast<i64>(acc);
}

std::vector<i64> divisors_of(i64 v) {
    std::vector<i64> ds;
    v = iabs64(v);
    for (i64 d = 1; d * d <= v; ++d)
        if (v % d == 0) {
            ds.push_back(d);
            if (d != v / d) ds.push_back(v / d);
        }
    return ds;
}

} // namespace

bool is_irreducible_quartic(const std::array<i64, 4>& c) {
    const i64 c0 = c[0], c1 = c[1], c2 = c[2], c3 = c[3];
    if (c0 == 0) return false; // root at 0
    // linear factors: integer roots divide the constant term
    for (i64 d : divisors_of(c0))
        for (i64 r : {d, -d})
            if (eval_monic_quartic(c, r) == 0) return false;
    // quadratic factors (T^2 + aT + b)(T^2 + cT + d), b d = c0
    for (i64 babs : divisors_of(c0))
        for (i64 b : {babs, -babs}) {
            const i64 d = c0 / b;
            if (b * d != c0) continue;
            if (d != b) {
                const i64 num = c1 - b * c3;
                if (num % (d - b) != 0) continue;
                const i64 a = num / (d - b);
                const i64 cc = c3 - a;
                if (b + d + a * cc == c2) return false;
            } else {
                // a + cc = c3, a*cc = c2 - 2b, and c1 = b*c3 must hold
                if (c1 != b * c3) continue;
                const i64 disc = c3 * c3 - 4 * (c2 - 2 * b);
                if (disc < 0 || !is_square64(disc)) continue;
                const i64 root = isqrt64(disc);
                if ((c3 + root) % 2 == 0) return false;
            }
        }
    return true;
}

namespace {

BigInt det_bareiss(std::vector<std::vector<BigInt>> a) {
    const int n = static_cast<int>(a.size());
    if (n == 0) return 1;
    BigInt prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (a[k][k] == 0) {
            int sw = -1;
            for (int i = k + 1; i < n; ++i)
                if (a[i][k] != 0) { sw = i; break; }
            if (sw < 0) return 0;
            std::swap(a[k], a[sw]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j)
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
        prev = a[k][k];
    }
    return sign > 0 ? a[n - 1][n - 1] : -a[n - 1][n - 1];
}

} // namespace

BigInt quintic_discriminant(const std::vector<i64>& f) {
    if (f.size() != 6 || f[5] == 0)
        throw ParameterError("quintic_discriminant: degree must be exactly 5");
    // Res(f, f') via the 9x9 Sylvester matrix; disc = Res / lc with the
    // degree-5 sign (-1)^(5*4/2) = +1
    std::vector<i64> df(5);
    for (int i = 1; i <= 5; ++i) df[i - 1] = static_cast<i64>(i) * f[i];
    std::vector<std::vector<BigInt>> M(9, std::vector<BigInt>(9, 0));
    for (int row = 0; row < 4; ++row)
        for (int j = 0; j <= 5; ++j) M[row][row + j] = f[5 - j];
    for (int row = 0; row < 5; ++row)
        for (int j = 0; j <= 4; ++j) M[4 + row][row + j] = df[4 - j];
    BigInt res = det_bareiss(std::move(M));
    return res / f[5];
}

bool verify_good_reduction(const HyperellipticCurve& C, i64 p) {
    if (p % 2 == 0) throw ParameterError("verify_good_reduction: p must be odd");
    return quintic_discriminant(C.f) % p != 0;
}

} // namespace heightlab
