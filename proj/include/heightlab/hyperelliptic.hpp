#pragma once

#include "heightlab/numeric.hpp"

#include <array>
#include <vector>

namespace heightlab {

/// Genus-2 curve y^2 = f(x) with deg f = 5 (one point at infinity).
struct HyperellipticCurve {
    std::vector<i64> f; // f[i] multiplies x^i; f[5] != 0

    explicit HyperellipticCurve(std::vector<i64> coeffs);

    /// y^2 = x^5 - x^4 - 2x^3 + 18x^2 + x - 17, the curve attached to the
    /// ct_quadrics pencil.
    static HyperellipticCurve ct_quadrics_curve();
};

/// #C(F_q) for q = p^extension_degree, extension_degree in {1, 2}, counted
/// as 1 + sum_x (1 + chi(f(x))) with chi the quadratic character of F_q.
u64 hyperelliptic_count(const HyperellipticCurve& C, i64 p, int extension_degree);

/// T^4 - a1 T^3 + a2 T^2 - p a1 T + p^2.
struct FrobeniusCharpoly {
    i64 p = 0;
    i64 a1 = 0;
    i64 a2 = 0;

    /// coefficients c[0..4] of T^0..T^4
    std::array<i64, 5> coefficients() const;
    /// point count over F_{p^ext} predicted by the eigenvalue power sums
    u64 predicted_count(int extension_degree) const;
};

/// Builds the charpoly from counts over F_p and F_{p^2}; enforces the Weil
/// bounds and integrality of a2.
FrobeniusCharpoly frobenius_charpoly(u64 N1, u64 N2, i64 p);

/// Monic integer quartic T^4 + c3 T^3 + c2 T^2 + c1 T + c0, coefficients
/// ordered low to high (c[0] = constant term). Irreducibility over Q by
/// rational-root test plus bounded search over (2,2) factorizations.
bool is_irreducible_quartic(const std::array<i64, 4>& c);

/// disc(f) for deg f = 5, computed exactly via the resultant of f and f'.
BigInt quintic_discriminant(const std::vector<i64>& f);

/// disc(f) != 0 mod p; requires p odd.
bool verify_good_reduction(const HyperellipticCurve& C, i64 p);

} // namespace heightlab
