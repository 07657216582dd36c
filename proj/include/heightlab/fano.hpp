#pragma once

#include "heightlab/variety.hpp"

#include <vector>

namespace heightlab {

/// Numerical non-emptiness criterion for the scheme of r-planes on a
/// general complete intersection.
struct FanoCriterion {
    int n = 0;
    int r = 0;
    std::vector<int> degrees;
    BigInt expected_dim = 0; // (r+1)(n-r) - sum C(d_i + r, r)
    BigInt slack = 0;        // n - 2r - s
    bool nonempty_for_general = false;
};

/// (r+1)(n-r) - sum_i C(d_i + r, r); may be negative.
BigInt expected_dimension(int n, const std::vector<int>& degrees, int r);

FanoCriterion general_nonempty(int n, const std::vector<int>& degrees, int r);

struct BinomInequality {
    BigInt lhs; // C(d+r, r)
    BigInt rhs; // d(r+1)
    bool equal = false;
};

/// C(d+r, r) vs d(r+1) for d, r >= 2; the inequality lhs >= rhs always
/// holds, with equality exactly at d = r = 2.
BinomInequality binom_inequality(int d, int r);

enum class PlaneClassification {
    PlaneForGeneral,      // not produced in the regime d < n-1 (kept for API completeness)
    NoPlaneForGeneral,
    QuadricsBoundaryCase, // n even, all degrees 2, s = n/2 - 1
};

/// Whether a general complete intersection of the given degrees contains an
/// (n-d)-plane; restricted to the regime all d_i >= 2, d < n-1.
PlaneClassification contains_plane_general(int n, const std::vector<int>& degrees);

/// n >= sigma + (d-1) 2^d.
bool birch_bound(i64 n, int d, i64 sigma);

/// The (n-d)-plane on the diagonal hypersurface fermat_hypersurface(n, d):
/// pairs of coordinates matched diagonally (and x_0 = 0 for even n),
/// truncated to dimension n-d by zeroing trailing parameters.
LinearSubspace fermat_plane(int n, int d);

/// The full diagonal plane of the construction before truncation.
LinearSubspace fermat_diagonal_plane(int n);

} // namespace heightlab
