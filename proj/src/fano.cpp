#include "heightlab/fano.hpp"

#include "heightlab/errors.hpp"

#include <algorithm>

namespace heightlab {

BigInt expected_dimension(int n, const std::vector<int>& degrees, int r) {
    if (degrees.empty()) throw ParameterError("expected_dimension: degrees must be nonempty");
    if (r < 0 || r >= n) throw ParameterError("expected_dimension: need 0 <= r < n");
    BigInt dim = BigInt(r + 1) * (n - r);
    for (int d : degrees) {
        if (d < 1) throw ParameterError("expected_dimension: degrees must be >= 1");
        dim -= binomial(static_cast<unsigned>(d + r), static_cast<unsigned>(r));
    }
    return dim;
}

FanoCriterion general_nonempty(int n, const std::vector<int>& degrees, int r) {
    FanoCriterion c;
    c.n = n;
    c.r = r;
    c.degrees = degrees;
    c.expected_dim = expected_dimension(n, degrees, r);
    c.slack = BigInt(n) - 2 * r - static_cast<int>(degrees.size());
    c.nonempty_for_general = c.expected_dim >= 0 && c.slack >= 0;
    return c;
}

BinomInequality binom_inequality(int d, int r) {
    if (d < 2 || r < 2) throw ParameterError("binom_inequality: need d, r >= 2");
    BinomInequality b;
    b.lhs = binomial(static_cast<unsigned>(d + r), static_cast<unsigned>(r));
    b.rhs = BigInt(d) * (r + 1);
    if (b.lhs < b.rhs)
        throw Error("binom_inequality: C(d+r,r) < d(r+1) should be impossible");
    b.equal = b.lhs == b.rhs;
    return b;
}

PlaneClassification contains_plane_general(int n, const std::vector<int>& degrees) {
    if (degrees.empty()) throw ParameterError("contains_plane_general: degrees must be nonempty");
    int d = 0;
    bool all_quadrics = true;
    for (int di : degrees) {
        if (di < 2) throw ParameterError("contains_plane_general: degrees must be >= 2");
        d += di;
        all_quadrics = all_quadrics && di == 2;
    }
    if (d >= n + 1)
        throw OutOfRegime("contains_plane_general: not Fano (d >= n+1)");
    if (d >= n - 1)
        throw OutOfRegime("contains_plane_general: regime requires d < n-1 "
                          "(d = n-1 is the lines case of the expected-dimension formula)");
    const int s = static_cast<int>(degrees.size());
    // the boundary family needs n > 4: at n = 4 the slack n - 2r - s is
    // already negative and a general quadric threefold has no 2-plane
    if (n > 4 && n % 2 == 0 && all_quadrics && s == n / 2 - 1)
        return PlaneClassification::QuadricsBoundaryCase;
    // strict inequality sum C(d_i+r, r) > d(r+1) holds away from the boundary
    // family, so a general X contains no (n-d)-plane
    return PlaneClassification::NoPlaneForGeneral;
}

bool birch_bound(i64 n, int d, i64 sigma) {
    if (d < 2) throw ParameterError("birch_bound: need d >= 2");
    if (sigma < 0) throw ParameterError("birch_bound: need sigma >= 0");
    BigInt rhs = BigInt(sigma) + BigInt(d - 1) * big_pow(BigInt(2), static_cast<unsigned>(d));
    return BigInt(n) >= rhs;
}

LinearSubspace fermat_diagonal_plane(int n) {
    if (n < 3) throw ParameterError("fermat_diagonal_plane: need n >= 3");
    std::vector<std::vector<i64>> rows;
    if (n % 2 == 1) {
        // x_i = x_{i+r+1} for i = 0..r, n = 2r+1
        const int r = (n - 1) / 2;
        for (int i = 0; i <= r; ++i) {
            std::vector<i64> row(n + 1, 0);
            row[i] = 1;
            row[i + r + 1] = 1;
            rows.push_back(std::move(row));
        }
    } else {
        // x_0 = 0 and x_i = x_{i+r} for i = 1..r, n = 2r
        const int r = n / 2;
        for (int i = 1; i <= r; ++i) {
            std::vector<i64> row(n + 1, 0);
            row[i] = 1;
            row[i + r] = 1;
            rows.push_back(std::move(row));
        }
    }
    return LinearSubspace(std::move(rows));
}

LinearSubspace fermat_plane(int n, int d) {
    if (n <= d) throw ParameterError("fermat_plane: need n > d");
    const int min_d = (n % 2 == 1) ? (n + 1) / 2 : n / 2 + 1;
    if (d < min_d)
        throw ParameterError("fermat_plane: need d >= " + std::to_string(min_d) +
                             " for n = " + std::to_string(n));
    LinearSubspace full = fermat_diagonal_plane(n);
    const int want_rows = n - d + 1;
    std::vector<std::vector<i64>> rows(full.basis().begin(), full.basis().begin() + want_rows);
    LinearSubspace plane{std::move(rows)};
    if (!plane.contained_in(fermat_hypersurface(n, d)))
        throw Error("fermat_plane: symbolic vanishing failed"); // construction bug if reached
    return plane;
}

} // namespace heightlab
