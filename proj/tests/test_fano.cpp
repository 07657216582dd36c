#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "heightlab/enumerate.hpp"
#include "heightlab/fano.hpp"

#include <functional>

using namespace heightlab;

TEST_CASE("expected dimension of plane schemes") {
    CHECK(expected_dimension(4, {3}, 1) == 2);       // lines on a cubic threefold
    CHECK(expected_dimension(5, {2, 2}, 1) == 2);    // lines on two quadrics in P^5
    CHECK(expected_dimension(4, {3}, 2) == -4);      // no planes on a general cubic threefold
    CHECK_THROWS_AS(expected_dimension(4, {3}, 4), ParameterError);
    CHECK_THROWS_AS(expected_dimension(4, {}, 1), ParameterError);
}

TEST_CASE("lines on complete intersections with d = n - 1 have dim n - s - 1") {
    // all degree multisets with d_i >= 2 summing to n - 1, for 3 <= n <= 12
    for (int n = 3; n <= 12; ++n) {
        const int target = n - 1;
        std::vector<int> degrees;
        std::function<void(int, int)> scan = [&](int remaining, int min_d) {
            if (remaining == 0) {
                if (!degrees.empty()) {
                    const int s = static_cast<int>(degrees.size());
                    CHECK(expected_dimension(n, degrees, 1) == n - 1 - s);
                }
                return;
            }
            for (int d = min_d; d <= remaining; ++d) {
                degrees.push_back(d);
                scan(remaining - d, d);
                degrees.pop_back();
            }
        };
        scan(target, 2);
    }
}

TEST_CASE("non-emptiness criterion for general complete intersections") {
    auto c = general_nonempty(4, {3}, 1);
    CHECK(c.nonempty_for_general);
    CHECK(c.expected_dim == 2);
    CHECK(c.slack == 1);

    CHECK_FALSE(general_nonempty(4, {3}, 2).nonempty_for_general);
    // boundary family: expected dimension 0 with slack 0 still counts
    auto b = general_nonempty(6, {2, 2}, 2);
    CHECK(b.expected_dim == 0);
    CHECK(b.slack == 0);
    CHECK(b.nonempty_for_general);
}

TEST_CASE("binomial inequality: always >=, equality exactly at (2,2)") {
    auto eq = binom_inequality(2, 2);
    CHECK(eq.lhs == 6);
    CHECK(eq.rhs == 6);
    CHECK(eq.equal);
    CHECK_FALSE(binom_inequality(3, 2).equal);
    CHECK(binom_inequality(3, 2).lhs == 10);
    CHECK(binom_inequality(3, 2).rhs == 9);
    CHECK_FALSE(binom_inequality(2, 3).equal);
    CHECK(binom_inequality(2, 3).lhs == 10);
    CHECK(binom_inequality(2, 3).rhs == 8);
    int equalities = 0;
    for (int d = 2; d <= 30; ++d)
        for (int r = 2; r <= 30; ++r) {
            auto b = binom_inequality(d, r);
            CHECK(b.lhs >= b.rhs);
            equalities += b.equal;
        }
    CHECK(equalities == 1);
    CHECK_THROWS_AS(binom_inequality(1, 2), ParameterError);
}

TEST_CASE("plane classification for general complete intersections") {
    CHECK(contains_plane_general(6, {2, 2}) == PlaneClassification::QuadricsBoundaryCase);
    CHECK(contains_plane_general(8, {2, 2, 2}) == PlaneClassification::QuadricsBoundaryCase);
    CHECK(contains_plane_general(7, {2, 3}) == PlaneClassification::NoPlaneForGeneral);
    CHECK(contains_plane_general(9, {2, 2, 2}) == PlaneClassification::NoPlaneForGeneral);
    CHECK_THROWS_AS(contains_plane_general(4, {3}), OutOfRegime);   // d = n - 1
    CHECK_THROWS_AS(contains_plane_general(5, {2, 3}), OutOfRegime);
    CHECK_THROWS_AS(contains_plane_general(7, {1, 2}), ParameterError);
}

TEST_CASE("classification is consistent with the non-emptiness criterion") {
    std::function<void(int, std::vector<int>&, int)> scan = [&](int n, std::vector<int>& degs,
                                                                int min_d) {
        int d = 0;
        for (int v : degs) d += v;
        if (!degs.empty() && d < n - 1 && n - 2 * (n - d) - static_cast<int>(degs.size()) >= -20) {
            int r = n - d;
            if (r >= 2) {
                auto cls = contains_plane_general(n, degs);
                if (cls == PlaneClassification::NoPlaneForGeneral)
                    CHECK_FALSE(general_nonempty(n, degs, r).nonempty_for_general);
                else
                    CHECK(general_nonempty(n, degs, r).nonempty_for_general);
            }
        }
        if (d >= n) return;
        for (int nd = min_d; nd <= n - d && nd <= 4; ++nd) {
            degs.push_back(nd);
            scan(n, degs, nd);
            degs.pop_back();
        }
    };
    for (int n = 4; n <= 10; ++n) {
        std::vector<int> degs;
        scan(n, degs, 2);
    }
}

TEST_CASE("Birch bound") {
    CHECK(birch_bound(17, 3, 1));
    CHECK_FALSE(birch_bound(16, 3, 1));
    CHECK(birch_bound(49, 4, 1));        // (d-1)2^d = 48 at d = 4
    CHECK_FALSE(birch_bound(48, 4, 1));
    CHECK_THROWS_AS(birch_bound(10, 1, 0), ParameterError);
    // induction claim: (d-1)2^d >= s(s+1)(e-1)2^(e-1) for d = s e
    for (i64 s = 1; s <= 12; ++s)
        for (i64 e = 1; e <= 12; ++e) {
            const i64 d = s * e;
            BigInt lhs = BigInt(d - 1) * big_pow(BigInt(2), static_cast<unsigned>(d));
            BigInt rhs = BigInt(s) * (s + 1) * (e - 1) * big_pow(BigInt(2), static_cast<unsigned>(e - 1));
            CHECK(lhs >= rhs);
        }
}

TEST_CASE("diagonal hypersurface planes vanish symbolically") {
    // even case: the line on the cubic threefold
    auto l = fermat_plane(4, 3);
    CHECK(l.r() == 1);
    std::vector<std::vector<i64>> want{{0, 1, 0, 1, 0}, {0, 0, 1, 0, 1}};
    CHECK(l.basis() == want);

    // odd case: the 2-plane on the cubic fourfold in P^5
    auto pl = fermat_plane(5, 3);
    CHECK(pl.r() == 2);
    CHECK(pl.contained_in(fermat_hypersurface(5, 3)));

    // truncation below the full diagonal plane
    auto tr = fermat_plane(7, 5);
    CHECK(tr.r() == 2);
    CHECK(tr.contained_in(fermat_hypersurface(7, 5)));
    CHECK(fermat_diagonal_plane(7).r() == 3);

    for (int n = 3; n <= 9; ++n) {
        const int min_d = (n % 2 == 1) ? (n + 1) / 2 : n / 2 + 1;
        for (int d = min_d; d < n; ++d)
            CHECK(fermat_plane(n, d).contained_in(fermat_hypersurface(n, d)));
    }
    CHECK_THROWS_AS(fermat_plane(6, 3), ParameterError);
    CHECK_THROWS_AS(fermat_plane(4, 4), ParameterError);
}

TEST_CASE("enumerated points of the Fermat plane lie on the hypersurface") {
    auto X = fermat_hypersurface(4, 3);
    auto L = fermat_plane(4, 3);
    for (const auto& p : enumerate_subspace(L, X.anticanonical_height(), 100))
        CHECK(X.contains(p));
}
