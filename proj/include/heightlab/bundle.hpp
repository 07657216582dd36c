#pragma once

#include "heightlab/enumerate.hpp"
#include "heightlab/projective.hpp"

#include <optional>
#include <string>
#include <vector>

namespace heightlab {

/// Point of the quadric bundle x0 y0^2 + x1 y1^2 + x2 y2^2 + x3 y3^2 = 0
/// in P^3 x P^3, both components primitive and sign-normalized.
struct BiProjPoint {
    ProjPoint x, y;

    bool operator==(const BiProjPoint& o) const { return x == o.x && y == o.y; }
};

struct BiProjPointHash {
    std::size_t operator()(const BiProjPoint& p) const {
        ProjPointHash h;
        return h(p.x) * 0x9e3779b97f4a7c15ull + h(p.y);
    }
};

/// Exact membership in the bundle equation.
bool on_bundle(const BiProjPoint& p);

/// Anticanonical O(3,2) height H0(x)^3 * H0(y)^2 on primitive representatives.
BigInt bundle_height(const BiProjPoint& p);

/// True iff x_i = x_j = x_k = 0 and y_l = 0 for some {i,j,k,l} = {0,1,2,3}.
bool accumulating_locus_member(const BiProjPoint& p);

/// True iff x0 x1 x2 x3 is a nonzero perfect square (depends only on p.x).
bool thin_set_member(const BiProjPoint& p);

enum class FiberTag { SplitCertified, NotSplit, Undetermined };

/// Three-way verdict on the fiber quadric S_x with a concrete witness.
/// SplitCertified requires a square discriminant plus either the
/// all-squares sufficient condition or an explicit rational point; NotSplit
/// carries a nonsquare discriminant, a real definiteness witness or a local
/// obstruction; Undetermined is reported honestly (degenerate fibers too).
struct FiberClass {
    FiberTag tag = FiberTag::Undetermined;
    std::string witness;
    bool degenerate = false;
};

FiberClass fiber_class(const ProjPoint& x, i64 point_search_bound = 50);

struct BundleRow {
    Rational B = 1;
    u64 total = 0;
    u64 on_split_certified = 0;
    u64 on_not_split = 0;
    u64 on_undetermined = 0;
    u64 on_accumulating = 0; // always the full locus count, unaffected by exclusion
    u64 thin_members = 0;
};

struct BundleReport {
    std::vector<BundleRow> rows;
    bool exclude_accumulating = false;
    i64 point_search_bound = 50;
    u64 fibers_total = 0;
    u64 fibers_split_certified = 0;
    u64 fibers_not_split = 0;
    u64 fibers_undetermined = 0;
    u64 fibers_degenerate = 0;
    // validation tallies, rechecked with independent integer square roots
    u64 split_fibers_nonsquare_disc = 0;
    u64 thin_disc_mismatch_points = 0;
};

/// Stratified point counts over the grid: enumerates fibers x with
/// H0(x)^3 <= B, counts y on each diagonal fiber quadric with
/// H0(y)^2 <= B / H0(x)^3, and accumulates per fiber class. When
/// exclude_accumulating is set, points on the four accumulating loci are
/// removed from total/class/thin columns; on_accumulating reports them
/// either way.
BundleReport bundle_count(const std::vector<Rational>& grid, bool exclude_accumulating,
                          i64 point_search_bound = 50, int workers = 1);

/// y-counts on the single fiber S_x under the bundle height, as a series
/// over the grid (region "fiber").
CountSeries fiber_count_series(const ProjPoint& x, const std::vector<Rational>& grid);

/// Full point stream at small B (every fiber enumerated point by point).
std::vector<BiProjPoint> enumerate_bundle_points(const Rational& B);

} // namespace heightlab
