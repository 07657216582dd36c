#pragma once

#include "heightlab/height.hpp"
#include "heightlab/variety.hpp"

#include <functional>
#include <string>
#include <vector>

namespace heightlab {

enum class StrategyKind { Naive, SolveLast };

/// Enumeration strategy; workers > 1 shards the outermost coordinate range.
struct EnumStrategy {
    StrategyKind kind = StrategyKind::Naive;
    int workers = 1;

    static EnumStrategy parse(const std::string& text);
    std::string str() const;
};

/// Counts N(region, H, B) over an increasing grid of bounds.
struct CountSeries {
    std::vector<Rational> grid;
    std::vector<u64> counts;
    std::string region = "X";
};

using PointPredicate = std::function<bool(const ProjPoint&)>;
using PointSink = std::function<void(const ProjPoint&)>;

/// Visits every point of X(Q) with height(h, .) <= B exactly once, as
/// primitive sign-normalized vectors in the weighted box.
void for_each_point(const CompleteIntersection& X, const HeightSpec& h, const Rational& B,
                    const EnumStrategy& strategy, const PointSink& sink);

std::vector<ProjPoint> enumerate_points(const CompleteIntersection& X, const HeightSpec& h,
                                        const Rational& B, const EnumStrategy& strategy);

u64 count(const CompleteIntersection& X, const HeightSpec& h, const Rational& B,
          const EnumStrategy& strategy, const PointPredicate& predicate = nullptr);

CountSeries count_series(const CompleteIntersection& X, const HeightSpec& h,
                         const std::vector<Rational>& grid, const EnumStrategy& strategy,
                         const PointPredicate& predicate = nullptr, std::string region = "X");

/// Ambient points of the subspace with height <= B, via parameter-box
/// overcount, exact height filter and normalized-point deduplication.
std::vector<ProjPoint> enumerate_subspace(const LinearSubspace& L, const HeightSpec& h,
                                          const Rational& B);

CountSeries subspace_series(const LinearSubspace& L, const HeightSpec& h,
                            const std::vector<Rational>& grid,
                            const PointPredicate& predicate = nullptr,
                            std::string region = "L");

/// Image points of P^1 under the parametrization with height <= B.
std::vector<ProjPoint> enumerate_parametrized_curve(const ParametrizedCurve& C,
                                                    const HeightSpec& h, const Rational& B);

CountSeries curve_series(const ParametrizedCurve& C, const HeightSpec& h,
                         const std::vector<Rational>& grid,
                         const PointPredicate& predicate = nullptr,
                         std::string region = "C");

/// Exact membership of p in the image of the parametrization.
bool curve_image_contains(const ParametrizedCurve& C, const ProjPoint& p);

/// B0, B0*f, ..., B0*f^(steps-1); requires B0 >= 1 and f > 1.
std::vector<Rational> geometric_grid(const Rational& B0, const Rational& factor, int steps);

/// Homogeneous resultant of two binary forms of common degree.
BigInt binary_resultant(const Form& f, const Form& g);

} // namespace heightlab
