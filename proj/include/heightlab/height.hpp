#pragma once

#include "heightlab/numeric.hpp"
#include "heightlab/projective.hpp"

namespace heightlab {

/// Weighted sup-norm height H(x) = max(lambda*|x_0|, |x_1|, ..., |x_n|)^e
/// on primitive representatives. lambda = 1 is the plain anticanonical
/// height H_0^e; the deformation weight applies to coordinate 0 only.
struct HeightSpec {
    int e = 1;              // anticanonical exponent n+1-d
    Rational lambda = 1;    // deformation weight on x_0, > 0

    HeightSpec() = default;
    HeightSpec(int exponent, Rational lam);
};

/// Exact height of a normalized point.
Rational height(const HeightSpec& h, const ProjPoint& p);

/// Sup norm max|x_i| of a primitive representative.
i64 sup_norm(const ProjPoint& p);

} // namespace heightlab
