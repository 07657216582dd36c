#include "heightlab/height.hpp"

#include "heightlab/errors.hpp"

#include <algorithm>

namespace heightlab {

HeightSpec::HeightSpec(int exponent, Rational lam) : e(exponent), lambda(std::move(lam)) {
    if (e < 1) throw ParameterError("HeightSpec: exponent must be >= 1");
    if (lambda <= 0) throw ParameterError("HeightSpec: lambda must be positive");
}

i64 sup_norm(const ProjPoint& p) {
    i64 m = 0;
    for (i64 c : p.coords) m = std::max(m, iabs64(c));
    return m;
}

Rational height(const HeightSpec& h, const ProjPoint& p) {
    if (p.coords.empty()) throw InvalidPoint("height: empty point");
    Rational m = h.lambda * iabs64(p.coords[0]);
    for (std::size_t i = 1; i < p.coords.size(); ++i) {
        Rational c(iabs64(p.coords[i]));
        if (c > m) m = c;
    }
    return rational_pow(m, static_cast<unsigned>(h.e));
}

} // namespace heightlab
