#include "heightlab/projective.hpp"

#include <sstream>

namespace heightlab {

bool normalize_in_place(i64* v, int len) {
    i64 g = 0;
    int first_nonzero = -1;
    for (int i = 0; i < len; ++i) {
        if (v[i] != 0 && first_nonzero < 0) first_nonzero = i;
        g = gcd64(g, v[i]);
    }
    if (first_nonzero < 0) return false;
    i64 sign = v[first_nonzero] > 0 ? 1 : -1;
    g *= sign;
    for (int i = 0; i < len; ++i) v[i] /= g;
    return true;
}

ProjPoint normalize(std::span<const i64> v) {
    std::vector<i64> c(v.begin(), v.end());
    if (c.empty() || !normalize_in_place(c.data(), static_cast<int>(c.size())))
        throw InvalidPoint("normalize: zero vector has no projective class");
    return ProjPoint(std::move(c));
}

ProjPoint normalize(const std::vector<i64>& v) { return normalize(std::span<const i64>(v)); }

std::string ProjPoint::str() const {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < coords.size(); ++i) {
        if (i) os << ':';
        os << coords[i];
    }
    os << ')';
    return os.str();
}

} // namespace heightlab
