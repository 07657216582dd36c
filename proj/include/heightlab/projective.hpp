#pragma once

#include "heightlab/errors.hpp"
#include "heightlab/numeric.hpp"

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace heightlab {

/// A rational point of projective space, stored as its unique primitive
/// integer representative with the first nonzero coordinate positive.
struct ProjPoint {
    std::vector<i64> coords;

    ProjPoint() = default;
    explicit ProjPoint(std::vector<i64> c) : coords(std::move(c)) {}

    int dim() const { return static_cast<int>(coords.size()) - 1; }

    bool operator==(const ProjPoint& o) const { return coords == o.coords; }
    bool operator<(const ProjPoint& o) const { return coords < o.coords; }

    std::string str() const;
};

/// Unique primitive sign-normalized representative of the line through v.
/// Throws InvalidPoint on the zero vector.
ProjPoint normalize(std::span<const i64> v);
ProjPoint normalize(const std::vector<i64>& v);

/// In-place variant on a raw buffer; returns false on the zero vector.
bool normalize_in_place(i64* v, int len);

struct ProjPointHash {
    std::size_t operator()(const ProjPoint& p) const {
        u64 h = 0x9e3779b97f4a7c15ull;
        for (i64 c : p.coords) {
            u64 x = static_cast<u64>(c) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
            x ^= x >> 30; x *= 0xbf58476d1ce4e5b9ull;
            x ^= x >> 27; x *= 0x94d049bb133111ebull;
            x ^= x >> 31;
            h ^= x;
        }
        return static_cast<std::size_t>(h);
    }
};

} // namespace heightlab
