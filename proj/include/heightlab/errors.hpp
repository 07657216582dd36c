#pragma once

#include <stdexcept>

namespace heightlab {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidPoint : Error { using Error::Error; };
struct DimensionError : Error { using Error::Error; };
struct NotFano : Error { using Error::Error; };
struct StrategyUnsupported : Error { using Error::Error; };
struct DegenerateSubspace : Error { using Error::Error; };
struct DegenerateCurve : Error { using Error::Error; };
struct NotContained : Error { using Error::Error; };
struct FitError : Error { using Error::Error; };
struct ParameterError : Error { using Error::Error; };
struct TooLarge : Error { using Error::Error; };
struct BadReduction : Error { using Error::Error; };
struct InconsistentCounts : Error { using Error::Error; };
struct OutOfRegime : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };

} // namespace heightlab
