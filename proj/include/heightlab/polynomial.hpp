#pragma once

#include "heightlab/errors.hpp"
#include "heightlab/numeric.hpp"
#include "heightlab/projective.hpp"

#include <map>
#include <span>
#include <string>
#include <vector>

namespace heightlab {

/// Exponent vector of a monomial; length equals the number of variables.
using Monomial = std::vector<int>;

/// Homogeneous integer polynomial in sparse exponent-vector form.
///
/// Every stored term has a nonzero coefficient and exponents summing to
/// `degree`; this is validated at construction, so f(c*x) = c^degree f(x)
/// holds by construction.
class Form {
public:
    Form() = default;
    Form(int num_vars, int degree, std::map<Monomial, BigInt> terms);

    int num_vars() const { return num_vars_; }
    int degree() const { return degree_; }
    const std::map<Monomial, BigInt>& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }

    /// Exact value at an integer vector. Uses 128-bit arithmetic when a
    /// static width bound certifies it cannot overflow, otherwise widens
    /// to arbitrary precision.
    BigInt evaluate(std::span<const i64> x) const;
    BigInt evaluate(const ProjPoint& p) const { return evaluate(std::span<const i64>(p.coords)); }

    /// Value at a real vector (used by the Monte-Carlo integrator).
    double evaluate_real(std::span<const double> x) const;

    /// Substitutes x_i -> sum_j rows[j][i] * t_j and expands; the result is
    /// a form of the same degree in `rows.size()` variables.
    Form substitute_linear(const std::vector<std::vector<i64>>& rows) const;

    /// Substitutes x_i -> g_i(u, v) for binary forms g_i of common degree m;
    /// the result is a binary form of degree m * degree.
    Form substitute_forms(const std::vector<Form>& g) const;

    /// True iff every coefficient fits in a signed 64-bit integer.
    bool coefficients_fit_i64() const;

    std::string str() const;

    /// Parses the plain-text monomial syntax, e.g.
    /// "x0^3 + x1^3 - 2*x2^2*x3". Throws ParseError with a diagnostic.
    static Form parse(const std::string& text, int num_vars);

private:
    int num_vars_ = 0;
    int degree_ = 0;
    std::map<Monomial, BigInt> terms_;
};

} // namespace heightlab
