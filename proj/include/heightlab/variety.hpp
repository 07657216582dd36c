#pragma once

#include "heightlab/height.hpp"
#include "heightlab/polynomial.hpp"
#include "heightlab/projective.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace heightlab {

/// A complete intersection in P^n given by integer forms. An empty form
/// list is P^n itself. Smoothness is assumed, not verified.
class CompleteIntersection {
public:
    CompleteIntersection(int n, std::vector<Form> forms);

    int n() const { return n_; }
    const std::vector<Form>& forms() const { return forms_; }
    int num_forms() const { return static_cast<int>(forms_.size()); }

    /// Sum of the defining degrees d_1 + ... + d_s.
    int total_degree() const;

    /// n + 1 - d; throws NotFano when d >= n + 1.
    int anticanonical_exponent() const;

    /// Anticanonical height spec with deformation weight lambda.
    HeightSpec anticanonical_height(Rational lambda = 1) const;

    bool contains(const ProjPoint& p) const;

    std::string str() const;

private:
    int n_;
    std::vector<Form> forms_;
};

/// An r-plane in P^n spanned by the rows of an integer basis matrix.
class LinearSubspace {
public:
    explicit LinearSubspace(std::vector<std::vector<i64>> basis);

    const std::vector<std::vector<i64>>& basis() const { return basis_; }
    int r() const { return static_cast<int>(basis_.size()) - 1; }
    int ambient_dim() const { return static_cast<int>(basis_.front().size()) - 1; }

    /// Integer defining equations (a primitive basis of the left kernel).
    const std::vector<std::vector<i64>>& equations() const { return equations_; }

    /// Exact membership of a point in the row space; evaluates the cached
    /// defining equations.
    bool contains(const ProjPoint& p) const;

    /// Symbolic vanishing of every form of X on the parametrized plane.
    bool contained_in(const CompleteIntersection& X) const;

    /// Max row sum norm; used to derive parameter boxes.
    i64 row_sum_norm() const;

private:
    std::vector<std::vector<i64>> basis_;
    std::vector<std::vector<i64>> equations_;
};

/// Parametrized rational curve: n+1 binary forms of a common degree with
/// no common factor.
struct ParametrizedCurve {
    std::vector<Form> components;

    int ambient_dim() const { return static_cast<int>(components.size()) - 1; }
    int param_degree() const { return components.front().degree(); }
};

// ---- builtins and files ----

/// P^n with no defining forms.
CompleteIntersection projective_space(int n);

/// Diagonal form x_0^d + ... + x_r^d - x_{r+1}^d - ... - x_n^d with the
/// split at r = floor((n-1)/2) for odd n and r = n/2 for even n.
CompleteIntersection fermat_hypersurface(int n, int d);

/// The explicit smooth intersection of two quadrics in P^5 whose line
/// x0=x2, x1=x3, x4=x5=0 generates a dense set of lines.
CompleteIntersection ct_quadrics();

/// The line x0=x2, x1=x3, x4=x5=0 on ct_quadrics().
LinearSubspace ct_quadrics_line();

/// Resolves builtin names: "pn:<n>", "fermat:<n>:<d>", "ct-quadrics".
CompleteIntersection builtin_variety(const std::string& name);

/// Plain-text variety file: header "n=<int>", one form per line.
CompleteIntersection read_variety(std::istream& in);
CompleteIntersection read_variety_file(const std::string& path);
void write_variety(std::ostream& out, const CompleteIntersection& X);

} // namespace heightlab
