#include "heightlab/variety.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>

namespace heightlab {

CompleteIntersection::CompleteIntersection(int n, std::vector<Form> forms)
    : n_(n), forms_(std::move(forms)) {
    if (n_ < 1) throw ParameterError("CompleteIntersection: ambient dimension must be >= 1");
    for (const auto& f : forms_)
        if (f.num_vars() != n_ + 1)
            throw DimensionError("CompleteIntersection: form in " + std::to_string(f.num_vars()) +
                                 " variables does not match P^" + std::to_string(n_));
}

int CompleteIntersection::total_degree() const {
    int d = 0;
    for (const auto& f : forms_) d += f.degree();
    return d;
}

int CompleteIntersection::anticanonical_exponent() const {
    int d = total_degree();
    if (d >= n_ + 1)
        throw NotFano("anticanonical exponent undefined: total degree " + std::to_string(d) +
                      " >= n+1 = " + std::to_string(n_ + 1));
    return n_ + 1 - d;
}

HeightSpec CompleteIntersection::anticanonical_height(Rational lambda) const {
    return HeightSpec(anticanonical_exponent(), std::move(lambda));
}

bool CompleteIntersection::contains(const ProjPoint& p) const {
    if (p.dim() != n_)
        throw DimensionError("contains: point of dimension " + std::to_string(p.dim()) +
                             " vs ambient P^" + std::to_string(n_));
    for (const auto& f : forms_)
        if (f.evaluate(p) != 0) return false;
    return true;
}

std::string CompleteIntersection::str() const {
    std::ostringstream os;
    os << "n=" << n_ << "\n";
    for (const auto& f : forms_) os << f.str() << "\n";
    return os.str();
}

namespace {

// fraction-free row echelon; returns rank, modifies rows in place
int echelonize(std::vector<std::vector<BigInt>>& rows) {
    const int m = static_cast<int>(rows.size());
    if (m == 0) return 0;
    const int n = static_cast<int>(rows[0].size());
    int rank = 0;
    for (int col = 0; col < n && rank < m; ++col) {
        int pivot = -1;
        for (int i = rank; i < m; ++i)
            if (rows[i][col] != 0) { pivot = i; break; }
        if (pivot < 0) continue;
        std::swap(rows[rank], rows[pivot]);
        for (int i = rank + 1; i < m; ++i) {
            if (rows[i][col] == 0) continue;
            BigInt a = rows[rank][col], b = rows[i][col];
            for (int j = 0; j < n; ++j) rows[i][j] = rows[i][j] * a - rows[rank][j] * b;
            // keep entries small
            BigInt g = 0;
            for (int j = 0; j < n; ++j) g = boost::multiprecision::gcd(g, rows[i][j]);
            if (g > 1)
                for (int j = 0; j < n; ++j) rows[i][j] /= g;
        }
        ++rank;
    }
    return rank;
}

std::vector<std::vector<BigInt>> to_big_rows(const std::vector<std::vector<i64>>& rows) {
    std::vector<std::vector<BigInt>> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.emplace_back(r.begin(), r.end());
    return out;
}

} // namespace

namespace {

// primitive integer basis of { a : rows * a^T = 0 }, via rational back
// substitution on the echelon form
std::vector<std::vector<i64>> integer_kernel(const std::vector<std::vector<i64>>& basis) {
    auto rows = to_big_rows(basis);
    const int m = static_cast<int>(rows.size());
    const int n = static_cast<int>(rows[0].size());
    echelonize(rows);
    std::vector<int> pivot_col(m, -1);
    std::vector<bool> is_pivot(n, false);
    for (int i = 0, col = 0; i < m; ++i) {
        while (col < n && rows[i][col] == 0) ++col;
        if (col == n) break;
        pivot_col[i] = col;
        is_pivot[col] = true;
    }
    std::vector<std::vector<i64>> kernel;
    for (int free_col = 0; free_col < n; ++free_col) {
        if (is_pivot[free_col]) continue;
        std::vector<Rational> v(n, Rational(0));
        v[free_col] = 1;
        for (int i = m - 1; i >= 0; --i) {
            if (pivot_col[i] < 0) continue;
            Rational acc = 0;
            for (int j = pivot_col[i] + 1; j < n; ++j)
                if (v[j] != 0) acc += Rational(rows[i][j]) * v[j];
            v[pivot_col[i]] = -acc / Rational(rows[i][pivot_col[i]]);
        }
        BigInt den = 1;
        for (const auto& c : v) den = boost::multiprecision::lcm(den, denominator(c));
        BigInt g = 0;
        std::vector<BigInt> w(n);
        for (int j = 0; j < n; ++j) {
            w[j] = numerator(v[j]) * (den / denominator(v[j]));
            g = boost::multiprecision::gcd(g, w[j]);
        }
        std::vector<i64> out(n);
        for (int j = 0; j < n; ++j) {
            BigInt e = w[j] / g;
            if (e > std::numeric_limits<i64>::max() || e < std::numeric_limits<i64>::min())
                throw TooLarge("LinearSubspace: defining equation exceeds 64 bits");
            out[j] = e.convert_to<i64>();
        }
        kernel.push_back(std::move(out));
    }
    return kernel;
}

} // namespace

LinearSubspace::LinearSubspace(std::vector<std::vector<i64>> basis) : basis_(std::move(basis)) {
    if (basis_.empty()) throw DegenerateSubspace("LinearSubspace: empty basis");
    const std::size_t len = basis_.front().size();
    if (len < 2) throw DegenerateSubspace("LinearSubspace: ambient dimension too small");
    for (const auto& row : basis_)
        if (row.size() != len) throw DimensionError("LinearSubspace: ragged basis matrix");
    auto rows = to_big_rows(basis_);
    if (echelonize(rows) != static_cast<int>(basis_.size()))
        throw DegenerateSubspace("LinearSubspace: basis rows are linearly dependent");
    equations_ = integer_kernel(basis_);
}

bool LinearSubspace::contains(const ProjPoint& p) const {
    if (p.dim() != ambient_dim())
        throw DimensionError("LinearSubspace::contains: dimension mismatch");
    for (const auto& eq : equations_) {
        i128 dot = 0;
        for (std::size_t j = 0; j < eq.size(); ++j)
            dot += static_cast<i128>(eq[j]) * p.coords[j];
        if (dot != 0) return false;
    }
    return true;
}

bool LinearSubspace::contained_in(const CompleteIntersection& X) const {
    if (ambient_dim() != X.n())
        throw DimensionError("LinearSubspace::contained_in: ambient dimension mismatch");
    for (const auto& f : X.forms())
        if (!f.substitute_linear(basis_).is_zero()) return false;
    return true;
}

i64 LinearSubspace::row_sum_norm() const {
    i64 best = 1;
    for (const auto& row : basis_) {
        i64 s = 0;
        for (i64 v : row) s += iabs64(v);
        best = std::max(best, s);
    }
    return best;
}

CompleteIntersection projective_space(int n) { return CompleteIntersection(n, {}); }

CompleteIntersection fermat_hypersurface(int n, int d) {
    if (n < 2 || d < 2) throw ParameterError("fermat_hypersurface: need n >= 2, d >= 2");
    const int r = (n % 2 == 1) ? (n - 1) / 2 : n / 2;
    std::map<Monomial, BigInt> terms;
    for (int i = 0; i <= n; ++i) {
        Monomial m(n + 1, 0);
        m[i] = d;
        terms[m] = (i <= r) ? 1 : -1;
    }
    return CompleteIntersection(n, {Form(n + 1, d, std::move(terms))});
}

CompleteIntersection ct_quadrics() {
    // x0^2 + x1^2 = x2^2 + x3^2 + x4^2 + x5^2 + 8*x0*x5
    // 2*x0*x1 = 2*x2*x3 + x5^2
    Form f1 = Form::parse("x0^2 + x1^2 - x2^2 - x3^2 - x4^2 - x5^2 - 8*x0*x5", 6);
    Form f2 = Form::parse("2*x0*x1 - 2*x2*x3 - x5^2", 6);
    return CompleteIntersection(5, {std::move(f1), std::move(f2)});
}

LinearSubspace ct_quadrics_line() {
    return LinearSubspace({{1, 0, 1, 0, 0, 0}, {0, 1, 0, 1, 0, 0}});
}

CompleteIntersection builtin_variety(const std::string& name) {
    auto split = [](const std::string& s) {
        std::vector<std::string> parts;
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, ':')) parts.push_back(item);
        return parts;
    };
    auto parts = split(name);
    try {
        if (parts.size() == 2 && parts[0] == "pn") return projective_space(std::stoi(parts[1]));
        if (parts.size() == 3 && parts[0] == "fermat")
            return fermat_hypersurface(std::stoi(parts[1]), std::stoi(parts[2]));
        if (name == "ct-quadrics") return ct_quadrics();
    } catch (const std::invalid_argument&) {
        throw ParameterError("builtin: malformed parameters in '" + name + "'");
    }
    if (name == "paper-bundle")
        throw ParameterError("builtin 'paper-bundle' is biprojective; use the bundle subcommand");
    throw ParameterError("unknown builtin '" + name +
                         "' (expected pn:<n>, fermat:<n>:<d>, ct-quadrics)");
}

CompleteIntersection read_variety(std::istream& in) {
    std::string line;
    int n = -1;
    std::vector<Form> forms;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        if (n < 0) {
            std::string trimmed = line.substr(first);
            if (trimmed.rfind("n=", 0) != 0)
                throw ParseError("variety file: expected header n=<int> on line " +
                                 std::to_string(lineno));
            try {
                n = std::stoi(trimmed.substr(2));
            } catch (const std::exception&) {
                throw ParseError("variety file: bad header '" + trimmed + "'");
            }
            if (n < 1) throw ParseError("variety file: n must be >= 1");
            continue;
        }
        try {
            forms.push_back(Form::parse(line, n + 1));
        } catch (const ParseError& e) {
            throw ParseError("variety file line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    if (n < 0) throw ParseError("variety file: missing n=<int> header");
    return CompleteIntersection(n, std::move(forms));
}

CompleteIntersection read_variety_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open variety file '" + path + "'");
    return read_variety(in);
}

void write_variety(std::ostream& out, const CompleteIntersection& X) { out << X.str(); }

} // namespace heightlab
