#include "heightlab/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace heightlab {

Form::Form(int num_vars, int degree, std::map<Monomial, BigInt> terms)
    : num_vars_(num_vars), degree_(degree), terms_(std::move(terms)) {
    if (num_vars_ < 1) throw ParameterError("Form: num_vars must be >= 1");
    if (degree_ < 1) throw ParameterError("Form: degree must be >= 1");
    for (auto it = terms_.begin(); it != terms_.end();) {
        const auto& [mono, coef] = *it;
        if (static_cast<int>(mono.size()) != num_vars_)
            throw DimensionError("Form: exponent vector length does not match num_vars");
        int total = 0;
        for (int e : mono) {
            if (e < 0) throw ParameterError("Form: negative exponent");
            total += e;
        }
        if (total != degree_)
            throw ParameterError("Form: non-homogeneous term (degree " + std::to_string(total) +
                                 " in a degree-" + std::to_string(degree_) + " form)");
        if (coef == 0)
            it = terms_.erase(it);
        else
            ++it;
    }
}

namespace {

// bits needed for |coef| * prod |x_i|^{e_i}, conservatively
bool i128_safe(const Form& f, std::span<const i64> x) {
    double max_abs = 1.0;
    for (i64 v : x) max_abs = std::max(max_abs, std::fabs(static_cast<double>(v)));
    double sum_coef = 1.0;
    for (const auto& [m, c] : f.terms()) {
        (void)m;
        sum_coef += std::fabs(c.convert_to<double>());
    }
    double bits = f.degree() * std::log2(max_abs + 1.0) + std::log2(sum_coef + 1.0) + 2.0;
    return bits < 126.0;
}

} // namespace

BigInt Form::evaluate(std::span<const i64> x) const {
    if (static_cast<int>(x.size()) != num_vars_)
        throw DimensionError("Form::evaluate: expected " + std::to_string(num_vars_) +
                             " coordinates, got " + std::to_string(x.size()));
    if (coefficients_fit_i64() && i128_safe(*this, x)) {
        i128 acc = 0;
        for (const auto& [mono, coef] : terms_) {
            i128 t = coef.convert_to<i64>();
            for (int i = 0; i < num_vars_; ++i)
                for (int e = 0; e < mono[i]; ++e) t *= x[i];
            acc += t;
        }
        bool neg = acc < 0;
        u64 lo = static_cast<u64>(neg ? -acc : acc);
        u64 hi = static_cast<u64>(static_cast<unsigned __int128>(neg ? -acc : acc) >> 64);
        BigInt r = (BigInt(hi) << 64) + lo;
        return neg ? -r : r;
    }
    BigInt acc = 0;
    for (const auto& [mono, coef] : terms_) {
        BigInt t = coef;
        for (int i = 0; i < num_vars_; ++i)
            if (mono[i] > 0) t *= big_pow(BigInt(x[i]), static_cast<unsigned>(mono[i]));
        acc += t;
    }
    return acc;
}

double Form::evaluate_real(std::span<const double> x) const {
    double acc = 0.0;
    for (const auto& [mono, coef] : terms_) {
        double t = coef.convert_to<double>();
        for (int i = 0; i < num_vars_; ++i)
            for (int e = 0; e < mono[i]; ++e) t *= x[i];
        acc += t;
    }
    return acc;
}

bool Form::coefficients_fit_i64() const {
    static const BigInt lo = std::numeric_limits<i64>::min();
    static const BigInt hi = std::numeric_limits<i64>::max();
    for (const auto& [m, c] : terms_) {
        (void)m;
        if (c < lo || c > hi) return false;
    }
    return true;
}

namespace {

using Poly = std::map<Monomial, BigInt>;

Poly poly_mul(const Poly& a, const Poly& b, int nv) {
    Poly r;
    for (const auto& [ma, ca] : a)
        for (const auto& [mb, cb] : b) {
            Monomial m(nv);
            for (int i = 0; i < nv; ++i) m[i] = ma[i] + mb[i];
            r[m] += ca * cb;
        }
    for (auto it = r.begin(); it != r.end();)
        it = (it->second == 0) ? r.erase(it) : std::next(it);
    return r;
}

Poly poly_pow(const Poly& a, int e, int nv) {
    Poly r{{Monomial(nv, 0), BigInt(1)}};
    for (int i = 0; i < e; ++i) r = poly_mul(r, a, nv);
    return r;
}

} // namespace

Form Form::substitute_linear(const std::vector<std::vector<i64>>& rows) const {
    const int nv = static_cast<int>(rows.size());
    if (nv < 1) throw ParameterError("substitute_linear: empty substitution");
    for (const auto& row : rows)
        if (static_cast<int>(row.size()) != num_vars_)
            throw DimensionError("substitute_linear: row length mismatch");
    // x_i as a linear poly in t_0..t_{nv-1}
    std::vector<Poly> subst(num_vars_);
    for (int i = 0; i < num_vars_; ++i)
        for (int j = 0; j < nv; ++j)
            if (rows[j][i] != 0) {
                Monomial m(nv, 0);
                m[j] = 1;
                subst[i][m] = rows[j][i];
            }
    Poly acc;
    for (const auto& [mono, coef] : terms_) {
        Poly t{{Monomial(nv, 0), coef}};
        for (int i = 0; i < num_vars_; ++i)
            if (mono[i] > 0) t = poly_mul(t, poly_pow(subst[i], mono[i], nv), nv);
        for (const auto& [m, c] : t) acc[m] += c;
    }
    for (auto it = acc.begin(); it != acc.end();)
        it = (it->second == 0) ? acc.erase(it) : std::next(it);
    if (acc.empty()) {
        // identically zero: represent as zero form of the right degree
        return Form(nv, degree_, {});
    }
    return Form(nv, degree_, std::move(acc));
}

Form Form::substitute_forms(const std::vector<Form>& g) const {
    if (static_cast<int>(g.size()) != num_vars_)
        throw DimensionError("substitute_forms: need one binary form per variable");
    const int m_deg = g.front().degree();
    for (const auto& gi : g) {
        if (gi.num_vars() != 2) throw ParameterError("substitute_forms: substituents must be binary forms");
        if (gi.degree() != m_deg) throw ParameterError("substitute_forms: substituents must share a degree");
    }
    Poly acc;
    for (const auto& [mono, coef] : terms_) {
        Poly t{{Monomial(2, 0), coef}};
        for (int i = 0; i < num_vars_; ++i)
            if (mono[i] > 0) t = poly_mul(t, poly_pow(g[i].terms(), mono[i], 2), 2);
        for (const auto& [mm, c] : t) acc[mm] += c;
    }
    for (auto it = acc.begin(); it != acc.end();)
        it = (it->second == 0) ? acc.erase(it) : std::next(it);
    if (acc.empty()) return Form(2, degree_ * m_deg, {});
    return Form(2, degree_ * m_deg, std::move(acc));
}

std::string Form::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [mono, coef] : terms_) {
        BigInt a = coef;
        if (first) {
            if (a < 0) { os << "-"; a = -a; }
        } else {
            os << (a < 0 ? " - " : " + ");
            if (a < 0) a = -a;
        }
        first = false;
        bool printed_coef = false;
        if (a != 1 || std::all_of(mono.begin(), mono.end(), [](int e) { return e == 0; })) {
            os << a.str();
            printed_coef = true;
        }
        bool first_var = true;
        for (int i = 0; i < num_vars_; ++i) {
            if (mono[i] == 0) continue;
            if (!first_var || printed_coef) os << "*";
            os << "x" << i;
            if (mono[i] > 1) os << "^" << mono[i];
            first_var = false;
        }
    }
    return os.str();
}

namespace {

struct Scanner {
    const std::string& s;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool done() {
        skip_ws();
        return pos >= s.size();
    }
    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }
    [[noreturn]] void fail(const std::string& what) {
        throw ParseError("form syntax error at column " + std::to_string(pos + 1) + ": " + what);
    }
    BigInt integer() {
        skip_ws();
        std::size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos == start) fail("expected an integer");
        return BigInt(s.substr(start, pos - start));
    }
};

} // namespace

Form Form::parse(const std::string& text, int num_vars) {
    Scanner sc{text};
    std::map<Monomial, BigInt> terms;
    int degree = -1;
    bool any = false;
    while (!sc.done()) {
        BigInt sign = 1;
        char c = sc.peek();
        if (c == '+' || c == '-') {
            sign = (c == '-') ? -1 : 1;
            ++sc.pos;
        } else if (any) {
            sc.fail("expected '+' or '-' between terms");
        }
        BigInt coef = sign;
        bool saw_factor = false;
        Monomial mono(num_vars, 0);
        int term_degree = 0;
        for (;;) {
            char p = sc.peek();
            if (std::isdigit(static_cast<unsigned char>(p))) {
                coef *= sc.integer();
                saw_factor = true;
            } else if (p == 'x' || p == 'X') {
                ++sc.pos;
                BigInt idx = sc.integer();
                if (idx < 0 || idx >= num_vars)
                    sc.fail("variable index out of range for n=" + std::to_string(num_vars - 1));
                int e = 1;
                if (sc.peek() == '^') {
                    ++sc.pos;
                    e = sc.integer().convert_to<int>();
                    if (e < 1) sc.fail("exponent must be >= 1");
                }
                mono[idx.convert_to<int>()] += e;
                term_degree += e;
                saw_factor = true;
            } else {
                break;
            }
            if (sc.peek() == '*') {
                ++sc.pos;
                continue;
            }
        }
        if (!saw_factor) sc.fail("expected a coefficient or a variable");
        if (degree < 0) degree = term_degree;
        if (term_degree != degree)
            throw ParseError("form is not homogeneous: saw degrees " + std::to_string(degree) +
                             " and " + std::to_string(term_degree));
        terms[mono] += coef;
        any = true;
    }
    if (!any) throw ParseError("empty form");
    if (degree == 0) throw ParseError("constant form is not allowed");
    return Form(num_vars, degree, std::move(terms));
}

} // namespace heightlab
