#include "heightlab/enumerate.hpp"

#include "heightlab/errors.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <thread>
#include <unordered_set>

namespace heightlab {

EnumStrategy EnumStrategy::parse(const std::string& text) {
    auto kind_of = [](const std::string& s) {
        if (s == "naive") return StrategyKind::Naive;
        if (s == "solve-last") return StrategyKind::SolveLast;
        throw ParameterError("strategy: unknown kind '" + s + "' (naive|solve-last)");
    };
    EnumStrategy st;
    if (text.rfind("sharded:", 0) == 0) {
        auto rest = text.substr(8);
        auto colon = rest.find(':');
        if (colon == std::string::npos)
            throw ParameterError("strategy: expected sharded:<kind>:<workers>");
        st.kind = kind_of(rest.substr(0, colon));
        st.workers = std::stoi(rest.substr(colon + 1));
        if (st.workers < 1) throw ParameterError("strategy: workers must be >= 1");
        return st;
    }
    st.kind = kind_of(text);
    return st;
}

std::string EnumStrategy::str() const {
    std::string k = kind == StrategyKind::Naive ? "naive" : "solve-last";
    if (workers > 1) return "sharded:" + k + ":" + std::to_string(workers);
    return k;
}

std::vector<Rational> geometric_grid(const Rational& B0, const Rational& factor, int steps) {
    if (B0 < 1) throw ParameterError("grid: B0 must be >= 1");
    if (factor <= 1) throw ParameterError("grid: factor must be > 1");
    if (steps < 1) throw ParameterError("grid: steps must be >= 1");
    std::vector<Rational> g;
    g.reserve(steps);
    Rational b = B0;
    for (int i = 0; i < steps; ++i) {
        g.push_back(b);
        b *= factor;
    }
    return g;
}

namespace {

// ---------------------------------------------------------------------------
// compiled enumeration over the weighted box
// ---------------------------------------------------------------------------

using u128 = unsigned __int128;

i64 iroot128(u128 v, int d) {
    if (v == 0) return 0;
    double seed = std::pow(static_cast<double>(v), 1.0 / d);
    i64 r = static_cast<i64>(seed);
    auto pow_le = [&](i64 t) {
        if (t < 0) return true;
        u128 acc = 1;
        for (int i = 0; i < d; ++i) {
            if (t != 0 && acc > v / static_cast<u128>(t)) return false;
            acc *= static_cast<u128>(t);
        }
        return acc <= v;
    };
    r = std::max<i64>(r - 2, 0);
    while (pow_le(r + 1)) ++r;
    return r;
}

struct PowerMask {
    std::array<bool, 64> m64{};
    std::array<bool, 63> m63{};
    std::array<bool, 65> m65{};

    void build(int d) {
        for (int t = 0; t < 64; ++t) m64[pow_mod_small(t, d, 64)] = true;
        for (int t = 0; t < 63; ++t) m63[pow_mod_small(t, d, 63)] = true;
        for (int t = 0; t < 65; ++t) m65[pow_mod_small(t, d, 65)] = true;
    }
    static int pow_mod_small(int t, int d, int m) {
        long long r = 1;
        for (int i = 0; i < d; ++i) r = r * t % m;
        return static_cast<int>(r);
    }
    bool maybe(u128 v) const {
        return m64[static_cast<int>(v & 63)] && m63[static_cast<int>(v % 63)] &&
               m65[static_cast<int>(v % 65)];
    }
};

struct TermFactors {
    int n = 0;
    std::array<std::pair<int, int>, 8> f{}; // (variable, exponent)
};

struct Contrib {
    int idx;  // accumulator slot: form * stride + e
    i64 coef;
    TermFactors factors;
};

struct CompiledProgram {
    int nv = 0;
    int nforms = 0;
    int stride = 0;                            // max form degree + 1
    std::vector<int> form_deg;
    std::vector<std::vector<Contrib>> at_depth; // depths 0..nv-2
    std::vector<Contrib> at_root;               // contributions with no prefix variable
    std::vector<std::vector<int>> touched;      // acc slots touched per depth
    std::vector<i64> bounds;                    // per-coordinate box bound

    bool solve = false;
    i64 solve_coef = 0;
    int solve_deg = 0;
    PowerMask mask;
};

// Width certificate: every form value over the box fits comfortably in i128.
bool fits_i128(const CompleteIntersection& X, const std::vector<i64>& bounds) {
    double maxb = 1.0;
    for (i64 b : bounds) maxb = std::max(maxb, static_cast<double>(b));
    for (const auto& f : X.forms()) {
        if (!f.coefficients_fit_i64()) return false;
        double sum_coef = 1.0;
        for (const auto& [m, c] : f.terms()) {
            (void)m;
            sum_coef += std::fabs(c.convert_to<double>());
        }
        double bits = std::log2(sum_coef) + f.degree() * std::log2(maxb + 1.0) + 4.0;
        if (bits >= 126.0) return false;
    }
    return true;
}

// Legality of solve-last on X, without touching coefficients: the last form
// must carry a pure c * x_n^d term and x_n in no other term.
void check_solve_last_legal(const CompleteIntersection& X) {
    if (X.num_forms() == 0)
        throw StrategyUnsupported("solve-last requires at least one defining form");
    const Form& f = X.forms().back();
    const int last = X.n();
    bool found_pure = false;
    for (const auto& [mono, coef] : f.terms()) {
        (void)coef;
        if (mono[last] == 0) continue;
        if (mono[last] != f.degree() || found_pure)
            throw StrategyUnsupported("solve-last: last form is not diagonal in the last variable");
        found_pure = true;
    }
    if (!found_pure)
        throw StrategyUnsupported("solve-last: last form does not involve the last variable");
}

CompiledProgram compile_program(const CompleteIntersection& X, std::vector<i64> bounds,
                                StrategyKind kind) {
    CompiledProgram p;
    p.nv = X.n() + 1;
    p.nforms = X.num_forms();
    p.bounds = std::move(bounds);
    p.at_depth.resize(p.nv - 1);
    p.touched.resize(p.nv - 1);
    int maxdeg = 0;
    for (const auto& f : X.forms()) maxdeg = std::max(maxdeg, f.degree());
    p.stride = maxdeg + 1;
    p.form_deg.reserve(p.nforms);

    const int last = p.nv - 1;
    for (int fi = 0; fi < p.nforms; ++fi) {
        const Form& f = X.forms()[fi];
        p.form_deg.push_back(f.degree());
        for (const auto& [mono, coef] : f.terms()) {
            Contrib c;
            c.coef = coef.convert_to<i64>();
            int e = mono[last];
            c.idx = fi * p.stride + e;
            int depth = -1;
            for (int v = 0; v < last; ++v)
                if (mono[v] > 0) {
                    c.factors.f[c.factors.n++] = {v, mono[v]};
                    depth = v;
                }
            if (depth < 0)
                p.at_root.push_back(c);
            else
                p.at_depth[depth].push_back(c);
        }
    }
    for (int d = 0; d < p.nv - 1; ++d) {
        std::vector<int> t;
        for (const auto& c : p.at_depth[d]) t.push_back(c.idx);
        std::sort(t.begin(), t.end());
        t.erase(std::unique(t.begin(), t.end()), t.end());
        p.touched[d] = std::move(t);
    }

    if (kind == StrategyKind::SolveLast) {
        check_solve_last_legal(X);
        const Form& f = X.forms().back();
        i64 cd = 0;
        for (const auto& [mono, coef] : f.terms())
            if (mono[last] == f.degree()) cd = coef.convert_to<i64>();
        p.solve = true;
        p.solve_coef = cd;
        p.solve_deg = f.degree();
        p.mask.build(f.degree());
    }
    return p;
}

class Runner {
public:
    Runner(const CompiledProgram& p, int worker, int nworkers)
        : p_(p), worker_(worker), nworkers_(nworkers) {
        acc_.assign(std::max(1, p_.nforms * p_.stride), 0);
        coords_.assign(p_.nv, 0);
        for (const auto& c : p_.at_root) acc_[c.idx] += c.coef; // factor-free => coef itself
    }

    template <typename Emit>
    void run(Emit&& emit) {
        const i64 b0 = p_.bounds[0];
        if (p_.nv == 1) return; // not reachable: ambient dimension >= 1
        // x_0 >= 0 by sign normalization; interleave shards for balance
        for (i64 x0 = worker_; x0 <= b0; x0 += nworkers_) {
            set_coord(0, x0);
            descend(1, x0 == 0, x0, emit);
        }
        restore(0);
    }

private:
    void set_coord(int depth, i64 x) {
        coords_[depth] = x;
        if (depth >= p_.nv - 1) return;
        const auto& touched = p_.touched[depth];
        if (saved_.size() <= static_cast<std::size_t>(depth)) saved_.resize(depth + 1);
        auto& save = saved_[depth];
        if (save.empty()) {
            save.reserve(touched.size());
            for (int idx : touched) save.push_back(acc_[idx]);
        }
        for (std::size_t i = 0; i < touched.size(); ++i) acc_[touched[i]] = save[i];
        for (const auto& c : p_.at_depth[depth]) {
            i128 t = c.coef;
            for (int i = 0; i < c.factors.n; ++i) {
                auto [v, e] = c.factors.f[i];
                i64 x_v = coords_[v];
                for (int k = 0; k < e; ++k) t *= x_v;
            }
            acc_[c.idx] += t;
        }
    }

    void restore(int depth) {
        if (depth >= p_.nv - 1 || saved_.size() <= static_cast<std::size_t>(depth)) return;
        auto& save = saved_[depth];
        if (save.empty()) return;
        const auto& touched = p_.touched[depth];
        for (std::size_t i = 0; i < touched.size(); ++i) acc_[touched[i]] = save[i];
        save.clear();
    }

    i128 horner(int fi, i64 x) const {
        const int deg = p_.form_deg[fi];
        const i128* c = acc_.data() + fi * p_.stride;
        i128 v = c[deg];
        for (int e = deg - 1; e >= 0; --e) v = v * x + c[e];
        return v;
    }

    template <typename Emit>
    void descend(int depth, bool prefix_zero, i64 g, Emit&& emit) {
        if (depth == p_.nv - 1) {
            if (p_.solve)
                inner_solve(prefix_zero, g, emit);
            else
                inner_naive(prefix_zero, g, emit);
            return;
        }
        const i64 b = p_.bounds[depth];
        const i64 lo = prefix_zero ? 0 : -b;
        for (i64 x = lo; x <= b; ++x) {
            set_coord(depth, x);
            const i64 g2 = (g == 1) ? 1 : gcd64(g, x);
            descend(depth + 1, prefix_zero && x == 0, g2, emit);
        }
        restore(depth);
    }

    template <typename Emit>
    void inner_naive(bool prefix_zero, i64 g, Emit&& emit) {
        const i64 b = p_.bounds[p_.nv - 1];
        const i64 lo = prefix_zero ? 1 : -b; // zero vector excluded
        for (i64 x = lo; x <= b; ++x) {
            bool ok = true;
            for (int fi = 0; fi < p_.nforms; ++fi)
                if (horner(fi, x) != 0) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            emit_candidate(x, prefix_zero, g, emit);
        }
    }

    template <typename Emit>
    void inner_solve(bool prefix_zero, i64 g, Emit&& emit) {
        const int fs = p_.nforms - 1;
        const i128 c0 = acc_[fs * p_.stride];
        const i128 v = -c0;
        const int d = p_.solve_deg;
        if (v == 0) {
            if (!prefix_zero) try_candidate(0, prefix_zero, g, emit);
            return;
        }
        if (v % p_.solve_coef != 0) return;
        const i128 w = v / p_.solve_coef;
        if (d % 2 == 0 && w < 0) return;
        const u128 aw = static_cast<u128>(w < 0 ? -w : w);
        if (!p_.mask.maybe(aw)) return;
        const i64 r = iroot128(aw, d);
        u128 check = 1;
        for (int i = 0; i < d; ++i) check *= static_cast<u128>(r);
        if (check != aw) return;
        if (d % 2 == 1) {
            try_candidate(w < 0 ? -r : r, prefix_zero, g, emit);
        } else {
            try_candidate(r, prefix_zero, g, emit);
            if (r != 0) try_candidate(-r, prefix_zero, g, emit);
        }
    }

    template <typename Emit>
    void try_candidate(i64 x, bool prefix_zero, i64 g, Emit&& emit) {
        if (iabs64(x) > p_.bounds[p_.nv - 1]) return;
        if (prefix_zero && x <= 0) return;
        for (int fi = 0; fi < p_.nforms - 1; ++fi)
            if (horner(fi, x) != 0) return;
        emit_candidate(x, prefix_zero, g, emit);
    }

    template <typename Emit>
    void emit_candidate(i64 x, bool /*prefix_zero*/, i64 g, Emit&& emit) {
        const i64 gg = (g == 1) ? 1 : gcd64(g, x);
        if (gg != 1) return;
        coords_[p_.nv - 1] = x;
        emit(std::span<const i64>(coords_));
    }

    const CompiledProgram& p_;
    int worker_, nworkers_;
    std::vector<i128> acc_;
    std::vector<i64> coords_;
    std::vector<std::vector<i128>> saved_;
};

// Fallback for inputs whose values could overflow i128: full box loop with
// arbitrary-precision form evaluation. Strategy choice does not change the
// emitted set, so the fallback ignores it.
template <typename Emit>
void enumerate_fallback(const CompleteIntersection& X, const std::vector<i64>& bounds,
                        Emit&& emit) {
    const int nv = X.n() + 1;
    std::vector<i64> coords(nv, 0);
    auto rec = [&](auto&& self, int depth, bool prefix_zero, i64 g) -> void {
        if (depth == nv) {
            if (g != 1) return;
            for (const auto& f : X.forms())
                if (f.evaluate(std::span<const i64>(coords)) != 0) return;
            emit(std::span<const i64>(coords));
            return;
        }
        const i64 b = bounds[depth];
        i64 lo = prefix_zero ? (depth == nv - 1 ? 1 : 0) : -b;
        for (i64 x = lo; x <= b; ++x) {
            coords[depth] = x;
            self(self, depth + 1, prefix_zero && x == 0, (g == 1) ? 1 : gcd64(g, x));
        }
    };
    rec(rec, 0, true, 0);
}

std::vector<i64> box_bounds(const CompleteIntersection& X, const HeightSpec& h,
                            const Rational& B) {
    const int nv = X.n() + 1;
    std::vector<i64> b(nv);
    b[0] = weighted_coord_bound(B, h.e, numerator(h.lambda), denominator(h.lambda));
    const i64 plain = weighted_coord_bound(B, h.e, 1, 1);
    for (int i = 1; i < nv; ++i) b[i] = plain;
    return b;
}

// emit must be thread-safe when workers > 1
template <typename Emit>
void enumerate_core(const CompleteIntersection& X, const HeightSpec& h, const Rational& B,
                    const EnumStrategy& strategy, Emit&& emit) {
    if (B < 1) throw ParameterError("enumerate: B must be >= 1");
    auto bounds = box_bounds(X, h, B);
    if (strategy.kind == StrategyKind::SolveLast) check_solve_last_legal(X);
    if (!fits_i128(X, bounds)) {
        enumerate_fallback(X, bounds, emit);
        return;
    }
    const CompiledProgram prog = compile_program(X, bounds, strategy.kind);
    const int workers = std::max(1, strategy.workers);
    if (workers == 1) {
        Runner(prog, 0, 1).run(emit);
        return;
    }
    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> errors(workers);
    for (int w = 0; w < workers; ++w)
        threads.emplace_back([&, w] {
            try {
                Runner(prog, w, workers).run(emit);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    for (auto& t : threads) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

// ---------------------------------------------------------------------------
// closed-form last coordinate counts for P^1 / P^2
// ---------------------------------------------------------------------------

// squarefree divisors of g with Moebius signs, memoized per radix table
struct CoprimeCounter {
    std::vector<int> spf; // smallest prime factor
    std::vector<std::vector<std::pair<i64, int>>> divisors;

    explicit CoprimeCounter(i64 maxg) {
        const std::size_t n = static_cast<std::size_t>(std::max<i64>(maxg, 1)) + 1;
        spf.assign(n, 0);
        for (std::size_t i = 2; i < n; ++i) {
            if (spf[i] != 0) continue;
            for (std::size_t j = i; j < n; j += i)
                if (spf[j] == 0) spf[j] = static_cast<int>(i);
        }
        divisors.resize(n);
    }

    const std::vector<std::pair<i64, int>>& mu_divisors(i64 g) {
        auto& d = divisors[static_cast<std::size_t>(g)];
        if (!d.empty()) return d;
        std::vector<i64> primes;
        i64 m = g;
        while (m > 1) {
            i64 p = spf[static_cast<std::size_t>(m)];
            primes.push_back(p);
            while (m % p == 0) m /= p;
        }
        d.push_back({1, 1});
        for (i64 p : primes) {
            const std::size_t sz = d.size();
            for (std::size_t i = 0; i < sz; ++i) d.push_back({d[i].first * p, -d[i].second});
        }
        return d;
    }

    // #{t in [-T, T] : gcd(t, g) = 1}, g >= 1 (t = 0 counts only for g = 1)
    i64 count(i64 g, i64 T) {
        if (g == 1) return 2 * T + 1;
        i64 total = 0;
        for (auto [dv, mu] : mu_divisors(g)) total += mu * (2 * (T / dv) + 1);
        return total;
    }
};

u64 formless_count(int n, i64 b0, i64 b1, CoprimeCounter& cc) {
    if (n == 1) {
        u64 total = (b1 >= 1) ? 1 : 0; // (0:1)
        for (i64 x0 = 1; x0 <= b0; ++x0) total += static_cast<u64>(cc.count(x0, b1));
        return total;
    }
    // n == 2: split on x0 = 0 (a P^1 in the last two coordinates)
    u64 total = formless_count(1, b1, b1, cc);
    for (i64 x0 = 1; x0 <= b0; ++x0)
        for (i64 x1 = -b1; x1 <= b1; ++x1)
            total += static_cast<u64>(cc.count(gcd64(x0, x1), b1));
    return total;
}

bool formless_fast_path(const CompleteIntersection& X, const PointPredicate& predicate) {
    return X.num_forms() == 0 && !predicate && (X.n() == 1 || X.n() == 2);
}

} // namespace

void for_each_point(const CompleteIntersection& X, const HeightSpec& h, const Rational& B,
                    const EnumStrategy& strategy, const PointSink& sink) {
    std::mutex mu;
    enumerate_core(X, h, B, strategy, [&](std::span<const i64> c) {
        ProjPoint p(std::vector<i64>(c.begin(), c.end()));
        std::lock_guard<std::mutex> lock(mu);
        sink(p);
    });
}

std::vector<ProjPoint> enumerate_points(const CompleteIntersection& X, const HeightSpec& h,
                                        const Rational& B, const EnumStrategy& strategy) {
    std::vector<ProjPoint> out;
    std::mutex mu;
    enumerate_core(X, h, B, strategy, [&](std::span<const i64> c) {
        std::vector<i64> v(c.begin(), c.end());
        std::lock_guard<std::mutex> lock(mu);
        out.emplace_back(std::move(v));
    });
    return out;
}

u64 count(const CompleteIntersection& X, const HeightSpec& h, const Rational& B,
          const EnumStrategy& strategy, const PointPredicate& predicate) {
    if (B < 1) throw ParameterError("count: B must be >= 1");
    if (strategy.kind == StrategyKind::SolveLast && X.num_forms() == 0)
        throw StrategyUnsupported("solve-last requires at least one defining form");
    if (formless_fast_path(X, predicate)) {
        auto b = box_bounds(X, h, B);
        CoprimeCounter cc(*std::max_element(b.begin(), b.end()));
        return formless_count(X.n(), b[0], b[1], cc);
    }
    std::atomic<u64> total{0};
    std::mutex mu;
    enumerate_core(X, h, B, strategy, [&](std::span<const i64> c) {
        if (predicate) {
            ProjPoint p(std::vector<i64>(c.begin(), c.end()));
            std::lock_guard<std::mutex> lock(mu);
            if (predicate(p)) total.fetch_add(1, std::memory_order_relaxed);
        } else {
            total.fetch_add(1, std::memory_order_relaxed);
        }
    });
    return total.load();
}

namespace {

// Per-grid integer thresholds: H(h, x) <= grid[j] iff |x0| <= b0[j] and
// max_{i>=1} |x_i| <= b1[j].
struct GridThresholds {
    std::vector<i64> b0, b1;

    GridThresholds(const HeightSpec& h, const std::vector<Rational>& grid) {
        for (const auto& B : grid) {
            b0.push_back(weighted_coord_bound(B, h.e, numerator(h.lambda), denominator(h.lambda)));
            b1.push_back(weighted_coord_bound(B, h.e, 1, 1));
        }
    }

    // smallest grid index admitting the point, or -1
    int bucket(i64 m0, i64 m1) const {
        for (std::size_t j = 0; j < b0.size(); ++j)
            if (m0 <= b0[j] && m1 <= b1[j]) return static_cast<int>(j);
        return -1;
    }
};

void validate_grid(const std::vector<Rational>& grid) {
    if (grid.empty()) throw ParameterError("count_series: empty grid");
    if (grid.front() < 1) throw ParameterError("count_series: grid bounds must be >= 1");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (grid[i] <= grid[i - 1])
            throw ParameterError("count_series: grid must be strictly increasing");
}

} // namespace

CountSeries count_series(const CompleteIntersection& X, const HeightSpec& h,
                         const std::vector<Rational>& grid, const EnumStrategy& strategy,
                         const PointPredicate& predicate, std::string region) {
    validate_grid(grid);
    if (strategy.kind == StrategyKind::SolveLast && X.num_forms() == 0)
        throw StrategyUnsupported("solve-last requires at least one defining form");
    CountSeries out;
    out.grid = grid;
    out.region = std::move(region);
    out.counts.assign(grid.size(), 0);
    if (formless_fast_path(X, predicate)) {
        GridThresholds th(h, grid);
        i64 maxb = 1;
        for (std::size_t j = 0; j < grid.size(); ++j)
            maxb = std::max({maxb, th.b0[j], th.b1[j]});
        CoprimeCounter cc(maxb);
        for (std::size_t j = 0; j < grid.size(); ++j)
            out.counts[j] = formless_count(X.n(), th.b0[j], th.b1[j], cc);
        return out;
    }
    GridThresholds th(h, grid);
    std::vector<u64> hist(grid.size(), 0);
    std::mutex mu;
    enumerate_core(X, h, grid.back(), strategy, [&](std::span<const i64> c) {
        i64 m0 = iabs64(c[0]), m1 = 0;
        for (std::size_t i = 1; i < c.size(); ++i) m1 = std::max(m1, iabs64(c[i]));
        int j = th.bucket(m0, m1);
        if (j < 0) return;
        if (predicate) {
            ProjPoint p(std::vector<i64>(c.begin(), c.end()));
            std::lock_guard<std::mutex> lock(mu);
            if (predicate(p)) ++hist[j];
        } else {
            std::lock_guard<std::mutex> lock(mu);
            ++hist[j];
        }
    });
    u64 running = 0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        running += hist[j];
        out.counts[j] = running;
    }
    return out;
}

// ---------------------------------------------------------------------------
// linear subspaces
// ---------------------------------------------------------------------------

namespace {

// Ambient sup-norm box required for H_lambda <= B: for lambda < 1 heights can
// shrink, so widen by 1/lambda^e.
i64 ambient_sup_bound(const HeightSpec& h, const Rational& B) {
    Rational Beff = B;
    if (h.lambda < 1) Beff = B / rational_pow(h.lambda, static_cast<unsigned>(h.e));
    return weighted_coord_bound(Beff, h.e, 1, 1);
}

template <typename Visit>
void visit_subspace_points(const LinearSubspace& L, const HeightSpec& h, const Rational& B,
                           Visit&& visit) {
    if (B < 1) throw ParameterError("enumerate_subspace: B must be >= 1");
    const int np = L.r() + 1;
    const int nv = L.ambient_dim() + 1;
    const i64 P = L.row_sum_norm() * ambient_sup_bound(h, B);
    GridThresholds th(h, {B});
    std::unordered_set<ProjPoint, ProjPointHash> seen;
    std::vector<i64> t(np, 0);
    std::vector<i64> w(nv, 0);
    auto rec = [&](auto&& self, int depth, bool prefix_zero, i64 g) -> void {
        if (depth == np) {
            if (g != 1) return; // only primitive parameters; scaled ones repeat points
            bool all_zero = true;
            for (int i = 0; i < nv; ++i) {
                i128 acc = 0;
                for (int j = 0; j < np; ++j) acc += static_cast<i128>(t[j]) * L.basis()[j][i];
                if (acc > std::numeric_limits<i64>::max() || acc < std::numeric_limits<i64>::min())
                    throw TooLarge("enumerate_subspace: ambient coordinate overflow");
                w[i] = static_cast<i64>(acc);
                if (w[i] != 0) all_zero = false;
            }
            if (all_zero) return;
            std::vector<i64> c(w);
            normalize_in_place(c.data(), nv);
            i64 m0 = iabs64(c[0]), m1 = 0;
            for (int i = 1; i < nv; ++i) m1 = std::max(m1, iabs64(c[i]));
            if (th.bucket(m0, m1) != 0) return; // exact height filter
            ProjPoint p(std::move(c));
            if (seen.insert(p).second) visit(p);
            return;
        }
        i64 lo = prefix_zero ? 0 : -P;
        for (i64 x = lo; x <= P; ++x) {
            t[depth] = x;
            self(self, depth + 1, prefix_zero && x == 0, (g == 1) ? 1 : gcd64(g, x));
        }
    };
    rec(rec, 0, true, 0);
}

} // namespace

std::vector<ProjPoint> enumerate_subspace(const LinearSubspace& L, const HeightSpec& h,
                                          const Rational& B) {
    std::vector<ProjPoint> out;
    visit_subspace_points(L, h, B, [&](const ProjPoint& p) { out.push_back(p); });
    return out;
}

CountSeries subspace_series(const LinearSubspace& L, const HeightSpec& h,
                            const std::vector<Rational>& grid, const PointPredicate& predicate,
                            std::string region) {
    validate_grid(grid);
    CountSeries out;
    out.grid = grid;
    out.region = std::move(region);
    out.counts.assign(grid.size(), 0);
    GridThresholds th(h, grid);
    std::vector<u64> hist(grid.size(), 0);
    visit_subspace_points(L, h, grid.back(), [&](const ProjPoint& p) {
        if (predicate && !predicate(p)) return;
        i64 m0 = iabs64(p.coords[0]), m1 = 0;
        for (std::size_t i = 1; i < p.coords.size(); ++i) m1 = std::max(m1, iabs64(p.coords[i]));
        int j = th.bucket(m0, m1);
        if (j >= 0) ++hist[j];
    });
    u64 running = 0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        running += hist[j];
        out.counts[j] = running;
    }
    return out;
}

// ---------------------------------------------------------------------------
// parametrized curves
// ---------------------------------------------------------------------------

namespace {

// coefficient vector c[i] = coefficient of u^(m-i) v^i
std::vector<BigInt> binary_coeffs(const Form& f) {
    const int m = f.degree();
    std::vector<BigInt> c(m + 1, 0);
    for (const auto& [mono, coef] : f.terms()) c[mono[1]] = coef;
    return c;
}

BigInt bareiss_det(std::vector<std::vector<BigInt>> a) {
    const int n = static_cast<int>(a.size());
    if (n == 0) return 1;
    BigInt prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (a[k][k] == 0) {
            int swap_row = -1;
            for (int i = k + 1; i < n; ++i)
                if (a[i][k] != 0) { swap_row = i; break; }
            if (swap_row < 0) return 0;
            std::swap(a[k], a[swap_row]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j)
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
        prev = a[k][k];
    }
    return sign > 0 ? a[n - 1][n - 1] : -a[n - 1][n - 1];
}

std::vector<std::vector<BigInt>> sylvester(const std::vector<BigInt>& f,
                                           const std::vector<BigInt>& g) {
    const int m = static_cast<int>(f.size()) - 1;
    const int n2 = 2 * m;
    std::vector<std::vector<BigInt>> M(n2, std::vector<BigInt>(n2, 0));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j <= m; ++j) M[i][i + j] = f[j];
    for (int i = 0; i < m; ++i)
        for (int j = 0; j <= m; ++j) M[m + i][i + j] = g[j];
    return M;
}

// Solves M^T z = rhs over the rationals; returns empty on singular M.
std::vector<Rational> solve_transposed(const std::vector<std::vector<BigInt>>& M,
                                       const std::vector<Rational>& rhs) {
    const int n = static_cast<int>(M.size());
    std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n + 1));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) a[i][j] = Rational(M[j][i]); // transpose
        a[i][n] = rhs[i];
    }
    for (int col = 0, row = 0; col < n && row < n; ++col, ++row) {
        int pivot = -1;
        for (int i = row; i < n; ++i)
            if (a[i][col] != 0) { pivot = i; break; }
        if (pivot < 0) return {};
        std::swap(a[row], a[pivot]);
        for (int i = 0; i < n; ++i) {
            if (i == row || a[i][col] == 0) continue;
            Rational f = a[i][col] / a[row][col];
            for (int j = col; j <= n; ++j) a[i][j] -= f * a[row][j];
        }
    }
    std::vector<Rational> z(n);
    for (int i = 0; i < n; ++i) z[i] = a[i][n] / a[i][i];
    return z;
}

// For a coordinate pair with resultant R != 0 and Bezout cofactors a, b
// (a g_i + b g_j = R * u^(2m-1) resp. v^(2m-1)):
//   max(|g_i|, |g_j|) >= |R| * max(|u|,|v|)^m / S   with S the cofactor L1 norm,
//   content of the image vector divides R.
// Hence an image of sup norm <= T pins max(|u|,|v|)^m <= T * S.
struct CurveBound {
    BigInt resultant; // |R| of the chosen coprime pair
    BigInt norm_sum;  // max L1 norm of the Bezout cofactors (u and v side)
};

// L1 norm of the cofactors in a f + b g = Res * v^(2m-1)
BigInt cofactor_norm(const std::vector<BigInt>& f, const std::vector<BigInt>& g,
                     const BigInt& res) {
    auto M = sylvester(f, g);
    const int n = static_cast<int>(M.size());
    std::vector<Rational> rhs(n, Rational(0));
    rhs[n - 1] = Rational(res);
    auto z = solve_transposed(M, rhs);
    if (z.empty()) throw DegenerateCurve("curve: singular Sylvester system");
    BigInt s = 0;
    for (const auto& zi : z) {
        if (denominator(zi) != 1) throw DegenerateCurve("curve: non-integral Bezout cofactor");
        s += abs(numerator(zi));
    }
    return s;
}

CurveBound curve_bound(const ParametrizedCurve& C) {
    const int nv = static_cast<int>(C.components.size());
    for (int i = 0; i < nv; ++i)
        for (int j = i + 1; j < nv; ++j) {
            auto f = binary_coeffs(C.components[i]);
            auto g = binary_coeffs(C.components[j]);
            BigInt res = bareiss_det(sylvester(f, g));
            if (res == 0) continue;
            BigInt su = cofactor_norm(f, g, res);
            std::vector<BigInt> fr(f.rbegin(), f.rend()), gr(g.rbegin(), g.rend());
            BigInt res_r = bareiss_det(sylvester(fr, gr));
            BigInt sv = cofactor_norm(fr, gr, res_r);
            return {abs(res), std::max(su, sv)};
        }
    throw DegenerateCurve(
        "curve: no coordinate pair with nonzero resultant; parametrization is degenerate");
}

void validate_curve(const ParametrizedCurve& C) {
    if (C.components.size() < 2) throw ParameterError("curve: need at least two components");
    bool all_zero = true;
    for (const auto& g : C.components) {
        if (g.num_vars() != 2) throw ParameterError("curve: components must be binary forms");
        if (g.degree() != C.components.front().degree())
            throw ParameterError("curve: components must share a degree");
        if (!g.is_zero()) all_zero = false;
    }
    if (all_zero) throw DegenerateCurve("curve: all components are identically zero");
}

// parameter box radius covering all image points of sup norm <= T1
i64 curve_param_bound(const ParametrizedCurve& C, const CurveBound& cb, i64 T1) {
    BigInt cap = BigInt(T1) * cb.norm_sum;
    BigInt root = big_iroot(cap, C.param_degree());
    return root.convert_to<i64>() + 1;
}

template <typename Visit>
void visit_curve_points(const ParametrizedCurve& C, const HeightSpec& h, const Rational& B,
                        Visit&& visit) {
    if (B < 1) throw ParameterError("enumerate_parametrized_curve: B must be >= 1");
    validate_curve(C);
    const CurveBound cb = curve_bound(C);
    const i64 T1 = ambient_sup_bound(h, B);
    const i64 U = curve_param_bound(C, cb, T1);
    const int nv = static_cast<int>(C.components.size());
    GridThresholds th(h, {B});
    std::unordered_set<ProjPoint, ProjPointHash> seen;
    std::array<i64, 2> t{};
    for (i64 u = 0; u <= U; ++u) {
        const i64 v_lo = (u == 0) ? 1 : -U;
        for (i64 v = v_lo; v <= U; ++v) {
            if (gcd64(u, v) != 1) continue;
            t = {u, v};
            std::vector<i64> w(nv);
            bool all_zero = true;
            for (int i = 0; i < nv; ++i) {
                BigInt val = C.components[i].evaluate(std::span<const i64>(t.data(), 2));
                if (val > std::numeric_limits<i64>::max() || val < std::numeric_limits<i64>::min())
                    throw TooLarge("curve: image coordinate overflow");
                w[i] = val.convert_to<i64>();
                if (w[i] != 0) all_zero = false;
            }
            if (all_zero) continue;
            std::vector<i64> c(w);
            normalize_in_place(c.data(), nv);
            i64 m0 = iabs64(c[0]), m1 = 0;
            for (int i = 1; i < nv; ++i) m1 = std::max(m1, iabs64(c[i]));
            if (th.bucket(m0, m1) != 0) continue;
            ProjPoint p(std::move(c));
            if (seen.insert(p).second) visit(p);
        }
    }
}

} // namespace

BigInt binary_resultant(const Form& f, const Form& g) {
    if (f.num_vars() != 2 || g.num_vars() != 2)
        throw ParameterError("binary_resultant: binary forms required");
    if (f.degree() != g.degree())
        throw ParameterError("binary_resultant: common degree required");
    return bareiss_det(sylvester(binary_coeffs(f), binary_coeffs(g)));
}

std::vector<ProjPoint> enumerate_parametrized_curve(const ParametrizedCurve& C,
                                                    const HeightSpec& h, const Rational& B) {
    std::vector<ProjPoint> out;
    visit_curve_points(C, h, B, [&](const ProjPoint& p) { out.push_back(p); });
    return out;
}

CountSeries curve_series(const ParametrizedCurve& C, const HeightSpec& h,
                         const std::vector<Rational>& grid, const PointPredicate& predicate,
                         std::string region) {
    validate_grid(grid);
    CountSeries out;
    out.grid = grid;
    out.region = std::move(region);
    out.counts.assign(grid.size(), 0);
    GridThresholds th(h, grid);
    std::vector<u64> hist(grid.size(), 0);
    visit_curve_points(C, h, grid.back(), [&](const ProjPoint& p) {
        if (predicate && !predicate(p)) return;
        i64 m0 = iabs64(p.coords[0]), m1 = 0;
        for (std::size_t i = 1; i < p.coords.size(); ++i) m1 = std::max(m1, iabs64(p.coords[i]));
        int j = th.bucket(m0, m1);
        if (j >= 0) ++hist[j];
    });
    u64 running = 0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        running += hist[j];
        out.counts[j] = running;
    }
    return out;
}

bool curve_image_contains(const ParametrizedCurve& C, const ProjPoint& p) {
    validate_curve(C);
    if (p.dim() != C.ambient_dim())
        throw DimensionError("curve_image_contains: dimension mismatch");
    const CurveBound cb = curve_bound(C);
    i64 T1 = sup_norm(p);
    const i64 U = curve_param_bound(C, cb, T1);
    const int nv = static_cast<int>(C.components.size());
    std::array<i64, 2> t{};
    for (i64 u = 0; u <= U; ++u) {
        const i64 v_lo = (u == 0) ? 1 : -U;
        for (i64 v = v_lo; v <= U; ++v) {
            if (gcd64(u, v) != 1) continue;
            t = {u, v};
            std::vector<i64> w(nv);
            bool all_zero = true;
            for (int i = 0; i < nv; ++i) {
                BigInt val = C.components[i].evaluate(std::span<const i64>(t.data(), 2));
                if (val > std::numeric_limits<i64>::max() || val < std::numeric_limits<i64>::min())
                    continue;
                w[i] = val.convert_to<i64>();
                if (w[i] != 0) all_zero = false;
            }
            if (all_zero) continue;
            normalize_in_place(w.data(), nv);
            if (std::equal(w.begin(), w.end(), p.coords.begin(), p.coords.end())) return true;
        }
    }
    return false;
}

} // namespace heightlab
