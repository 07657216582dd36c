#include "heightlab/density.hpp"

#include "heightlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace heightlab {

namespace {

constexpr u64 kGolden = 0x9e3779b97f4a7c15ull;

u64 mix64(u64 x) {
    x ^= x >> 30; x *= 0xbf58476d1ce4e5b9ull;
    x ^= x >> 27; x *= 0x94d049bb133111ebull;
    x ^= x >> 31;
    return x;
}

// counter-based draw: the c-th double of the i-th sample under this seed
double uniform01(u64 seed, u64 i, u64 c) {
    u64 w = mix64(seed + (i * 8 + c + 1) * kGolden);
    return static_cast<double>(w >> 11) * 0x1.0p-53;
}

struct CompiledRealForm {
    struct Term {
        double coef;
        std::array<std::pair<int, int>, 8> factors{};
        int nfactors = 0;
    };
    std::vector<Term> terms;

    explicit CompiledRealForm(const Form& f) {
        for (const auto& [mono, coef] : f.terms()) {
            Term t;
            t.coef = coef.convert_to<double>();
            for (int v = 0; v < f.num_vars(); ++v)
                if (mono[v] > 0) t.factors[t.nfactors++] = {v, mono[v]};
            terms.push_back(t);
        }
    }

    double eval(const double* x) const {
        double acc = 0;
        for (const auto& t : terms) {
            double m = t.coef;
            for (int i = 0; i < t.nfactors; ++i) {
                auto [v, e] = t.factors[i];
                for (int k = 0; k < e; ++k) m *= x[v];
            }
            acc += m;
        }
        return acc;
    }
};

void validate_density_inputs(const CompleteIntersection& X, const Rational& lambda) {
    if (X.num_forms() < 1)
        throw ParameterError("density: X must have at least one defining form");
    if (lambda <= 0) throw ParameterError("density: lambda must be positive");
}

// draws sample i into x[0..nv-1], uniform on W_lambda
void draw_sample(double* x, int nv, double inv_lambda, u64 seed, u64 i) {
    x[0] = (2.0 * uniform01(seed, i, 0) - 1.0) * inv_lambda;
    for (int c = 1; c < nv; ++c) x[c] = 2.0 * uniform01(seed, i, c) - 1.0;
}

} // namespace

double default_epsilon(const CompleteIntersection& X, const Rational& lambda, u64 seed) {
    validate_density_inputs(X, lambda);
    const int nv = X.n() + 1;
    const double inv_lambda = 1.0 / to_double(lambda);
    std::vector<CompiledRealForm> forms;
    for (const auto& f : X.forms()) forms.emplace_back(f);
    const u64 probe_seed = mix64(seed ^ 0x70726f6265ull); // independent probe stream
    double max_abs = 0.0;
    double x[8];
    for (u64 i = 0; i < 10000; ++i) {
        draw_sample(x, nv, inv_lambda, probe_seed, i);
        for (const auto& f : forms) max_abs = std::max(max_abs, std::fabs(f.eval(x)));
    }
    if (max_abs == 0.0) max_abs = 1.0;
    return 1e-3 * max_abs;
}

DensityEstimate archimedean_density(const CompleteIntersection& X, const Rational& lambda,
                                    double epsilon, u64 samples, u64 seed, int workers) {
    validate_density_inputs(X, lambda);
    if (samples < 10000) throw ParameterError("archimedean_density: samples must be >= 1e4");
    if (epsilon <= 0) epsilon = default_epsilon(X, lambda, seed);
    if (!(epsilon > 0)) throw ParameterError("archimedean_density: epsilon must be positive");

    const int nv = X.n() + 1;
    const int s = X.num_forms();
    const double inv_lambda = 1.0 / to_double(lambda);
    const double vol_box = std::pow(2.0, nv) * inv_lambda;
    const double per_hit = vol_box / std::pow(2.0 * epsilon, s);

    std::vector<CompiledRealForm> forms;
    for (const auto& f : X.forms()) forms.emplace_back(f);

    workers = std::max(1, workers);
    std::vector<u64> hits_per_worker(workers, 0);
    auto run = [&](int w) {
        const u64 lo = samples * static_cast<u64>(w) / workers;
        const u64 hi = samples * static_cast<u64>(w + 1) / workers;
        u64 hits = 0;
        double x[8];
        for (u64 i = lo; i < hi; ++i) {
            draw_sample(x, nv, inv_lambda, seed, i);
            bool in_slab = true;
            for (const auto& f : forms)
                if (std::fabs(f.eval(x)) > epsilon) {
                    in_slab = false;
                    break;
                }
            if (in_slab) ++hits;
        }
        hits_per_worker[w] = hits;
    };
    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::thread> threads;
        for (int w = 0; w < workers; ++w) threads.emplace_back(run, w);
        for (auto& t : threads) t.join();
    }
    u64 hits = 0;
    for (u64 hw : hits_per_worker) hits += hw;

    // per-sample estimator takes value per_hit or 0; moments follow from hits
    const double n = static_cast<double>(samples);
    const double mean = per_hit * static_cast<double>(hits) / n;
    double var = 0.0;
    if (samples > 1) {
        const double sum = per_hit * static_cast<double>(hits);
        const double sumsq = per_hit * per_hit * static_cast<double>(hits);
        var = (sumsq - sum * sum / n) / (n - 1.0);
    }
    DensityEstimate est;
    est.value = mean;
    est.std_error = std::sqrt(var / n);
    est.samples = samples;
    est.lambda = lambda;
    est.epsilon = epsilon;
    est.seed = seed;
    return est;
}

std::vector<DensityEstimate> density_decay_scan(const CompleteIntersection& X,
                                                const std::vector<Rational>& lambda_grid,
                                                double epsilon, u64 samples, u64 seed,
                                                int workers) {
    if (lambda_grid.empty()) throw ParameterError("density_decay_scan: empty lambda grid");
    if (lambda_grid.front() != 1)
        throw ParameterError("density_decay_scan: lambda grid must start at 1");
    for (std::size_t i = 1; i < lambda_grid.size(); ++i)
        if (lambda_grid[i] <= lambda_grid[i - 1])
            throw ParameterError("density_decay_scan: lambda grid must be strictly increasing");
    if (epsilon <= 0) epsilon = default_epsilon(X, lambda_grid.front(), seed);
    std::vector<DensityEstimate> out;
    for (std::size_t i = 0; i < lambda_grid.size(); ++i) {
        const u64 sub_seed = mix64(seed + (i + 1) * kGolden);
        out.push_back(archimedean_density(X, lambda_grid[i], epsilon, samples, sub_seed, workers));
    }
    return out;
}

namespace {

bool is_prime(i64 p) {
    if (p < 2) return false;
    for (i64 d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

} // namespace

PadicDensity padic_density(const CompleteIntersection& X, i64 p, int k, int workers) {
    if (!is_prime(p)) throw ParameterError("padic_density: p must be prime");
    if (k < 1) throw ParameterError("padic_density: k must be >= 1");
    const int nv = X.n() + 1;
    const int s = X.num_forms();
    if (s < 1) throw ParameterError("padic_density: X must have at least one defining form");

    // feasibility guard: p^(k(n+1)) <= 1e9
    long double cells = 1.0L;
    for (int i = 0; i < k * nv; ++i) {
        cells *= static_cast<long double>(p);
        if (cells > 1e9L)
            throw TooLarge("padic_density: p^(k(n+1)) exceeds the 1e9 enumeration guard");
    }
    i64 m = 1;
    for (int i = 0; i < k; ++i) m *= p;

    // residue power tables: pow_table[x * (maxdeg+1) + e] = x^e mod m
    int maxdeg = 0;
    for (const auto& f : X.forms()) maxdeg = std::max(maxdeg, f.degree());
    std::vector<i64> pow_table(static_cast<std::size_t>(m) * (maxdeg + 1));
    for (i64 x = 0; x < m; ++x) {
        pow_table[x * (maxdeg + 1)] = 1 % m;
        for (int e = 1; e <= maxdeg; ++e)
            pow_table[x * (maxdeg + 1) + e] =
                static_cast<i64>((i128)pow_table[x * (maxdeg + 1) + e - 1] * x % m);
    }
    struct ModTerm {
        i64 coef;
        std::array<std::pair<int, int>, 8> factors{};
        int nfactors = 0;
    };
    std::vector<std::vector<ModTerm>> forms;
    for (const auto& f : X.forms()) {
        std::vector<ModTerm> ts;
        for (const auto& [mono, coef] : f.terms()) {
            ModTerm t;
            t.coef = ((coef % m).convert_to<i64>() + m) % m;
            for (int v = 0; v < nv; ++v)
                if (mono[v] > 0) t.factors[t.nfactors++] = {v, mono[v]};
            ts.push_back(t);
        }
        forms.push_back(std::move(ts));
    }

    workers = std::max(1, workers);
    std::vector<u64> counts(workers, 0);
    auto run = [&](int w) {
        std::vector<i64> x(nv, 0);
        u64 local = 0;
        // shard by the leading residue
        for (i64 lead = w; lead < m; lead += workers) {
            x[0] = lead;
            std::fill(x.begin() + 1, x.end(), 0);
            for (;;) {
                bool ok = true;
                for (const auto& ts : forms) {
                    i64 acc = 0;
                    for (const auto& t : ts) {
                        i64 v = t.coef;
                        for (int i = 0; i < t.nfactors; ++i) {
                            auto [var, e] = t.factors[i];
                            v = static_cast<i64>((i128)v * pow_table[x[var] * (maxdeg + 1) + e] % m);
                        }
                        acc = (acc + v) % m;
                    }
                    if (acc != 0) { ok = false; break; }
                }
                if (ok) ++local;
                int d = nv - 1;
                while (d >= 1 && ++x[d] == m) x[d--] = 0;
                if (d == 0) break;
            }
        }
        counts[w] = local;
    };
    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::thread> threads;
        for (int w = 0; w < workers; ++w) threads.emplace_back(run, w);
        for (auto& t : threads) t.join();
    }
    u64 total = 0;
    for (u64 c : counts) total += c;

    PadicDensity out;
    out.p = p;
    out.k = k;
    out.value = Rational(BigInt(total), big_pow(BigInt(p), static_cast<unsigned>(k * (nv - s))));
    return out;
}

double truncated_leading_factor(const CompleteIntersection& X, const Rational& lambda,
                                const std::vector<i64>& p_list, int k, u64 samples, u64 seed,
                                int workers) {
    DensityEstimate arch = archimedean_density(X, lambda, 0.0, samples, seed, workers);
    double product = arch.value;
    for (i64 p : p_list) product *= to_double(padic_density(X, p, k, workers).value);
    return product;
}

} // namespace heightlab
