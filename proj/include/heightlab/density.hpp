#pragma once

#include "heightlab/variety.hpp"

#include <vector>

namespace heightlab {

/// Monte-Carlo slab estimate of the archimedean local density
/// vol{ x in W_lambda : |F_i(x)| <= eps for all i } / (2 eps)^s,
/// with W_lambda the weighted unit box max(lambda |x_0|, |x_i|) <= 1.
struct DensityEstimate {
    double value = 0.0;
    double std_error = 0.0;
    u64 samples = 0;
    Rational lambda = 1;
    double epsilon = 0.0;
    u64 seed = 0;
};

struct PadicDensity {
    i64 p = 2;
    int k = 1;
    Rational value = 0;
};

/// Default slab half-width: 1e-3 times max |F_i| over 1e4 probe samples of
/// W_lambda, derived deterministically from the seed.
double default_epsilon(const CompleteIntersection& X, const Rational& lambda, u64 seed);

/// epsilon <= 0 selects the default. The estimator is deterministic in
/// (seed, samples, epsilon, lambda) and independent of the worker count:
/// sample draws are counter-based.
DensityEstimate archimedean_density(const CompleteIntersection& X, const Rational& lambda,
                                    double epsilon, u64 samples, u64 seed, int workers = 1);

/// Estimates over an increasing lambda grid starting at 1, sharing one
/// epsilon and deriving per-lambda sub-seeds from the seed.
std::vector<DensityEstimate> density_decay_scan(const CompleteIntersection& X,
                                                const std::vector<Rational>& lambda_grid,
                                                double epsilon, u64 samples, u64 seed,
                                                int workers = 1);

/// Exact #{x in (Z/p^k)^(n+1) : all F_i = 0} / p^(k(n+1-s)) by full
/// enumeration; guarded by p^(k(n+1)) <= 1e9.
PadicDensity padic_density(const CompleteIntersection& X, i64 p, int k, int workers = 1);

/// archimedean density times the finite local densities at p_list; a
/// truncation of the density part of the conjectural leading constant.
double truncated_leading_factor(const CompleteIntersection& X, const Rational& lambda,
                                const std::vector<i64>& p_list, int k, u64 samples, u64 seed,
                                int workers = 1);

} // namespace heightlab
