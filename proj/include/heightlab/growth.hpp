#pragma once

#include "heightlab/enumerate.hpp"

#include <string>
#include <variant>
#include <vector>

namespace heightlab {

/// Least-squares fit of log N = a log B + log c + b log log B on a count
/// series; b is fixed by the caller (0 or 1).
struct GrowthFit {
    double exponent = 0.0;      // a
    double constant = 0.0;      // c
    double residual_rms = 0.0;  // on log N over the fitted range
    int log_power = 0;          // b
    std::vector<double> grid_used;
};

GrowthFit fit_growth(const CountSeries& series, int log_power, int drop_low = 2);

/// zeta(s) for s > 1 by partial sums plus an Euler-Maclaurin tail,
/// relative error well below 1e-9.
double zeta(double s);

/// Schanuel reference count (2^n / zeta(n+1)) * B^(n+1) for P^n over Q.
double schanuel_reference(int n, double B);

using Subvariety = std::variant<LinearSubspace, ParametrizedCurve>;

struct SaturationStratum {
    std::string name;
    CountSeries series;
    GrowthFit fit;
    bool fit_ok = false;
    // min/max of N / (B (log B)^(rho-1)) over the top half of the grid,
    // the desk-scale liminf/limsup window
    double window_min = 0.0;
    double window_max = 0.0;
    std::vector<double> shares; // N_stratum / N_total per grid point
};

struct SaturationReport {
    int rho = 1;
    SaturationStratum total;
    std::vector<SaturationStratum> strata;
    SaturationStratum complement;
};

/// Counts X, each verified subvariety minus the excluded loci, and the
/// complement of all subvarieties on a shared grid; fits each stratum with
/// log power rho - 1.
SaturationReport saturation_report(const CompleteIntersection& X,
                                   const std::vector<std::pair<std::string, Subvariety>>& subvarieties,
                                   const std::vector<PointPredicate>& excluded_loci,
                                   const HeightSpec& h, const std::vector<Rational>& grid,
                                   int rho, const EnumStrategy& strategy);

} // namespace heightlab
